#include "ancient_heat/cli.hpp"

#include <cmath>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>

#include "ancient_heat/errors.hpp"
#include "ancient_heat/inequalities.hpp"
#include "ancient_heat/io.hpp"
#include "ancient_heat/ladder.hpp"
#include "ancient_heat/oracle.hpp"
#include "ancient_heat/rng.hpp"
#include "ancient_heat/series.hpp"
#include "ancient_heat/tychonov.hpp"

namespace ancient_heat {

namespace {

std::vector<int> parse_lattice_dims(const std::string& spec) {
    std::vector<int> dims;
    std::string cur;
    auto flush = [&] {
        if (cur.empty()) throw input_error("bad lattice \"" + spec + "\", expected e.g. 8x8");
        try {
            dims.push_back(std::stoi(cur));
        } catch (const std::exception&) {
            throw input_error("bad lattice dimension \"" + cur + "\"");
        }
        cur.clear();
    };
    for (char c : spec) {
        if (c == 'x' || c == 'X')
            flush();
        else
            cur += c;
    }
    flush();
    return dims;
}

struct VerifyOptions {
    std::string experiment;
    std::string domain_path;
    std::string out_prefix;
    int jmax = 4;
    std::uint64_t seed = 0;
    double lambda_cut = 2.0;
    int samples_per_unit = 20;
    double scale = 1.0;
    int vertex = -1;  // origin
    double t = -1.0;
};

int run_verify(const VerifyOptions& opt) {
    DomainGraph g = read_domain_json(opt.domain_path);
    auto dec = eigendecompose(LaplacianOperator(g));

    Rng rng(opt.seed);
    ScalarField a = band_limit(dec, rng.field(g.n), opt.lambda_cut);
    if (sup_norm(a) == 0.0)
        throw compute_error("band limit " + format_double(opt.lambda_cut) +
                            " removed every mode of the seed field");
    for (double& v : a) v *= opt.scale;

    double T;
    if (opt.experiment == "induction")
        T = 2.0 * opt.jmax + 1.0;
    else if (opt.experiment == "derivsup")
        T = double(opt.jmax);
    else if (opt.experiment == "remainder")
        T = -opt.t;
    else
        T = double(opt.jmax) + 1.0;
    if (!(T > 0.0)) throw input_error("verification window is empty; check --t/--jmax");
    int samples = int(std::lround(T * opt.samples_per_unit)) + 1;
    SpaceTimeField u = ancient_window(dec, a, T, samples, opt.lambda_cut);

    InequalityReport rep;
    if (opt.experiment == "meanvalue")
        rep = verify_mean_value(u, g, opt.jmax);
    else if (opt.experiment == "caccioppoli")
        rep = verify_caccioppoli(u, g, opt.jmax);
    else if (opt.experiment == "induction")
        rep = verify_induction_bound(u, g, opt.jmax);
    else if (opt.experiment == "derivsup")
        rep = verify_derivative_sup(u, g, opt.jmax);
    else if (opt.experiment == "remainder")
        rep = taylor_remainder_decay(u, g, opt.vertex < 0 ? g.origin : opt.vertex, opt.t, opt.jmax);
    else
        throw input_error("unknown experiment \"" + opt.experiment + "\"");

    atomic_write(opt.out_prefix + ".json", inequality_report_json(rep));
    atomic_write(opt.out_prefix + ".csv", inequality_report_csv(rep));
    write_spacetime_csv(u, opt.out_prefix + ".data.csv");

    std::cout << rep.inequality << ": " << (rep.pass ? "pass" : "fail") << "\n";
    for (const auto& note : rep.notes) std::cout << "  " << note << "\n";
    if (rep.fit)
        std::cout << "  fit: slope " << format_double(rep.fit->slope) << ", intercept "
                  << format_double(rep.fit->intercept) << ", r2 " << format_double(rep.fit->r2)
                  << "\n";
    return rep.pass ? 0 : 1;
}

int run(const std::vector<std::string>& args) {
    CLI::App app{"backward and ancient heat solutions on finite graphs"};
    app.require_subcommand(1);

    // domain build
    auto* domain = app.add_subcommand("domain", "build and write domains");
    domain->require_subcommand(1);
    auto* build = domain->add_subcommand("build", "build a lattice domain");
    build->set_help_flag("--help", "print help");  // frees -h for the spacing option
    std::string lattice_spec, boundary = "neumann", domain_out;
    double spacing = 1.0;
    int origin = 0;
    build->add_option("--lattice", lattice_spec, "dims, e.g. 8x8 or 16")->required();
    build->add_option("--h", spacing, "lattice spacing")->check(CLI::PositiveNumber);
    build->add_option("--boundary", boundary, "dirichlet|neumann|periodic");
    build->add_option("--origin", origin, "reference vertex");
    build->add_option("--out", domain_out, "output JSON path")->required();

    // ladder / check
    std::string lad_domain, lad_data, lad_out;
    int lad_jmax = 16, lad_jmin = 0;
    double lad_mu = 0.0, cap_A3 = 1.0, cap_A4 = 0.0;
    bool lad_norm = false;
    auto add_ladder_opts = [&](CLI::App* cmd) {
        cmd->add_option("--domain", lad_domain, "domain JSON")->required();
        cmd->add_option("--data", lad_data, "seed field CSV")->required();
        cmd->add_option("--jmax", lad_jmax, "ladder length")->check(CLI::NonNegativeNumber);
        cmd->add_option("--jmin", lad_jmin, "first level used in the growth fit")
            ->check(CLI::NonNegativeNumber);
        cmd->add_option("--mu", lad_mu, "spatial weight in M_j = sup |a_j| e^{-mu d}")
            ->check(CLI::NonNegativeNumber);
        cmd->add_flag("--normalized", lad_norm, "store unit-sup levels with log scales");
        cmd->add_option("--out", lad_out, "report JSON path (stdout if omitted)");
    };
    auto* ladder_cmd = app.add_subcommand("ladder", "build the coefficient ladder and fit growth");
    add_ladder_opts(ladder_cmd);
    auto* check = app.add_subcommand("check", "decide solvability against a growth cap");
    add_ladder_opts(check);
    check->add_option("--A3", cap_A3, "cap amplitude")->check(CLI::PositiveNumber);
    check->add_option("--A4", cap_A4, "cap rate")->required();

    // solve / reconstruct
    std::string sol_domain, sol_data, sol_out, direction = "backward";
    double sol_t = 0.0, sol_tol = 1e-10;
    int sol_jcap = kSeriesHardCap;
    auto add_solve_opts = [&](CLI::App* cmd) {
        cmd->add_option("--domain", sol_domain, "domain JSON")->required();
        cmd->add_option("--data", sol_data, "initial field CSV")->required();
        cmd->add_option("--t", sol_t, "evaluation time")->required();
        cmd->add_option("--tol", sol_tol, "sup-norm tail tolerance")->check(CLI::PositiveNumber);
        cmd->add_option("--jcap", sol_jcap, "truncation hard cap");
        cmd->add_option("--out", sol_out, "output prefix (.csv and .report.json)")->required();
    };
    auto* solve = app.add_subcommand("solve", "solve the heat equation by time-Taylor series");
    add_solve_opts(solve);
    solve->add_option("--direction", direction, "backward|forward");
    auto* reconstruct =
        app.add_subcommand("reconstruct", "evaluate an ancient solution at t <= 0 from its time-0 slice");
    add_solve_opts(reconstruct);

    // verify
    VerifyOptions vopt;
    auto* verify = app.add_subcommand("verify", "numerical checks of the proof inequalities");
    verify->add_option("--experiment", vopt.experiment,
                       "meanvalue|caccioppoli|induction|derivsup|remainder")->required();
    verify->add_option("--domain", vopt.domain_path, "domain JSON")->required();
    verify->add_option("--jmax", vopt.jmax, "largest scale")->check(CLI::PositiveNumber);
    verify->add_option("--seed", vopt.seed, "seed for the random data field");
    verify->add_option("--lambda-cut", vopt.lambda_cut, "band limit on |eigenvalue|")
        ->check(CLI::PositiveNumber);
    verify->add_option("--samples-per-unit", vopt.samples_per_unit, "time samples per unit window")
        ->check(CLI::PositiveNumber);
    verify->add_option("--scale", vopt.scale, "multiply the data field");
    verify->add_option("--vertex", vopt.vertex, "remainder: expansion vertex (default origin)");
    verify->add_option("--t", vopt.t, "remainder: evaluation time < 0");
    verify->add_option("--out", vopt.out_prefix, "output prefix (.json/.csv/.data.csv)")->required();

    // tychonov
    std::string ty_out;
    double ty_x0 = 0.0, ty_x1 = 2.0, ty_t = 0.5, cert_x = 0.0, cert_t = -1.0;
    int ty_nx = 41, ty_kmax = kTychonovKCap;
    auto* tychonov = app.add_subcommand("tychonov", "evaluate the flat counterexample solution");
    tychonov->add_option("--x0", ty_x0, "grid start");
    tychonov->add_option("--x1", ty_x1, "grid end");
    tychonov->add_option("--nx", ty_nx, "grid points")->check(CLI::PositiveNumber);
    tychonov->add_option("--t", ty_t, "evaluation time");
    tychonov->add_option("--kmax", ty_kmax, "series cap")->check(CLI::PositiveNumber);
    tychonov->add_option("--cert-x", cert_x, "certificate sample x");
    tychonov->add_option("--cert-t", cert_t, "certificate sample t (default --t)");
    tychonov->add_option("--out", ty_out, "grid CSV path")->required();

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    if (build->parsed()) {
        DomainGraph g = build_lattice(parse_lattice_dims(lattice_spec), spacing,
                                      boundary_from_name(boundary));
        if (origin < 0 || origin >= g.n) throw input_error("origin out of range");
        g.origin = origin;
        write_domain_json(g, domain_out);
        std::cout << "wrote " << domain_out << " (" << g.n << " vertices, " << g.edges.size()
                  << " edges)\n";
        return 0;
    }

    if (ladder_cmd->parsed() || check->parsed()) {
        DomainGraph g = read_domain_json(lad_domain);
        ScalarField a = read_scalar_csv(lad_data);
        LaplacianOperator delta(g);
        auto lad = build_ladder(delta, a, lad_jmax, lad_norm);
        auto dist = hop_distances(g, g.origin);

        std::optional<GrowthEstimate> estimate;
        try {
            estimate = estimate_growth(lad, dist, lad_mu, lad_jmin);
        } catch (const compute_error&) {
            // identically zero ladder: trivially solvable, no fit to report
        }
        std::optional<SolvabilityVerdict> verdict;
        if (check->parsed()) verdict = check_solvability(lad, dist, {cap_A3, cap_A4});

        std::string report = growth_report_json(estimate, verdict, lad_jmax, lad_mu);
        if (lad_out.empty())
            std::cout << report;
        else
            atomic_write(lad_out, report);
        return verdict && !verdict->holds ? 1 : 0;
    }

    if (solve->parsed() || reconstruct->parsed()) {
        DomainGraph g = read_domain_json(sol_domain);
        ScalarField a = read_scalar_csv(sol_data);
        LaplacianOperator delta(g);
        SeriesResult res;
        if (solve->parsed()) {
            if (direction == "backward")
                res = solve_backward(delta, a, sol_t, sol_tol, sol_jcap);
            else if (direction == "forward")
                res = evaluate_series(delta, a, std::fabs(sol_t), sol_tol, sol_jcap);
            else
                throw input_error("direction must be backward or forward, got \"" + direction +
                                  "\"");
        } else {
            res = reconstruct_ancient(delta, a, sol_t, sol_tol, sol_jcap);
        }
        write_scalar_csv(res.field, sol_out + ".csv");
        atomic_write(sol_out + ".report.json", truncation_report_json(res.report));
        std::cout << "wrote " << sol_out << ".csv (J_used " << res.report.J_used << ", splits "
                  << res.report.splits << ", tail bound " << format_double(res.report.tail_bound)
                  << ")\n";
        return 0;
    }

    if (verify->parsed()) return run_verify(vopt);

    if (tychonov->parsed()) {
        if (ty_nx > 1 && !(ty_x1 > ty_x0)) throw input_error("need x1 > x0 for a grid");
        std::ostringstream csv;
        csv << "x,t,value,tail_estimate\n";
        int stuck = 0;
        for (int i = 0; i < ty_nx; ++i) {
            double x = ty_nx == 1 ? ty_x0 : ty_x0 + (ty_x1 - ty_x0) * double(i) / double(ty_nx - 1);
            auto r = tychonov_eval(x, ty_t, ty_kmax);
            if (!r.converged) ++stuck;
            csv << format_double(x) << "," << format_double(ty_t) << "," << format_double(r.value)
                << "," << format_double(r.tail_estimate) << "\n";
        }
        atomic_write(ty_out, csv.str());

        double ct = cert_t > 0.0 ? cert_t : ty_t;
        auto cert = analyticity_gap(cert_x, ct, ty_kmax);
        std::string cert_path = ty_out;
        if (cert_path.size() > 4 && cert_path.substr(cert_path.size() - 4) == ".csv")
            cert_path = cert_path.substr(0, cert_path.size() - 4);
        cert_path += ".cert.json";
        atomic_write(cert_path, certificate_json(cert));

        std::cout << "wrote " << ty_out << " and " << cert_path << "\n";
        if (stuck > 0) {
            std::cerr << stuck << " grid point(s) did not reach the decreasing-term regime by k = "
                      << ty_kmax << "; their tail_estimate stays large\n";
            return 1;
        }
        return 0;
    }

    return 2;
}

}  // namespace

int run_cli(const std::vector<std::string>& args) {
    try {
        return run(args);
    } catch (const input_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const compute_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}

}  // namespace ancient_heat
