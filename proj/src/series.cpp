#include "ancient_heat/series.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ancient_heat/errors.hpp"
#include "ancient_heat/io.hpp"
#include "ancient_heat/numerics.hpp"

namespace ancient_heat {

namespace {

// log of the tail majorant sum_{i>J} z^i / i! <= z^{J+1}/(J+1)! * (J+2)/(J+2-z),
// valid for z < J+2 (geometric-ratio bound). Kept in logs so budgets far below
// double range stay meaningful.
double log_tail_majorant(double z, int J) {
    if (z <= 0.0) return -std::numeric_limits<double>::infinity();
    if (double(J) + 2.0 <= z) return std::numeric_limits<double>::infinity();
    double lg = double(J + 1) * std::log(z) - std::lgamma(double(J + 2));
    return lg + std::log((double(J) + 2.0) / (double(J) + 2.0 - z));
}

// smallest J with log ||a|| + log tail(z, J) <= log_budget, or -1 if the cap
// is hit first
int pick_truncation(double log_norm, double z, double log_budget, int j_cap) {
    for (int J = 0; J <= j_cap; ++J)
        if (log_norm + log_tail_majorant(z, J) <= log_budget) return J;
    return -1;
}

// One step of length t_step: scaled terms c_0 = a, c_{j+1} = (t/(j+1)) Delta c_j,
// summed from J down to 0 so the small terms enter first.
ScalarField sum_step(const LaplacianOperator& delta, const ScalarField& a, double t_step, int J) {
    std::size_t n = a.size();
    std::vector<ScalarField> terms;
    terms.reserve(std::size_t(J) + 1);
    terms.push_back(a);
    for (int j = 0; j < J; ++j) {
        ScalarField next = delta.apply(terms.back());
        double f = t_step / double(j + 1);
        for (double& v : next) v *= f;
        terms.push_back(std::move(next));
    }
    ScalarField out(n, 0.0);
    for (int j = J; j >= 0; --j)
        for (std::size_t i = 0; i < n; ++i) out[i] += terms[std::size_t(j)][i];
    return out;
}

}  // namespace

SeriesResult evaluate_series(const LaplacianOperator& delta, const ScalarField& a, double t,
                             double tol, int j_cap) {
    if (!(tol > 0.0)) throw input_error("tolerance must be positive");
    if (j_cap < 0 || j_cap > kSeriesHardCap)
        throw input_error("truncation cap must be in 0.." + std::to_string(kSeriesHardCap));
    if (int(a.size()) != delta.size()) throw input_error("field length does not match domain");

    SeriesResult res;
    res.report.requested_tol = tol;
    res.report.rho_bar = delta.spectral_radius_bound();
    if (t == 0.0 || res.report.rho_bar == 0.0) {
        res.field = a;
        return res;
    }

    double z_total = res.report.rho_bar * std::fabs(t);
    int k = std::max(1, int(std::ceil(z_total / 8.0)));
    double t_step = t / double(k);
    double z = res.report.rho_bar * std::fabs(t_step);
    bool backward = t < 0.0;
    res.report.splits = k;

    ScalarField cur = a;
    KahanSum tail_total;
    for (int i = 0; i < k; ++i) {
        double norm = sup_norm(cur);
        if (!std::isfinite(norm))
            throw compute_error("series evaluation overflowed at split " + std::to_string(i) +
                                " of " + std::to_string(k));
        if (norm == 0.0) break;  // zero stays zero

        // error committed here is amplified by at most e^{z (k-1-i)} downstream
        double log_amp = backward ? z * double(k - 1 - i) : 0.0;
        double log_budget = std::log(tol) - std::log(double(k)) - log_amp;
        int J = pick_truncation(std::log(norm), z, log_budget, j_cap);
        if (J < 0) {
            double achieved = std::exp(std::log(norm) + log_tail_majorant(z, j_cap) + log_amp);
            throw compute_error("tolerance unreachable within truncation cap " +
                                std::to_string(j_cap) + "; achievable tail bound " +
                                format_double(achieved) + " per split");
        }
        res.report.J_used = std::max(res.report.J_used, J);
        tail_total.add(std::exp(std::log(norm) + log_tail_majorant(z, J) + log_amp));
        cur = sum_step(delta, cur, t_step, J);
    }
    for (double v : cur)
        if (!std::isfinite(v)) throw compute_error("series evaluation overflowed");
    res.field = std::move(cur);
    res.report.tail_bound = tail_total.value();
    return res;
}

SeriesResult reconstruct_ancient(const LaplacianOperator& delta, const ScalarField& u0, double t,
                                 double tol, int j_cap) {
    if (t > 0.0) throw input_error("ancient reconstruction requires t <= 0");
    return evaluate_series(delta, u0, t, tol, j_cap);
}

SeriesResult solve_backward(const LaplacianOperator& delta, const ScalarField& a, double t,
                            double tol, int j_cap) {
    if (t < 0.0) throw input_error("backward solve requires t >= 0");
    return evaluate_series(delta, a, -t, tol, j_cap);
}

RoundtripResult roundtrip_error(const LaplacianOperator& delta, const ScalarField& a, double tau,
                                double tol) {
    if (tau < 0.0) throw input_error("roundtrip requires tau >= 0");
    double norm = sup_norm(a);
    if (norm == 0.0) throw input_error("roundtrip needs a nonzero field");

    RoundtripResult r;
    r.condition = std::exp(tau * delta.spectral_radius_bound());
    auto back = solve_backward(delta, a, tau, tol);
    auto dec = eigendecompose(delta);
    auto forward = heat_evolve_exact(dec, back.field, tau);
    double err = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i)
        err = std::max(err, std::fabs(forward[i] - a[i]));
    r.error = err / norm;
    return r;
}

std::string truncation_report_json(const TruncationReport& r) {
    std::ostringstream out;
    out << "{\"J_used\": " << r.J_used << ", \"tail_bound\": " << json_number(r.tail_bound)
        << ", \"tol\": " << json_number(r.requested_tol) << ", \"rho_bar\": "
        << json_number(r.rho_bar) << ", \"splits\": " << r.splits << "}\n";
    return out.str();
}

}  // namespace ancient_heat
