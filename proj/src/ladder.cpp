#include "ancient_heat/ladder.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "ancient_heat/errors.hpp"
#include "ancient_heat/io.hpp"
#include "ancient_heat/numerics.hpp"

namespace ancient_heat {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

double CoefficientLadder::log_abs(int j, int x) const {
    double v = std::fabs(levels[std::size_t(j)][std::size_t(x)]);
    if (v == 0.0) return -kInf;
    return std::log(v) + log_scale[std::size_t(j)];
}

double CoefficientLadder::log_sup(int j) const {
    double s = sup_norm(levels[std::size_t(j)]);
    if (s == 0.0) return -kInf;
    return std::log(s) + log_scale[std::size_t(j)];
}

CoefficientLadder build_ladder(const LaplacianOperator& delta, const ScalarField& a, int J,
                               bool normalized) {
    if (J < 0) throw input_error("ladder length must be >= 0");
    if (int(a.size()) != delta.size()) throw input_error("field length does not match domain");
    for (double v : a)
        if (!std::isfinite(v)) throw input_error("ladder seed has non-finite entry");

    CoefficientLadder ladder;
    ladder.normalized = normalized;
    ladder.levels.reserve(std::size_t(J) + 1);
    ladder.log_scale.reserve(std::size_t(J) + 1);

    ScalarField cur = a;
    double cur_log = 0.0;
    if (normalized) {
        double s = sup_norm(cur);
        if (s > 0.0) {
            for (double& v : cur) v /= s;
            cur_log = std::log(s);
        } else {
            cur_log = -kInf;
        }
    }
    ladder.levels.push_back(cur);
    ladder.log_scale.push_back(cur_log);

    for (int j = 0; j < J; ++j) {
        ScalarField next = delta.apply(ladder.levels.back());
        double next_log = ladder.log_scale.back();
        if (normalized) {
            double s = sup_norm(next);
            if (s > 0.0) {
                for (double& v : next) v /= s;
                next_log += std::log(s);
            } else {
                next.assign(next.size(), 0.0);
                next_log = -kInf;
            }
        } else {
            for (double v : next)
                if (!std::isfinite(v))
                    throw compute_error("ladder overflowed at level " + std::to_string(j + 1) +
                                        "; rebuild in normalized form");
        }
        ladder.levels.push_back(std::move(next));
        ladder.log_scale.push_back(next_log);
    }
    return ladder;
}

GrowthEstimate estimate_growth(const CoefficientLadder& ladder, const std::vector<int>& distances,
                               double mu, int j_min) {
    int J = ladder.max_index();
    int n = ladder.vertex_count();
    if (int(distances.size()) != n) throw input_error("distance vector length mismatch");
    if (mu < 0.0) throw input_error("spatial rate mu must be >= 0");
    if (j_min < 0 || j_min > J) throw input_error("j_min out of range");

    GrowthEstimate est;
    est.mu = mu;
    est.j_min = j_min;
    est.j_max = J;
    for (int j = j_min; j <= J; ++j) {
        // log M_j = log sup_x |a_j(x)| e^{-mu d(x)}
        double m = -kInf;
        for (int x = 0; x < n; ++x) {
            double lv = ladder.log_abs(j, x);
            if (lv == -kInf) continue;
            m = std::max(m, lv - mu * double(distances[std::size_t(x)]));
        }
        if (m == -kInf) continue;  // a_j identically zero, skipped in the fit
        est.per_j_log_sup.push_back({j, m});
    }
    if (est.per_j_log_sup.size() < 2)
        throw compute_error("ladder identically zero from level " + std::to_string(j_min) +
                            " on; growth fit undefined (trivially solvable)");

    std::vector<double> xs, ys;
    xs.reserve(est.per_j_log_sup.size());
    ys.reserve(est.per_j_log_sup.size());
    for (const auto& [j, lm] : est.per_j_log_sup) {
        xs.push_back(double(j));
        ys.push_back(lm);
    }
    FitLine fit = fit_line(xs, ys);
    est.A4_hat = fit.slope;
    est.A3_hat = std::exp(fit.intercept);
    est.fit_residual = fit.rms_residual;
    return est;
}

SolvabilityVerdict check_solvability(const CoefficientLadder& ladder,
                                     const std::vector<int>& distances, GrowthBound cap) {
    int J = ladder.max_index();
    int n = ladder.vertex_count();
    if (int(distances.size()) != n) throw input_error("distance vector length mismatch");
    if (!(cap.A3 > 0.0)) throw input_error("cap A3 must be positive");

    SolvabilityVerdict verdict;
    verdict.cap = cap;
    verdict.margin = kInf;
    double log_A3 = std::log(cap.A3);
    for (int j = 0; j <= J; ++j) {
        bool violated = false;
        for (int x = 0; x < n; ++x) {
            double lv = ladder.log_abs(j, x);
            if (lv == -kInf) continue;
            double m = log_A3 + cap.A4 * (double(j) + double(distances[std::size_t(x)])) - lv;
            if (m < verdict.margin) verdict.margin = m;
            if (m < -1e-12) violated = true;
        }
        if (violated && !verdict.first_violation_j) verdict.first_violation_j = j;
    }
    verdict.holds = !verdict.first_violation_j.has_value();
    return verdict;
}

std::string growth_report_json(const std::optional<GrowthEstimate>& estimate,
                               const std::optional<SolvabilityVerdict>& verdict, int J, double mu) {
    std::ostringstream out;
    out << "{";
    if (estimate) {
        out << "\"A3_hat\": " << json_number(estimate->A3_hat) << ", \"A4_hat\": "
            << json_number(estimate->A4_hat) << ", \"residual\": "
            << json_number(estimate->fit_residual);
    } else {
        out << "\"A3_hat\": null, \"A4_hat\": null, \"residual\": null";
    }
    out << ", ";
    if (verdict) {
        out << "\"holds\": " << (verdict->holds ? "true" : "false") << ", \"first_violation_j\": "
            << json_number(verdict->first_violation_j) << ", \"margin\": "
            << json_number(verdict->margin);
    } else {
        out << "\"holds\": null, \"first_violation_j\": null, \"margin\": null";
    }
    out << ", \"J\": " << J << ", \"mu\": " << json_number(mu) << "}\n";
    return out.str();
}

}  // namespace ancient_heat
