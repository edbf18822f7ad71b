#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ancient_heat/domain.hpp"

namespace ancient_heat {

// Coefficient sequence a_0, ..., a_J with a_{j+1} = Delta a_j. In normalized
// form each level is stored with unit sup norm and a separate log scale, so
// sup|a_j| = exp(log_scale[j]); levels that are identically zero carry
// log_scale = -inf. Plain form stores the raw fields (log_scale all 0).
struct CoefficientLadder {
    std::vector<ScalarField> levels;
    std::vector<double> log_scale;
    bool normalized = false;

    int max_index() const { return int(levels.size()) - 1; }
    int vertex_count() const { return levels.empty() ? 0 : int(levels[0].size()); }

    // log |a_j(x)|, -inf where a_j(x) = 0
    double log_abs(int j, int x) const;
    // log sup_x |a_j(x)|
    double log_sup(int j) const;
};

CoefficientLadder build_ladder(const LaplacianOperator& delta, const ScalarField& a, int J,
                               bool normalized = false);

struct GrowthBound {
    double A3 = 1.0;
    double A4 = 0.0;
};

struct GrowthEstimate {
    double A3_hat = 0.0;
    double A4_hat = 0.0;
    std::vector<std::pair<int, double>> per_j_log_sup;  // (j, log M_j), zero levels skipped
    double fit_residual = 0.0;
    int j_min = 0;
    int j_max = 0;
    double mu = 0.0;
};

// Least-squares line through (j, log M_j) with M_j = sup_x |a_j(x)| e^{-mu d(x)}
// for j in [j_min, J]. Throws compute_error if the ladder is identically zero
// there.
GrowthEstimate estimate_growth(const CoefficientLadder& ladder, const std::vector<int>& distances,
                               double mu, int j_min = 0);

struct SolvabilityVerdict {
    bool holds = true;
    std::optional<GrowthEstimate> estimate;
    GrowthBound cap;
    std::optional<int> first_violation_j;
    double margin = 0.0;  // min over (j, x) of log cap - log |a_j(x)|; +inf for a zero ladder
};

// Checks |a_j(x)| <= A3 e^{A4 (j + d(x, 0))} for every level and vertex.
// Equality passes: violations are margins below -1e-12 (float dust).
SolvabilityVerdict check_solvability(const CoefficientLadder& ladder,
                                     const std::vector<int>& distances, GrowthBound cap);

// {"A3_hat":…, "A4_hat":…, "residual":…, "holds":…, "first_violation_j":…,
//  "margin":…, "J":…, "mu":…}; cap-dependent fields null when absent.
std::string growth_report_json(const std::optional<GrowthEstimate>& estimate,
                               const std::optional<SolvabilityVerdict>& verdict, int J, double mu);

}  // namespace ancient_heat
