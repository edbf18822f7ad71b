#pragma once

#include <optional>
#include <string>
#include <vector>

#include "ancient_heat/domain.hpp"
#include "ancient_heat/numerics.hpp"

namespace ancient_heat {

// Q(0, j) = B(0, j) x [-j, 0]: spatial and time scale are the same, no
// parabolic scaling.
struct SpaceTimeCube {
    int j = 0;
    std::vector<int> vertices;   // hop distance <= j from the origin
    int t_first = 0, t_last = 0; // inclusive time-index window
};

SpaceTimeCube make_cube(const DomainGraph& g, const SpaceTimeField& u, int j);

struct IneqRow {
    int j = 0;
    double lhs = 0.0;
    double rhs = 0.0;
    double ratio = 0.0;
};

struct InequalityReport {
    std::string inequality;
    std::vector<IneqRow> rows;
    std::optional<FitLine> fit;
    bool pass = false;
    std::vector<std::string> notes;
};

inline constexpr double kFitR2Threshold = 0.9;

// sup_{Q(0,j)} u^2 against the space-time integral of u^2 over Q(0,j+1);
// bounded ratios across scales, largest ratio is the C1 candidate.
InequalityReport verify_mean_value(const SpaceTimeField& u, const DomainGraph& g, int jmax);

// integral of (Delta u)^2 over Q(0,j) against integral of u^2 over Q(0,j+1);
// each ratio is a C0 candidate. Scales 1..jmax in one report.
InequalityReport verify_caccioppoli(const SpaceTimeField& u, const DomainGraph& g, int jmax);

// r_j = integral of (Delta^j u)^2 over Q(0,j+1) / integral of u^2 over
// Q(0,2j+1); log r_j vs j must be log-linear (R^2 >= 0.9), slope = log C0_hat.
InequalityReport verify_induction_bound(const SpaceTimeField& u, const DomainGraph& g, int jmax);

// s_j = sup_{Q(0,j)} |Delta^j u|; log s_j vs j log-linear, slope = log C3_hat,
// intercept = log C1_hat.
InequalityReport verify_derivative_sup(const SpaceTimeField& u, const DomainGraph& g, int jmax);

// remainder_j = |u(x,t) - sum_{i<j} Delta^i u(x,0) t^i/i!| against the
// Lagrange bound (|t|^j/j!) sup_{s in [t,0]} |Delta^j u(x,s)|. The sup over
// the continuum window is the grid max plus interpolation corrections from the
// next two iterates (the true mean-value point can fall between samples).
InequalityReport taylor_remainder_decay(const SpaceTimeField& u, const DomainGraph& g, int x,
                                        double t, int jmax);

// {"inequality":…, "rows":[{"j":…,"lhs":…,"rhs":…,"ratio":…}], "fit":…,
//  "pass":…} plus a CSV mirror with columns j,lhs,rhs,ratio.
std::string inequality_report_json(const InequalityReport& r);
std::string inequality_report_csv(const InequalityReport& r);

}  // namespace ancient_heat
