#pragma once

#include <string>
#include <vector>

#include "ancient_heat/domain.hpp"
#include "ancient_heat/oracle.hpp"

namespace ancient_heat {

inline constexpr int kSeriesHardCap = 512;

struct TruncationReport {
    int J_used = 0;        // largest truncation index over all splits
    double tail_bound = 0; // rigorous sup-norm bound on everything omitted
    double requested_tol = 0;
    double rho_bar = 0;
    int splits = 1;
};

struct SeriesResult {
    ScalarField field;
    TruncationReport report;
};

// sum_j Delta^j a t^j / j! with the truncation index chosen from the a-priori
// tail ||a|| * sum_{j>J} (rho_bar |t|)^j / j! <= tol. |t| with rho_bar |t| > 8
// is split into equal steps of rho_bar |t_step| <= 8, re-laddering per step;
// for backward time each step's budget is shrunk by the amplification the
// remaining steps apply to its error, so tail_bound covers the whole run.
SeriesResult evaluate_series(const LaplacianOperator& delta, const ScalarField& a, double t,
                             double tol, int j_cap = kSeriesHardCap);

// Theorem semantics: value at time t <= 0 of the ancient solution whose time-0
// slice is u0.
SeriesResult reconstruct_ancient(const LaplacianOperator& delta, const ScalarField& u0, double t,
                                 double tol, int j_cap = kSeriesHardCap);

// Backward Cauchy problem Delta u + du/dt = 0, u(., 0) = a, evaluated at
// t >= 0; equals reconstruct_ancient at -t.
SeriesResult solve_backward(const LaplacianOperator& delta, const ScalarField& a, double t,
                            double tol, int j_cap = kSeriesHardCap);

struct RoundtripResult {
    double error = 0.0;      // ||forward(backward(a)) - a||_inf / ||a||_inf
    double condition = 1.0;  // amplification proxy e^{tau rho_bar}
};

RoundtripResult roundtrip_error(const LaplacianOperator& delta, const ScalarField& a, double tau,
                                double tol);

// {"J_used":…, "tail_bound":…, "tol":…, "rho_bar":…, "splits":…}
std::string truncation_report_json(const TruncationReport& r);

}  // namespace ancient_heat
