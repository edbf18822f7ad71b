#pragma once

#include <string>
#include <vector>

namespace ancient_heat {

inline constexpr int kTychonovKCap = 200;

// Coefficients of P_k in f^(k)(t) = P_k(1/t) e^{-1/t^2} for f(t) = e^{-1/t^2},
// from the recurrence P_{k+1}(s) = -s^2 P_k'(s) + 2 s^3 P_k(s), P_0 = 1.
// Exact integers (degree 3k, leading coefficient 2^k), returned as decimal
// strings, highest power first.
std::vector<std::string> tychonov_polynomial(int k);

// f^(k)(t); exactly 0 for t <= 0 (the flat branch), extended-precision
// evaluation of P_k(1/t) e^{-1/t^2} for t > 0.
double tychonov_f_derivative(int k, double t);

struct TychonovEval {
    double value = 0.0;
    double tail_estimate = 0.0;  // max of the last three term magnitudes
    int terms_used = 0;
    bool converged = true;       // false if the cap was hit before the terms
                                 // entered their decreasing regime
};

// v(x, t) = sum_k f^(k)(t) x^{2k} / (2k)!: the classical solution of the heat
// equation on the line that vanishes identically for t <= 0. Truncation is
// adaptive (three consecutive decreasing terms, then negligible against the
// partial sum); the series has violent internal cancellation, so summation
// runs at a precision scaled to the coefficient table and k_cap.
TychonovEval tychonov_eval(double x, double t, int k_cap = kTychonovKCap);

// |d_t v - d_xx v| at (x, t) by central differences with step h; every
// evaluation must have tail_estimate <= h^3.
double tychonov_residual(double x, double t, double h);

struct AnalyticityCertificate {
    std::vector<double> derivatives_at_zero;  // f^(k)(0) for k = 0..9, all exactly 0
    double taylor_prediction = 0.0;           // the zero series those derivatives generate
    double sample_value = 0.0;                // v(x, t) at the sample point
    double gap = 0.0;                         // |sample_value - taylor_prediction|
};

// The time-Taylor series of v at t = 0 is identically zero, yet v(x, t) > 0
// for t > 0: the gap certifies failure of time analyticity.
AnalyticityCertificate analyticity_gap(double x, double t, int k_cap = kTychonovKCap);

// {"derivatives_at_zero":[…], "sample_value":…, "gap":…}
std::string certificate_json(const AnalyticityCertificate& c);

}  // namespace ancient_heat
