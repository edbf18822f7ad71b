#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

namespace ancient_heat {

// Compensated (Kahan) accumulator. Cube integrals and inner products use it so
// that sums are accurate to a few ulp independent of term count; this is what
// makes reported ratios scale-invariant to ~1e-15 rather than ~n*eps.
class KahanSum {
public:
    void add(double x) {
        double y = x - c_;
        double t = s_ + y;
        c_ = (t - s_) - y;
        s_ = t;
    }
    double value() const { return s_; }

private:
    double s_ = 0.0;
    double c_ = 0.0;
};

inline double kahan_dot(const std::vector<double>& a, const std::vector<double>& b) {
    KahanSum s;
    for (std::size_t i = 0; i < a.size(); ++i) s.add(a[i] * b[i]);
    return s.value();
}

inline double sup_norm(const std::vector<double>& a) {
    double m = 0.0;
    for (double v : a) m = std::max(m, std::fabs(v));
    return m;
}

struct FitLine {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    double rms_residual = 0.0;
};

// Least-squares line through (x_i, y_i). Needs >= 2 points. For data that is
// constant in y the line y = const is an exact fit; r2 is defined as 1 there
// (ss_tot = 0 would otherwise make it 0/0).
FitLine fit_line(const std::vector<double>& x, const std::vector<double>& y);

}  // namespace ancient_heat
