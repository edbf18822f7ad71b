#include "ancient_heat/numerics.hpp"

#include <cassert>
#include <cstddef>

namespace ancient_heat {

FitLine fit_line(const std::vector<double>& x, const std::vector<double>& y) {
    assert(x.size() == y.size());
    std::size_t n = x.size();
    assert(n >= 2);

    KahanSum sx, sy;
    for (std::size_t i = 0; i < n; ++i) {
        sx.add(x[i]);
        sy.add(y[i]);
    }
    double mx = sx.value() / double(n);
    double my = sy.value() / double(n);

    KahanSum sxx, sxy;
    for (std::size_t i = 0; i < n; ++i) {
        sxx.add((x[i] - mx) * (x[i] - mx));
        sxy.add((x[i] - mx) * (y[i] - my));
    }

    FitLine f;
    f.slope = sxx.value() > 0.0 ? sxy.value() / sxx.value() : 0.0;
    f.intercept = my - f.slope * mx;

    KahanSum ss_res, ss_tot;
    for (std::size_t i = 0; i < n; ++i) {
        double r = y[i] - (f.slope * x[i] + f.intercept);
        ss_res.add(r * r);
        ss_tot.add((y[i] - my) * (y[i] - my));
    }
    f.rms_residual = std::sqrt(ss_res.value() / double(n));
    f.r2 = ss_tot.value() > 0.0 ? 1.0 - ss_res.value() / ss_tot.value() : 1.0;
    return f;
}

}  // namespace ancient_heat
