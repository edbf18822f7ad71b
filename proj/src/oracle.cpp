#include "ancient_heat/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

#include "ancient_heat/errors.hpp"
#include "ancient_heat/io.hpp"
#include "ancient_heat/numerics.hpp"

namespace ancient_heat {

namespace {

double off_diagonal_norm(const std::vector<std::vector<double>>& a) {
    int n = int(a.size());
    KahanSum s;
    for (int p = 0; p < n; ++p)
        for (int q = p + 1; q < n; ++q) s.add(2.0 * a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)] * a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)]);
    return std::sqrt(s.value());
}

}  // namespace

SpectralDecomposition eigendecompose(const LaplacianOperator& delta, int size_cap) {
    int n = delta.size();
    if (n > size_cap)
        throw compute_error("dense decomposition capped at n = " + std::to_string(size_cap) +
                            ", domain has " + std::to_string(n));

    auto a = delta.dense();
    std::vector<std::vector<double>> v(static_cast<std::size_t>(n), std::vector<double>(static_cast<std::size_t>(n), 0.0));
    for (int i = 0; i < n; ++i) v[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] = 1.0;

    double scale = 0.0;
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) scale += a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)] * a[static_cast<std::size_t>(i)][static_cast<std::size_t>(j)];
    scale = std::sqrt(scale);

    const int max_sweeps = 64;
    for (int sweep = 0; sweep < max_sweeps && off_diagonal_norm(a) > 1e-15 * std::max(scale, 1e-300); ++sweep) {
        for (int p = 0; p < n - 1; ++p)
            for (int q = p + 1; q < n; ++q) {
                double apq = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(q)];
                if (apq == 0.0) continue;
                double theta = (a[static_cast<std::size_t>(q)][static_cast<std::size_t>(q)] - a[static_cast<std::size_t>(p)][static_cast<std::size_t>(p)]) / (2.0 * apq);
                double t = (theta >= 0.0 ? 1.0 : -1.0) / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
                double c = 1.0 / std::sqrt(t * t + 1.0);
                double s = t * c;

                for (int k = 0; k < n; ++k) {
                    double akp = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
                    double akq = a[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
                    a[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)] = c * akp - s * akq;
                    a[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] = s * akp + c * akq;
                }
                for (int k = 0; k < n; ++k) {
                    double apk = a[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)];
                    double aqk = a[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)];
                    a[static_cast<std::size_t>(p)][static_cast<std::size_t>(k)] = c * apk - s * aqk;
                    a[static_cast<std::size_t>(q)][static_cast<std::size_t>(k)] = s * apk + c * aqk;
                }
                for (int k = 0; k < n; ++k) {
                    double vkp = v[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)];
                    double vkq = v[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)];
                    v[static_cast<std::size_t>(k)][static_cast<std::size_t>(p)] = c * vkp - s * vkq;
                    v[static_cast<std::size_t>(k)][static_cast<std::size_t>(q)] = s * vkp + c * vkq;
                }
            }
    }

    std::vector<int> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), 0);
    std::stable_sort(order.begin(), order.end(), [&](int i, int j) {
        return a[static_cast<std::size_t>(i)][static_cast<std::size_t>(i)] > a[static_cast<std::size_t>(j)][static_cast<std::size_t>(j)];
    });

    SpectralDecomposition dec;
    dec.eigenvalues.resize(static_cast<std::size_t>(n));
    dec.eigenfields.resize(static_cast<std::size_t>(n) * static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        int src = order[static_cast<std::size_t>(i)];
        dec.eigenvalues[static_cast<std::size_t>(i)] = a[static_cast<std::size_t>(src)][static_cast<std::size_t>(src)];
        // column src of v, sign fixed by its largest-magnitude entry
        int arg = 0;
        double best = -1.0;
        for (int k = 0; k < n; ++k) {
            double m = std::fabs(v[static_cast<std::size_t>(k)][static_cast<std::size_t>(src)]);
            if (m > best) {
                best = m;
                arg = k;
            }
        }
        double sign = v[static_cast<std::size_t>(arg)][static_cast<std::size_t>(src)] < 0.0 ? -1.0 : 1.0;
        for (int k = 0; k < n; ++k)
            dec.eigenfields[static_cast<std::size_t>(i) * static_cast<std::size_t>(n) + static_cast<std::size_t>(k)] = sign * v[static_cast<std::size_t>(k)][static_cast<std::size_t>(src)];
    }

    std::vector<double> phi(static_cast<std::size_t>(n)), dphi(static_cast<std::size_t>(n));
    double res = 0.0;
    for (int i = 0; i < n; ++i) {
        std::copy(dec.field(i), dec.field(i) + n, phi.begin());
        delta.apply(phi.data(), dphi.data());
        for (int k = 0; k < n; ++k)
            res = std::max(res, std::fabs(dphi[static_cast<std::size_t>(k)] - dec.eigenvalues[static_cast<std::size_t>(i)] * phi[static_cast<std::size_t>(k)]));
    }
    dec.residual = res;
    return dec;
}

namespace {

std::vector<double> mode_coefficients(const SpectralDecomposition& dec, const ScalarField& a) {
    int n = dec.size();
    if (int(a.size()) != n) throw input_error("field length does not match decomposition");
    std::vector<double> coef(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        KahanSum s;
        const double* phi = dec.field(i);
        for (int k = 0; k < n; ++k) s.add(a[static_cast<std::size_t>(k)] * phi[k]);
        coef[static_cast<std::size_t>(i)] = s.value();
    }
    return coef;
}

}  // namespace

ScalarField heat_evolve_exact(const SpectralDecomposition& dec, const ScalarField& a, double t) {
    int n = dec.size();
    auto coef = mode_coefficients(dec, a);
    std::vector<KahanSum> acc(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        double factor = std::exp(dec.eigenvalues[static_cast<std::size_t>(i)] * t);
        if (!std::isfinite(factor))
            throw compute_error("semigroup factor overflow: lambda*t = " +
                                std::to_string(dec.eigenvalues[static_cast<std::size_t>(i)] * t));
        double ci = coef[static_cast<std::size_t>(i)] * factor;
        const double* phi = dec.field(i);
        for (int k = 0; k < n; ++k) acc[static_cast<std::size_t>(k)].add(ci * phi[k]);
    }
    ScalarField u(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) {
        u[static_cast<std::size_t>(k)] = acc[static_cast<std::size_t>(k)].value();
        if (!std::isfinite(u[static_cast<std::size_t>(k)])) throw compute_error("semigroup evolution overflowed");
    }
    return u;
}

ScalarField band_limit(const SpectralDecomposition& dec, const ScalarField& a, double lambda_cut) {
    int n = dec.size();
    auto coef = mode_coefficients(dec, a);
    std::vector<KahanSum> acc(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i) {
        if (std::fabs(dec.eigenvalues[static_cast<std::size_t>(i)]) > lambda_cut) continue;
        const double* phi = dec.field(i);
        for (int k = 0; k < n; ++k) acc[static_cast<std::size_t>(k)].add(coef[static_cast<std::size_t>(i)] * phi[k]);
    }
    ScalarField out(static_cast<std::size_t>(n));
    for (int k = 0; k < n; ++k) out[static_cast<std::size_t>(k)] = acc[static_cast<std::size_t>(k)].value();
    return out;
}

SpaceTimeField ancient_window(const SpectralDecomposition& dec, const ScalarField& a, double T,
                              int samples, double lambda_cut) {
    if (samples < 2) throw input_error("ancient window needs at least 2 samples");
    if (!(T > 0.0)) throw input_error("ancient window length must be positive");
    int n = dec.size();
    auto coef = mode_coefficients(dec, a);
    // modes beyond the cut are dropped in coefficient space: re-projecting a
    // synthesized band-limited vector would leave machine-epsilon dust on the
    // fast modes, and e^{|lambda| T} turns that dust into the dominant term
    for (int i = 0; i < n; ++i)
        if (std::fabs(dec.eigenvalues[static_cast<std::size_t>(i)]) > lambda_cut)
            coef[static_cast<std::size_t>(i)] = 0.0;

    SpaceTimeField u;
    u.n = n;
    u.times.resize(static_cast<std::size_t>(samples));
    u.values.reserve(static_cast<std::size_t>(samples) * static_cast<std::size_t>(n));
    double step = T / double(samples - 1);
    for (int i = 0; i < samples; ++i) {
        double t = double(i - (samples - 1)) * step;
        u.times[static_cast<std::size_t>(i)] = t;
        std::vector<KahanSum> acc(static_cast<std::size_t>(n));
        for (int m = 0; m < n; ++m) {
            if (coef[static_cast<std::size_t>(m)] == 0.0) continue;
            double factor = std::exp(dec.eigenvalues[static_cast<std::size_t>(m)] * t);
            if (!std::isfinite(factor))
                throw compute_error("ancient window overflow: lambda*t = " +
                                    std::to_string(dec.eigenvalues[static_cast<std::size_t>(m)] * t));
            double cm = coef[static_cast<std::size_t>(m)] * factor;
            const double* phi = dec.field(m);
            for (int k = 0; k < n; ++k) acc[static_cast<std::size_t>(k)].add(cm * phi[k]);
        }
        for (int k = 0; k < n; ++k) {
            double v = acc[static_cast<std::size_t>(k)].value();
            if (!std::isfinite(v)) throw compute_error("ancient window synthesis overflowed");
            u.values.push_back(v);
        }
    }
    u.validate();
    return u;
}

namespace {

// y = (I - (h/2) Delta) x
void cn_lhs(const LaplacianOperator& delta, double h, const std::vector<double>& x,
            std::vector<double>& y, std::vector<double>& scratch) {
    delta.apply(x.data(), scratch.data());
    for (std::size_t i = 0; i < x.size(); ++i) y[i] = x[i] - 0.5 * h * scratch[i];
}

// CG on the SPD system (I - (h/2) Delta) x = b
std::vector<double> cn_solve(const LaplacianOperator& delta, double h, const std::vector<double>& b) {
    int n = int(b.size());
    double bnorm = std::sqrt(kahan_dot(b, b));
    std::vector<double> x(static_cast<std::size_t>(n), 0.0);
    if (bnorm == 0.0) return x;

    std::vector<double> r = b, p = b, ap(static_cast<std::size_t>(n)), scratch(static_cast<std::size_t>(n));
    double rr = kahan_dot(r, r);
    double tol = 1e-12 * bnorm;
    int max_iter = 10 * n + 100;
    for (int it = 0; it < max_iter; ++it) {
        if (std::sqrt(rr) <= tol) return x;
        cn_lhs(delta, h, p, ap, scratch);
        double alpha = rr / kahan_dot(p, ap);
        for (int i = 0; i < n; ++i) x[static_cast<std::size_t>(i)] += alpha * p[static_cast<std::size_t>(i)];
        for (int i = 0; i < n; ++i) r[static_cast<std::size_t>(i)] -= alpha * ap[static_cast<std::size_t>(i)];
        double rr_next = kahan_dot(r, r);
        double beta = rr_next / rr;
        rr = rr_next;
        for (int i = 0; i < n; ++i) p[static_cast<std::size_t>(i)] = r[static_cast<std::size_t>(i)] + beta * p[static_cast<std::size_t>(i)];
    }
    if (std::sqrt(rr) <= tol) return x;
    throw compute_error("conjugate gradient did not converge, residual " +
                        std::to_string(std::sqrt(rr)));
}

}  // namespace

ScalarField heat_evolve_stepped(const LaplacianOperator& delta, const ScalarField& a, double t,
                                int steps) {
    if (steps < 1) throw input_error("stepped evolution needs steps >= 1");
    if (!(t > 0.0)) throw input_error("stepped evolution requires t > 0");
    if (int(a.size()) != delta.size()) throw input_error("field length does not match domain");

    double h = t / double(steps);
    std::vector<double> u = a, rhs(a.size()), scratch(a.size());
    for (int s = 0; s < steps; ++s) {
        delta.apply(u.data(), scratch.data());
        for (std::size_t i = 0; i < u.size(); ++i) rhs[i] = u[i] + 0.5 * h * scratch[i];
        u = cn_solve(delta, h, rhs);
    }
    return u;
}

namespace {

// Backward-difference coefficients for the order-m derivative at t = 0 from
// f(0), f(-h), ..., consistency order 2. Stored as exact rationals, index k
// multiplies f(-k h).
struct Rational {
    long long num, den;
};

const std::vector<std::vector<Rational>>& fd_tables() {
    static const std::vector<std::vector<Rational>> tables = {
        {{3, 2}, {-2, 1}, {1, 2}},
        {{2, 1}, {-5, 1}, {4, 1}, {-1, 1}},
        {{5, 2}, {-9, 1}, {12, 1}, {-7, 1}, {3, 2}},
        {{3, 1}, {-14, 1}, {26, 1}, {-24, 1}, {11, 1}, {-2, 1}},
        {{7, 2}, {-20, 1}, {95, 2}, {-60, 1}, {85, 2}, {-16, 1}, {5, 2}},
        {{4, 1}, {-27, 1}, {78, 1}, {-125, 1}, {120, 1}, {-69, 1}, {22, 1}, {-3, 1}},
    };
    return tables;
}

}  // namespace

double fd_backward_derivative(const std::vector<double>& samples, int m, double h) {
    if (m < 1 || m > 6) throw input_error("derivative order must be in 1..6, got " + std::to_string(m));
    const auto& coeffs = fd_tables()[static_cast<std::size_t>(m - 1)];
    if (samples.size() < coeffs.size())
        throw input_error("order " + std::to_string(m) + " derivative needs " +
                          std::to_string(coeffs.size()) + " samples, got " +
                          std::to_string(samples.size()));
    if (!(h > 0.0)) throw input_error("derivative step must be positive");

    KahanSum s;
    for (std::size_t k = 0; k < coeffs.size(); ++k)
        s.add(samples[k] * (double(coeffs[k].num) / double(coeffs[k].den)));
    return s.value() / std::pow(h, m);
}

std::string spectral_json(const SpectralDecomposition& dec) {
    std::ostringstream out;
    out << "{\"eigenvalues\": [";
    for (std::size_t i = 0; i < dec.eigenvalues.size(); ++i) {
        if (i) out << ", ";
        out << json_number(dec.eigenvalues[i]);
    }
    out << "], \"residual\": " << json_number(dec.residual) << "}\n";
    return out.str();
}

ScalarField time_derivative_fd(const SpaceTimeField& u, int order) {
    u.validate();
    if (order == 0) {
        ScalarField out(static_cast<std::size_t>(u.n));
        int last = int(u.times.size()) - 1;
        for (int v = 0; v < u.n; ++v) out[static_cast<std::size_t>(v)] = u.at(v, last);
        return out;
    }
    if (order < 1 || order > 6)
        throw input_error("derivative order must be in 0..6, got " + std::to_string(order));
    std::size_t need = fd_tables()[static_cast<std::size_t>(order - 1)].size();
    if (u.times.size() < need)
        throw input_error("time grid too short for order " + std::to_string(order));

    double h = u.dt();
    int last = int(u.times.size()) - 1;
    ScalarField out(static_cast<std::size_t>(u.n));
    std::vector<double> samples(need);
    for (int v = 0; v < u.n; ++v) {
        for (std::size_t k = 0; k < need; ++k) samples[k] = u.at(v, last - int(k));
        out[static_cast<std::size_t>(v)] = fd_backward_derivative(samples, order, h);
    }
    return out;
}

}  // namespace ancient_heat
