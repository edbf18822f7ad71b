#include "ancient_heat/tychonov.hpp"

#include <algorithm>
#include <cmath>
#include <deque>
#include <mutex>
#include <sstream>

#include <gmpxx.h>
#include <mpfr.h>

#include "ancient_heat/errors.hpp"
#include "ancient_heat/io.hpp"

namespace ancient_heat {

namespace {

// ascending coefficient lists, table[k][i] = coefficient of s^i in P_k.
// deque: growth never relocates rows already handed out by reference.
std::deque<std::vector<mpz_class>>& poly_table() {
    static std::deque<std::vector<mpz_class>> table = {{mpz_class(1)}};
    return table;
}
std::mutex table_mutex;

const std::vector<mpz_class>& polynomial(int k) {
    if (k < 0 || k > kTychonovKCap)
        throw input_error("derivative order must be in 0.." + std::to_string(kTychonovKCap) +
                          ", got " + std::to_string(k));
    std::lock_guard<std::mutex> lock(table_mutex);
    auto& table = poly_table();
    while (int(table.size()) <= k) {
        const auto& p = table.back();
        // P_{k+1} = -s^2 P_k' + 2 s^3 P_k: s^i picks up -i c_i at power i+1
        // and 2 c_i at power i+3
        std::vector<mpz_class> next(p.size() + 3, mpz_class(0));
        for (std::size_t i = 0; i < p.size(); ++i) {
            next[i + 1] -= mpz_class(long(i)) * p[i];
            next[i + 3] += 2 * p[i];
        }
        table.push_back(std::move(next));
    }
    return table[std::size_t(k)];
}

// working precision covering the coefficient magnitudes plus the cancellation
// the x-series develops by k_cap terms
mpfr_prec_t working_precision(int k_cap) {
    std::lock_guard<std::mutex> lock(table_mutex);
    auto& table = poly_table();
    std::size_t max_bits = 1;
    for (int k = 0; k <= k_cap && k < int(table.size()); ++k)
        for (const auto& c : table[std::size_t(k)])
            if (c != 0) max_bits = std::max(max_bits, mpz_sizeinbase(c.get_mpz_t(), 2));
    return mpfr_prec_t(320 + long(max_bits) + 4 * long(k_cap));
}

// P_k(s) by Horner, result in out
void eval_polynomial(mpfr_t out, const std::vector<mpz_class>& p, mpfr_t s, mpfr_prec_t prec) {
    mpfr_t acc;
    mpfr_init2(acc, prec);
    mpfr_set_ui(acc, 0, MPFR_RNDN);
    for (std::size_t i = p.size(); i-- > 0;) {
        mpfr_mul(acc, acc, s, MPFR_RNDN);
        mpfr_t c;
        mpfr_init2(c, prec);
        mpfr_set_z(c, p[i].get_mpz_t(), MPFR_RNDN);
        mpfr_add(acc, acc, c, MPFR_RNDN);
        mpfr_clear(c);
    }
    mpfr_set(out, acc, MPFR_RNDN);
    mpfr_clear(acc);
}

}  // namespace

std::vector<std::string> tychonov_polynomial(int k) {
    const auto& p = polynomial(k);
    std::vector<std::string> out;
    out.reserve(p.size());
    for (std::size_t i = p.size(); i-- > 0;) out.push_back(p[i].get_str());
    return out;
}

double tychonov_f_derivative(int k, double t) {
    if (t <= 0.0) {
        (void)polynomial(k);  // still range-checks k
        return 0.0;
    }
    const auto& p = polynomial(k);
    mpfr_prec_t prec = working_precision(k);

    mpfr_t s, e, val;
    mpfr_inits2(prec, s, e, val, mpfr_ptr(nullptr));
    mpfr_set_d(s, t, MPFR_RNDN);
    mpfr_ui_div(s, 1, s, MPFR_RNDN);       // s = 1/t
    mpfr_sqr(e, s, MPFR_RNDN);
    mpfr_neg(e, e, MPFR_RNDN);
    mpfr_exp(e, e, MPFR_RNDN);             // e = exp(-1/t^2)
    eval_polynomial(val, p, s, prec);
    mpfr_mul(val, val, e, MPFR_RNDN);
    double out = mpfr_get_d(val, MPFR_RNDN);
    mpfr_clears(s, e, val, mpfr_ptr(nullptr));
    return out;
}

TychonovEval tychonov_eval(double x, double t, int k_cap) {
    if (k_cap < 1 || k_cap > kTychonovKCap)
        throw input_error("series cap must be in 1.." + std::to_string(kTychonovKCap));
    TychonovEval res;
    if (t <= 0.0) {
        res.terms_used = 1;
        return res;  // every f^(k) vanishes on the flat branch
    }
    if (x == 0.0) {
        res.value = tychonov_f_derivative(0, t);
        res.terms_used = 1;
        return res;
    }

    (void)polynomial(k_cap);  // grow the table once
    mpfr_prec_t prec = working_precision(k_cap);

    mpfr_t s, e, xfac, x2, term, sum, poly, small, last[3];
    mpfr_inits2(prec, s, e, xfac, x2, term, sum, poly, small, mpfr_ptr(nullptr));
    for (auto& m : last) mpfr_init2(m, prec);

    mpfr_set_d(s, t, MPFR_RNDN);
    mpfr_ui_div(s, 1, s, MPFR_RNDN);
    mpfr_sqr(e, s, MPFR_RNDN);
    mpfr_neg(e, e, MPFR_RNDN);
    mpfr_exp(e, e, MPFR_RNDN);
    mpfr_set_d(x2, x, MPFR_RNDN);
    mpfr_sqr(x2, x2, MPFR_RNDN);
    mpfr_set_ui(xfac, 1, MPFR_RNDN);  // x^{2k} / (2k)!
    mpfr_set_ui(sum, 0, MPFR_RNDN);

    // the terms scale like ((x/t)^2/4)^k / k!: their global hump sits near
    // k* = x^2/(4 t^2), and only past 2 k* is the term ratio pinned below 1/2,
    // which is what makes a decreasing run a valid tail certificate. Before
    // that, dips are transients and the partial sum is mid-cancellation, so
    // the relative test below would accept a wildly wrong value.
    double hump = (x * x) / (2.0 * t * t);
    int k_min = hump >= double(k_cap) ? k_cap + 1 : int(hump) + 4;

    res.converged = false;
    int k = 0;
    for (; k <= k_cap; ++k) {
        if (k > 0) {
            mpfr_mul(xfac, xfac, x2, MPFR_RNDN);
            mpfr_div_ui(xfac, xfac, unsigned(2 * k - 1), MPFR_RNDN);
            mpfr_div_ui(xfac, xfac, unsigned(2 * k), MPFR_RNDN);
        }
        eval_polynomial(poly, polynomial(k), s, prec);
        mpfr_mul(term, poly, e, MPFR_RNDN);
        mpfr_mul(term, term, xfac, MPFR_RNDN);
        mpfr_add(sum, sum, term, MPFR_RNDN);

        mpfr_set(last[2], last[1], MPFR_RNDN);
        mpfr_set(last[1], last[0], MPFR_RNDN);
        mpfr_abs(last[0], term, MPFR_RNDN);

        // stop on three consecutive decreasing terms past the hump that are
        // also negligible against the partial sum
        bool decreasing = k >= std::max(2, k_min) && mpfr_cmp(last[0], last[1]) < 0 &&
                          mpfr_cmp(last[1], last[2]) < 0;
        mpfr_abs(small, sum, MPFR_RNDN);
        mpfr_mul_2si(small, small, -64, MPFR_RNDN);
        if (decreasing && mpfr_cmp(last[0], small) <= 0) {
            res.converged = true;
            ++k;
            break;
        }
    }
    res.terms_used = k;
    res.value = mpfr_get_d(sum, MPFR_RNDN);
    mpfr_t mx;
    mpfr_init2(mx, prec);
    mpfr_set(mx, last[0], MPFR_RNDN);
    if (mpfr_cmp(last[1], mx) > 0) mpfr_set(mx, last[1], MPFR_RNDN);
    if (mpfr_cmp(last[2], mx) > 0) mpfr_set(mx, last[2], MPFR_RNDN);
    res.tail_estimate = mpfr_get_d(mx, MPFR_RNDN);
    mpfr_clear(mx);
    for (auto& m : last) mpfr_clear(m);
    mpfr_clears(s, e, xfac, x2, term, sum, poly, small, mpfr_ptr(nullptr));
    return res;
}

double tychonov_residual(double x, double t, double h) {
    if (!(h > 0.0)) throw input_error("difference step must be positive");
    if (!(t - h > 0.0)) throw input_error("need t - h > 0 so all stencil points stay off the flat branch");

    double h3 = h * h * h;
    auto eval_checked = [&](double xi, double ti) {
        auto r = tychonov_eval(xi, ti);
        if (!r.converged || r.tail_estimate > h3)
            throw compute_error("series tail " + format_double(r.tail_estimate) +
                                " exceeds h^3 at (x, t) = (" + format_double(xi) + ", " +
                                format_double(ti) + ")");
        return r.value;
    };

    double vt_plus = eval_checked(x, t + h);
    double vt_minus = eval_checked(x, t - h);
    double vx_plus = eval_checked(x + h, t);
    double vx_minus = eval_checked(x - h, t);
    double v0 = eval_checked(x, t);

    double dt = (vt_plus - vt_minus) / (2.0 * h);
    double dxx = (vx_plus - 2.0 * v0 + vx_minus) / (h * h);
    return std::fabs(dt - dxx);
}

AnalyticityCertificate analyticity_gap(double x, double t, int k_cap) {
    if (!(t > 0.0)) throw input_error("gap sample needs t > 0");
    AnalyticityCertificate c;
    for (int k = 0; k < 10; ++k)
        c.derivatives_at_zero.push_back(tychonov_f_derivative(k, 0.0));
    c.taylor_prediction = 0.0;  // the series those derivatives generate
    c.sample_value = tychonov_eval(x, t, k_cap).value;
    c.gap = std::fabs(c.sample_value - c.taylor_prediction);
    return c;
}

std::string certificate_json(const AnalyticityCertificate& c) {
    std::ostringstream out;
    out << "{\"derivatives_at_zero\": [";
    for (std::size_t i = 0; i < c.derivatives_at_zero.size(); ++i) {
        if (i) out << ", ";
        out << json_number(c.derivatives_at_zero[i]);
    }
    out << "], \"sample_value\": " << json_number(c.sample_value) << ", \"gap\": "
        << json_number(c.gap) << "}\n";
    return out.str();
}

}  // namespace ancient_heat
