#ifndef CANHT_TESTS_HELPERS_HPP
#define CANHT_TESTS_HELPERS_HPP

#include <gmpxx.h>

#include <random>
#include <tuple>
#include <utility>
#include <vector>

#include "canht/errors.hpp"
#include "canht/model.hpp"
#include "canht/real.hpp"

namespace testutil {

using canht::RationalPoint;
using canht::Real;
using canht::WeierstrassModel;

// Independent logarithm for oracle comparisons: argument reduction to
// [3/4, 3/2) followed by the odd atanh series, never calling the library's
// log.  Absolute error well below 2^-(prec-8).
inline Real series_atanh_log_of_reduced(const Real& m, mpfr_prec_t prec) {
    Real one = Real::of(1, prec);
    Real z = (m - one) / (m + one);
    Real z2 = z * z;
    Real term = z, acc = z;
    long k = 1;
    while (!term.is_zero() && term.exponent() > -static_cast<long>(prec) - 16) {
        term *= z2;
        acc += term / Real::of(2 * k + 1, prec);
        ++k;
    }
    return acc.mul_2exp(1);
}

inline Real series_log(const Real& x, mpfr_prec_t prec_out) {
    mpfr_prec_t prec = prec_out + 32;
    Real v = x.round_to(prec);
    long e = v.exponent();
    Real m = v.mul_2exp(-e);  // in [1/2, 1)
    if (m < Real::of(3, prec) / Real::of(4, prec)) {
        m = m.mul_2exp(1);
        e -= 1;
    }
    Real log2 = series_atanh_log_of_reduced(Real::of(2, prec), prec);
    return (series_atanh_log_of_reduced(m, prec) + Real::of(e, prec) * log2).round_to(prec_out);
}

inline Real series_log(const mpq_class& q, mpfr_prec_t prec_out) {
    return series_log(Real::of(q, prec_out + 48), prec_out);
}

inline Real series_log(const mpz_class& n, mpfr_prec_t prec_out) {
    return series_log(Real::of(n, prec_out + 48), prec_out);
}

inline bool close_2exp(const Real& a, const Real& b, long e) {
    Real diff = (a - b).abs();
    return diff.is_zero() || diff < Real::pow2(e, 64);
}

// Trial-division factorization for harness-side ground truth (the library
// itself never factors).
inline std::vector<std::pair<mpz_class, unsigned long>> factor_trial(mpz_class n) {
    std::vector<std::pair<mpz_class, unsigned long>> out;
    if (n < 0) n = -n;
    for (mpz_class p = 2; p * p <= n; p = (p == 2) ? mpz_class(3) : mpz_class(p + 2)) {
        if (!mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) continue;
        unsigned long e = 0;
        while (mpz_divisible_p(n.get_mpz_t(), p.get_mpz_t())) {
            n /= p;
            ++e;
        }
        out.emplace_back(p, e);
    }
    if (n > 1) out.emplace_back(n, 1ul);
    return out;
}

inline mpz_class rand_int(std::mt19937_64& rng, long lo, long hi) {
    std::uniform_int_distribution<long> d(lo, hi);
    return mpz_class(d(rng));
}

// Random integral model with a marked integral point: a6 is solved from the
// curve equation.
inline std::pair<WeierstrassModel, RationalPoint> random_curve_with_point(std::mt19937_64& rng,
                                                                          long bound) {
    for (;;) {
        mpz_class a1 = rand_int(rng, -bound, bound), a2 = rand_int(rng, -bound, bound),
                  a3 = rand_int(rng, -bound, bound), a4 = rand_int(rng, -bound, bound);
        mpz_class x = rand_int(rng, -bound, bound), y = rand_int(rng, -bound, bound);
        mpz_class a6 = y * y + a1 * x * y + a3 * y - x * x * x - a2 * x * x - a4 * x;
        try {
            WeierstrassModel w = WeierstrassModel::from_coefficients(a1, a2, a3, a4, a6);
            return {w, RationalPoint::affine(mpq_class(x), mpq_class(y))};
        } catch (const canht::SingularCurveError&) {
            continue;
        }
    }
}

// Random integral model with a marked point whose coordinates have the
// denominators (c^2, c^3): keep drawing numerators until the solved a6
// comes out integral.
inline std::pair<WeierstrassModel, RationalPoint> random_curve_with_rational_point(
    std::mt19937_64& rng, long bound, long c) {
    const mpz_class c2 = c * c, c3 = c * c * c;
    for (;;) {
        mpz_class a1 = rand_int(rng, -bound, bound), a2 = rand_int(rng, -bound, bound),
                  a3 = rand_int(rng, -bound, bound), a4 = rand_int(rng, -bound, bound);
        mpz_class xn = rand_int(rng, -8 * bound, 8 * bound);
        mpz_class yn = rand_int(rng, -24 * bound, 24 * bound);
        if (mpz_divisible_p(xn.get_mpz_t(), mpz_class(c).get_mpz_t())) continue;
        mpq_class x(xn, c2), y(yn, c3);
        x.canonicalize();
        y.canonicalize();
        mpq_class a6q = y * y + mpq_class(a1) * x * y + mpq_class(a3) * y - x * x * x -
                        mpq_class(a2) * x * x - mpq_class(a4) * x;
        if (a6q.get_den() != 1) continue;
        try {
            WeierstrassModel w = WeierstrassModel::from_coefficients(a1, a2, a3, a4, a6q.get_num());
            return {w, RationalPoint::affine(std::move(x), std::move(y))};
        } catch (const canht::SingularCurveError&) {
            continue;
        }
    }
}

// Random integral model through two integral points with consecutive
// x-coordinates (which keeps the solved a4, a6 integral).
inline std::tuple<WeierstrassModel, RationalPoint, RationalPoint> random_curve_with_two_points(
    std::mt19937_64& rng, long bound) {
    for (;;) {
        mpz_class a1 = rand_int(rng, -bound, bound), a2 = rand_int(rng, -bound, bound),
                  a3 = rand_int(rng, -bound, bound);
        mpz_class x1 = rand_int(rng, -bound, bound);
        mpz_class x2 = x1 + 1;
        mpz_class y1 = rand_int(rng, -bound, bound), y2 = rand_int(rng, -bound, bound);
        mpz_class c1 = y1 * y1 + a1 * x1 * y1 + a3 * y1 - x1 * x1 * x1 - a2 * x1 * x1;
        mpz_class c2 = y2 * y2 + a1 * x2 * y2 + a3 * y2 - x2 * x2 * x2 - a2 * x2 * x2;
        mpz_class a4 = c2 - c1;  // (c1 - c2) / (x1 - x2) with x1 - x2 = -1
        mpz_class a6 = c1 - a4 * x1;
        try {
            WeierstrassModel w = WeierstrassModel::from_coefficients(a1, a2, a3, a4, a6);
            return {w, RationalPoint::affine(mpq_class(x1), mpq_class(y1)),
                    RationalPoint::affine(mpq_class(x2), mpq_class(y2))};
        } catch (const canht::SingularCurveError&) {
            continue;
        }
    }
}

}  // namespace testutil

#endif
