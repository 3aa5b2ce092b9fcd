#include "canht/height.hpp"

#include <cassert>

#include "canht/arch.hpp"
#include "canht/arith.hpp"
#include "canht/errors.hpp"
#include "canht/nonarch_local.hpp"

namespace canht {

namespace {

Real round_abs(const Real& v, mpfr_prec_t d) {
    long e = v.is_zero() ? 0 : std::max<long>(0, v.exponent());
    return v.round_to(d + 4 + static_cast<mpfr_prec_t>(e));
}

Real psi_infinity_by_series(const WeierstrassModel& w, const RationalPoint& p, mpfr_prec_t d) {
    // Orders 4 and 8 reach O under doubling; from there every term of the
    // series vanishes, so the truncated sum is already exact.
    {
        KummerPair k = kummer_primitive(p);
        for (unsigned i = 1; i <= 3; ++i) {
            k = primitive_form(duplicate_kummer(k, w));
            if (k.x2 == 0) return psi_infinity_oracle_series(w, p, i, d + 4);
        }
    }
    // Linear convergence: each term gains two bits.  Start from the worst
    // case bound and rerun if the recorded sup of |log Phi| says the tail
    // was still too large.
    unsigned terms = static_cast<unsigned>(d) / 2 + 40;
    for (int i = 0; i < 4; ++i) {
        Real sup(64);
        Real value = psi_infinity_oracle_series(w, p, terms, d + 4, &sup);
        long sup_exp = sup.is_zero() ? 0 : sup.exponent();
        long tail_exp = sup_exp - 2 * static_cast<long>(terms);
        if (tail_exp <= -static_cast<long>(d) - 2) return value;
        terms += static_cast<unsigned>((tail_exp + d + 4) / 2 + 8);
    }
    throw InternalError("psi_infinity_by_series: term count did not stabilize");
}

}  // namespace

Real naive_height(const RationalPoint& p, mpfr_prec_t d) {
    if (p.is_infinity()) return Real(d);
    KummerPair k = kummer_primitive(p);
    mpz_class m = abs(k.x1);
    if (k.x2 > m) m = k.x2;
    if (m == 1) return Real(d);
    mpfr_prec_t prec = d + 16;
    prec += static_cast<mpfr_prec_t>(mpz_sizeinbase(mpz_class(mpz_sizeinbase(m.get_mpz_t(), 2)).get_mpz_t(), 2));
    return Real::log_of(m, prec);
}

namespace {

// Affine point arithmetic on the reduced curve over F_q, q an odd prime of
// good reduction.  Orders up to 12 only, so plain affine formulas with one
// inversion per addition are fine.
struct ModCurve {
    unsigned long q;
    unsigned long a1, a2, a3, a4, a6;

    static unsigned long reduce(const mpz_class& v, unsigned long q) {
        mpz_class r = v % q;
        if (r < 0) r += q;
        return r.get_ui();
    }
    unsigned long add(unsigned long a, unsigned long b) const { return (a + b) % q; }
    unsigned long sub(unsigned long a, unsigned long b) const { return (a + q - b) % q; }
    unsigned long mul(unsigned long a, unsigned long b) const {
        return static_cast<unsigned long>((static_cast<unsigned __int128>(a) * b) % q);
    }
    unsigned long inv(unsigned long a) const {
        long t = 0, nt = 1;
        long r = static_cast<long>(q), nr = static_cast<long>(a);
        while (nr != 0) {
            long quo = r / nr;
            t -= quo * nt;
            std::swap(t, nt);
            r -= quo * nr;
            std::swap(r, nr);
        }
        if (t < 0) t += static_cast<long>(q);
        return static_cast<unsigned long>(t);
    }

    struct Pt {
        bool inf = true;
        unsigned long x = 0, y = 0;
    };

    Pt add_pts(const Pt& p, const Pt& r) const {
        if (p.inf) return r;
        if (r.inf) return p;
        unsigned long lam, nu;
        if (p.x == r.x) {
            unsigned long denom = add(add(2 * p.y % q, mul(a1, p.x)), a3);
            if (p.y != r.y || denom == 0) return Pt{};  // r == -p
            unsigned long num = sub(add(add(mul(3, mul(p.x, p.x)), mul(2 * a2 % q, p.x)), a4),
                                    mul(a1, p.y));
            unsigned long di = inv(denom);
            lam = mul(num, di);
            unsigned long x3cube = mul(p.x, mul(p.x, p.x));
            unsigned long nun = sub(add(add(mul(a4, p.x), 2 * a6 % q), q - x3cube), mul(a3, p.y));
            nu = mul(nun, di);
        } else {
            unsigned long dx = sub(r.x, p.x);
            unsigned long di = inv(dx);
            lam = mul(sub(r.y, p.y), di);
            nu = mul(sub(mul(p.y, r.x), mul(r.y, p.x)), di);
        }
        unsigned long x3 = sub(sub(sub(add(mul(lam, lam), mul(a1, lam)), a2), p.x), r.x);
        unsigned long y3 = sub(sub(q - mul(add(lam, a1), x3), nu), a3);
        return Pt{false, x3, y3 % q};
    }
};

constexpr unsigned long kGoodPrimes[] = {1000000007ul, 1000000009ul, 998244353ul, 999999937ul,
                                         1000000021ul, 1000000033ul, 1000000087ul, 1000000093ul};

}  // namespace

std::optional<unsigned> torsion_order(const WeierstrassModel& w, const RationalPoint& p) {
    if (p.is_infinity()) return 1u;

    // Reduce modulo a prime of good reduction: torsion of order <= 12
    // injects, so orders that fail modulo q cannot occur globally.  Any
    // candidate order is then verified by the exact group law.
    for (unsigned long q : kGoodPrimes) {
        if (mpz_divisible_ui_p(w.delta.get_mpz_t(), q)) continue;
        if (mpz_divisible_ui_p(p.x.get_den().get_mpz_t(), q)) continue;
        if (mpz_divisible_ui_p(p.y.get_den().get_mpz_t(), q)) continue;
        ModCurve mc{q,
                    ModCurve::reduce(w.a1, q),
                    ModCurve::reduce(w.a2, q),
                    ModCurve::reduce(w.a3, q),
                    ModCurve::reduce(w.a4, q),
                    ModCurve::reduce(w.a6, q)};
        ModCurve::Pt base;
        base.inf = false;
        base.x = mc.mul(ModCurve::reduce(p.x.get_num(), q), mc.inv(ModCurve::reduce(p.x.get_den(), q)));
        base.y = mc.mul(ModCurve::reduce(p.y.get_num(), q), mc.inv(ModCurve::reduce(p.y.get_den(), q)));
        ModCurve::Pt acc = base;
        std::vector<unsigned> candidates;
        for (unsigned k = 2; k <= 12; ++k) {
            acc = mc.add_pts(acc, base);
            if (acc.inf) candidates.push_back(k);
        }
        if (candidates.empty()) return std::nullopt;  // certified non-torsion
        // An exact hit at the smallest surviving candidate is the order: any
        // proper divisor would also have shown up as a candidate and been
        // tested first.
        for (unsigned k : candidates)
            if (multiply_point(p, k, w).is_infinity()) return k;
        return std::nullopt;
    }

    // All sampled primes were unusable; fall back to the direct walk.
    RationalPoint acc = p;
    for (unsigned k = 2; k <= 12; ++k) {
        acc = add_points(acc, p, w);
        if (acc.is_infinity()) return k;
    }
    return std::nullopt;
}

HeightBreakdown canonical_height(const WeierstrassModel& w, const RationalPoint& p, mpfr_prec_t d,
                                 const PsiFiniteOptions& opts, ArchMethod arch) {
    if (!on_curve(w, p)) throw NotOnCurveError();
    const mpfr_prec_t dw = d + 8;

    HeightBreakdown out;
    out.precision_bits = d;
    out.torsion_order = torsion_order(w, p);
    out.h_naive = naive_height(p, dw);
    out.psi_finite = psi_finite(p, w, opts);
    out.psi_finite_value = eval_log_sum(out.psi_finite, dw);

    const bool two_torsion_or_o = out.torsion_order && *out.torsion_order <= 2;
    if (!two_torsion_or_o) {
        out.psi_infinity = (arch == ArchMethod::Agm) ? psi_infinity(w, p, dw)
                                                     : psi_infinity_by_series(w, p, dw);
    }

    if (out.torsion_order) {
        out.h_canonical = Real(d);  // exact zero
        return out;
    }
    Real h = out.h_naive - *out.psi_infinity - out.psi_finite_value;
    out.h_canonical = round_abs(h, d);
    return out;
}

Real canonical_height_limit_oracle(const WeierstrassModel& w, const RationalPoint& p, unsigned n,
                                   mpfr_prec_t d) {
    if (n > 12) throw std::domain_error("canonical_height_limit_oracle: doubling count capped at 12");
    RationalPoint q = p;
    for (unsigned i = 0; i < n; ++i) q = double_point(q, w);
    Real h = naive_height(q, d + 2 * static_cast<mpfr_prec_t>(n) + 8);
    return h.mul_2exp(-2 * static_cast<long>(n));
}

Real local_height_nonarch(const WeierstrassModel& w, const RationalPoint& point, const mpz_class& p,
                          mpfr_prec_t d) {
    if (point.is_infinity()) throw std::domain_error("local_height_nonarch: P must be affine");
    LocalMu lm = mu_at(point, w, p);
    unsigned long vden = valuation(point.x.get_den(), p);
    mpq_class coeff = mpq_class(vden) - lm.mu;  // log max(1,|x|_p) = v_p(den) log p
    if (coeff == 0) return Real(d);
    mpfr_prec_t prec = d + 24 + static_cast<mpfr_prec_t>(mpz_sizeinbase(p.get_mpz_t(), 2));
    return Real::of(coeff, prec) * Real::log_of(p, prec);
}

Real height_pairing(const WeierstrassModel& w, const RationalPoint& p, const RationalPoint& q,
                    mpfr_prec_t d) {
    RationalPoint sum = add_points(p, q, w);
    Real hs = canonical_height(w, sum, d + 4).h_canonical;
    Real hp = canonical_height(w, p, d + 4).h_canonical;
    Real hq = canonical_height(w, q, d + 4).h_canonical;
    return (hs - hp - hq).mul_2exp(-1);
}

}  // namespace canht
