#include "canht/nonarch_global.hpp"

#include <algorithm>
#include <cassert>

#include "canht/arith.hpp"
#include "canht/errors.hpp"
#include "canht/nonarch_local.hpp"

namespace canht {

namespace {

struct ResiduePair {
    mpz_class x1, x2;
};

// delta(x1, x2) reduced into [0, modulus).
ResiduePair duplicate_mod(const ResiduePair& in, const WeierstrassModel& w, const mpz_class& modulus) {
    mpz_class y1 = in.x1 * in.x1, y2 = in.x2 * in.x2;
    mpz_class cross = in.x1 * in.x2;
    mpz_class d1 = (y1 * y1 - w.b4 * y1 * y2 - 2 * w.b6 * cross * y2 - w.b8 * y2 * y2) % modulus;
    mpz_class d2 = (4 * y1 * cross + w.b2 * y1 * y2 + 2 * w.b4 * cross * y2 + w.b6 * y2 * y2) % modulus;
    if (d1 < 0) d1 += modulus;
    if (d2 < 0) d2 += modulus;
    return {std::move(d1), std::move(d2)};
}

mpz_class gcd_pair(const mpz_class& a, const mpz_class& b) {
    mpz_class g = gcd(a, b);
    return g;
}

// Largest truncation tail E * 4^{-m-1} / 3 must not exceed 1 / window_den:
// smallest m with 3 * 4^{m+1} >= E * window_den.
unsigned long truncation_index(const mpz_class& max_exp, const mpz_class& window_den) {
    mpz_class need = max_exp * window_den;
    unsigned long m = 0;
    mpz_class lhs = 12;  // 3 * 4^(m+1) at m = 0
    while (lhs < need) {
        lhs *= 4;
        ++m;
    }
    return m;
}

// Partial sum a = sum_n e_n 4^{-n-1}.
mpq_class partial_sum(const std::vector<unsigned long>& exps) {
    mpq_class a(0);
    mpq_class scale(1, 4);
    for (unsigned long e : exps) {
        if (e != 0) a += scale * mpq_class(e);
        scale /= 4;
    }
    return a;
}

// First continued-fraction convergent r/s of a with r/s >= a and
// r/s <= a + 1/(2 s B^2).  The exact value of a itself is always
// admissible, so the walk terminates.
mpq_class first_admissible_convergent(const mpq_class& a, const mpz_class& big_b) {
    if (a == 0) return mpq_class(0);
    mpz_class two_b2 = 2 * big_b * big_b;
    mpz_class hm1 = 1, km1 = 0;  // h_{-1} / k_{-1}
    mpz_class h = 0, k = 1;      // will hold h_0 / k_0 after the first step
    mpq_class x = a;
    bool first = true;
    for (;;) {
        mpz_class digit = x.get_num() / x.get_den();  // floor, x >= 0
        if (first) {
            h = digit;
            k = 1;
            first = false;
        } else {
            mpz_class hn = digit * h + hm1;
            mpz_class kn = digit * k + km1;
            hm1 = h;
            km1 = k;
            h = hn;
            k = kn;
        }
        mpq_class conv(h, k);
        conv.canonicalize();
        if (conv >= a) {
            // conv - a <= 1/(2 k B^2)  <=>  (h*den - num*k) * 2B^2 <= den,
            // with den = den(a), num = num(a); k equals den(conv) here.
            mpz_class diff_num = h * a.get_den() - a.get_num() * k;
            if (diff_num * two_b2 * conv.get_den() <= a.get_den() * k)
                return conv;
        }
        mpq_class frac = x - mpq_class(digit);
        if (frac == 0) {
            throw InternalError("first_admissible_convergent: exhausted expansion");
        }
        x = 1 / frac;
    }
}

mpq_class reconstruct_mu(const mpq_class& a, const mpz_class& big_b, bool use_2b4_variant) {
    if (use_2b4_variant) return first_admissible_convergent(a, big_b);
    mpq_class window(mpz_class(1), big_b * big_b * big_b * big_b);
    window.canonicalize();
    return simplest_fraction_in_interval(a, a + window);
}

void trial_divide(const RationalPoint& p, const WeierstrassModel& w, const mpz_class& bound,
                  mpz_class& abs_delta, std::vector<std::pair<mpz_class, mpq_class>>& terms) {
    mpz_class q = 2;
    while (q <= bound && abs_delta > 1) {
        if (mpz_divisible_p(abs_delta.get_mpz_t(), q.get_mpz_t())) {
            // q is prime: all smaller factors are already removed.
            auto [e, rest] = remove_power(abs_delta, q);
            abs_delta = rest;
            LocalMu lm = mu_at(p, w, q);
            if (lm.mu != 0) terms.emplace_back(q, lm.mu);
        }
        q = (q == 2) ? mpz_class(3) : mpz_class(q + 2);
    }
}

}  // namespace

FormalLogSum psi_finite(const RationalPoint& p, const WeierstrassModel& w, const PsiFiniteOptions& opts) {
    FormalLogSum out;
    if (p.is_infinity()) return out;

    KummerPair prim = kummer_primitive(p);
    KummerPair dup = duplicate_kummer(prim, w);
    mpz_class g0 = gcd_pair(abs(dup.x1), abs(dup.x2));
    ResiduePair pair{dup.x1 / g0, dup.x2 / g0};

    mpz_class abs_delta = abs(w.delta);
    const bool trial = opts.trial_division_bound >= 2;
    if (trial) trial_divide(p, w, opts.trial_division_bound, abs_delta, out.terms);

    mpz_class big_d = gcd_power(abs_delta, g0);
    unsigned long big_b = trial ? floor_log(big_d, opts.trial_division_bound) : floor_log(big_d, mpz_class(2));
    if (big_b <= 1) {
        // Remaining primes have v_p(delta) <= 1, which forces mu_p = 0:
        // mu_p is a nonnegative fraction with denominator at most v_p(delta)
        // bounded by v_p(delta)/4.
        std::sort(out.terms.begin(), out.terms.end());
        return out;
    }

    mpz_class bz(big_b);
    mpz_class b4 = bz * bz * bz * bz;
    mpz_class window_den = opts.use_2b4_variant ? mpz_class(2 * bz * bz * bz) : b4;
    // Global truncation: smallest m with 3*4^(m+1) >= B * window_den, i.e.
    // the tail of the exponent series stays inside the reconstruction window
    // even for the worst per-prime bound E = B.
    unsigned long m_global = truncation_index(bz, window_den);

    mpz_class modulus;
    mpz_pow_ui(modulus.get_mpz_t(), big_d.get_mpz_t(), m_global + 1);
    modulus *= g0;
    pair.x1 %= modulus;
    pair.x2 %= modulus;
    if (pair.x1 < 0) pair.x1 += modulus;
    if (pair.x2 < 0) pair.x2 += modulus;

    std::vector<mpz_class> gs{g0};

    if (!opts.incremental_basis) {
        for (unsigned long n = 1; n <= m_global; ++n) {
            ResiduePair next = duplicate_mod(pair, w, modulus);
            mpz_class inner = gcd_pair(next.x1, next.x2);
            if (inner == 0)
                throw InternalError("psi_finite: residue pair vanished; precision argument violated");
            mpz_class gn = gcd_pair(big_d, inner);
            gs.push_back(gn);
            mpz_divexact(pair.x1.get_mpz_t(), next.x1.get_mpz_t(), gn.get_mpz_t());
            mpz_divexact(pair.x2.get_mpz_t(), next.x2.get_mpz_t(), gn.get_mpz_t());
        }
        CoprimeBasis basis = coprime_basis(gs);
        for (std::size_t i = 0; i < basis.bases.size(); ++i) {
            std::vector<unsigned long> column(gs.size());
            for (std::size_t n = 0; n < gs.size(); ++n) column[n] = basis.exponents[n][i];
            mpq_class a = partial_sum(column);
            mpq_class mu = reconstruct_mu(a, bz, opts.use_2b4_variant);
            if (mu != 0) out.terms.emplace_back(basis.bases[i], mu);
        }
        std::sort(out.terms.begin(), out.terms.end());
        return out;
    }

    // Incremental variant: refine the block list after every pass, track a
    // per-block truncation index, and stop a block as soon as its exponent
    // hits zero (it then stays zero) or its index is reached.  The modulus
    // shrinks to the support of the still-open blocks.
    for (unsigned long n = 1; n <= m_global; ++n) {
        CoprimeBasis basis = coprime_basis(gs);
        mpz_class open_support = 1;
        bool any_open = false;
        for (std::size_t i = 0; i < basis.bases.size(); ++i) {
            unsigned long m_q = truncation_index(mpz_class(floor_log(big_d, basis.bases[i])), window_den);
            bool zero_closed = false;
            for (std::size_t j = 0; j < gs.size() && j <= m_q; ++j)
                if (basis.exponents[j][i] == 0) zero_closed = true;
            if (!zero_closed && gs.size() <= m_q) {
                any_open = true;
                open_support *= basis.bases[i];
            }
        }
        if (!any_open) break;
        modulus = gcd_power(modulus, open_support);

        ResiduePair next = duplicate_mod(pair, w, modulus);
        mpz_class inner = gcd_pair(next.x1, next.x2);
        if (inner == 0)
            throw InternalError("psi_finite: residue pair vanished; precision argument violated");
        mpz_class gn = gcd_pair(big_d, inner);
        gs.push_back(gn);
        // Only the part supported on open blocks is a certified valuation;
        // divide that part out and leave the rest alone.
        mpz_class g_act = gcd_power(gn, modulus);
        mpz_divexact(pair.x1.get_mpz_t(), next.x1.get_mpz_t(), g_act.get_mpz_t());
        mpz_divexact(pair.x2.get_mpz_t(), next.x2.get_mpz_t(), g_act.get_mpz_t());
    }
    CoprimeBasis basis = coprime_basis(gs);
    for (std::size_t i = 0; i < basis.bases.size(); ++i) {
        unsigned long m_q = truncation_index(mpz_class(floor_log(big_d, basis.bases[i])), window_den);
        std::vector<unsigned long> column;
        bool zero_closed = false;
        for (std::size_t j = 0; j < gs.size() && j <= m_q; ++j) {
            column.push_back(basis.exponents[j][i]);
            if (basis.exponents[j][i] == 0) {
                zero_closed = true;
                break;
            }
        }
        mpq_class a = partial_sum(column);
        mpq_class mu = zero_closed ? a : reconstruct_mu(a, bz, opts.use_2b4_variant);
        if (mu != 0) out.terms.emplace_back(basis.bases[i], mu);
    }
    std::sort(out.terms.begin(), out.terms.end());
    return out;
}

Real eval_log_sum(const FormalLogSum& s, mpfr_prec_t d) {
    if (d < 1) throw std::domain_error("eval_log_sum: d must be >= 1");
    // Crude magnitude bound to size the guard bits.
    mpz_class mag = 1;
    for (const auto& [q, mu] : s.terms) {
        mpz_class ceil_mu = mu.get_num() / mu.get_den() + 1;
        mag += ceil_mu * static_cast<unsigned long>(mpz_sizeinbase(q.get_mpz_t(), 2));
    }
    mpfr_prec_t prec = d + static_cast<mpfr_prec_t>(mpz_sizeinbase(mag.get_mpz_t(), 2)) + 16;
    Real acc(prec);
    for (const auto& [q, mu] : s.terms) acc += Real::of(mu, prec) * Real::log_of(q, prec);
    return acc;
}

}  // namespace canht
