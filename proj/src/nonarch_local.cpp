#include "canht/nonarch_local.hpp"

#include <cassert>

#include "canht/arith.hpp"
#include "canht/errors.hpp"

namespace canht {

unsigned long epsilon_at(const RationalPoint& p_point, const WeierstrassModel& w, const mpz_class& p) {
    KummerPair k = kummer_primitive(p_point);
    KummerPair d = duplicate_kummer(k, w);
    // Primitive input makes the 4*min(v(x1), v(x2)) term vanish.
    if (d.x1 == 0) return valuation(d.x2, p);
    if (d.x2 == 0) return valuation(d.x1, p);
    return std::min(valuation(d.x1, p), valuation(d.x2, p));
}

namespace {

// Valuation of a residue known modulo p^k; a zero residue means "at least k".
unsigned long residue_valuation(const mpz_class& r, const mpz_class& p, unsigned long k) {
    if (r == 0) return k;
    return valuation(r, p);
}

}  // namespace

LocalMu mu_at(const RationalPoint& p_point, const WeierstrassModel& w, const mpz_class& p) {
    unsigned long big_b = w.delta < 0 ? valuation(-w.delta, p) : valuation(w.delta, p);
    if (big_b <= 1) {
        // v_p(delta) <= 1 forces mu = epsilon = 0: mu has denominator at most
        // v_p(delta) and lies in [0, v_p(delta)/4].
        return LocalMu{0, mpq_class(0)};
    }

    // Truncation index: largest m with 3 * 4^m <= B^3.
    mpz_class b3 = mpz_class(big_b) * big_b * big_b;
    unsigned long m = floor_log(b3 / 3, mpz_class(4));

    unsigned long k = (m + 1) * big_b + 1;  // p-adic digits carried
    mpz_class modulus;
    mpz_pow_ui(modulus.get_mpz_t(), p.get_mpz_t(), k);

    KummerPair prim = kummer_primitive(p_point);
    mpz_class x1 = prim.x1 % modulus;
    mpz_class x2 = prim.x2 % modulus;
    if (x1 < 0) x1 += modulus;
    if (x2 < 0) x2 += modulus;

    LocalMu out;
    mpq_class mu0(0);
    mpq_class scale(1, 4);
    for (unsigned long n = 0; n <= m; ++n) {
        mpz_class y1 = x1 * x1, y2 = x2 * x2;
        mpz_class d1 = (y1 * y1 - w.b4 * y1 * y2 - 2 * w.b6 * x1 * x2 * y2 - w.b8 * y2 * y2) % modulus;
        mpz_class d2 = (4 * y1 * x1 * x2 + w.b2 * y1 * y2 + 2 * w.b4 * x1 * x2 * y2 + w.b6 * y2 * y2) % modulus;
        if (d1 < 0) d1 += modulus;
        if (d2 < 0) d2 += modulus;

        unsigned long l = std::min(residue_valuation(d1, p, k), residue_valuation(d2, p, k));
        if (l >= k)
            throw InternalError("mu_at: p-adic working precision exhausted");
        if (n == 0) out.epsilon0 = l;
        if (l == 0) {
            // epsilon vanishes from here on; the series is the finite sum.
            out.mu = mu0;
            return out;
        }
        mu0 += scale * mpq_class(l);
        scale /= 4;

        // Divide the pair by p^l; the known precision drops by l digits.
        mpz_class pl;
        mpz_pow_ui(pl.get_mpz_t(), p.get_mpz_t(), l);
        k -= l;
        mpz_divexact(modulus.get_mpz_t(), modulus.get_mpz_t(), pl.get_mpz_t());
        mpz_divexact(x1.get_mpz_t(), d1.get_mpz_t(), pl.get_mpz_t());
        mpz_divexact(x2.get_mpz_t(), d2.get_mpz_t(), pl.get_mpz_t());
        x1 %= modulus;
        x2 %= modulus;
    }

    auto result = unique_fraction_in_interval(mu0, mpz_class(big_b));
    if (!result)
        throw InternalError("mu_at: no admissible fraction in the truncation interval");
    out.mu = *result;
    return out;
}

mpq_class mu_oracle(const RationalPoint& p_point, const WeierstrassModel& w, const mpz_class& p,
                    unsigned terms) {
    unsigned long big_b = w.delta < 0 ? valuation(-w.delta, p) : valuation(w.delta, p);
    if (big_b <= 1) return mpq_class(0);

    mpq_class mu0(0);
    mpq_class scale(1, 4);
    RationalPoint q = p_point;
    bool exact = false;
    for (unsigned n = 0; n < terms; ++n) {
        unsigned long e = epsilon_at(q, w, p);
        if (e == 0) {
            exact = true;
            break;
        }
        mu0 += scale * mpq_class(e);
        scale /= 4;
        q = double_point(q, w);
    }
    if (exact) return mu0;

    // Recover the exact value from the truncated sum: mu lies within
    // B / (3 * 4^terms) <= 1/B^2 of mu0 and has denominator at most B.
    // Enumerate denominators directly (independent of the production
    // fraction search).
    mpq_class width = scale * 4 * mpq_class(big_b) / 3;
    if (width * big_b * big_b > 1)
        throw std::domain_error("mu_oracle: too few terms for unambiguous reconstruction");
    mpq_class hi = mu0 + width;
    for (unsigned long s = 1; s <= big_b; ++s) {
        // Smallest numerator t with t/s >= mu0.
        mpz_class t = mu0.get_num() * s;
        mpz_class c;
        mpz_cdiv_q(c.get_mpz_t(), t.get_mpz_t(), mu0.get_den().get_mpz_t());
        mpq_class cand(c, s);
        cand.canonicalize();
        if (cand <= hi) return cand;
    }
    throw InternalError("mu_oracle: no fraction with small denominator near the partial sum");
}

}  // namespace canht
