#ifndef CANHT_NONARCH_LOCAL_HPP
#define CANHT_NONARCH_LOCAL_HPP

#include <gmpxx.h>

#include "canht/model.hpp"

namespace canht {

/// Local error data at a prime p: the integer epsilon(P) and the rational
/// mu(P) = sum_{n>=0} 4^{-n-1} epsilon(2^n P).  Satisfies
/// 0 <= mu <= v_p(delta)/4 and den(mu) <= v_p(delta).
struct LocalMu {
    unsigned long epsilon0 = 0;
    mpq_class mu;
};

/// epsilon(P) at p: min of the p-adic valuations of the duplication pair of
/// the primitive Kummer coordinates of P.  p must be prime (not checked
/// here).  O is allowed and gives 0.
unsigned long epsilon_at(const RationalPoint& p_point, const WeierstrassModel& w, const mpz_class& p);

/// mu(P) at p by the truncated p-adic duplication loop: exact rational
/// output, no factorization, works for any integral model (minimal or not).
LocalMu mu_at(const RationalPoint& p_point, const WeierstrassModel& w, const mpz_class& p);

/// Reference evaluation of mu(P) from the defining series, using the exact
/// rational group law for the doubling orbit.  terms must cover the
/// truncation cutoff of mu_at; the fraction is recovered by brute-force
/// denominator search, keeping this path independent of mu_at.
mpq_class mu_oracle(const RationalPoint& p_point, const WeierstrassModel& w, const mpz_class& p,
                    unsigned terms);

}  // namespace canht

#endif
