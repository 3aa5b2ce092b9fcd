#ifndef CANHT_NONARCH_GLOBAL_HPP
#define CANHT_NONARCH_GLOBAL_HPP

#include <gmpxx.h>

#include <utility>
#include <vector>

#include "canht/model.hpp"
#include "canht/real.hpp"

namespace canht {

/// Exact value of the total finite-place correction as a formal sum
/// sum_i mu_i * log(q_i) with pairwise coprime integer bases q_i >= 2 and
/// rational coefficients mu_i > 0.  An empty term list means zero.
struct FormalLogSum {
    std::vector<std::pair<mpz_class, mpq_class>> terms;
    bool empty() const { return terms.empty(); }
};

struct PsiFiniteOptions {
    /// Trial-factor the discriminant up to this bound and handle those
    /// primes with the per-prime algorithm; 1 disables the splitting.
    mpz_class trial_division_bound{1};
    /// Shorter truncation with convergent-based reconstruction.
    bool use_2b4_variant = false;
    /// Maintain the coprime basis incrementally inside the duplication
    /// loop and stop each block as soon as its value is pinned.
    bool incremental_basis = false;
};

/// The total non-archimedean contribution sum_p mu_p(P) log p, computed
/// exactly without factoring the discriminant.  Works modulo a fixed power
/// of the discriminant-supported part of the gcd chain.
FormalLogSum psi_finite(const RationalPoint& p, const WeierstrassModel& w,
                        const PsiFiniteOptions& opts = {});

/// Numeric evaluation of a formal log sum, absolute error <= 2^-d.
Real eval_log_sum(const FormalLogSum& s, mpfr_prec_t d);

}  // namespace canht

#endif
