#ifndef CANHT_HEIGHT_HPP
#define CANHT_HEIGHT_HPP

#include <optional>

#include "canht/model.hpp"
#include "canht/nonarch_global.hpp"
#include "canht/real.hpp"

namespace canht {

enum class ArchMethod {
    Agm,     // quadratically convergent iteration (production path)
    Series,  // direct evaluation of the defining series (cross-check path)
};

struct HeightBreakdown {
    Real h_naive;
    FormalLogSum psi_finite;
    Real psi_finite_value;
    std::optional<Real> psi_infinity;  // absent when 2P = O
    Real h_canonical;
    mpfr_prec_t precision_bits = 0;
    std::optional<unsigned> torsion_order;
};

/// log max(|x1|, x2) over the primitive Kummer pair; 0 for O.
Real naive_height(const RationalPoint& p, mpfr_prec_t d);

/// Order of P if it is torsion (order <= 12 over Q), nullopt otherwise.
/// Exact: checks the multiples kP by the rational group law.
std::optional<unsigned> torsion_order(const WeierstrassModel& w, const RationalPoint& p);

/// The canonical height with its decomposition, absolute error <= 2^-d.
/// Torsion points short-circuit to an exact zero; the breakdown fields stay
/// populated.  In this normalization the canonical height is twice the one
/// in Silverman's books.
HeightBreakdown canonical_height(const WeierstrassModel& w, const RationalPoint& p, mpfr_prec_t d,
                                 const PsiFiniteOptions& opts = {}, ArchMethod arch = ArchMethod::Agm);

/// h(2^n P) / 4^n by exact doubling; converges linearly to the canonical
/// height and is used as the definition-level reference.  n is capped at 12
/// because the coordinate size grows fourfold per doubling.
Real canonical_height_limit_oracle(const WeierstrassModel& w, const RationalPoint& p, unsigned n,
                                   mpfr_prec_t d);

/// Local height at a finite prime p:
///   log max(1, |x(P)|_p) - mu_p(P) log p.
Real local_height_nonarch(const WeierstrassModel& w, const RationalPoint& point, const mpz_class& p,
                          mpfr_prec_t d);

/// (h(P+Q) - h(P) - h(Q)) / 2 for the canonical height.
Real height_pairing(const WeierstrassModel& w, const RationalPoint& p, const RationalPoint& q,
                    mpfr_prec_t d);

}  // namespace canht

#endif
