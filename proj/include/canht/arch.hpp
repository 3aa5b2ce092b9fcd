#ifndef CANHT_ARCH_HPP
#define CANHT_ARCH_HPP

#include <utility>
#include <vector>

#include "canht/model.hpp"
#include "canht/real.hpp"

namespace canht {

/// Data for the quadratically convergent archimedean iteration: the curve
/// y^2 = x(x + a0^2)(x + b0^2) with 0 < b0 < a0 and the x-coordinate
/// x0 >= 0 of the working point on the identity component.
struct AgmInput {
    Real a0, b0, x0;
};

/// One recorded reduction step.  Unwinding computes
///   lambda_before = (lambda_after + sum_j coeff_j * log(value_j)) / degree.
struct CorrectionStep {
    unsigned degree;
    std::vector<std::pair<int, Real>> log_terms;  // (coeff, value > 0)
};

/// Additive log-corrections and degree factors accumulated while reducing
/// to the iteration-ready model; every term keeps the real number whose log
/// is taken so the precision of the unwinding can be re-derived.
struct CorrectionLedger {
    std::vector<CorrectionStep> steps;
    unsigned long degree_factor() const {
        unsigned long f = 1;
        for (const auto& s : steps) f *= s.degree;
        return f;
    }
};

/// Reduces (W, P) with 2P != O to iteration data: real 2-torsion is reached
/// through at most one 2-isogeny, the roots are shifted to 0 > -b0^2 > -a0^2,
/// and a point off the identity component is replaced by its double.  All
/// model changes that alter the local height are recorded in the ledger.
/// Guarantees relative error <= 2^-(d+32) on the returned values.
std::pair<AgmInput, CorrectionLedger> reduce_to_agm_data(const WeierstrassModel& w,
                                                         const RationalPoint& p, mpfr_prec_t d);

/// The local height of the working point on the reduced model, by the
/// quadratically convergent mean iteration; absolute error <= 2^-d.
Real agm_lambda(const AgmInput& in, mpfr_prec_t d);

/// The local height at infinity of P on W itself (ledger unwound).
Real lambda_infinity(const WeierstrassModel& w, const RationalPoint& p, mpfr_prec_t d);

/// Psi_infinity(P) = log max(1, |x(P)|) - lambda_infinity(P), absolute
/// error <= 2^-d.  Requires P != O and 2P != O.
Real psi_infinity(const WeierstrassModel& w, const RationalPoint& p, mpfr_prec_t d);

/// Direct evaluation of the defining series of Psi_infinity with `terms`
/// terms: linear convergence, used for cross-validation.  The duplication
/// runs on renormalized real Kummer pairs (the series only sees the
/// degree-zero part, so scaling is free).  If sup_log_phi is non-null it
/// receives the largest |log Phi| seen, which bounds the truncation error
/// by sup * 4^-terms / 3.  Throws TorsionOrbitError if the doubling orbit
/// of P reaches O before `terms` steps.
Real psi_infinity_oracle_series(const WeierstrassModel& w, const RationalPoint& p, unsigned terms,
                                mpfr_prec_t d, Real* sup_log_phi = nullptr);

}  // namespace canht

#endif
