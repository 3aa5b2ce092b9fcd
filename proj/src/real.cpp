#include "canht/real.hpp"

#include <cstdio>
#include <stdexcept>
#include <vector>

namespace canht {

Real Real::log_of(const mpz_class& n, mpfr_prec_t prec) {
    if (n <= 0) throw std::domain_error("log_of: argument must be positive");
    // One guard limb so that the rounding of n and of the log together stay
    // within an ulp at the requested precision.
    Real x = Real::of(n, prec + 8);
    return x.log().round_to(prec);
}

Real Real::log_of(const mpq_class& q, mpfr_prec_t prec) {
    if (q <= 0) throw std::domain_error("log_of: argument must be positive");
    Real x = Real::of(q, prec + 8);
    return x.log().round_to(prec);
}

std::string Real::decimal(int digits) const {
    if (digits < 0) digits = 0;
    char* out = nullptr;
    if (mpfr_asprintf(&out, "%.*R*f", digits, MPFR_RNDN, v_) < 0)
        throw std::runtime_error("mpfr_asprintf failed");
    std::string s(out);
    mpfr_free_str(out);
    return s;
}

}  // namespace canht
