#ifndef CANHT_ARITH_HPP
#define CANHT_ARITH_HPP

#include <gmpxx.h>

#include <optional>
#include <vector>

namespace canht {

/// Largest divisor of a whose prime factors all divide b, for a, b > 0.
/// Computed by iterated gcds with exponent doubling; never factors anything.
mpz_class gcd_power(const mpz_class& a, const mpz_class& b);

/// v_p(n) for n != 0 and p >= 2.  p need not be prime; this is the largest
/// e with p^e | n.
unsigned long valuation(const mpz_class& n, const mpz_class& p);

/// Splits n into (e, n / p^e) with e = valuation(n, p).
std::pair<unsigned long, mpz_class> remove_power(const mpz_class& n, const mpz_class& p);

/// Largest e >= 0 with base^e <= n, for n >= 1 and base >= 2.
unsigned long floor_log(const mpz_class& n, const mpz_class& base);

/// The fraction of smallest denominator in the closed interval [lo, hi],
/// ties broken by smallest numerator magnitude.  Stern-Brocot descent.
mpq_class simplest_fraction_in_interval(const mpq_class& lo, const mpq_class& hi);

/// The unique fraction with denominator <= max_den in [lo, lo + 1/max_den^2],
/// or nullopt if the interval contains no such fraction (which signals an
/// upstream precision bug).  Requires max_den >= 2.
std::optional<mpq_class> unique_fraction_in_interval(const mpq_class& lo, const mpz_class& max_den);

/// Pairwise coprime integers q_i >= 2 together with exponents such that
/// every input value factors exactly as prod_i q_i^{exponents[n][i]}.
/// The basis elements need not be prime.
struct CoprimeBasis {
    std::vector<mpz_class> bases;
    std::vector<std::vector<unsigned long>> exponents;  // [input][basis]
};

/// Gcd-refinement factorization into coprimes of a list of values >= 1.
/// Inputs equal to 1 get an all-zero exponent row.
CoprimeBasis coprime_basis(const std::vector<mpz_class>& values);

}  // namespace canht

#endif
