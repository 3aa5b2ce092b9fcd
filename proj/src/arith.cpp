#include "canht/arith.hpp"

#include <cassert>
#include <stdexcept>
#include <utility>

#include "canht/errors.hpp"

namespace canht {

mpz_class gcd_power(const mpz_class& a, const mpz_class& b) {
    if (a <= 0 || b <= 0) throw std::domain_error("gcd_power: arguments must be positive");
    mpz_class g = gcd(a, b);
    if (g == 1) return g;
    // Double the exponents held in g until they saturate at the exponents
    // of a.  Stabilizes after O(log max-exponent) gcds.
    for (;;) {
        mpz_class g2 = gcd(a, g * g);
        if (g2 == g) return g;
        g = std::move(g2);
    }
}

unsigned long valuation(const mpz_class& n, const mpz_class& p) {
    return remove_power(n, p).first;
}

std::pair<unsigned long, mpz_class> remove_power(const mpz_class& n, const mpz_class& p) {
    if (n == 0) throw std::domain_error("remove_power: n must be nonzero");
    if (p < 2) throw std::domain_error("remove_power: p must be >= 2");
    mpz_class rest = n;
    unsigned long e = 0;
    mpz_class q, r;
    // Peel single powers; switch to a doubling ladder only when at least
    // p^2 divides, which keeps the common e <= 1 case cheap.
    mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rest.get_mpz_t(), p.get_mpz_t());
    if (r != 0) return {0, rest};
    rest = q;
    e = 1;
    std::vector<mpz_class> ladder{p};  // p^(2^k)
    for (;;) {
        const mpz_class& pk = ladder.back();
        mpz_class pk2 = pk * pk;
        if (mpz_divisible_p(rest.get_mpz_t(), pk2.get_mpz_t())) {
            ladder.push_back(std::move(pk2));
        } else {
            break;
        }
    }
    // Greedily remove ladder powers from the top.
    for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) {
        mpz_tdiv_qr(q.get_mpz_t(), r.get_mpz_t(), rest.get_mpz_t(), it->get_mpz_t());
        if (r == 0) {
            rest = q;
            e += (1ul << (ladder.rend() - it - 1));
        }
    }
    return {e, rest};
}

unsigned long floor_log(const mpz_class& n, const mpz_class& base) {
    if (n < 1 || base < 2) throw std::domain_error("floor_log: need n >= 1, base >= 2");
    if (base == 2) return mpz_sizeinbase(n.get_mpz_t(), 2) - 1;
    unsigned long e = 0;
    mpz_class pw = 1;
    std::vector<std::pair<unsigned long, mpz_class>> ladder;
    mpz_class b = base;
    unsigned long k = 1;
    while (pw * b <= n) {
        pw *= b;
        e += k;
        ladder.emplace_back(k, b);
        b = b * b;
        k *= 2;
    }
    // Binary descent over the remaining factor.
    for (auto it = ladder.rbegin(); it != ladder.rend(); ++it) {
        if (pw * it->second <= n) {
            pw *= it->second;
            e += it->first;
        }
    }
    return e;
}

namespace {

// Simplest fraction in [lo, hi] for 0 < lo <= hi, by continued-fraction
// descent.  Denominator is minimal; among those the numerator is minimal.
mpq_class simplest_positive(const mpq_class& lo, const mpq_class& hi) {
    mpz_class fl = lo.get_num() / lo.get_den();  // floor, lo > 0
    mpq_class frac_lo = lo - mpq_class(fl);
    if (frac_lo == 0) return mpq_class(fl);  // lo itself is an integer
    mpz_class fh = hi.get_num() / hi.get_den();
    if (fh > fl || hi == mpq_class(fh)) {
        // An integer lies in the interval: the smallest is fl + 1.
        return mpq_class(fl + 1);
    }
    mpq_class frac_hi = hi - mpq_class(fh);
    mpq_class inner = simplest_positive(1 / frac_hi, 1 / frac_lo);
    mpq_class r = mpq_class(fl) + 1 / inner;
    r.canonicalize();
    return r;
}

}  // namespace

mpq_class simplest_fraction_in_interval(const mpq_class& lo, const mpq_class& hi) {
    if (lo > hi) throw std::domain_error("simplest_fraction_in_interval: lo > hi");
    if (lo <= 0 && 0 <= hi) return mpq_class(0);
    if (hi < 0) {
        mpq_class r = -simplest_positive(-hi, -lo);
        return r;
    }
    return simplest_positive(lo, hi);
}

std::optional<mpq_class> unique_fraction_in_interval(const mpq_class& lo, const mpz_class& max_den) {
    if (max_den < 2) throw std::domain_error("unique_fraction_in_interval: max_den must be >= 2");
    mpq_class width(mpz_class(1), max_den * max_den);
    width.canonicalize();
    mpq_class best = simplest_fraction_in_interval(lo, lo + width);
    if (best.get_den() > max_den) return std::nullopt;
    return best;
}

namespace {

// Inserts v into a pairwise-coprime list, splitting entries as needed.
// Classic gcd refinement; terminates because each recursion strictly
// reduces the product of the values being (re)inserted.
void refine_insert(std::vector<mpz_class>& basis, const mpz_class& v) {
    if (v == 1) return;
    for (std::size_t i = 0; i < basis.size(); ++i) {
        mpz_class d = gcd(v, basis[i]);
        if (d == 1) continue;
        mpz_class q = basis[i] / d;
        mpz_class w = v / d;
        basis.erase(basis.begin() + static_cast<std::ptrdiff_t>(i));
        refine_insert(basis, q);
        refine_insert(basis, d);
        refine_insert(basis, w);
        return;
    }
    basis.push_back(v);
}

}  // namespace

CoprimeBasis coprime_basis(const std::vector<mpz_class>& values) {
    CoprimeBasis out;
    for (const mpz_class& v : values) {
        if (v < 1) throw std::domain_error("coprime_basis: values must be >= 1");
        refine_insert(out.bases, v);
    }
    std::sort(out.bases.begin(), out.bases.end());
    out.exponents.reserve(values.size());
    for (const mpz_class& v : values) {
        std::vector<unsigned long> row(out.bases.size(), 0);
        mpz_class rest = v;
        for (std::size_t i = 0; i < out.bases.size() && rest != 1; ++i) {
            auto [e, r] = remove_power(rest, out.bases[i]);
            row[i] = e;
            rest = std::move(r);
        }
        if (rest != 1)
            throw InternalError("coprime_basis: input does not factor over the basis");
        out.exponents.push_back(std::move(row));
    }
    return out;
}

}  // namespace canht
