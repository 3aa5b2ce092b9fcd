#include "canht/arch.hpp"

#include <algorithm>
#include <cassert>
#include <vector>

#include "canht/arith.hpp"
#include "canht/errors.hpp"

namespace canht {

namespace {

// ---------------------------------------------------------------------------
// Exact root isolation for the shifted cubic
//
//   R(x) = x^3 + (b2/4) x^2 + (b4/2) x + (b6/4),
//
// the right-hand side after absorbing the odd coefficients into y.  R keeps
// the b-invariants and the discriminant of the model, and its sign at any
// rational point is an exact integer computation.
// ---------------------------------------------------------------------------

using Poly = std::vector<mpq_class>;  // coefficients, low degree first

// sign of R at t = n/d: sign(4 n^3 + b2 n^2 d + 2 b4 n d^2 + b6 d^3).
int cubic_sign(const WeierstrassModel& w, const mpq_class& t) {
    const mpz_class& n = t.get_num();
    const mpz_class& d = t.get_den();
    mpz_class n2 = n * n, d2 = d * d;
    mpz_class val = 4 * n2 * n + w.b2 * n2 * d + 2 * w.b4 * n * d2 + w.b6 * d2 * d;
    return sgn(val);
}

mpq_class poly_eval(const Poly& p, const mpq_class& t) {
    mpq_class acc(0);
    for (auto it = p.rbegin(); it != p.rend(); ++it) acc = acc * t + *it;
    return acc;
}

Poly poly_derivative(const Poly& p) {
    Poly d;
    for (std::size_t i = 1; i < p.size(); ++i) d.push_back(mpq_class(static_cast<long>(i)) * p[i]);
    return d;
}

void poly_trim(Poly& p) {
    while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly poly_rem(Poly a, const Poly& b) {
    poly_trim(a);
    while (a.size() >= b.size() && !a.empty()) {
        mpq_class c = a.back() / b.back();
        std::size_t shift = a.size() - b.size();
        for (std::size_t i = 0; i < b.size(); ++i) a[i + shift] -= c * b[i];
        a.pop_back();
        poly_trim(a);
    }
    return a;
}

std::vector<Poly> sturm_chain(const Poly& p) {
    std::vector<Poly> chain{p, poly_derivative(p)};
    while (chain.back().size() > 1) {
        Poly r = poly_rem(chain[chain.size() - 2], chain.back());
        if (r.empty()) break;
        for (auto& c : r) c = -c;
        chain.push_back(std::move(r));
    }
    return chain;
}

int sign_variations(const std::vector<Poly>& chain, const mpq_class& t) {
    int count = 0, prev = 0;
    for (const Poly& p : chain) {
        int s = sgn(poly_eval(p, t));
        if (s == 0) continue;
        if (prev != 0 && s != prev) ++count;
        prev = s;
    }
    return count;
}

mpq_class pow2_q(long e) {
    mpq_class q;
    if (e >= 0) {
        q = mpq_class(mpz_class(1) << static_cast<unsigned long>(e));
    } else {
        q = mpq_class(mpz_class(1), mpz_class(1) << static_cast<unsigned long>(-e));
        q.canonicalize();
    }
    return q;
}

// bitlen(num) - bitlen(den): within 1 of log2 |q| for q != 0.
long exp_of(const mpq_class& q) {
    if (q == 0) return 0;
    return static_cast<long>(mpz_sizeinbase(q.get_num().get_mpz_t(), 2)) -
           static_cast<long>(mpz_sizeinbase(q.get_den().get_mpz_t(), 2));
}

struct RootBracket {
    mpq_class lo, hi;  // root in (lo, hi]
    bool exact_hit = false;
};

// Isolating intervals for all real roots of R, sorted increasing.  Queued
// intervals never have a root at an endpoint: an exact hit at a midpoint is
// recorded and excluded by a verified two-sided margin, so every emitted
// bracket straddles a sign change around its single interior root.
std::vector<RootBracket> isolate_roots(const WeierstrassModel& w) {
    Poly r{mpq_class(w.b6) / 4, mpq_class(w.b4) / 2, mpq_class(w.b2) / 4, mpq_class(1)};
    std::vector<Poly> chain = sturm_chain(r);

    // Degree-weighted root bound: |root| <= 2 max(|c2|, |c4|^(1/2), |c6|^(1/3)),
    // so the starting interval is within a few halvings of the root scale.
    long e2 = r[2] == 0 ? 0 : exp_of(r[2]);
    long e1 = r[1] == 0 ? 0 : (exp_of(r[1]) + 1) / 2;
    long e0 = r[0] == 0 ? 0 : (exp_of(r[0]) + 2) / 3;
    mpq_class bound = pow2_q(std::max({e2, e1, e0, 1l}) + 2);

    std::vector<RootBracket> done;
    struct Item {
        mpq_class lo, hi;
        int count;
    };
    std::vector<Item> work;
    int total = sign_variations(chain, -bound) - sign_variations(chain, bound);
    work.push_back({-bound, bound, total});
    while (!work.empty()) {
        Item it = std::move(work.back());
        work.pop_back();
        if (it.count <= 0) continue;
        if (it.count == 1) {
            done.push_back({it.lo, it.hi, false});
            continue;
        }
        mpq_class mid = (it.lo + it.hi) / 2;
        if (cubic_sign(w, mid) == 0) {
            done.push_back({mid, mid, true});
            mpq_class delta = (it.hi - it.lo) / 256;
            for (;;) {
                mpq_class m1 = mid - delta, m2 = mid + delta;
                if (cubic_sign(w, m1) != 0 && cubic_sign(w, m2) != 0 &&
                    sign_variations(chain, m1) - sign_variations(chain, m2) == 1) {
                    work.push_back({it.lo, m1, sign_variations(chain, it.lo) - sign_variations(chain, m1)});
                    work.push_back({m2, it.hi, sign_variations(chain, m2) - sign_variations(chain, it.hi)});
                    break;
                }
                delta /= 2;
            }
            continue;
        }
        int left = sign_variations(chain, it.lo) - sign_variations(chain, mid);
        work.push_back({it.lo, mid, left});
        work.push_back({mid, it.hi, it.count - left});
    }
    std::sort(done.begin(), done.end(), [](const RootBracket& a, const RootBracket& b) { return a.lo < b.lo; });
    return done;
}

struct RefinedRoot {
    Real value;
    mpq_class lo, hi;   // certified enclosure, lo <= root <= hi
    long err_exp = 0;   // |value - root| <= 2^err_exp
    bool exact = false;
};

// Shrinks a bracket until the root carries rel_bits leading bits.  Bisection
// driven by exact signs, with certified Newton jumps once the bracket is
// relatively tight; every accepted step is re-checked by exact sign
// evaluations, so the final enclosure is unconditional.
RefinedRoot refine_root(const WeierstrassModel& w, const RootBracket& br, long rel_bits,
                        mpfr_prec_t mantissa) {
    if (br.exact_hit)
        return {Real::of(br.lo, mantissa), br.lo, br.lo, -(rel_bits + mantissa), true};

    mpq_class lo = br.lo, hi = br.hi;
    int slo = cubic_sign(w, lo);
    int shi = cubic_sign(w, hi);
    if (slo == 0 || shi == 0 || slo == shi)
        throw InternalError("refine_root: bracket does not straddle a sign change");

    // Octave localization: binary-search the sign transition over the grid
    // {-2^J, ..., -2^-J, 0, 2^-J, ..., 2^J}.  Nonzero roots stay above
    // 2^-J by the product-of-roots bound, so this narrows a bracket that
    // spans many octaves to about one octave in O(log J) exact signs.
    {
        long e2 = w.b2 == 0 ? 0 : exp_of(mpq_class(w.b2) / 4);
        long e1g = w.b4 == 0 ? 0 : (exp_of(mpq_class(w.b4) / 2) + 1) / 2;
        long e0 = w.b6 == 0 ? 0 : (exp_of(mpq_class(w.b6) / 4) + 2) / 3;
        const long fuji = std::max({e2, e1g, e0, 1l}) + 2;
        const long J = 2 * fuji + 8;
        auto probe = [&](long i) -> mpq_class {  // increasing in i, i in [0, 4J+2]
            if (i <= 2 * J) return -pow2_q(J - i);
            if (i == 2 * J + 1) return mpq_class(0);
            return pow2_q(i - (2 * J + 2) - J);
        };
        long ilo = 0, ihi = 4 * J + 2;
        // Shrink [ilo, ihi] to indices whose probes lie inside (lo, hi).
        // Predicate: probe(i) already past the root (sign == shi), treating
        // probes outside the interval by the matching endpoint sign.
        auto past_root = [&](long i) -> int {  // 1 yes, 0 no, 2 exact hit
            mpq_class v = probe(i);
            if (v <= lo) return 0;
            if (v >= hi) return 1;
            int s = cubic_sign(w, v);
            if (s == 0) {
                lo = hi = v;
                return 2;
            }
            if (s == slo) {
                lo = v;
                return 0;
            }
            hi = v;
            return 1;
        };
        bool exact = false;
        while (ihi - ilo > 1) {
            long mid = ilo + (ihi - ilo) / 2;
            int r = past_root(mid);
            if (r == 2) {
                exact = true;
                break;
            }
            (r ? ihi : ilo) = mid;
        }
        if (exact || lo == hi)
            return {Real::of(lo, mantissa), lo, hi, -(rel_bits + mantissa), true};
    }

    auto bisect_step = [&]() {
        mpq_class mid = (lo + hi) / 2;
        int sm = cubic_sign(w, mid);
        if (sm == 0) {
            lo = hi = mid;
            return;
        }
        (sm == slo ? lo : hi) = mid;
    };

    long width_exp = 0;
    while (lo != hi) {
        mpq_class width = hi - lo;
        long root_exp = std::max(exp_of(lo == 0 ? hi : lo), exp_of(hi));
        width_exp = exp_of(width);
        if (width_exp <= root_exp - rel_bits) break;
        long rel_acc = root_exp - width_exp;
        if (rel_acc < 40) {
            bisect_step();
            continue;
        }
        // Newton proposal from the midpoint.  Near a simple root the terms
        // of R are balanced, so cancellation costs rel_acc bits and a
        // mantissa of ~2 rel_acc is plenty.
        mpfr_prec_t pn = static_cast<mpfr_prec_t>(2 * rel_acc + 160);
        Real x = Real::of((lo + hi) / 2, pn);
        Real c2 = Real::of(mpq_class(w.b2) / 4, pn);
        Real c4 = Real::of(mpq_class(w.b4) / 2, pn);
        Real c6 = Real::of(mpq_class(w.b6) / 4, pn);
        Real fx = ((x + c2) * x + c4) * x + c6;
        Real dfx = (Real::of(3, pn) * x + c2.mul_2exp(1)) * x + c4;
        bool stepped = false;
        if (!dfx.is_zero()) {
            Real prop = x - fx / dfx;
            mpq_class q;
            mpfr_get_q(q.get_mpq_t(), prop.round_to(static_cast<mpfr_prec_t>(2 * rel_acc + 48)).raw());
            mpq_class eps = pow2_q(root_exp - (2 * rel_acc - 12));
            mpq_class nlo = q - eps, nhi = q + eps;
            if (nlo < lo) nlo = lo;
            if (nhi > hi) nhi = hi;
            if (nlo < nhi && nhi - nlo < width) {
                int s1 = cubic_sign(w, nlo);
                int s2 = cubic_sign(w, nhi);
                if (s1 == 0) {
                    lo = hi = nlo;
                    stepped = true;
                } else if (s2 == 0) {
                    lo = hi = nhi;
                    stepped = true;
                } else if (s1 == slo && s2 == shi) {
                    lo = nlo;
                    hi = nhi;
                    stepped = true;
                }
            }
        }
        if (!stepped) bisect_step();
    }
    if (lo == hi) return {Real::of(lo, mantissa), lo, hi, -(rel_bits + mantissa), true};
    mpq_class mid = (lo + hi) / 2;
    return {Real::of(mid, mantissa), lo, hi, width_exp, false};
}

// ---------------------------------------------------------------------------
// Reduction to the iteration-ready model
// ---------------------------------------------------------------------------

long coeff_bits(const WeierstrassModel& w) {
    return static_cast<long>(std::max({mpz_sizeinbase(w.b2.get_mpz_t(), 2), mpz_sizeinbase(w.b4.get_mpz_t(), 2),
                                       mpz_sizeinbase(w.b6.get_mpz_t(), 2), mpz_sizeinbase(w.b8.get_mpz_t(), 2)}));
}

// True if v carries at least `needed` correct leading bits given an
// absolute error of at most 2^err_exp.
bool has_leading_bits(const Real& v, long err_exp, long needed) {
    if (v.is_zero()) return false;
    return v.exponent() - err_exp >= needed;
}

long exp_or(const Real& v, long fallback) { return v.is_zero() ? fallback : v.exponent(); }

// Round keeping `d` bits after the binary point regardless of magnitude.
Real round_abs(const Real& v, mpfr_prec_t d) {
    long e = v.is_zero() ? 0 : std::max<long>(0, v.exponent());
    return v.round_to(d + 4 + static_cast<mpfr_prec_t>(e));
}

}  // namespace

std::pair<AgmInput, CorrectionLedger> reduce_to_agm_data(const WeierstrassModel& w,
                                                         const RationalPoint& p, mpfr_prec_t d) {
    if (p.is_infinity()) throw std::domain_error("reduce_to_agm_data: P must be affine");
    // The y-coordinate on the even model y^2 = R(x); vanishes exactly on
    // 2-torsion, and the x-coordinate is untouched.
    mpq_class eta = p.y + (mpq_class(w.a1) * p.x + mpq_class(w.a3)) / 2;
    if (eta == 0) throw TwoTorsionError();

    const long needed = static_cast<long>(d) + 48;  // leading bits every derived value must keep
    long rel_bits = static_cast<long>(d) + 160;

    const long x_exp = p.x == 0 ? 1 : exp_of(p.x);
    std::vector<RootBracket> brackets = isolate_roots(w);

    for (int attempt = 0;; ++attempt) {
        if (attempt > 24) throw InternalError("reduce_to_agm_data: escalation did not stabilize");
        const mpfr_prec_t mantissa = static_cast<mpfr_prec_t>(rel_bits) + 128;
        // Extra head bits so that subtracting a root from x(P) keeps the
        // absolute error at the root error scale even when x(P) is large.
        const mpfr_prec_t x_mantissa = mantissa + static_cast<mpfr_prec_t>(std::max(0l, x_exp));

        std::vector<RefinedRoot> roots;
        roots.reserve(brackets.size());
        for (const RootBracket& b : brackets) roots.push_back(refine_root(w, b, rel_bits, mantissa));

        CorrectionLedger ledger;
        Real a0sq(mantissa), b0sq(mantissa), x0(mantissa);
        bool ok = true;

        if (roots.size() == 3) {
            const RefinedRoot& e3 = roots[0];
            const RefinedRoot& e2 = roots[1];
            const RefinedRoot& e1 = roots[2];
            a0sq = e1.value - e3.value;
            b0sq = e1.value - e2.value;
            long err_roots = std::max({e1.err_exp, e2.err_exp, e3.err_exp}) + 2;
            ok = has_leading_bits(a0sq, err_roots, needed) && has_leading_bits(b0sq, err_roots, needed);
            if (ok) {
                // On this model the real locus is [e3, e2] u [e1, oo) and
                // R(x(P)) = eta^2 > 0, so x(P) > lo(e1) already forces
                // x(P) > e1: the point sits on the identity component.
                bool identity_component = p.x > e1.lo;
                Real xr = Real::of(p.x, x_mantissa);
                if (identity_component) {
                    x0 = xr - e1.value;
                } else {
                    // Replace the point by its double, which lands on the
                    // identity component; on the shifted model
                    // x(2Q) = (x^2 - a0^2 b0^2)^2 / (2 eta)^2.
                    Real xs = xr - e1.value;
                    Real num = xs * xs - a0sq * b0sq;
                    mpq_class two_eta_sq = 4 * eta * eta;
                    x0 = (num * num) / Real::of(two_eta_sq, mantissa);
                    Real two_eta_abs = Real::of(mpq_class(abs(2 * eta)), mantissa);
                    ledger.steps.push_back(CorrectionStep{4, {{2, two_eta_abs}}});
                }
            }
        } else {
            // One real root: shift to y^2 = x(x^2 + u x + v) with the
            // quadratic positive definite, then pass through the degree-2
            // isogeny to a model with full real 2-torsion.  The kernel
            // polynomial evaluates to x itself, so the recorded term is the
            // shifted x-coordinate.
            const RefinedRoot& e = roots[0];
            Real xt = Real::of(p.x, x_mantissa) - e.value;
            ok = xt.sign() > 0 && has_leading_bits(xt, e.err_exp + 2, needed);
            if (ok) {
                Real ev = e.value;
                Real c2r = Real::of(mpq_class(w.b2) / 4, mantissa);
                Real c4r = Real::of(mpq_class(w.b4) / 2, mantissa);
                Real u = Real::of(3, mantissa) * ev + c2r;
                Real v = Real::of(3, mantissa) * ev * ev + Real::of(2, mantissa) * c2r * ev + c4r;
                // Absolute error of v: (6|e| + 2|c2|) |e - root| plus the
                // rounding of the products at the working mantissa.
                long e_exp = exp_or(ev, 0);
                long c2_exp = w.b2 == 0 ? e.err_exp : exp_of(mpq_class(w.b2) / 4);
                long err_v = std::max({e.err_exp + e_exp + 3, e.err_exp + c2_exp + 2,
                                       e_exp + std::max(e_exp, c2_exp) + 4 - static_cast<long>(mantissa)});
                ok = v.sign() > 0 && has_leading_bits(v, err_v, needed);
                if (ok) {
                    Real sv = v.sqrt();
                    Real rp = u + sv.mul_2exp(1);  // u + 2 sqrt(v) > 0 since u^2 < 4v
                    long err_u = e.err_exp + 2;
                    long err_sv = err_v - exp_or(v, 0) / 2 + 2;
                    long err_rp = std::max(err_u, err_sv + 1) + 1;
                    ok = rp.sign() > 0 && has_leading_bits(rp, err_rp, needed);
                    if (ok) {
                        a0sq = sv.mul_2exp(2);
                        b0sq = rp;
                        Real ximg = xt + u + v / xt;
                        x0 = ximg - rp;
                        ledger.steps.push_back(CorrectionStep{2, {{1, xt}}});
                    }
                }
            }
        }

        if (!ok) {
            rel_bits *= 2;
            continue;
        }
        if (x0.sign() < 0) x0 = Real(mantissa);  // rounding noise at a 2-torsion image
        AgmInput in{a0sq.sqrt(), b0sq.sqrt(), x0};
        if (!(in.b0.sign() > 0) || !(in.b0 < in.a0))
            throw InternalError("reduce_to_agm_data: root ordering collapsed");
        return {std::move(in), std::move(ledger)};
    }
}

namespace {

// log(t) for t near 1 via the odd atanh-style series; assumes |1-t| <= 1/2.
Real log_near_one(const Real& t, mpfr_prec_t prec) {
    Real one = Real::of(1, prec);
    Real z = (t - one) / (t + one);
    Real z2 = z * z;
    Real term = z;
    Real acc = z;
    unsigned long k = 1;
    const long cutoff = -static_cast<long>(prec) - 8;
    while (!term.is_zero() && term.exponent() > cutoff) {
        term *= z2;
        acc += term / Real::of(static_cast<long>(2 * k + 1), prec);
        ++k;
    }
    return acc.mul_2exp(1);
}

}  // namespace

Real agm_lambda(const AgmInput& in, mpfr_prec_t d) {
    if (!(in.b0.sign() > 0) || !(in.b0 < in.a0))
        throw std::domain_error("agm_lambda: need 0 < b0 < a0");
    if (in.x0.sign() < 0) throw std::domain_error("agm_lambda: need x0 >= 0");

    const mpfr_prec_t d_i = d + 4;

    // Iteration count from the tail bound 2^(2 - 2^(N-1)) * theta with
    // theta = a0/b0 - 1 + sqrt(a0/b0 - 1).
    Real ratio = (in.a0 / in.b0).round_to(96);
    Real tm1 = ratio - Real::of(1, 96);
    long log2_theta = -static_cast<long>(d_i);
    if (tm1.sign() > 0) {
        Real theta = tm1 + tm1.sqrt();
        log2_theta = theta.exponent();
    }
    long z = static_cast<long>(d_i) + 2 + log2_theta;
    unsigned n_steps = 3;
    if (z > 2) {
        unsigned bits = 0;
        while ((1ul << bits) < static_cast<unsigned long>(z)) ++bits;
        n_steps = std::max(3u, bits + 1);
    }

    // Working precision: the 2^n amplification costs n bits per term, and
    // the leading log is of the order of the input exponents.
    long lead_mag = std::max<long>({2 * std::abs(in.a0.exponent()), 2 * std::abs(in.b0.exponent()),
                                    in.x0.is_zero() ? 0 : std::abs(in.x0.exponent()), 2});
    mpfr_prec_t p = d_i + static_cast<mpfr_prec_t>(n_steps) + 32;
    {
        long lm = 1;
        while ((1l << lm) < lead_mag + 2) ++lm;
        p += static_cast<mpfr_prec_t>(lm) + 4;
    }

    std::vector<Real> a(n_steps + 2, Real(p)), b(n_steps + 2, Real(p)), x(n_steps + 2, Real(p));
    a[0] = in.a0.round_to(p);
    b[0] = in.b0.round_to(p);
    x[0] = in.x0.round_to(p);
    for (unsigned n = 0; n <= n_steps; ++n) {
        a[n + 1] = (a[n] + b[n]).mul_2exp(-1);
        b[n + 1] = (a[n] * b[n]).sqrt();
        Real rad = ((x[n] + a[n] * a[n]) * (x[n] + b[n] * b[n])).sqrt();
        x[n + 1] = (x[n] - a[n] * b[n] + rad).mul_2exp(-1);
    }

    Real lambda = (x[1] + a[1] * a[1]).log();
    for (unsigned n = 1; n <= n_steps; ++n) {
        Real t = (x[n + 1] + a[n + 1] * a[n + 1]) / (x[n] + a[n] * a[n]);
        Real s = Real::of(1, p) - t;
        if (s.is_zero()) continue;  // iteration already stationary
        Real lt = (s.exponent() < -static_cast<long>(p) / 8) ? log_near_one(t, p) : t.log();
        lambda += lt.mul_2exp(static_cast<long>(n));
    }
    return round_abs(lambda, d);
}

Real lambda_infinity(const WeierstrassModel& w, const RationalPoint& p, mpfr_prec_t d) {
    if (p.is_infinity()) throw std::domain_error("lambda_infinity: P must be affine");
    auto [input, ledger] = reduce_to_agm_data(w, p, d + 16);
    mpfr_prec_t extra = 6;
    for (unsigned long f = ledger.degree_factor(); f > 1; f /= 2) ++extra;
    Real lambda = agm_lambda(input, d + extra);
    for (auto it = ledger.steps.rbegin(); it != ledger.steps.rend(); ++it) {
        for (const auto& [coeff, value] : it->log_terms) {
            Real lv = round_abs(value.log(), d + extra);
            lambda += Real::of(coeff, lambda.precision()) * lv;
        }
        lambda = lambda / Real::of(static_cast<long>(it->degree), lambda.precision());
    }
    return round_abs(lambda, d);
}

Real psi_infinity(const WeierstrassModel& w, const RationalPoint& p, mpfr_prec_t d) {
    Real lambda = lambda_infinity(w, p, d + 4);
    mpq_class ax = abs(p.x);
    Real head(lambda.precision());  // log max(1, |x(P)|)
    if (ax > 1) head = Real::log_of(ax, lambda.precision());
    return round_abs(head - lambda, d);
}

Real psi_infinity_oracle_series(const WeierstrassModel& w, const RationalPoint& p, unsigned terms,
                                mpfr_prec_t d, Real* sup_log_phi) {
    if (p.is_infinity()) throw std::domain_error("psi_infinity_oracle_series: P must be affine");
    if (terms == 0) throw std::domain_error("psi_infinity_oracle_series: terms must be positive");

    // The doubling orbit reaches O only from points of order 2, 4 or 8,
    // within three doublings; check exactly on Kummer pairs.
    {
        KummerPair k = kummer_primitive(p);
        for (unsigned i = 0; i < 3 && i + 1 < terms; ++i) {
            k = primitive_form(duplicate_kummer(k, w));
            if (k.x2 == 0) throw TorsionOrbitError();
        }
    }

    const long mag = coeff_bits(w);
    const mpfr_prec_t prec =
        d + 16 * static_cast<mpfr_prec_t>(terms) + 2 * static_cast<mpfr_prec_t>(mag) + 96;

    KummerPair prim = kummer_primitive(p);
    Real x1 = Real::of(prim.x1, prec);
    Real x2 = Real::of(prim.x2, prec);
    Real b2 = Real::of(w.b2, prec), b4 = Real::of(w.b4, prec), b6 = Real::of(w.b6, prec),
         b8 = Real::of(w.b8, prec);

    Real acc(prec);
    Real sup(prec);
    for (unsigned n = 0; n < terms; ++n) {
        Real m = x1.abs() > x2.abs() ? x1.abs() : x2.abs();
        if (m.is_zero()) throw InternalError("psi_infinity_oracle_series: pair collapsed to zero");
        x1 /= m;  // degree-zero renormalization keeps the series unchanged
        x2 /= m;
        Real y1 = x1 * x1, y2 = x2 * x2, cross = x1 * x2;
        Real d1 = y1 * y1 - b4 * y1 * y2 - (b6 * cross * y2).mul_2exp(1) - b8 * y2 * y2;
        Real d2 = (y1 * cross).mul_2exp(2) + b2 * y1 * y2 + (b4 * cross * y2).mul_2exp(1) + b6 * y2 * y2;
        Real phi = d1.abs() > d2.abs() ? d1.abs() : d2.abs();  // max |x_i| is 1 after renormalizing
        if (phi.is_zero()) throw InternalError("psi_infinity_oracle_series: lost all precision");
        Real log_phi = phi.log();
        if (log_phi.abs() > sup) sup = log_phi.abs();
        acc -= log_phi.mul_2exp(-2 * static_cast<long>(n) - 2);
        x1 = d1;
        x2 = d2;
    }
    if (sup_log_phi) *sup_log_phi = sup;
    return round_abs(acc, d);
}

}  // namespace canht
