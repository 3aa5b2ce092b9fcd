#include "canht/arch.hpp"

#include <random>

#include "canht/errors.hpp"
#include "canht/nonarch_global.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace canht;
using testutil::close_2exp;
using testutil::series_log;

namespace {

RationalPoint pt(long x, long y) { return RationalPoint::affine(mpq_class(x), mpq_class(y)); }

const WeierstrassModel& mordell_one() {
    static WeierstrassModel w = WeierstrassModel::from_coefficients(0, 0, 0, 0, 1);
    return w;
}

// Exact log Phi at the archimedean place from the primitive pair, as a
// check value for the first series term.
Real log_phi_exact(const WeierstrassModel& w, const RationalPoint& p, mpfr_prec_t prec) {
    KummerPair k = kummer_primitive(p);
    KummerPair d = duplicate_kummer(k, w);
    mpz_class num = abs(d.x1) > abs(d.x2) ? abs(d.x1) : abs(d.x2);
    mpz_class den = abs(k.x1) > abs(k.x2) ? abs(k.x1) : abs(k.x2);
    mpz_class den4 = den * den * den * den;
    mpq_class phi(num, den4);
    phi.canonicalize();
    return series_log(phi, prec);
}

}  // namespace

TEST_CASE("reduction reads off an already-factored model") {
    // y^2 = x(x+1)(x+4) = x^3 + 5x^2 + 4x with x(P) = 2.
    WeierstrassModel w = WeierstrassModel::from_coefficients(0, 5, 0, 4, 0);
    auto [in, ledger] = reduce_to_agm_data(w, pt(2, 6), 64);
    CHECK(ledger.steps.empty());
    CHECK(close_2exp(in.a0, Real::of(2, 96), -60));
    CHECK(close_2exp(in.b0, Real::of(1, 96), -60));
    CHECK(close_2exp(in.x0, Real::of(2, 96), -60));
}

TEST_CASE("reduction applies the 2-isogeny when the 2-torsion is complex") {
    // y^2 = x^3 + 4x has one real 2-torsion point; (2, 4) has order 4 and
    // its image lands exactly on the 2-torsion of the target model.
    WeierstrassModel w = WeierstrassModel::from_coefficients(0, 0, 0, 4, 0);
    auto [in, ledger] = reduce_to_agm_data(w, pt(2, 4), 64);
    REQUIRE(ledger.steps.size() == 1);
    CHECK(ledger.steps[0].degree == 2);
    REQUIRE(ledger.steps[0].log_terms.size() == 1);
    CHECK(ledger.steps[0].log_terms[0].first == 1);
    // Shift by the rational root 0 is exact: the recorded kernel value is
    // x(P) itself and the working point is the 2-torsion image x = 0.
    CHECK(close_2exp(ledger.steps[0].log_terms[0].second, Real::of(2, 96), -60));
    CHECK(close_2exp(in.a0 * in.a0, Real::of(8, 96), -56));
    CHECK(close_2exp(in.b0 * in.b0, Real::of(4, 96), -56));
    CHECK(in.x0.abs() < Real::pow2(-56, 64));
}

TEST_CASE("reduction doubles a point on the non-identity component") {
    // y^2 = x(x+1)(x+4): (-2, 2) lies between the negative roots.
    WeierstrassModel w = WeierstrassModel::from_coefficients(0, 5, 0, 4, 0);
    REQUIRE(on_curve(w, pt(-2, 2)));
    auto [in, ledger] = reduce_to_agm_data(w, pt(-2, 2), 64);
    REQUIRE(ledger.steps.size() == 1);
    CHECK(ledger.steps[0].degree == 4);
    REQUIRE(ledger.steps[0].log_terms.size() == 1);
    CHECK(ledger.steps[0].log_terms[0].first == 2);
    CHECK(close_2exp(ledger.steps[0].log_terms[0].second, Real::of(4, 96), -60));  // |2y| = 4
    CHECK(in.x0.sign() >= 0);
}

TEST_CASE("mean iteration invariants") {
    std::mt19937_64 rng(501);
    for (int trial = 0; trial < 20; ++trial) {
        mpfr_prec_t p = 192;
        Real a = Real::of(testutil::rand_int(rng, 2, 50), p);
        Real b = Real::of(testutil::rand_int(rng, 1, 40), p) / Real::of(17, p);
        if (!(b < a)) continue;
        Real x = Real::of(testutil::rand_int(rng, 0, 30), p);
        Real theta = a / b - Real::of(1, p);
        theta = theta + theta.sqrt();
        Real slack = Real::pow2(-static_cast<long>(p) + 8, 64);

        Real gap0 = a - b;
        std::vector<Real> xs{x}, as{a}, bs{b};
        for (int n = 0; n < 8; ++n) {
            Real a1 = (as.back() + bs.back()).mul_2exp(-1);
            Real b1 = (as.back() * bs.back()).sqrt();
            Real rad = ((xs.back() + as.back() * as.back()) * (xs.back() + bs.back() * bs.back())).sqrt();
            Real x1 = (xs.back() - as.back() * bs.back() + rad).mul_2exp(-1);
            // b_n <= b_{n+1} <= a_{n+1} <= a_n
            CHECK(bs.back() <= b1 + slack);
            CHECK(b1 <= a1 + slack);
            CHECK(a1 <= as.back() + slack);
            // a_n - b_n <= 2^(1-2^n) (a_0 - b_0)
            Real bound = gap0.mul_2exp(1 - (1l << (n + 1)));
            CHECK(a1 - b1 <= bound + slack);
            // s_n in (0,1) and s_n <= 2^(-2^(n-1)) theta  (n >= 1 here)
            if (n >= 1) {
                Real s = Real::of(1, p) -
                         (x1 + a1 * a1) / (xs.back() + as.back() * as.back());
                CHECK(s.sign() >= 0);
                CHECK(s < Real::of(1, p));
                CHECK(s <= theta.mul_2exp(-(1l << (n - 1))) + slack);
            }
            as.push_back(a1);
            bs.push_back(b1);
            xs.push_back(x1);
        }
    }
}

TEST_CASE("lambda halves through one mean-iteration step") {
    // lambda(a0,b0,x0) = 2 lambda(a1,b1,x1) - log(x1 + a1^2): consistency of
    // the summed series across one step of the iteration.
    std::mt19937_64 rng(733);
    for (int trial = 0; trial < 10; ++trial) {
        mpfr_prec_t p = 256;
        Real a = Real::of(testutil::rand_int(rng, 3, 40), p);
        Real b = Real::of(testutil::rand_int(rng, 1, 20), p) / Real::of(7, p);
        if (!(b < a) || !(b.sign() > 0)) continue;
        Real x = Real::of(testutil::rand_int(rng, 0, 25), p);
        Real a1 = (a + b).mul_2exp(-1);
        Real b1 = (a * b).sqrt();
        Real rad = ((x + a * a) * (x + b * b)).sqrt();
        Real x1 = (x - a * b + rad).mul_2exp(-1);

        Real lhs = agm_lambda({a, b, x}, 128);
        Real rhs = agm_lambda({a1, b1, x1}, 128).mul_2exp(1) - (x1 + a1 * a1).log();
        CHECK(close_2exp(lhs, rhs, -120));
    }
}

TEST_CASE("psi_infinity torsion identities") {
    const auto& w = mordell_one();
    // (2,3) has order 6: psi_inf = h - psi_f = log 2 - (2/3)log2 - (1/2)log3.
    Real got = psi_infinity(w, pt(2, 3), 64);
    Real want = series_log(mpz_class(2), 160) / Real::of(3, 160) -
                series_log(mpz_class(3), 160) / Real::of(2, 160);
    CHECK(close_2exp(got, want, -62));

    // (0,1) has order 3: psi_inf = -(2/3) log 2.
    Real got3 = psi_infinity(w, pt(0, 1), 64);
    Real want3 = -(series_log(mpz_class(2), 160) * Real::of(2, 160) / Real::of(3, 160));
    CHECK(close_2exp(got3, want3, -62));

    // (2,4) on y^2 = x^3 + 4x has order 4: psi_inf = -(3/4) log 2 (the
    // working point degenerates to the 2-torsion image, x0 = 0).
    WeierstrassModel w4 = WeierstrassModel::from_coefficients(0, 0, 0, 4, 0);
    Real got4 = psi_infinity(w4, pt(2, 4), 64);
    Real want4 = -(series_log(mpz_class(2), 160) * Real::of(3, 160) / Real::of(4, 160));
    CHECK(close_2exp(got4, want4, -62));
}

TEST_CASE("psi_infinity depends only on x") {
    std::mt19937_64 rng(601);
    for (int i = 0; i < 10; ++i) {
        auto [w, p] = testutil::random_curve_with_point(rng, 12);
        RationalPoint mp = negate_point(p, w);
        RationalPoint d = double_point(p, w);
        if (d.is_infinity()) continue;
        Real a = psi_infinity(w, p, 80);
        Real b = psi_infinity(w, mp, 80);
        CHECK(close_2exp(a, b, -76));
    }
}

TEST_CASE("psi_infinity rejects 2-torsion") {
    WeierstrassModel w = WeierstrassModel::from_coefficients(0, 5, 0, 4, 0);
    CHECK_THROWS_AS(psi_infinity(w, pt(0, 0), 64), TwoTorsionError);
    CHECK_THROWS_AS(psi_infinity(w, pt(-1, 0), 64), TwoTorsionError);
}

TEST_CASE("series oracle first term matches the exact Phi") {
    std::mt19937_64 rng(613);
    for (int i = 0; i < 10; ++i) {
        auto [w, p] = testutil::random_curve_with_point(rng, 10);
        Real one_term = psi_infinity_oracle_series(w, p, 1, 128);
        Real want = -(log_phi_exact(w, p, 192).mul_2exp(-2));
        CHECK(close_2exp(one_term, want, -100));
    }
}

TEST_CASE("series oracle flags orbits that reach O") {
    WeierstrassModel w4 = WeierstrassModel::from_coefficients(0, 0, 0, 4, 0);
    CHECK_THROWS_AS(psi_infinity_oracle_series(w4, pt(2, 4), 10, 64), TorsionOrbitError);
}

TEST_CASE("psi_infinity agrees with the series oracle") {
    std::mt19937_64 rng(617);
    int done = 0;
    while (done < 12) {
        auto [w, p] = testutil::random_curve_with_point(rng, 15);
        RationalPoint d2 = double_point(p, w);
        if (d2.is_infinity()) continue;
        Real sup(64);
        Real via_series = psi_infinity_oracle_series(w, p, 40, 96, &sup);
        Real via_agm = psi_infinity(w, p, 96);
        long sup_exp = sup.is_zero() ? 0 : sup.exponent();
        long tol = std::max(-80l + sup_exp, -90l);
        CHECK(close_2exp(via_agm, via_series, tol));
        ++done;
    }
}

TEST_CASE("near-degenerate complex pair goes through the escalation path") {
    // y^2 = x^3 - 3t^2 x - (2t^3 + 6t + 1) carries the point (2t+1, 3t) and
    // has a complex root pair whose separation shrinks like 1/t, which
    // forces the reduction to sharpen its root accuracy.
    for (long t : {10000l, 1000000l}) {
        mpz_class tz(t);
        mpz_class a4 = -3 * tz * tz;
        mpz_class a6 = -(2 * tz * tz * tz + 6 * tz + 1);
        WeierstrassModel w = WeierstrassModel::from_coefficients(0, 0, 0, a4, a6);
        REQUIRE(w.delta < 0);  // single real root
        RationalPoint p = RationalPoint::affine(mpq_class(2 * tz + 1), mpq_class(3 * tz));
        REQUIRE(on_curve(w, p));
        Real sup(64);
        Real ser = psi_infinity_oracle_series(w, p, 40, 96, &sup);
        Real agm = psi_infinity(w, p, 96);
        long sup_exp = sup.is_zero() ? 0 : sup.exponent();
        CHECK(close_2exp(agm, ser, std::max(sup_exp - 78, -88l)));
    }
}

TEST_CASE("degenerate near-equal means stay finite") {
    mpfr_prec_t p = 256;
    Real a = Real::of(2, p);
    Real b = a - Real::pow2(-50, p);
    Real x = Real::of(3, p);
    Real lo = agm_lambda({a, b, x}, 100);
    Real hi = agm_lambda({a, b, x}, 200);
    CHECK(close_2exp(lo, hi, -98));
}

TEST_CASE("methods agree at high precision") {
    WeierstrassModel w = WeierstrassModel::from_coefficients(0, 0, 1, -1, 0);
    RationalPoint p = pt(0, 0);
    Real agm = psi_infinity(w, p, 1200);
    Real sup(64);
    Real ser = psi_infinity_oracle_series(w, p, 700, 1200, &sup);
    CHECK(close_2exp(agm, ser, -1195));
}

TEST_CASE("psi_infinity is stable under doubling the precision") {
    std::mt19937_64 rng(619);
    int done = 0;
    while (done < 8) {
        auto [w, p] = testutil::random_curve_with_point(rng, 20);
        if (double_point(p, w).is_infinity()) continue;
        Real lo = psi_infinity(w, p, 100);
        Real hi = psi_infinity(w, p, 200);
        CHECK(close_2exp(lo, hi, -100));
        ++done;
    }
}
