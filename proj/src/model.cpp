#include "canht/model.hpp"

#include <cassert>

#include "canht/errors.hpp"

namespace canht {

WeierstrassModel WeierstrassModel::from_coefficients(const mpz_class& a1, const mpz_class& a2,
                                                     const mpz_class& a3, const mpz_class& a4,
                                                     const mpz_class& a6) {
    WeierstrassModel w;
    w.a1 = a1;
    w.a2 = a2;
    w.a3 = a3;
    w.a4 = a4;
    w.a6 = a6;
    w.b2 = a1 * a1 + 4 * a2;
    w.b4 = 2 * a4 + a1 * a3;
    w.b6 = a3 * a3 + 4 * a6;
    w.b8 = a1 * a1 * a6 + 4 * a2 * a6 - a1 * a3 * a4 + a2 * a3 * a3 - a4 * a4;
    w.delta = -w.b2 * w.b2 * w.b8 - 8 * w.b4 * w.b4 * w.b4 - 27 * w.b6 * w.b6 + 9 * w.b2 * w.b4 * w.b6;
    if (w.delta == 0) throw SingularCurveError();
    return w;
}

bool on_curve(const WeierstrassModel& w, const RationalPoint& p) {
    if (p.is_infinity()) return true;
    mpq_class lhs = p.y * p.y + w.a1 * p.x * p.y + w.a3 * p.y;
    mpq_class rhs = p.x * p.x * p.x + w.a2 * p.x * p.x + w.a4 * p.x + w.a6;
    return lhs == rhs;
}

KummerPair kummer_primitive(const RationalPoint& p) {
    if (p.is_infinity()) return {mpz_class(1), mpz_class(0)};
    // mpq_class keeps canonical form: coprime, positive denominator.
    return {p.x.get_num(), p.x.get_den()};
}

KummerPair duplicate_kummer(const KummerPair& k, const WeierstrassModel& w) {
    const mpz_class& x1 = k.x1;
    const mpz_class& x2 = k.x2;
    mpz_class x1_2 = x1 * x1, x2_2 = x2 * x2;
    mpz_class x1_3 = x1_2 * x1, x2_3 = x2_2 * x2;
    mpz_class d1 = x1_2 * x1_2 - w.b4 * x1_2 * x2_2 - 2 * w.b6 * x1 * x2_3 - w.b8 * x2_2 * x2_2;
    mpz_class d2 = 4 * x1_3 * x2 + w.b2 * x1_2 * x2_2 + 2 * w.b4 * x1 * x2_3 + w.b6 * x2_2 * x2_2;
    if (d1 == 0 && d2 == 0)
        throw InternalError("duplicate_kummer: both coordinates vanished on a nonsingular curve");
    return {std::move(d1), std::move(d2)};
}

KummerPair primitive_form(const KummerPair& k) {
    mpz_class g = gcd(k.x1, k.x2);
    if (g == 0) throw InternalError("primitive_form: zero pair");
    KummerPair out{k.x1 / g, k.x2 / g};
    if (out.x2 < 0 || (out.x2 == 0 && out.x1 < 0)) {
        out.x1 = -out.x1;
        out.x2 = -out.x2;
    }
    return out;
}

RationalPoint negate_point(const RationalPoint& p, const WeierstrassModel& w) {
    if (p.is_infinity()) return p;
    return RationalPoint::affine(p.x, -p.y - w.a1 * p.x - w.a3);
}

namespace {

RationalPoint chord_tangent(const RationalPoint& p, const RationalPoint& q, const mpq_class& slope,
                            const mpq_class& intercept, const WeierstrassModel& w) {
    mpq_class x3 = slope * slope + w.a1 * slope - w.a2 - p.x - q.x;
    mpq_class y3 = -(slope + w.a1) * x3 - intercept - w.a3;
    return RationalPoint::affine(std::move(x3), std::move(y3));
}

}  // namespace

RationalPoint double_point(const RationalPoint& p, const WeierstrassModel& w) {
    if (p.is_infinity()) return p;
    mpq_class denom = 2 * p.y + w.a1 * p.x + w.a3;
    if (denom == 0) return RationalPoint::at_infinity();  // 2-torsion
    mpq_class slope = (3 * p.x * p.x + 2 * w.a2 * p.x + w.a4 - w.a1 * p.y) / denom;
    mpq_class intercept = (-p.x * p.x * p.x + w.a4 * p.x + 2 * w.a6 - w.a3 * p.y) / denom;
    return chord_tangent(p, p, slope, intercept, w);
}

RationalPoint add_points(const RationalPoint& p, const RationalPoint& q, const WeierstrassModel& w) {
    if (p.is_infinity()) return q;
    if (q.is_infinity()) return p;
    if (p.x == q.x) {
        if (p.y == q.y) return double_point(p, w);
        return RationalPoint::at_infinity();  // q == -p
    }
    mpq_class slope = (q.y - p.y) / (q.x - p.x);
    mpq_class intercept = (p.y * q.x - q.y * p.x) / (q.x - p.x);
    return chord_tangent(p, q, slope, intercept, w);
}

RationalPoint multiply_point(const RationalPoint& p, unsigned long k, const WeierstrassModel& w) {
    RationalPoint acc = RationalPoint::at_infinity();
    RationalPoint base = p;
    while (k > 0) {
        if (k & 1ul) acc = add_points(acc, base, w);
        k >>= 1;
        if (k > 0) base = double_point(base, w);
    }
    return acc;
}

WeierstrassModel transform_model(const WeierstrassModel& w, const mpz_class& u, const mpz_class& r,
                                 const mpz_class& s, const mpz_class& t) {
    if (u == 0) throw std::domain_error("transform_model: u must be nonzero");
    mpz_class u2 = u * u, u3 = u2 * u, u4 = u2 * u2, u6 = u3 * u3;
    mpz_class n1 = w.a1 + 2 * s;
    mpz_class n2 = w.a2 - s * w.a1 + 3 * r - s * s;
    mpz_class n3 = w.a3 + r * w.a1 + 2 * t;
    mpz_class n4 = w.a4 - s * w.a3 + 2 * r * w.a2 - (t + r * s) * w.a1 + 3 * r * r - 2 * s * t;
    mpz_class n6 = w.a6 + r * w.a4 + r * r * w.a2 + r * r * r - t * w.a3 - t * t - r * t * w.a1;
    if (!mpz_divisible_p(n1.get_mpz_t(), u.get_mpz_t()) ||
        !mpz_divisible_p(n2.get_mpz_t(), u2.get_mpz_t()) ||
        !mpz_divisible_p(n3.get_mpz_t(), u3.get_mpz_t()) ||
        !mpz_divisible_p(n4.get_mpz_t(), u4.get_mpz_t()) ||
        !mpz_divisible_p(n6.get_mpz_t(), u6.get_mpz_t()))
        throw NonIntegralResultError("transform_model: transformed coefficients are not integral");
    return WeierstrassModel::from_coefficients(n1 / u, n2 / u2, n3 / u3, n4 / u4, n6 / u6);
}

RationalPoint transform_point(const RationalPoint& p, const mpz_class& u, const mpz_class& r,
                              const mpz_class& s, const mpz_class& t) {
    if (p.is_infinity()) return p;
    mpz_class u2 = u * u, u3 = u2 * u;
    mpq_class xp = (p.x - r) / mpq_class(u2);
    mpq_class yp = (p.y - s * (p.x - r) - t) / mpq_class(u3);
    xp.canonicalize();
    yp.canonicalize();
    return RationalPoint::affine(std::move(xp), std::move(yp));
}

RationalPoint untransform_point(const RationalPoint& p, const mpz_class& u, const mpz_class& r,
                                const mpz_class& s, const mpz_class& t) {
    if (p.is_infinity()) return p;
    mpz_class u2 = u * u, u3 = u2 * u;
    mpq_class x = u2 * p.x + r;
    mpq_class y = u3 * p.y + s * u2 * p.x + t;
    x.canonicalize();
    y.canonicalize();
    return RationalPoint::affine(std::move(x), std::move(y));
}

}  // namespace canht
