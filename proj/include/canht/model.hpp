#ifndef CANHT_MODEL_HPP
#define CANHT_MODEL_HPP

#include <gmpxx.h>

#include <optional>

namespace canht {

/// Integral Weierstrass equation
///   y^2 + a1 x y + a3 y = x^3 + a2 x^2 + a4 x + a6
/// with the derived quantities b2, b4, b6, b8 and the discriminant.
/// Construction rejects singular equations.
struct WeierstrassModel {
    mpz_class a1, a2, a3, a4, a6;
    mpz_class b2, b4, b6, b8;
    mpz_class delta;

    static WeierstrassModel from_coefficients(const mpz_class& a1, const mpz_class& a2,
                                              const mpz_class& a3, const mpz_class& a4,
                                              const mpz_class& a6);
};

/// A rational point: either the point at infinity or an affine pair.
struct RationalPoint {
    bool infinity = true;
    mpq_class x, y;

    static RationalPoint at_infinity() { return RationalPoint{}; }
    static RationalPoint affine(mpq_class px, mpq_class py) {
        RationalPoint p;
        p.infinity = false;
        p.x = std::move(px);
        p.y = std::move(py);
        return p;
    }
    bool is_infinity() const { return infinity; }
    friend bool operator==(const RationalPoint& a, const RationalPoint& b) {
        if (a.infinity || b.infinity) return a.infinity == b.infinity;
        return a.x == b.x && a.y == b.y;
    }
};

/// Integer coordinates on P^1 = E/{±1}; (1, 0) is the image of O.
/// Primitive form has gcd(x1, x2) = 1 and x2 >= 0.
struct KummerPair {
    mpz_class x1, x2;
};

bool on_curve(const WeierstrassModel& w, const RationalPoint& p);

/// Primitive Kummer coordinates of p: lowest-terms (numerator, denominator)
/// of x(p), and (1, 0) for O.
KummerPair kummer_primitive(const RationalPoint& p);

/// The duplication pair (delta1, delta2) evaluated exactly; Kummer
/// coordinates for 2P.  Not reduced to primitive form.
KummerPair duplicate_kummer(const KummerPair& k, const WeierstrassModel& w);

/// Reduce a pair to primitive form (gcd 1, x2 >= 0).
KummerPair primitive_form(const KummerPair& k);

RationalPoint negate_point(const RationalPoint& p, const WeierstrassModel& w);
RationalPoint double_point(const RationalPoint& p, const WeierstrassModel& w);
RationalPoint add_points(const RationalPoint& p, const RationalPoint& q, const WeierstrassModel& w);
RationalPoint multiply_point(const RationalPoint& p, unsigned long k, const WeierstrassModel& w);

/// The substitution x = u^2 x' + r, y = u^3 y' + s u^2 x' + t.  Returns the
/// model in the primed coordinates; throws NonIntegralResultError if any
/// transformed coefficient is not an integer.  delta' * u^12 == delta.
WeierstrassModel transform_model(const WeierstrassModel& w, const mpz_class& u, const mpz_class& r,
                                 const mpz_class& s, const mpz_class& t);

/// Point maps induced by the substitution above: transform_point sends a
/// point of the original model to the primed model, untransform_point is
/// its inverse.
RationalPoint transform_point(const RationalPoint& p, const mpz_class& u, const mpz_class& r,
                              const mpz_class& s, const mpz_class& t);
RationalPoint untransform_point(const RationalPoint& p, const mpz_class& u, const mpz_class& r,
                                const mpz_class& s, const mpz_class& t);

}  // namespace canht

#endif
