#ifndef CANHT_ERRORS_HPP
#define CANHT_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace canht {

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// The Weierstrass equation has vanishing discriminant.
struct SingularCurveError : Error {
    SingularCurveError() : Error("singular curve: discriminant is zero") {}
};

/// A model transformation produced non-integral coefficients.
struct NonIntegralResultError : Error {
    explicit NonIntegralResultError(const std::string& what) : Error(what) {}
};

/// A point was expected to lie on the curve but does not.
struct NotOnCurveError : Error {
    NotOnCurveError() : Error("point does not lie on the curve") {}
};

/// An operation that needs 2P != O was handed a 2-torsion point.
struct TwoTorsionError : Error {
    TwoTorsionError() : Error("point is 2-torsion; archimedean reduction undefined") {}
};

/// The doubling orbit hit the point at infinity before the requested
/// number of series terms.
struct TorsionOrbitError : Error {
    TorsionOrbitError() : Error("doubling orbit reached O before the requested term count") {}
};

/// Internal consistency failure: a precision or uniqueness guarantee that
/// the algorithms establish did not hold.  Indicates a bug upstream.
struct InternalError : Error {
    explicit InternalError(const std::string& what) : Error(what) {}
};

}  // namespace canht

#endif
