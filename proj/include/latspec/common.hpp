#pragma once

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace latspec {

using Vec3 = std::array<double, 3>;

inline constexpr double kPi = std::numbers::pi;
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;
/// Volume of the torus (-pi, pi]^3.
inline constexpr double kTorusVolume = kTwoPi * kTwoPi * kTwoPi;

inline Vec3 operator+(const Vec3& a, const Vec3& b) { return {a[0] + b[0], a[1] + b[1], a[2] + b[2]}; }
inline Vec3 operator-(const Vec3& a, const Vec3& b) { return {a[0] - b[0], a[1] - b[1], a[2] - b[2]}; }
inline Vec3 operator-(const Vec3& a) { return {-a[0], -a[1], -a[2]}; }
inline Vec3 operator*(double s, const Vec3& a) { return {s * a[0], s * a[1], s * a[2]}; }
inline double dot(const Vec3& a, const Vec3& b) { return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]; }
inline double norm(const Vec3& a) { return std::sqrt(dot(a, a)); }

/// Maps an angle into (-pi, pi].
inline double wrap_angle(double x) {
    double y = std::remainder(x, kTwoPi);
    if (y <= -kPi) y += kTwoPi;
    return y;
}
inline Vec3 wrap(const Vec3& q) { return {wrap_angle(q[0]), wrap_angle(q[1]), wrap_angle(q[2])}; }

/// The two Friedrichs channels. Channel One integrates the first argument of u,
/// Channel Two the second: u_p^(1)(q) = u(q, p), u_p^(2)(q) = u(p, q).
enum class Channel { One = 1, Two = 2 };

inline int index_of(Channel c) { return c == Channel::One ? 0 : 1; }
inline Channel other(Channel c) { return c == Channel::One ? Channel::Two : Channel::One; }

enum class ErrorKind {
    InvalidArgument,     // bad resolution, malformed config, empty sweep
    Data,                // non-finite or unreadable input data
    Domain,              // spectral parameter outside the admissible range
    HypothesisViolation, // model breaks a structural assumption
    NotProductForm,      // Hessian blocks are not l1 U, l U, l2 U
    DegenerateModel,     // e.g. m == M or Lambda(0,m) not positive
    InvalidZ,            // some channel determinant is not positive at z
    ExpansionMismatch,   // threshold fit residual too large
    InsufficientData,
    Contract,            // caller violated a precondition (non-symmetric matrix, ...)
    Resource             // size cap exceeded
};

class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// CLI exit code for an error kind: 2 usage/config/input data, 3 model/hypothesis, 4 resource.
inline int exit_code(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::InvalidArgument:
    case ErrorKind::Data:
    case ErrorKind::InsufficientData:
        return 2;
    case ErrorKind::Resource:
        return 4;
    default:
        return 3;
    }
}

} // namespace latspec
