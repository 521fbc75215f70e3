#pragma once

#include <array>
#include <cmath>
#include <ostream>

#include "slicereg/errors.hpp"

namespace slicereg {

/// A real quaternion q = x0 + x1 e1 + x2 e2 + x3 e3.
///
/// The basis units satisfy e1^2 = e2^2 = e3^2 = -1 and
/// e1 e2 = -e2 e1 = e3 (cyclically).  Multiplication is associative and
/// norm-multiplicative but not commutative.
struct Quaternion {
    double x0 = 0.0;
    double x1 = 0.0;
    double x2 = 0.0;
    double x3 = 0.0;

    constexpr Quaternion() = default;
    constexpr Quaternion(double a, double b, double c, double d) : x0(a), x1(b), x2(c), x3(d) {}
    constexpr Quaternion(double real) : x0(real) {} // NOLINT: implicit real embedding is intended

    static constexpr Quaternion e1() { return {0, 1, 0, 0}; }
    static constexpr Quaternion e2() { return {0, 0, 1, 0}; }
    static constexpr Quaternion e3() { return {0, 0, 0, 1}; }

    constexpr double re() const { return x0; }
    constexpr Quaternion im() const { return {0, x1, x2, x3}; }
    constexpr Quaternion conj() const { return {x0, -x1, -x2, -x3}; }
    constexpr double norm_sq() const { return x0 * x0 + x1 * x1 + x2 * x2 + x3 * x3; }
    double norm() const { return std::sqrt(norm_sq()); }
    double im_norm() const { return std::sqrt(x1 * x1 + x2 * x2 + x3 * x3); }

    constexpr double operator[](int i) const {
        return i == 0 ? x0 : (i == 1 ? x1 : (i == 2 ? x2 : x3));
    }
    constexpr std::array<double, 4> components() const { return {x0, x1, x2, x3}; }

    constexpr Quaternion operator-() const { return {-x0, -x1, -x2, -x3}; }
    constexpr Quaternion& operator+=(const Quaternion& r) {
        x0 += r.x0; x1 += r.x1; x2 += r.x2; x3 += r.x3;
        return *this;
    }
    constexpr Quaternion& operator-=(const Quaternion& r) {
        x0 -= r.x0; x1 -= r.x1; x2 -= r.x2; x3 -= r.x3;
        return *this;
    }
    constexpr Quaternion& operator*=(double s) {
        x0 *= s; x1 *= s; x2 *= s; x3 *= s;
        return *this;
    }

    friend constexpr Quaternion operator+(Quaternion a, const Quaternion& b) { return a += b; }
    friend constexpr Quaternion operator-(Quaternion a, const Quaternion& b) { return a -= b; }
    friend constexpr Quaternion operator*(Quaternion a, double s) { return a *= s; }
    friend constexpr Quaternion operator*(double s, Quaternion a) { return a *= s; }
    friend constexpr Quaternion operator/(Quaternion a, double s) { return a *= (1.0 / s); }

    friend constexpr Quaternion operator*(const Quaternion& a, const Quaternion& b) {
        return {a.x0 * b.x0 - a.x1 * b.x1 - a.x2 * b.x2 - a.x3 * b.x3,
                a.x0 * b.x1 + a.x1 * b.x0 + a.x2 * b.x3 - a.x3 * b.x2,
                a.x0 * b.x2 - a.x1 * b.x3 + a.x2 * b.x0 + a.x3 * b.x1,
                a.x0 * b.x3 + a.x1 * b.x2 - a.x2 * b.x1 + a.x3 * b.x0};
    }

    friend constexpr bool operator==(const Quaternion& a, const Quaternion& b) {
        return a.x0 == b.x0 && a.x1 == b.x1 && a.x2 == b.x2 && a.x3 == b.x3;
    }

    friend std::ostream& operator<<(std::ostream& os, const Quaternion& q) {
        return os << '(' << q.x0 << ", " << q.x1 << ", " << q.x2 << ", " << q.x3 << ')';
    }
};

/// Modulus floor below which inversion is treated as division by zero.
inline constexpr double kInversionFloor = 1e-300;

/// q^{-1} = conj(q)/|q|^2, computed with component scaling so that
/// moduli all the way down to the floor invert without underflow.
/// Throws ZeroDivisionError when |q| < floor.
inline Quaternion inverse(const Quaternion& q, double floor = kInversionFloor) {
    const double m = std::max(std::max(std::abs(q.x0), std::abs(q.x1)),
                              std::max(std::abs(q.x2), std::abs(q.x3)));
    if (m < 0.5 * floor) throw ZeroDivisionError("quaternion inverse: modulus below floor");
    const Quaternion qs = q * (1.0 / m);
    const double n2 = qs.norm_sq();
    if (m * std::sqrt(n2) < floor)
        throw ZeroDivisionError("quaternion inverse: modulus below floor");
    return qs.conj() * (1.0 / (n2 * m));
}

inline Quaternion operator/(const Quaternion& a, const Quaternion& b) { return a * inverse(b); }

inline double abs(const Quaternion& q) { return q.norm(); }

/// A unit purely imaginary quaternion, i.e. a point of the sphere S.
/// Satisfies j^2 = -1 and spans the slice plane C_j together with 1.
class UnitImaginary {
  public:
    UnitImaginary() : j_(Quaternion::e1()) {}

    /// Validates Re = 0 (up to tol) and renormalises the imaginary part.
    explicit UnitImaginary(const Quaternion& q, double tol = 1e-9) {
        const double n = q.im_norm();
        if (std::abs(q.re()) > tol * (1.0 + n) || n == 0.0)
            throw ParamError("UnitImaginary: not a nonzero purely imaginary quaternion");
        j_ = q.im() * (1.0 / n);
    }

    static UnitImaginary from_components(double a, double b, double c) {
        return UnitImaginary(Quaternion{0, a, b, c});
    }
    static UnitImaginary e1() { return UnitImaginary(Quaternion::e1()); }
    static UnitImaginary e2() { return UnitImaginary(Quaternion::e2()); }
    static UnitImaginary e3() { return UnitImaginary(Quaternion::e3()); }

    const Quaternion& value() const { return j_; }
    operator Quaternion() const { return j_; }

  private:
    Quaternion j_;
};

/// True when |Im q| is negligible against the stated tolerance.
inline bool is_real(const Quaternion& q, double tol = 0.0) { return q.im_norm() <= tol; }

/// The slice unit of a non-real quaternion: Im(q)/|Im(q)|.
/// For (numerically) real q the fallback unit is returned; by the
/// representation of real points every consumer must treat the embedded
/// value, not the unit, as identity.
inline UnitImaginary slice_unit(const Quaternion& q,
                                const UnitImaginary& fallback = UnitImaginary::e1()) {
    const double n = q.im_norm();
    if (n == 0.0) return fallback;
    return UnitImaginary(q.im() * (1.0 / n));
}

/// A point u + j v of the half-plane model of a slice, v >= 0.
struct SlicePoint {
    double u = 0.0;
    double v = 0.0;
    UnitImaginary j{};

    SlicePoint() = default;
    SlicePoint(double u_, double v_, UnitImaginary j_ = UnitImaginary::e1()) : u(u_), v(v_), j(j_) {
        if (v < 0.0) throw ParamError("SlicePoint: v must be nonnegative");
    }

    Quaternion embed() const { return Quaternion(u) + j.value() * v; }
};

/// Decomposes q into its half-plane coordinates (Re q, |Im q|).
inline SlicePoint slice_coordinates(const Quaternion& q,
                                    const UnitImaginary& fallback = UnitImaginary::e1()) {
    return SlicePoint(q.re(), q.im_norm(), slice_unit(q, fallback));
}

/// The 2-sphere [q] = { u + j r : j in S } of all quaternions sharing
/// real part u and imaginary modulus r.  r = 0 collapses to the real point u.
struct QSphere {
    double u = 0.0;
    double r = 0.0;

    QSphere() = default;
    QSphere(double center, double radius) : u(center), r(radius) {
        if (r < 0.0) throw ParamError("QSphere: radius must be nonnegative");
    }

    Quaternion representative(const UnitImaginary& j = UnitImaginary::e1()) const {
        return Quaternion(u) + j.value() * r;
    }
};

inline QSphere sphere_of(const Quaternion& q) { return {q.re(), q.im_norm()}; }

/// dist([p], s) = inf over q in [p] of |q - s|; closed form
/// sqrt((u - Re s)^2 + (r - |Im s|)^2).
inline double dist_sphere_point(const QSphere& S, const Quaternion& s) {
    return std::hypot(S.u - s.re(), S.r - s.im_norm());
}

inline double dist_sphere_point(const Quaternion& p, const Quaternion& s) {
    return dist_sphere_point(sphere_of(p), s);
}

/// dist([w], [s]) between two spheres.
inline double dist_sphere_sphere(const QSphere& a, const QSphere& b) {
    return std::hypot(a.u - b.u, a.r - b.r);
}

} // namespace slicereg
