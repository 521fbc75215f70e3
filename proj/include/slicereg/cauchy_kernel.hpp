#pragma once

#include <cmath>

#include "slicereg/quaternion.hpp"

namespace slicereg {

/// Kernel evaluation bundled with its distance to the pole sphere [s].
struct KernelValue {
    Quaternion value;
    double pole_distance = 0.0;

    operator Quaternion() const { return value; }
};

/// Relative pole-proximity guard: evaluation closer to [s] than this is
/// rejected, since the kernel magnitude ~ 1/dist makes it meaningless in
/// doubles.
inline double pole_guard(const Quaternion& s) { return 1e-12 * (1.0 + s.norm()); }

namespace detail {

/// Characteristic polynomial of [s] evaluated at p:
/// Q_s(p) = p^2 - 2 Re(s) p + |s|^2; vanishes exactly on p in [s].
inline Quaternion characteristic(const Quaternion& s, const Quaternion& p) {
    return p * p - 2.0 * s.re() * p + Quaternion(s.norm_sq());
}

inline double checked_pole_distance(const Quaternion& s, const Quaternion& p, double eps) {
    const double d = dist_sphere_point(sphere_of(p), s);
    if (d < eps) throw PoleError("Cauchy kernel: evaluation on or next to the pole sphere");
    return d;
}

} // namespace detail

/// Left Cauchy kernel S_L^{-1}(s, p) = -(p^2 - 2 p Re(s) + |s|^2)^{-1} (p - conj s).
/// Left slice hyperholomorphic in p, right slice hyperholomorphic in s;
/// reduces to (s - p)^{-1} whenever p and s commute.
inline KernelValue cauchy_kernel_left(const Quaternion& s, const Quaternion& p) {
    const double d = detail::checked_pole_distance(s, p, pole_guard(s));
    return {-(inverse(detail::characteristic(s, p)) * (p - s.conj())), d};
}

/// Right Cauchy kernel S_R^{-1}(s, q) = -(q - conj s)(q^2 - 2 Re(s) q + |s|^2)^{-1}.
inline KernelValue cauchy_kernel_right(const Quaternion& s, const Quaternion& q) {
    const double d = detail::checked_pole_distance(s, q, pole_guard(s));
    return {-((q - s.conj()) * inverse(detail::characteristic(s, q))), d};
}

/// Star-inverse of the linear polynomial q - s, evaluated at p:
/// (p - s)^{-star} = (p^2 - 2 Re(s) p + |s|^2)^{-1} (p - conj s).
inline Quaternion star_inverse(const Quaternion& s, const Quaternion& p) {
    detail::checked_pole_distance(s, p, pole_guard(s));
    return inverse(detail::characteristic(s, p)) * (p - s.conj());
}

/// The squared kernel phi_s(p) = (p^2 - 2 Re(s) p + |s|^2)^{-2} (p - conj s)^{2*},
/// with the star-square (p - conj s)^{2*} = p^2 - 2 p conj(s) + conj(s)^2.
/// Equals the star-square of (p - s)^{-star} and the x0-derivative of the
/// left kernel; obeys |phi_s(p)| <= dist([p], s)^{-2}.
inline Quaternion phi(const Quaternion& s, const Quaternion& p) {
    detail::checked_pole_distance(s, p, pole_guard(s));
    const Quaternion qc = inverse(detail::characteristic(s, p));
    const Quaternion sb = s.conj();
    return qc * qc * (p * p - 2.0 * (p * sb) + sb * sb);
}

} // namespace slicereg
