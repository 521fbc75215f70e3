#pragma once

#include <cmath>
#include <functional>
#include <utility>
#include <vector>

#include "slicereg/cauchy_kernel.hpp"
#include "slicereg/contour.hpp"
#include "slicereg/slice_function.hpp"

namespace slicereg {

/// G_L f(q) = |Im q|^2 d f/dx0 + Im(q) sum_l x_l d f/dx_l, by central
/// differences with step h (default 1e-5 (1 + |q|)).  Vanishes, up to FD
/// error, exactly on slice hyperholomorphic functions.
template <class F>
Quaternion apply_GL(F&& f, const Quaternion& q, double h = 0.0) {
    if (h <= 0.0) h = default_fd_step(q);
    const Quaternion im = q.im();
    static const Quaternion basis[4] = {Quaternion(1), Quaternion::e1(), Quaternion::e2(),
                                        Quaternion::e3()};
    const double coords[4] = {q.x0, q.x1, q.x2, q.x3};
    Quaternion acc = im.norm_sq() * ((f(q + basis[0] * h) - f(q - basis[0] * h)) * (0.5 / h));
    Quaternion radial{};
    for (int l = 1; l < 4; ++l)
        radial += coords[l] * ((f(q + basis[l] * h) - f(q - basis[l] * h)) * (0.5 / h));
    return acc + im * radial;
}

/// Right variant: the Im(q) factor multiplies the radial part on the right.
template <class F>
Quaternion apply_GR(F&& f, const Quaternion& q, double h = 0.0) {
    if (h <= 0.0) h = default_fd_step(q);
    const Quaternion im = q.im();
    static const Quaternion basis[4] = {Quaternion(1), Quaternion::e1(), Quaternion::e2(),
                                        Quaternion::e3()};
    const double coords[4] = {q.x0, q.x1, q.x2, q.x3};
    Quaternion acc = im.norm_sq() * ((f(q + basis[0] * h) - f(q - basis[0] * h)) * (0.5 / h));
    Quaternion radial{};
    for (int l = 1; l < 4; ++l)
        radial += coords[l] * ((f(q + basis[l] * h) - f(q - basis[l] * h)) * (0.5 / h));
    return acc + radial * im;
}

/// Even part (f(u,v) + f(u,-v))/2.
template <class G>
auto p_plus(G g) {
    return [g = std::move(g)](double u, double v) { return 0.5 * (g(u, v) + g(u, -v)); };
}

/// Odd part (f(u,v) - f(u,-v))/2.
template <class G>
auto p_minus(G g) {
    return [g = std::move(g)](double u, double v) { return 0.5 * (g(u, v) - g(u, -v)); };
}

/// A slice test function: real components f0 (even in v) and f1 (odd in v),
/// smooth and compactly supported inside the stored box
/// [u_lo, u_hi] x [-v_hi, v_hi].
class SliceTestFunction {
  public:
    using Component = std::function<double(double, double)>;

    SliceTestFunction(Component f0, Component f1, double u_lo, double u_hi, double v_hi,
                      Chirality form = Chirality::right)
        : f0_(std::move(f0)), f1_(std::move(f1)), u_lo_(u_lo), u_hi_(u_hi), v_hi_(v_hi),
          form_(form) {
        if (!(u_lo < u_hi && v_hi > 0)) throw ParamError("SliceTestFunction: empty support box");
    }

    /// Mollifier profile exp(1 - 1/(1 - x^2)) on |x| < 1.
    static double mollifier(double x) {
        const double x2 = x * x;
        if (x2 >= 1.0) return 0.0;
        return std::exp(1.0 - 1.0 / (1.0 - x2));
    }

    /// Smooth bump pair centred at (uc, vc): f0 the v-symmetrised product
    /// bump, f1 its antisymmetrised sibling.
    static SliceTestFunction bump(double uc, double vc, double wu, double wv,
                                  Chirality form = Chirality::right) {
        if (!(wu > 0 && wv > 0 && vc >= 0)) throw ParamError("bump: bad shape parameters");
        auto f0 = [=](double u, double v) {
            return mollifier((u - uc) / wu) *
                   (mollifier((v - vc) / wv) + mollifier((v + vc) / wv));
        };
        auto f1 = [=](double u, double v) {
            return mollifier((u - uc) / wu) *
                   (mollifier((v - vc) / wv) - mollifier((v + vc) / wv));
        };
        return SliceTestFunction(std::move(f0), std::move(f1), uc - wu, uc + wu, vc + wv, form);
    }

    double f0(double u, double v) const { return f0_(u, v); }
    double f1(double u, double v) const { return f1_(u, v); }
    Chirality chirality() const { return form_; }
    double u_lo() const { return u_lo_; }
    double u_hi() const { return u_hi_; }
    double v_hi() const { return v_hi_; }

    Quaternion operator()(const Quaternion& q) const {
        const double u = q.re(), v = q.im_norm();
        const double a = f0_(u, v), b = f1_(u, v);
        if (v == 0.0) return Quaternion(a);
        const Quaternion jq = q.im() * (1.0 / v);
        return form_ == Chirality::left ? Quaternion(a) + jq * b : Quaternion(a) + b * jq;
    }

  private:
    Component f0_, f1_;
    double u_lo_, u_hi_, v_hi_;
    Chirality form_;
};

/// T(g)(q) = P+g(q0, |Im q|) + j_q P-g(q0, |Im q|): the lift of a scalar
/// test function on the half-plane to a (left) slice test function.  The
/// pair (f0, f1) = (P+g, P-g) inverts the lift.
template <class G>
SliceTestFunction lift_T(G g, double u_lo, double u_hi, double v_hi,
                         Chirality form = Chirality::left) {
    auto even = p_plus(g);
    auto odd = p_minus(g);
    return SliceTestFunction(std::move(even), std::move(odd), u_lo, u_hi, v_hi, form);
}

/// Slice adjoint G_L^{*s}(phi) = -G_R(phi) - 2 phi Im(q); satisfies the
/// slice integration-by-parts identity against G_L.
template <class F>
Quaternion adjoint_GL_slice(F&& phi, const Quaternion& q, double h = 0.0) {
    return -apply_GR(phi, q, h) - 2.0 * (phi(q) * q.im());
}

/// Global (4-D Lebesgue) adjoint: -G_R(phi) - 4 phi Im(q); differs from the
/// slice adjoint by exactly -2 phi Im(q).
template <class F>
Quaternion adjoint_GL_global(F&& phi, const Quaternion& q, double h = 0.0) {
    return -apply_GR(phi, q, h) - 4.0 * (phi(q) * q.im());
}

template <class F>
Quaternion adjoint_GR_slice(F&& phi, const Quaternion& q, double h = 0.0) {
    return -apply_GL(phi, q, h) - 2.0 * (q.im() * phi(q));
}

namespace detail {

/// Convex planar region cut out by half-planes (n . x <= c) and at most
/// one disk, with exit-radius queries for polar quadrature.
struct PlanarSection {
    struct Line {
        double nx, ny, c;
    };
    std::vector<Line> lines;
    bool has_disk = false;
    double disk_u = 0, disk_v = 0, disk_r = 0;

    static PlanarSection box(double u0, double u1, double v0, double v1) {
        PlanarSection s;
        s.lines = {{-1, 0, -u0}, {1, 0, u1}, {0, -1, -v0}, {0, 1, v1}};
        return s;
    }
    static PlanarSection disk(double cu, double cv, double r) {
        PlanarSection s;
        s.has_disk = true;
        s.disk_u = cu;
        s.disk_v = cv;
        s.disk_r = r;
        return s;
    }
    PlanarSection clipped(double nx, double ny, double c) const {
        PlanarSection s = *this;
        s.lines.push_back({nx, ny, c});
        return s;
    }

    bool contains(double u, double v) const {
        for (const auto& l : lines)
            if (l.nx * u + l.ny * v > l.c + 1e-14) return false;
        if (has_disk && std::hypot(u - disk_u, v - disk_v) > disk_r + 1e-14) return false;
        return true;
    }

    /// Distance from an interior point along direction theta to the boundary.
    double exit_radius(double pu, double pv, double theta) const {
        const double dx = std::cos(theta), dy = std::sin(theta);
        double t = std::numeric_limits<double>::infinity();
        for (const auto& l : lines) {
            const double denom = l.nx * dx + l.ny * dy;
            if (denom > 1e-15) {
                const double tt = (l.c - (l.nx * pu + l.ny * pv)) / denom;
                t = std::min(t, std::max(tt, 0.0));
            }
        }
        if (has_disk) {
            const double ru = pu - disk_u, rv = pv - disk_v;
            const double b = ru * dx + rv * dy;
            const double disc = b * b - (ru * ru + rv * rv - disk_r * disk_r);
            if (disc >= 0) t = std::min(t, std::max(-b + std::sqrt(disc), 0.0));
        }
        return t;
    }
};

/// Polar quadrature over a convex section about an interior pole: composite
/// Gauss-Legendre in the angle and, per ray, in the radius.  The integrand
/// g(u, v) is multiplied by the polar Jacobian r, which cancels simple
/// 1/|w - pole| singularities exactly.
template <class G>
Quaternion polar_integrate(const PlanarSection& region, double pu, double pv, G&& g,
                           int theta_panels, int radial_panels) {
    const auto& rule = gauss_rule(8);
    const double two_pi = 2.0 * 3.14159265358979323846;
    Quaternion total{};
    for (int tp = 0; tp < theta_panels; ++tp) {
        const double th0 = two_pi * tp / theta_panels;
        const double th1 = two_pi * (tp + 1) / theta_panels;
        for (size_t a = 0; a < rule.x.size(); ++a) {
            const double theta = 0.5 * (th0 + th1) + 0.5 * (th1 - th0) * rule.x[a];
            const double wtheta = 0.5 * (th1 - th0) * rule.w[a];
            const double R = region.exit_radius(pu, pv, theta);
            if (!(R > 0)) continue;
            const double ct = std::cos(theta), st = std::sin(theta);
            Quaternion ray{};
            for (int rp = 0; rp < radial_panels; ++rp) {
                const double r0 = R * rp / radial_panels;
                const double r1 = R * (rp + 1) / radial_panels;
                for (size_t b = 0; b < rule.x.size(); ++b) {
                    const double r = 0.5 * (r0 + r1) + 0.5 * (r1 - r0) * rule.x[b];
                    const double wr = 0.5 * (r1 - r0) * rule.w[b];
                    ray += g(pu + r * ct, pv + r * st) * (r * wr);
                }
            }
            total += ray * wtheta;
        }
    }
    return total;
}

} // namespace detail

/// Pairing of the G_L image of the left Cauchy kernel at s against a right
/// slice test function, over the slice C_j: the 2-D integral of
/// G_L^{*s}(phi)(u + jv) S_L^{-1}(s, u + jv) du dv, desingularised by polar
/// quadrature around the two slice representatives of [s].  Converges under
/// grid refinement to -2 pi |Im s|^2 phi(s), independently of j.
inline Quaternion fundamental_pairing(const SliceTestFunction& phi, const Quaternion& s,
                                      const UnitImaginary& j = UnitImaginary::e1(),
                                      int level = 1) {
    if (phi.chirality() != Chirality::right)
        throw ParamError("fundamental_pairing: needs a right slice test function");
    if (s.im_norm() < 1e-12) throw ParamError("fundamental_pairing: s must be non-real");
    const Quaternion jq = j.value();
    const double s0 = s.re(), sigma = s.im_norm();

    auto integrand = [&](double u, double v) {
        const Quaternion w = Quaternion(u) + jq * v;
        const Quaternion gstar = adjoint_GL_slice(phi, w);
        return gstar * cauchy_kernel_left(s, w).value;
    };

    const int theta_panels = 12 << level;
    const int radial_panels = 8 << level;
    Quaternion total{};
    // each conjugate pole owns its half-plane
    for (const double vsign : {+1.0, -1.0}) {
        const auto half = detail::PlanarSection::box(phi.u_lo(), phi.u_hi(), -phi.v_hi(),
                                                     phi.v_hi())
                              .clipped(0, -vsign, 0);
        const double pv = vsign * sigma;
        if (half.contains(s0, pv)) {
            total += detail::polar_integrate(half, s0, pv, integrand, theta_panels,
                                             radial_panels);
        } else {
            // pole outside the support: the integrand is smooth there; sweep
            // from the box centre instead
            const double cu = 0.5 * (phi.u_lo() + phi.u_hi());
            const double cv = vsign * 0.5 * phi.v_hi();
            total += detail::polar_integrate(half, cu, cv, integrand, theta_panels,
                                             radial_panels);
        }
    }
    return total;
}

/// The value the pairing converges to: -2 pi |Im s|^2 phi(s).
inline Quaternion fundamental_pairing_target(const SliceTestFunction& phi, const Quaternion& s) {
    return -2.0 * 3.14159265358979323846 * s.im_norm() * s.im_norm() * phi(s);
}

/// Solution of G_L f = |Im q|^2 V on a bounded axially symmetric domain.
struct GlobalSolveResult {
    std::function<Quaternion(const Quaternion&)> solution;
    struct Residual {
        double u, v;
        int j_index;
        double norm;
    };
    std::vector<Residual> residuals;
    double sup_rhs = 0.0;           // sup of |Im q|^2 |V| over the probes
    double max_relative_residual = 0.0;
    int level = 1;
};

struct SolveOptions {
    int level = 1;             // quadrature refinement level
    int probe_grid = 7;        // probes per axis in the (u, v) section
    double probe_margin = 0.1; // skipped fraction near the axis and boundary
    double fd_step = 5e-3;     // residual differentiation step
    std::vector<UnitImaginary> probe_slices = {UnitImaginary::e1()};
};

/// f(p) = -(1/2pi) int_{D cap C_j} S_L^{-1}(s, p) V(s) du dv, the area
/// integral desingularised by giving each conjugate kernel pole its own
/// half-plane polar sweep.  The residual field G_L f - |Im q|^2 V is
/// sampled on a probe grid away from the real axis and the boundary.
template <class V>
GlobalSolveResult solve_global(V&& rhs, const AxiallySymmetricDomain& D,
                               const SolveOptions& opts = {},
                               const UnitImaginary& j = UnitImaginary::e1()) {
    if (D.kind() != AxiallySymmetricDomain::Kind::ball)
        throw ParamError("solve_global: only ball domains are supported");
    const double c0 = D.param0(), R = D.param1();
    const Quaternion jq = j.value();
    const int theta_panels = 12 << opts.level;
    const int radial_panels = 8 << opts.level;

    auto rhs_copy = rhs;
    auto solution = [=](const Quaternion& p) -> Quaternion {
        auto integrand = [&](double u, double v) {
            const Quaternion s = Quaternion(u) + jq * v;
            return cauchy_kernel_left(s, p).value * rhs_copy(s);
        };
        const double p0 = p.re(), vp = p.im_norm();
        Quaternion acc{};
        for (const double vsign : {+1.0, -1.0}) {
            const auto half =
                detail::PlanarSection::disk(c0, 0.0, R).clipped(0, -vsign, 0);
            const double pv = vsign * vp;
            const bool inside = std::hypot(p0 - c0, pv) < R - 1e-12;
            if (inside) {
                acc += detail::polar_integrate(half, p0, pv, integrand, theta_panels,
                                               radial_panels);
            } else {
                acc += detail::polar_integrate(half, c0, vsign * 0.45 * R, integrand,
                                               theta_panels, radial_panels);
            }
        }
        return acc * (-1.0 / (2.0 * 3.14159265358979323846));
    };

    GlobalSolveResult out;
    out.solution = solution;
    out.level = opts.level;

    const double margin = opts.probe_margin * R;
    for (int ju = 0; ju < opts.probe_grid; ++ju)
        for (int jv = 0; jv < opts.probe_grid; ++jv) {
            const double u = c0 - R + 2.0 * R * (ju + 0.5) / opts.probe_grid;
            const double v = R * (jv + 0.5) / opts.probe_grid;
            if (v < margin) continue;
            if (std::hypot(u - c0, v) > R - margin) continue;
            for (size_t js = 0; js < opts.probe_slices.size(); ++js) {
                const Quaternion q = Quaternion(u) + opts.probe_slices[js].value() * v;
                const Quaternion g = apply_GL(solution, q, opts.fd_step);
                const Quaternion want = Quaternion(q.im().norm_sq()) * rhs_copy(q);
                const double res = (g - want).norm();
                out.residuals.push_back({u, v, static_cast<int>(js), res});
                out.sup_rhs = std::max(out.sup_rhs, want.norm());
            }
        }
    for (const auto& r : out.residuals)
        out.max_relative_residual =
            std::max(out.max_relative_residual, r.norm / std::max(out.sup_rhs, 1e-300));
    return out;
}

} // namespace slicereg
