#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <memory>
#include <vector>

#include "slicereg/cauchy_kernel.hpp"
#include "slicereg/contour.hpp"
#include "slicereg/slice_function.hpp"

namespace slicereg {

/// Boundary data on a contour.  Either slice-aware (a SliceFunction, which
/// also transplants to other slice planes), a raw point function, or
/// tabulated samples interpolated piecewise-cubically in the contour
/// parameter (single-arc contours).
class BoundaryData {
  public:
    BoundaryData(const SliceFunction& f) // NOLINT: implicit wrap is the common path
        : sf_(std::make_shared<SliceFunction>(f)) {
        auto sf = sf_;
        eval_ = [sf](const Quaternion& s, double) { return (*sf)(s); };
    }

    static BoundaryData from_function(std::function<Quaternion(const Quaternion&)> F) {
        BoundaryData b;
        b.eval_ = [F = std::move(F)](const Quaternion& s, double) { return F(s); };
        return b;
    }

    static BoundaryData from_param_function(std::function<Quaternion(double)> F) {
        BoundaryData b;
        b.eval_ = [F = std::move(F)](const Quaternion&, double t) { return F(t); };
        return b;
    }

    /// Catmull-Rom interpolation of samples (params strictly increasing).
    /// Periodic data wraps with period params.back() - params.front().
    static BoundaryData sampled(std::vector<double> params, std::vector<Quaternion> values,
                                bool periodic) {
        if (params.size() != values.size() || params.size() < (periodic ? 3 : 2))
            throw ParamError("sampled boundary data: need matching params/values, at least 2");
        for (size_t i = 0; i + 1 < params.size(); ++i)
            if (!(params[i] < params[i + 1]))
                throw ParamError("sampled boundary data: params must increase strictly");
        auto spline = [params = std::move(params), values = std::move(values),
                       periodic](double t) -> Quaternion {
            const size_t n = params.size();
            const double period = params[n - 1] - params[0];
            if (periodic) {
                t = std::fmod(t - params[0], period);
                if (t < 0) t += period;
                t += params[0];
            } else {
                t = std::clamp(t, params[0], params[n - 1]);
            }
            size_t i = std::upper_bound(params.begin(), params.end(), t) - params.begin();
            i = std::clamp<size_t>(i, 1, n - 1) - 1; // interval [i, i+1]
            auto at = [&](long k) -> Quaternion {
                if (periodic) {
                    const long m = static_cast<long>(n) - 1; // last value repeats the first
                    long kk = ((k % m) + m) % m;
                    return values[kk];
                }
                return values[std::clamp<long>(k, 0, static_cast<long>(n) - 1)];
            };
            auto param_at = [&](long k) -> double {
                if (periodic) {
                    const long m = static_cast<long>(n) - 1;
                    const long q = static_cast<long>(std::floor(static_cast<double>(k) / m));
                    return params[k - q * m] + q * period;
                }
                if (k < 0) return params[0] - (params[1] - params[0]);
                if (k >= static_cast<long>(n))
                    return params[n - 1] + (params[n - 1] - params[n - 2]);
                return params[k];
            };
            const long i0 = static_cast<long>(i);
            const double t0 = param_at(i0), t1 = param_at(i0 + 1);
            const double h = t1 - t0;
            const double x = (t - t0) / h;
            const Quaternion p0 = at(i0), p1 = at(i0 + 1);
            const Quaternion m0 = (at(i0 + 1) - at(i0 - 1)) * (h / (param_at(i0 + 1) - param_at(i0 - 1)));
            const Quaternion m1 = (at(i0 + 2) - at(i0)) * (h / (param_at(i0 + 2) - param_at(i0)));
            const double x2 = x * x, x3 = x2 * x;
            return p0 * (2 * x3 - 3 * x2 + 1) + m0 * (x3 - 2 * x2 + x) +
                   p1 * (-2 * x3 + 3 * x2) + m1 * (x3 - x2);
        };
        BoundaryData b;
        b.eval_ = [spline = std::move(spline)](const Quaternion&, double t) { return spline(t); };
        return b;
    }

    Quaternion operator()(const Quaternion& s, double t) const { return eval_(s, t); }

    /// Non-null when the data is slice-aware.
    const SliceFunction* slice_function() const { return sf_.get(); }

  private:
    BoundaryData() = default;
    std::function<Quaternion(const Quaternion&, double)> eval_;
    std::shared_ptr<SliceFunction> sf_;
};

struct TransformOptions {
    QuadratureOptions quad{1e-11, 1e-11, 20, -1};
    /// PoleError when dist([p], Gamma) falls below guard * (1 + contour scale).
    double pole_guard = 1e-10;
};

namespace detail {

inline double contour_scale(const Contour& G) {
    double m = 0;
    for (const auto& comp : G.components())
        for (const auto& arc : comp.arcs)
            for (int k = 0; k <= 8; ++k)
                m = std::max(m, arc.pos(arc.a + (arc.b - arc.a) * k / 8.0).norm());
    return m;
}

inline void guard_pole(const Contour& G, const Quaternion& p, double guard) {
    if (dist_sphere_curve(sphere_of(p), G) < guard * (1.0 + contour_scale(G)))
        throw PoleError("Cauchy transform: evaluation point too close to the contour spheres");
}

} // namespace detail

/// Left Cauchy integral transform (1/2pi) int S_L^{-1}(s, p) ds_j f(s).
/// Slice-unit independent for axially symmetric boundaries and slice-aware
/// data; left slice hyperholomorphic in p off the contour spheres.
inline Quaternion cauchy_transform(const BoundaryData& f, const Contour& G, const Quaternion& p,
                                   const TransformOptions& opts = {}) {
    detail::guard_pole(G, p, opts.pole_guard);
    const Quaternion mj = -G.slice_unit().value();
    const Quaternion integral = G.integrate(
        [&](const Quaternion& s, const Quaternion& ds, double t) {
            return cauchy_kernel_left(s, p).value * (mj * ds) * f(s, t);
        },
        opts.quad);
    return integral * (1.0 / (2.0 * 3.14159265358979323846));
}

/// Right transform (1/2pi) int f(s) ds_j S_R^{-1}(s, p).
inline Quaternion cauchy_transform_right(const BoundaryData& f, const Contour& G,
                                         const Quaternion& p, const TransformOptions& opts = {}) {
    detail::guard_pole(G, p, opts.pole_guard);
    const Quaternion mj = -G.slice_unit().value();
    const Quaternion integral = G.integrate(
        [&](const Quaternion& s, const Quaternion& ds, double t) {
            return f(s, t) * (mj * ds) * cauchy_kernel_right(s, p).value;
        },
        opts.quad);
    return integral * (1.0 / (2.0 * 3.14159265358979323846));
}

/// Derivative of the transform along x0, via the squared kernel:
/// (1/2pi) int phi_s(p) ds_j f(s).  Agrees with the x0 finite difference
/// of cauchy_transform.
inline Quaternion transform_derivative(const BoundaryData& f, const Contour& G,
                                       const Quaternion& p, const TransformOptions& opts = {}) {
    detail::guard_pole(G, p, opts.pole_guard);
    const Quaternion mj = -G.slice_unit().value();
    const Quaternion integral = G.integrate(
        [&](const Quaternion& s, const Quaternion& ds, double t) {
            return phi(s, p) * (mj * ds) * f(s, t);
        },
        opts.quad);
    return integral * (1.0 / (2.0 * 3.14159265358979323846));
}

/// The additive splitting carried by the transform across a closed
/// boundary: f_plus = fhat on the inside, f_minus = -fhat on the outside,
/// normalised so that f = f_plus + f_minus on the boundary and
/// f_minus vanishes at infinity.
struct SplitPair {
    std::function<Quaternion(const Quaternion&)> f_plus;
    std::function<Quaternion(const Quaternion&)> f_minus;
    /// Boundary values are taken as limits at this inward/outward offset.
    double boundary_delta = 1e-4;
};

inline SplitPair split(const BoundaryData& f, const Contour& G, const TransformOptions& opts = {}) {
    if (!G.closed()) throw ParamError("split: the contour must be closed");
    SplitPair pair;
    pair.f_plus = [f, G, opts](const Quaternion& p) { return cauchy_transform(f, G, p, opts); };
    pair.f_minus = [f, G, opts](const Quaternion& p) { return -cauchy_transform(f, G, p, opts); };
    return pair;
}

namespace detail {

/// Point, inward normal (j gamma'/|gamma'|) and data value at parameter t0
/// of the first arc of a contour.
struct BoundaryFrame {
    Quaternion point;
    Quaternion normal;
    Quaternion value;
};

inline BoundaryFrame boundary_frame(const BoundaryData& f, const Contour& G, double t0) {
    const auto& arc = G.components().front().arcs.front();
    const Vec2 x = arc.pos(t0);
    const Vec2 v = arc.vel(t0);
    if (v.norm() == 0) throw ParamError("boundary frame: vanishing tangent");
    const Quaternion s = G.embed(x);
    const Quaternion normal = G.slice_unit().value() *
                              (Quaternion(v.x) + G.slice_unit().value() * v.y) * (1.0 / v.norm());
    return {s, normal, f(s, t0)};
}

/// Parameter of the first-arc point closest to q0 (scan plus golden
/// refinement); q0 should lie on or near the contour.
inline double locate_parameter(const Contour& G, const Quaternion& q0, int scan = 512) {
    const auto& arc = G.components().front().arcs.front();
    auto d = [&](double t) { return (G.embed(arc.pos(t)) - q0).norm(); };
    const double h = (arc.b - arc.a) / scan;
    double tbest = arc.a, dbest = d(tbest);
    for (int k = 1; k <= scan; ++k) {
        const double t = arc.a + k * h;
        if (d(t) < dbest) {
            dbest = d(t);
            tbest = t;
        }
    }
    double lo = std::max(arc.a, tbest - 1.5 * h), hi = std::min(arc.b, tbest + 1.5 * h);
    const double gr = 0.6180339887498949;
    double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
    double fa = d(a), fb = d(b);
    for (int it = 0; it < 60; ++it) {
        if (fa < fb) {
            hi = b; b = a; fb = fa;
            a = hi - gr * (hi - lo);
            fa = d(a);
        } else {
            lo = a; a = b; fa = fb;
            b = lo + gr * (hi - lo);
            fb = d(b);
        }
    }
    return 0.5 * (lo + hi);
}

} // namespace detail

/// For each offset d, evaluates the transform just inside and just outside
/// the boundary point gamma(t0) along the in-slice normal and returns
/// |fhat(q+) - fhat(q-) - f(q0)|.  The sequence decays for Hoelder data.
inline std::vector<double> boundary_jump_check(const BoundaryData& f, const Contour& G, double t0,
                                               const std::vector<double>& distances,
                                               const TransformOptions& opts = {}) {
    const auto frame = detail::boundary_frame(f, G, t0);
    std::vector<double> out;
    out.reserve(distances.size());
    for (const double d : distances) {
        const Quaternion in = frame.point + frame.normal * d;
        const Quaternion outp = frame.point - frame.normal * d;
        const Quaternion jump =
            cauchy_transform(f, G, in, opts) - cauchy_transform(f, G, outp, opts) - frame.value;
        out.push_back(jump.norm());
    }
    return out;
}

/// Same check anchored at a boundary point instead of a parameter.
inline std::vector<double> boundary_jump_check(const BoundaryData& f, const Contour& G,
                                               const Quaternion& q0,
                                               const std::vector<double>& distances,
                                               const TransformOptions& opts = {}) {
    return boundary_jump_check(f, G, detail::locate_parameter(G, q0), distances, opts);
}

/// Hoelder data for exponent alpha on a sampled contour.
struct HolderData {
    double alpha = 0.5;
    double seminorm = 0.0;
    double sup_norm = 0.0;
    double norm() const { return sup_norm + seminorm; }
};

/// Pairwise Hoelder seminorm over n contour samples.  Slice-aware data is
/// measured componentwise on (f0, f1); raw data by the value norm.
inline HolderData holder_seminorm(const BoundaryData& f, const Contour& G, double alpha,
                                  int nsamples = 256) {
    if (!(alpha > 0 && alpha < 1)) throw ParamError("holder_seminorm: alpha must lie in (0,1)");
    if (nsamples < 2) throw ParamError("holder_seminorm: need at least 2 samples");

    struct Sample {
        Vec2 x;
        Quaternion value, f0, f1;
    };
    std::vector<Sample> samples;
    const SliceFunction* sf = f.slice_function();
    for (const auto& comp : G.components())
        for (const auto& arc : comp.arcs)
            for (int k = 0; k < nsamples; ++k) {
                const double t = arc.a + (arc.b - arc.a) * (k + 0.5) / nsamples;
                const Vec2 x = arc.pos(t);
                Sample s;
                s.x = x;
                s.value = f(G.embed(x), t);
                if (sf) {
                    s.f0 = sf->f0(x.x, x.y);
                    s.f1 = sf->f1(x.x, x.y);
                }
                samples.push_back(std::move(s));
            }

    HolderData out;
    out.alpha = alpha;
    double semi0 = 0, semi1 = 0, semi_raw = 0;
    for (size_t i = 0; i < samples.size(); ++i) {
        out.sup_norm = std::max(out.sup_norm, samples[i].value.norm());
        for (size_t k = i + 1; k < samples.size(); ++k) {
            const double d = (samples[i].x - samples[k].x).norm();
            if (d < 1e-14) continue;
            const double da = std::pow(d, alpha);
            if (sf) {
                semi0 = std::max(semi0, (samples[i].f0 - samples[k].f0).norm() / da);
                semi1 = std::max(semi1, (samples[i].f1 - samples[k].f1).norm() / da);
            } else {
                semi_raw = std::max(semi_raw, (samples[i].value - samples[k].value).norm() / da);
            }
        }
    }
    out.seminorm = sf ? semi0 + semi1 : semi_raw;
    return out;
}

/// Least-squares slope of log |fhat| against log dist([p], Gamma) on the
/// inward normal ladder d = 2^-k, k = 3..12, at the boundary point gamma(t0).
/// The default quadrature tolerance is looser than the transform's: the
/// data may carry Hoelder cusps, and the slope fit only needs a few digits.
inline double growth_exponent(const BoundaryData& f, const Contour& G, double t0,
                              const TransformOptions& opts = TransformOptions{
                                  QuadratureOptions{1e-7, 1e-7, 20, -1}, 1e-10}) {
    const auto frame = detail::boundary_frame(f, G, t0);
    std::vector<double> xs, ys;
    for (int k = 3; k <= 12; ++k) {
        const double d = std::ldexp(1.0, -k);
        const Quaternion p = frame.point + frame.normal * d;
        const double val = cauchy_transform(f, G, p, opts).norm();
        const double dist = dist_sphere_curve(sphere_of(p), G);
        if (val <= 0 || dist <= 0) continue;
        xs.push_back(std::log(dist));
        ys.push_back(std::log(val));
    }
    if (xs.size() < 3) throw NonConvergenceError("growth_exponent: too few valid ladder points");
    const double n = static_cast<double>(xs.size());
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        sx += xs[i];
        sy += ys[i];
        sxx += xs[i] * xs[i];
        sxy += xs[i] * ys[i];
    }
    return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

inline double growth_exponent(const BoundaryData& f, const Contour& G, const Quaternion& q0,
                              const TransformOptions& opts = TransformOptions{
                                  QuadratureOptions{1e-7, 1e-7, 20, -1}, 1e-10}) {
    return growth_exponent(f, G, detail::locate_parameter(G, q0), opts);
}

} // namespace slicereg
