#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <utility>
#include <vector>

#include "slicereg/quaternion.hpp"

namespace slicereg {

/// Point in the coordinates (x, y) of a slice plane C_j.
struct Vec2 {
    double x = 0.0;
    double y = 0.0;

    friend Vec2 operator+(Vec2 a, Vec2 b) { return {a.x + b.x, a.y + b.y}; }
    friend Vec2 operator-(Vec2 a, Vec2 b) { return {a.x - b.x, a.y - b.y}; }
    friend Vec2 operator*(Vec2 a, double s) { return {a.x * s, a.y * s}; }
    double norm() const { return std::hypot(x, y); }
};

namespace detail {

struct GaussRule {
    std::vector<double> x; // nodes on (-1, 1)
    std::vector<double> w;
};

/// Gauss-Legendre nodes/weights by Newton iteration on P_n.
inline GaussRule make_gauss_rule(int n) {
    GaussRule rule;
    rule.x.resize(n);
    rule.w.resize(n);
    for (int i = 0; i < (n + 1) / 2; ++i) {
        double x = std::cos(3.14159265358979323846 * (i + 0.75) / (n + 0.5));
        double dp = 0;
        for (int it = 0; it < 100; ++it) {
            double p0 = 1.0, p1 = x;
            for (int k = 2; k <= n; ++k) {
                const double p2 = ((2 * k - 1) * x * p1 - (k - 1) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            dp = n * (x * p1 - p0) / (x * x - 1.0);
            const double dx = p1 / dp;
            x -= dx;
            if (std::abs(dx) < 1e-15) break;
        }
        rule.x[i] = -x;
        rule.x[n - 1 - i] = x;
        const double w = 2.0 / ((1.0 - x * x) * dp * dp);
        rule.w[i] = w;
        rule.w[n - 1 - i] = w;
    }
    return rule;
}

inline const GaussRule& gauss_rule(int n) {
    static std::map<int, GaussRule> cache;
    auto it = cache.find(n);
    if (it == cache.end()) it = cache.emplace(n, make_gauss_rule(n)).first;
    return it->second;
}

} // namespace detail

/// One C^1 parametrised arc t -> (x(t), y(t)) in slice coordinates.
struct Arc {
    std::function<Vec2(double)> pos;
    std::function<Vec2(double)> vel;
    double a = 0.0;
    double b = 1.0;
    int order = 16; // base quadrature order; error estimates pair it with 2x
};

/// Controls for the adaptive contour quadrature.
struct QuadratureOptions {
    double abs_tol = 1e-10;
    double rel_tol = 1e-10;
    int max_depth = 20;     // dyadic subdivision budget per arc
    int uniform_levels = -1; // >= 0: fixed 2^L segments per arc, no adaptivity
};

/// A piecewise-C^1 contour inside one slice plane C_j: connected
/// components of chained arcs, each open or closed, with a fixed
/// orientation given by the parametrisation.
class Contour {
  public:
    struct Component {
        std::vector<Arc> arcs;
        bool closed = false;
    };

    Contour(std::vector<Component> components, UnitImaginary j)
        : components_(std::move(components)), j_(j) {
        validate();
    }

    /// Positively oriented circle of the given radius about (center.u, center.v)
    /// in C_j.  n is the per-arc base quadrature order, at least 8.
    static Contour circle(const SlicePoint& center, double radius, UnitImaginary j, int n = 16) {
        if (radius <= 0) throw ParamError("circle: radius must be positive");
        if (n < 8) throw ParamError("circle: quadrature order must be at least 8");
        const double cu = center.u, cv = center.v;
        Arc arc;
        arc.pos = [cu, cv, radius](double t) {
            return Vec2{cu + radius * std::cos(t), cv + radius * std::sin(t)};
        };
        arc.vel = [radius](double t) {
            return Vec2{-radius * std::sin(t), radius * std::cos(t)};
        };
        arc.a = 0.0;
        arc.b = 2.0 * 3.14159265358979323846;
        arc.order = n;
        return Contour({Component{{arc}, true}}, j);
    }

    /// Chain of straight segments through the given slice-coordinate points.
    static Contour polyline(const std::vector<Vec2>& points, bool closed, UnitImaginary j,
                            int order = 16) {
        if (points.size() < 2) throw ParamError("polyline: need at least two points");
        std::vector<Arc> arcs;
        const size_t n = points.size();
        const size_t segments = closed ? n : n - 1;
        for (size_t i = 0; i < segments; ++i) {
            const Vec2 p = points[i];
            const Vec2 q = points[(i + 1) % n];
            Arc arc;
            arc.pos = [p, q](double t) { return p + (q - p) * t; };
            arc.vel = [p, q](double) { return q - p; };
            arc.a = 0;
            arc.b = 1;
            arc.order = order;
            arcs.push_back(std::move(arc));
        }
        return Contour({Component{std::move(arcs), closed}}, j);
    }

    /// Same geometry transplanted into another slice plane.
    Contour with_slice_unit(UnitImaginary j) const {
        Contour c = *this;
        c.j_ = j;
        return c;
    }

    /// Orientation-reversed copy.
    Contour reversed() const {
        std::vector<Component> comps;
        for (const auto& comp : components_) {
            Component rc;
            rc.closed = comp.closed;
            for (auto it = comp.arcs.rbegin(); it != comp.arcs.rend(); ++it) {
                const Arc& src = *it;
                Arc arc;
                const double a = src.a, b = src.b;
                auto pos = src.pos;
                auto vel = src.vel;
                arc.pos = [pos, a, b](double t) { return pos(a + b - t); };
                arc.vel = [vel, a, b](double t) { return vel(a + b - t) * (-1.0); };
                arc.a = a;
                arc.b = b;
                arc.order = src.order;
                rc.arcs.push_back(std::move(arc));
            }
            comps.push_back(std::move(rc));
        }
        return Contour(std::move(comps), j_);
    }

    /// Disjoint union of the components of two contours in the same slice.
    static Contour join(const Contour& a, const Contour& b) {
        if ((a.j_.value() - b.j_.value()).norm() > 1e-12)
            throw ParamError("join: contours live in different slice planes");
        auto comps = a.components_;
        comps.insert(comps.end(), b.components_.begin(), b.components_.end());
        return Contour(std::move(comps), a.j_);
    }

    const UnitImaginary& slice_unit() const { return j_; }
    const std::vector<Component>& components() const { return components_; }
    bool closed() const {
        for (const auto& c : components_)
            if (!c.closed) return false;
        return true;
    }

    Quaternion embed(const Vec2& p) const { return Quaternion(p.x) + j_.value() * p.y; }

    /// Integrates f(s, ds, t) dt over the contour, where s is the embedded
    /// point and ds the embedded tangent gamma'(t).  Adaptive composite
    /// Gauss-Legendre: per segment the arc's base order is compared with
    /// twice the order, disagreement triggers dyadic subdivision.
    template <class F>
    Quaternion integrate(F&& f, const QuadratureOptions& opts = {}) const {
        if (opts.uniform_levels >= 0) {
            Quaternion total{};
            for (const auto& comp : components_)
                for (const auto& arc : comp.arcs) {
                    const int segs = 1 << opts.uniform_levels;
                    const double h = (arc.b - arc.a) / segs;
                    for (int i = 0; i < segs; ++i)
                        total += segment_estimate(arc, arc.a + i * h, arc.a + (i + 1) * h,
                                                  2 * arc.order, f);
                }
            return total;
        }

        // global adaptivity: keep a worst-first pool of segments and split
        // until the budget max(abs_tol, rel_tol * scale) covers the sum of
        // the local GL(n) vs GL(2n) disagreements
        struct Seg {
            const Arc* arc;
            int arc_index;
            double t0, t1;
            int depth;
            Quaternion fine;
            double err;
        };
        std::vector<Seg> pool;
        auto make_seg = [&](const Arc* arc, int idx, double t0, double t1, int depth) {
            const Quaternion coarse = segment_estimate(*arc, t0, t1, arc->order, f);
            const Quaternion fine = segment_estimate(*arc, t0, t1, 2 * arc->order, f);
            double err = (fine - coarse).norm();
            if (!std::isfinite(err)) err = std::numeric_limits<double>::infinity();
            return Seg{arc, idx, t0, t1, depth, fine, err};
        };
        double scale = 0;
        int arc_index = 0;
        for (const auto& comp : components_)
            for (const auto& arc : comp.arcs) {
                pool.push_back(make_seg(&arc, arc_index++, arc.a, arc.b, 0));
                if (std::isfinite(pool.back().fine.norm())) scale += pool.back().fine.norm();
            }
        const double budget = std::max(opts.abs_tol, opts.rel_tol * scale);
        const size_t max_segments = 1u << 13;

        auto total_err = [&] {
            double e = 0;
            for (const auto& s : pool) e += s.err;
            return e;
        };
        while (total_err() > budget) {
            size_t worst = 0;
            for (size_t i = 1; i < pool.size(); ++i)
                if (pool[i].err > pool[worst].err ||
                    (pool[i].err == pool[worst].err && pool[i].t0 < pool[worst].t0))
                    worst = i;
            const Seg s = pool[worst];
            if (s.depth >= opts.max_depth || pool.size() >= max_segments)
                throw NonConvergenceError("contour quadrature: subdivision budget exhausted");
            const double tm = 0.5 * (s.t0 + s.t1);
            pool[worst] = make_seg(s.arc, s.arc_index, s.t0, tm, s.depth + 1);
            pool.push_back(make_seg(s.arc, s.arc_index, tm, s.t1, s.depth + 1));
        }

        // deterministic reduction in parameter order
        std::sort(pool.begin(), pool.end(), [](const Seg& a, const Seg& b) {
            if (a.arc_index != b.arc_index) return a.arc_index < b.arc_index;
            return a.t0 < b.t0;
        });
        Quaternion total{};
        for (const auto& s : pool) total += s.fine;
        if (!std::isfinite(total.norm()))
            throw NonConvergenceError("contour quadrature: non-finite result");
        return total;
    }

    /// Arc length by quadrature.
    double length(const QuadratureOptions& opts = {}) const {
        return integrate(
                   [](const Quaternion&, const Quaternion& ds, double) {
                       return Quaternion(ds.norm());
                   },
                   opts)
            .re();
    }

    /// Largest |f| over a fixed sample of quadrature nodes.
    template <class F>
    double max_norm_on_samples(F&& g, int levels = 3) const {
        double m = 0;
        for (const auto& comp : components_)
            for (const auto& arc : comp.arcs) {
                const int segs = 1 << levels;
                const auto& rule = detail::gauss_rule(arc.order);
                const double h = (arc.b - arc.a) / segs;
                for (int i = 0; i < segs; ++i)
                    for (size_t k = 0; k < rule.x.size(); ++k) {
                        const double t = arc.a + (i + 0.5 * (1 + rule.x[k])) * h;
                        m = std::max(m, g(embed(arc.pos(t))).norm());
                    }
            }
        return m;
    }

    double param_length() const {
        double s = 0;
        for (const auto& comp : components_)
            for (const auto& arc : comp.arcs) s += arc.b - arc.a;
        return s;
    }

  private:
    template <class F>
    Quaternion segment_estimate(const Arc& arc, double t0, double t1, int order, F&& f) const {
        const auto& rule = detail::gauss_rule(order);
        const double mid = 0.5 * (t0 + t1), half = 0.5 * (t1 - t0);
        Quaternion acc{};
        for (size_t k = 0; k < rule.x.size(); ++k) {
            const double t = mid + half * rule.x[k];
            const Quaternion s = embed(arc.pos(t));
            const Quaternion ds = embed_vec(arc.vel(t));
            acc += f(s, ds, t) * rule.w[k];
        }
        return acc * half;
    }

    Quaternion embed_vec(const Vec2& v) const { return Quaternion(v.x) + j_.value() * v.y; }

    void validate() const {
        if (components_.empty()) throw ParamError("contour: no components");
        const double tol_join = 1e-9;
        for (const auto& comp : components_) {
            if (comp.arcs.empty()) throw ParamError("contour: empty component");
            for (const auto& arc : comp.arcs) {
                if (!(arc.a < arc.b)) throw ParamError("contour: empty parameter interval");
                for (int k = 0; k <= 32; ++k) {
                    const double t = arc.a + (arc.b - arc.a) * k / 32.0;
                    if (arc.vel(t).norm() < 1e-12)
                        throw ParamError("contour: vanishing tangent on an arc");
                }
            }
            const size_t n = comp.arcs.size();
            for (size_t i = 0; i + 1 < n; ++i) check_joint(comp.arcs[i], comp.arcs[i + 1], tol_join);
            if (comp.closed) check_joint(comp.arcs[n - 1], comp.arcs[0], tol_join);
            check_simple(comp);
        }
    }

    static void check_joint(const Arc& first, const Arc& second, double tol) {
        const Vec2 pe = first.pos(first.b), ps = second.pos(second.a);
        if ((pe - ps).norm() > tol * (1 + pe.norm()))
            throw ParamError("contour: arcs do not chain");
        const Vec2 v1 = first.vel(first.b), v2 = second.vel(second.a);
        // corner admissibility: the tangent ratio may not lie on (-inf, 0]
        const double dot = v1.x * v2.x + v1.y * v2.y;
        const double cross = v1.x * v2.y - v1.y * v2.x;
        const double angle = std::atan2(cross, dot);
        if (std::abs(std::abs(angle) - 3.14159265358979323846) <= 1e-9)
            throw ParamError("contour: inadmissible corner (tangent reversal)");
    }

    static bool segments_cross(const Vec2& a, const Vec2& b, const Vec2& c, const Vec2& d) {
        auto orient = [](const Vec2& p, const Vec2& q, const Vec2& r) {
            return (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x);
        };
        const double o1 = orient(a, b, c), o2 = orient(a, b, d);
        const double o3 = orient(c, d, a), o4 = orient(c, d, b);
        return ((o1 > 0) != (o2 > 0)) && ((o3 > 0) != (o4 > 0));
    }

    static std::vector<Vec2> sample_polyline(const Component& comp) {
        std::vector<Vec2> pts;
        for (const auto& arc : comp.arcs)
            for (int k = 0; k < 64; ++k)
                pts.push_back(arc.pos(arc.a + (arc.b - arc.a) * k / 64.0));
        if (!comp.closed) pts.push_back(comp.arcs.back().pos(comp.arcs.back().b));
        return pts;
    }

    /// Sampled simplicity check: proper crossings between non-adjacent
    /// chords of a 64-per-arc sample polyline.
    void check_simple(const Component& comp) const {
        const auto pts = sample_polyline(comp);
        const size_t n = pts.size();
        const size_t segs = comp.closed ? n : n - 1;
        for (size_t i = 0; i < segs; ++i)
            for (size_t k = i + 2; k < segs; ++k) {
                if (comp.closed && i == 0 && k == segs - 1) continue; // wrap adjacency
                if (segments_cross(pts[i], pts[(i + 1) % n], pts[k], pts[(k + 1) % n]))
                    throw ParamError("contour: self-intersection detected");
            }
    }

    std::vector<Component> components_;
    UnitImaginary j_;
};

/// Line integral with the slice measure on the right of the integrand:
/// sum over arcs of int g(gamma(t)) (-j) gamma'(t) dt.
template <class G>
Quaternion integrate_ds_j(G&& g, const Contour& contour, const QuadratureOptions& opts = {}) {
    const Quaternion mj = -contour.slice_unit().value();
    return contour.integrate(
        [&g, mj](const Quaternion& s, const Quaternion& ds, double) { return g(s) * mj * ds; },
        opts);
}

/// Returns (|int g ds_j|, |Gamma| * max |g| on samples); the first never
/// exceeds the second beyond quadrature noise.
template <class G>
std::pair<double, double> ml_bound_check(G&& g, const Contour& contour,
                                         const QuadratureOptions& opts = {}) {
    const double lhs = integrate_ds_j(g, contour, opts).norm();
    const double rhs = contour.length(opts) * contour.max_norm_on_samples(g);
    return {lhs, rhs};
}

/// dist([w], Gamma): infimum of the sphere-point distance over the curve,
/// coarse parameter scan refined by golden-section around the best sample.
inline double dist_sphere_curve(const QSphere& S, const Contour& contour, int scan = 256) {
    double best = std::numeric_limits<double>::infinity();
    const double gr = 0.6180339887498949;
    for (const auto& comp : contour.components())
        for (const auto& arc : comp.arcs) {
            auto d = [&](double t) {
                return dist_sphere_point(S, contour.embed(arc.pos(t)));
            };
            const double h = (arc.b - arc.a) / scan;
            double tbest = arc.a;
            double dbest = d(tbest);
            for (int k = 1; k <= scan; ++k) {
                const double t = arc.a + k * h;
                const double dk = d(t);
                if (dk < dbest) {
                    dbest = dk;
                    tbest = t;
                }
            }
            double lo = std::max(arc.a, tbest - 1.5 * h), hi = std::min(arc.b, tbest + 1.5 * h);
            double a = hi - gr * (hi - lo), b = lo + gr * (hi - lo);
            double fa = d(a), fb = d(b);
            for (int it = 0; it < 80; ++it) {
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
            best = std::min({best, dbest, d(0.5 * (lo + hi))});
        }
    return best;
}

inline double dist_sphere_curve(const Quaternion& w, const Contour& contour, int scan = 256) {
    return dist_sphere_curve(sphere_of(w), contour, scan);
}

} // namespace slicereg
