#pragma once

#include <cmath>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include "slicereg/quaternion.hpp"

namespace slicereg {

/// Which side the slice unit multiplies the odd component on:
/// left form f0 + j f1, right form f0 + f1 j.
enum class Chirality { left, right };

/// An axially symmetric open subset of H, described by its half-plane
/// section { (u, v) : v >= 0 }.  Membership depends only on (u, |v|).
class AxiallySymmetricDomain {
  public:
    enum class Kind { everywhere, ball, shell, box, custom };

    AxiallySymmetricDomain() = default;

    static AxiallySymmetricDomain everywhere() { return {}; }

    /// |q - c| < r for real center c.
    static AxiallySymmetricDomain ball(double center, double radius) {
        if (radius <= 0) throw ParamError("domain ball: radius must be positive");
        AxiallySymmetricDomain d;
        d.kind_ = Kind::ball;
        d.p0_ = center;
        d.p1_ = radius;
        d.bbox_ = {center - radius, center + radius, radius};
        return d;
    }

    /// r1 < |q| < r2.
    static AxiallySymmetricDomain shell(double r1, double r2) {
        if (!(0 <= r1 && r1 < r2)) throw ParamError("domain shell: need 0 <= r1 < r2");
        AxiallySymmetricDomain d;
        d.kind_ = Kind::shell;
        d.p0_ = r1;
        d.p1_ = r2;
        d.bbox_ = {-r2, r2, r2};
        return d;
    }

    /// u in (u0, u1), |v| < vmax.
    static AxiallySymmetricDomain box(double u0, double u1, double vmax) {
        if (!(u0 < u1 && vmax > 0)) throw ParamError("domain box: empty");
        AxiallySymmetricDomain d;
        d.kind_ = Kind::box;
        d.p0_ = u0;
        d.p1_ = u1;
        d.p2_ = vmax;
        d.bbox_ = {u0, u1, vmax};
        return d;
    }

    static AxiallySymmetricDomain custom(std::function<bool(double, double)> member,
                                         double u0, double u1, double vmax) {
        AxiallySymmetricDomain d;
        d.kind_ = Kind::custom;
        d.member_ = std::move(member);
        d.bbox_ = {u0, u1, vmax};
        return d;
    }

    Kind kind() const { return kind_; }
    bool is_everywhere() const { return kind_ == Kind::everywhere; }
    bool bounded() const { return kind_ != Kind::everywhere; }

    bool contains(double u, double v) const {
        v = std::abs(v);
        switch (kind_) {
            case Kind::everywhere: return true;
            case Kind::ball: return std::hypot(u - p0_, v) < p1_;
            case Kind::shell: {
                const double r = std::hypot(u, v);
                return p0_ < r && r < p1_;
            }
            case Kind::box: return p0_ < u && u < p1_ && v < p2_;
            case Kind::custom: return member_(u, v);
        }
        return false;
    }
    bool contains(const Quaternion& q) const { return contains(q.re(), q.im_norm()); }

    /// (u_min, u_max, v_max) of the section; v ranges over (-v_max, v_max).
    struct BBox {
        double u0, u1, vmax;
    };
    BBox bbox() const { return bbox_; }

    /// Parameters of ball/shell kinds, used by boundary and area routines.
    double param0() const { return p0_; }
    double param1() const { return p1_; }

    AxiallySymmetricDomain intersect(const AxiallySymmetricDomain& o) const {
        if (is_everywhere()) return o;
        if (o.is_everywhere()) return *this;
        const double u0 = std::max(bbox_.u0, o.bbox_.u0);
        const double u1 = std::min(bbox_.u1, o.bbox_.u1);
        const double vm = std::min(bbox_.vmax, o.bbox_.vmax);
        if (!(u0 < u1 && vm > 0)) throw DomainError("domain intersection is empty");
        auto a = *this;
        auto b = o;
        return custom([a, b](double u, double v) { return a.contains(u, v) && b.contains(u, v); },
                      u0, u1, vm);
    }

  private:
    Kind kind_ = Kind::everywhere;
    double p0_ = 0, p1_ = 0, p2_ = 0;
    std::function<bool(double, double)> member_;
    BBox bbox_{-std::numeric_limits<double>::infinity(), std::numeric_limits<double>::infinity(),
               std::numeric_limits<double>::infinity()};
};

/// Smoothness tag; kInfinitelySmooth stands for C-infinity.
inline constexpr int kInfinitelySmooth = -1;

/// A slice function f(u + j v) = f0(u, v) + j f1(u, v) (left form) or
/// f0(u, v) + f1(u, v) j (right form), with f0 even and f1 odd in v.
///
/// Evaluation anywhere in H goes through the half-plane coordinates
/// (Re q, |Im q|) and the slice unit of q; this is exactly the
/// reconstruction the representation formula guarantees, so a
/// SliceFunction is determined by its components alone.
class SliceFunction {
  public:
    using Component = std::function<Quaternion(double, double)>;

    SliceFunction() : SliceFunction(constant(Quaternion{})) {}

    SliceFunction(Component f0, Component f1, Chirality form = Chirality::left,
                  AxiallySymmetricDomain domain = {}, int smoothness = kInfinitelySmooth)
        : f0_(std::move(f0)), f1_(std::move(f1)), form_(form), domain_(std::move(domain)),
          smoothness_(smoothness) {}

    /// Polynomial with coefficients on the side opposite to the slice unit:
    /// sum q^n a_n in left form, sum a_n q^n in right form.
    static SliceFunction polynomial(std::vector<Quaternion> coeffs,
                                    Chirality form = Chirality::left) {
        auto f0 = [coeffs](double u, double v) {
            Quaternion acc{};
            double zx = 1.0, zy = 0.0; // (u + i v)^n, real/imag
            for (const auto& c : coeffs) {
                acc += zx * c;
                const double nx = zx * u - zy * v;
                zy = zx * v + zy * u;
                zx = nx;
            }
            return acc;
        };
        auto f1 = [coeffs](double u, double v) {
            Quaternion acc{};
            double zx = 1.0, zy = 0.0;
            for (const auto& c : coeffs) {
                acc += zy * c;
                const double nx = zx * u - zy * v;
                zy = zx * v + zy * u;
                zx = nx;
            }
            return acc;
        };
        return SliceFunction(std::move(f0), std::move(f1), form);
    }

    static SliceFunction constant(Quaternion a, Chirality form = Chirality::left) {
        return SliceFunction([a](double, double) { return a; },
                             [](double, double) { return Quaternion{}; }, form);
    }

    static SliceFunction identity(Chirality form = Chirality::left) {
        return SliceFunction([](double u, double) { return Quaternion(u); },
                             [](double, double v) { return Quaternion(v); }, form);
    }

    /// q -> conj(q); not slice hyperholomorphic, useful as a test subject.
    static SliceFunction conjugate_identity(Chirality form = Chirality::left) {
        return SliceFunction([](double u, double) { return Quaternion(u); },
                             [](double, double v) { return Quaternion(-v); }, form);
    }

    /// Recovers components from pointwise values on the reference slice:
    /// f0 = (F(p) + F(pbar))/2 and f1 the matching odd part.  Faithful when
    /// F is (the restriction of) a slice function.
    static SliceFunction from_values(std::function<Quaternion(Quaternion)> F, UnitImaginary jref,
                                     Chirality form = Chirality::left,
                                     AxiallySymmetricDomain domain = {}) {
        const Quaternion j = jref.value();
        auto f0 = [F, j](double u, double v) {
            return (F(Quaternion(u) + j * v) + F(Quaternion(u) - j * v)) * 0.5;
        };
        Component f1;
        if (form == Chirality::left) {
            f1 = [F, j](double u, double v) {
                return j * (F(Quaternion(u) + j * v) - F(Quaternion(u) - j * v)) * (-0.5);
            };
        } else {
            f1 = [F, j](double u, double v) {
                return (F(Quaternion(u) + j * v) - F(Quaternion(u) - j * v)) * j * (-0.5);
            };
        }
        return SliceFunction(std::move(f0), std::move(f1), form, std::move(domain));
    }

    Quaternion f0(double u, double v) const { return f0_(u, v); }
    Quaternion f1(double u, double v) const { return f1_(u, v); }
    Chirality chirality() const { return form_; }
    const AxiallySymmetricDomain& domain() const { return domain_; }
    int smoothness() const { return smoothness_; }

    SliceFunction restricted_to(AxiallySymmetricDomain d) const {
        return SliceFunction(f0_, f1_, form_, std::move(d), smoothness_);
    }

    Quaternion operator()(const Quaternion& q) const {
        const double u = q.re();
        const double v = q.im_norm();
        if (!domain_.contains(u, v)) throw DomainError("SliceFunction: point outside domain");
        if (v == 0.0) return f0_(u, 0.0);
        const Quaternion jq = q.im() * (1.0 / v);
        if (form_ == Chirality::left) return f0_(u, v) + jq * f1_(u, v);
        return f0_(u, v) + f1_(u, v) * jq;
    }

  private:
    Component f0_, f1_;
    Chirality form_ = Chirality::left;
    AxiallySymmetricDomain domain_;
    int smoothness_ = kInfinitelySmooth;
};

namespace detail {

inline void require_same_form(const SliceFunction& f, const SliceFunction& g, Chirality want,
                              const char* who) {
    if (f.chirality() != want || g.chirality() != want)
        throw ParamError(std::string(who) + ": operands must both use the matching form");
}

} // namespace detail

/// Left slice product: components (f0 g0 - f1 g1, f0 g1 + f1 g0),
/// quaternion products taken in that order.
inline SliceFunction star_left(const SliceFunction& f, const SliceFunction& g) {
    detail::require_same_form(f, g, Chirality::left, "star_left");
    auto dom = f.domain().intersect(g.domain());
    auto h0 = [f, g](double u, double v) {
        return f.f0(u, v) * g.f0(u, v) - f.f1(u, v) * g.f1(u, v);
    };
    auto h1 = [f, g](double u, double v) {
        return f.f0(u, v) * g.f1(u, v) + f.f1(u, v) * g.f0(u, v);
    };
    return SliceFunction(std::move(h0), std::move(h1), Chirality::left, std::move(dom));
}

/// Right slice product; same component algebra in right form.
inline SliceFunction star_right(const SliceFunction& f, const SliceFunction& g) {
    detail::require_same_form(f, g, Chirality::right, "star_right");
    auto dom = f.domain().intersect(g.domain());
    auto h0 = [f, g](double u, double v) {
        return f.f0(u, v) * g.f0(u, v) - f.f1(u, v) * g.f1(u, v);
    };
    auto h1 = [f, g](double u, double v) {
        return f.f0(u, v) * g.f1(u, v) + f.f1(u, v) * g.f0(u, v);
    };
    return SliceFunction(std::move(h0), std::move(h1), Chirality::right, std::move(dom));
}

/// Pointwise star-inverse: solves f star g = 1 for g's components.
/// Throws PoleError where the symmetrised denominator is singular.
inline SliceFunction star_inverse(const SliceFunction& f) {
    auto solve = [f](double u, double v) -> std::pair<Quaternion, Quaternion> {
        const Quaternion a = f.f0(u, v), b = f.f1(u, v);
        const double na = a.norm(), nb = b.norm();
        if (na < 1e-14 && nb < 1e-14) throw PoleError("star_inverse: zero function value");
        if (na >= nb) {
            const Quaternion ai = inverse(a);
            const Quaternion den = a + b * ai * b;
            if (den.norm() < 1e-300) throw PoleError("star_inverse: singular symbol");
            const Quaternion g0 = inverse(den);
            return {g0, -(ai * b * g0)};
        }
        const Quaternion bi = inverse(b);
        const Quaternion den = a * bi * a + b;
        if (den.norm() < 1e-300) throw PoleError("star_inverse: singular symbol");
        const Quaternion g1 = -inverse(den);
        return {-(bi * a * g1), g1};
    };
    auto g0 = [solve](double u, double v) { return solve(u, v).first; };
    auto g1 = [solve](double u, double v) { return solve(u, v).second; };
    return SliceFunction(std::move(g0), std::move(g1), f.chirality(), f.domain());
}

/// num star den^{-star}; the rational shapes the star-algebra produces.
inline SliceFunction star_rational(std::vector<Quaternion> num, std::vector<Quaternion> den,
                                   Chirality form = Chirality::left) {
    auto n = SliceFunction::polynomial(std::move(num), form);
    auto d = SliceFunction::polynomial(std::move(den), form);
    return form == Chirality::left ? star_left(n, star_inverse(d))
                                   : star_right(n, star_inverse(d));
}

inline double default_fd_step(const Quaternion& q) { return 1e-5 * std::max(1.0, q.norm()); }

/// Slice derivative by central difference along the real axis of the
/// slice through q (the stored default slice when q is real):
/// (f(q+h) - f(q-h)) / (2h).
inline Quaternion slice_derivative(const SliceFunction& f, const Quaternion& q, double h = 0.0) {
    if (h <= 0.0) h = default_fd_step(q);
    return (f(q + Quaternion(h)) - f(q - Quaternion(h))) * (1.0 / (2.0 * h));
}

/// Residual of the Cauchy-Riemann system on the components at (u, v):
/// max(|d_v f0 + d_u f1|, |d_u f0 - d_v f1|) by central differences.
/// Near zero iff f is slice hyperholomorphic near the point.
inline double cr_residual(const SliceFunction& f, double u, double v, double h = 1e-5) {
    const auto& dom = f.domain();
    if (!(dom.contains(u - h, v) && dom.contains(u + h, v) && dom.contains(u, v - h) &&
          dom.contains(u, v + h)))
        throw DomainError("cr_residual: stencil leaves the domain");
    const Quaternion du_f0 = (f.f0(u + h, v) - f.f0(u - h, v)) * (1.0 / (2 * h));
    const Quaternion dv_f0 = (f.f0(u, v + h) - f.f0(u, v - h)) * (1.0 / (2 * h));
    const Quaternion du_f1 = (f.f1(u + h, v) - f.f1(u - h, v)) * (1.0 / (2 * h));
    const Quaternion dv_f1 = (f.f1(u, v + h) - f.f1(u, v - h)) * (1.0 / (2 * h));
    return std::max((dv_f0 + du_f1).norm(), (du_f0 - dv_f1).norm());
}

} // namespace slicereg
