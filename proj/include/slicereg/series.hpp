#pragma once

#include <complex>
#include <functional>
#include <optional>
#include <utility>
#include <vector>

#include "slicereg/cauchy_kernel.hpp"
#include "slicereg/contour.hpp"
#include "slicereg/slice_function.hpp"

namespace slicereg {

/// Pseudo-distance built from the characteristic polynomial of [q0]:
/// d(q, q0) = sqrt(|q^2 - 2 Re(q0) q + |q0|^2|), the modulus taken under
/// the root so the value is real.  Vanishes exactly on [q0]; for real q0
/// it reduces to |q - q0|.
inline double cassini_distance(const Quaternion& q, const Quaternion& q0) {
    return std::sqrt(detail::characteristic(q0, q).norm());
}

/// Cassini ball (r1 = 0) or shell { r1 < d(q, q0) < r2 }.
struct CassiniSet {
    Quaternion q0;
    double r1 = 0.0;
    double r2 = 0.0;

    bool contains(const Quaternion& q) const {
        const double d = cassini_distance(q, q0);
        return r1 < d && d < r2;
    }
    bool empty() const { return !(r1 < r2); }
};

/// Two-sided spherical Laurent series at a center q0:
///   sum over n of Q(q)^n (c_{2n} + (q - q0) c_{2n+1}),
/// where Q is the characteristic polynomial of [q0].  Coefficients are
/// stored on a finite index window [n_min, n_max].  For real q0 the sum
/// collapses to the ordinary (Laurent/power) series sum (q-q0)^m c_m.
class SphericalLaurentSeries {
  public:
    SphericalLaurentSeries(Quaternion center, int n_min, std::vector<Quaternion> coeffs)
        : q0_(center), n_min_(n_min), c_(std::move(coeffs)) {
        if (c_.empty()) throw ParamError("series: empty coefficient window");
    }

    const Quaternion& center() const { return q0_; }
    int n_min() const { return n_min_; }
    int n_max() const { return n_min_ + static_cast<int>(c_.size()) - 1; }

    Quaternion coeff(int m) const {
        if (m < n_min() || m > n_max()) return {};
        return c_[m - n_min_];
    }

    /// Windowed evaluation in the stated grouping.  Negative shells require
    /// q off [q0].
    Quaternion operator()(const Quaternion& q) const {
        const Quaternion Q = detail::characteristic(q0_, q);
        const int shell_lo = floor_div(n_min(), 2);
        const int shell_hi = floor_div(n_max(), 2);
        Quaternion Qinv{};
        if (shell_lo < 0) Qinv = inverse(Q); // throws on [q0]
        // Q^{shell_lo}
        Quaternion power{1};
        for (int k = 0; k < std::abs(shell_lo); ++k) power = power * (shell_lo < 0 ? Qinv : Q);
        const Quaternion lin = q - q0_;
        Quaternion acc{};
        for (int n = shell_lo; n <= shell_hi; ++n) {
            acc += power * (coeff(2 * n) + lin * coeff(2 * n + 1));
            power = power * Q;
        }
        return acc;
    }

    /// Evaluation restricted to the convergence shell; DomainError outside.
    Quaternion eval_on_shell(const Quaternion& q) const {
        const auto [r1, r2] = convergence_radii();
        const double d = cassini_distance(q, q0_);
        if (!(r1 < d && d < r2))
            throw DomainError("series: point outside the convergence shell");
        return (*this)(q);
    }

    /// (r1, r2) from the coefficient tails: r1 = limsup |c_{-n}|^{1/n} and
    /// 1/r2 = limsup |c_n|^{1/n}, estimated as the maximum over the outer
    /// half of the stored window.  A tail whose root sequence is still
    /// growing at the window edge is flagged divergent (r2 = 0 / r1 = inf).
    std::pair<double, double> convergence_radii() const {
        const auto tail = [&](bool positive) -> std::pair<double, double> {
            // returns (max root over outer half, growth ratio of root seq)
            std::vector<double> roots;
            for (int m = positive ? 1 : -1; m >= n_min() && m <= n_max();
                 m += positive ? 1 : -1) {
                const double nrm = coeff(m).norm();
                const int n = std::abs(m);
                if (nrm > 0) roots.push_back(std::pow(nrm, 1.0 / n));
                else roots.push_back(0.0);
            }
            if (roots.empty()) return {0.0, 1.0};
            double mx = 0;
            const size_t half = roots.size() / 2;
            for (size_t i = half; i < roots.size(); ++i) mx = std::max(mx, roots[i]);
            if (roots.size() < 4) {
                for (double r : roots) mx = std::max(mx, r);
                return {mx, 1.0};
            }
            double early = 0, late = 0;
            const size_t q4 = roots.size() / 4;
            for (size_t i = roots.size() - 2 * q4; i < roots.size() - q4; ++i)
                early = std::max(early, roots[i]);
            for (size_t i = roots.size() - q4; i < roots.size(); ++i)
                late = std::max(late, roots[i]);
            const double growth = early > 0 ? late / early : (late > 0 ? 2.0 : 1.0);
            return {mx, growth};
        };
        const auto [neg_root, neg_growth] = tail(false);
        const auto [pos_root, pos_growth] = tail(true);
        double r1 = neg_root;
        double r2 = pos_root > 0 ? 1.0 / pos_root : std::numeric_limits<double>::infinity();
        if (neg_growth > 1.15) r1 = std::numeric_limits<double>::infinity();
        if (pos_growth > 1.15) r2 = 0.0;
        return {r1, r2};
    }

    CassiniSet convergence_domain() const {
        const auto [r1, r2] = convergence_radii();
        return {q0_, r1, r2};
    }

  private:
    static int floor_div(int a, int b) { return (a >= 0) ? a / b : -((-a + b - 1) / b); }

    Quaternion q0_;
    int n_min_;
    std::vector<Quaternion> c_;
};

inline Quaternion eval_series(const SphericalLaurentSeries& s, const Quaternion& q) {
    return s(q);
}

inline std::pair<double, double> convergence_radii(const SphericalLaurentSeries& s) {
    return s.convergence_radii();
}

/// Laurent coefficients of f at a real center by slice-circle
/// orthogonality: f_n = (1/2pi) int_{|s-alpha|=rho} (s-alpha)^{-n-1} ds_j f(s).
template <class F>
SphericalLaurentSeries laurent_coefficients(F&& f, double alpha, const UnitImaginary& j,
                                            double rho, int n_min, int n_max,
                                            const QuadratureOptions& quad = {1e-12, 1e-12, 20,
                                                                             -1}) {
    if (!(rho > 0) || n_min > n_max) throw ParamError("laurent_coefficients: bad window");
    const Contour circle = Contour::circle(SlicePoint(alpha, 0, j), rho, j, 24);
    const Quaternion mj = -j.value();
    const Quaternion a(alpha);
    std::vector<Quaternion> coeffs;
    coeffs.reserve(n_max - n_min + 1);
    for (int n = n_min; n <= n_max; ++n) {
        const Quaternion integral = circle.integrate(
            [&](const Quaternion& s, const Quaternion& ds, double) {
                const Quaternion z = s - a;
                Quaternion power{1};
                const Quaternion base = (n + 1) >= 0 ? inverse(z) : z;
                for (int k = 0; k < std::abs(n + 1); ++k) power = power * base;
                return power * (mj * ds) * f(s);
            },
            quad);
        coeffs.push_back(integral * (1.0 / (2.0 * 3.14159265358979323846)));
    }
    return SphericalLaurentSeries(Quaternion(alpha), n_min, std::move(coeffs));
}

/// The residue of f at a real isolated singularity: the n = -1 Laurent
/// coefficient.
template <class F>
Quaternion residue_at_real(F&& f, double alpha, const UnitImaginary& j, double rho,
                           const QuadratureOptions& quad = {1e-12, 1e-12, 20, -1}) {
    return laurent_coefficients(std::forward<F>(f), alpha, j, rho, -1, -1, quad).coeff(-1);
}

/// Result of classify_singularity.
struct SingularityClass {
    enum class Kind { removable, pole, essential } kind;
    /// order of the zero for removable points, order of the pole otherwise
    int order = 0;
};

/// Classifies a real isolated singularity from Laurent windows of doubling
/// width (8, 16, 32).  A classification is accepted once two consecutive
/// windows agree; steadily growing principal parts are flagged essential;
/// anything unstable raises UndecidableError.
template <class F>
SingularityClass classify_singularity(F&& f, double alpha, const UnitImaginary& j,
                                      double rho = 1.0) {
    struct WindowResult {
        bool removable;
        int most_negative; // 0 when no significant negative coefficient
        int zero_order;
        bool principal_at_edge;
    };
    auto analyze = [&](int W) -> WindowResult {
        const auto series = laurent_coefficients(f, alpha, j, rho, -W, W);
        double fscale = 0;
        for (int m = -W; m <= W; ++m)
            fscale = std::max(fscale, series.coeff(m).norm() * std::pow(rho, m));
        const double tol = 1e-9 * std::max(fscale, 1e-30);
        int most_negative = 0;
        for (int m = -W; m < 0; ++m)
            if (series.coeff(m).norm() * std::pow(rho, m) > tol) {
                most_negative = m;
                break;
            }
        int zero_order = 0;
        for (int m = 0; m <= W; ++m)
            if (series.coeff(m).norm() * std::pow(rho, m) > tol) {
                zero_order = m;
                break;
            }
        return {most_negative == 0, most_negative, zero_order, most_negative == -W};
    };

    const WindowResult w8 = analyze(8);
    const WindowResult w16 = analyze(16);
    const WindowResult w32 = analyze(32);

    if (w16.removable && w32.removable)
        return {SingularityClass::Kind::removable, w32.zero_order};
    if (!w16.removable && !w32.removable && w16.most_negative == w32.most_negative &&
        !w32.principal_at_edge)
        return {SingularityClass::Kind::pole, -w32.most_negative};
    if (w8.principal_at_edge && w16.principal_at_edge && w32.principal_at_edge)
        return {SingularityClass::Kind::essential, 0};
    throw UndecidableError("classify_singularity: window growth did not stabilise");
}

namespace detail {

/// Left C_{j0}-linear decomposition H = C_{j0} + C_{j0} j2 used by the
/// spherical coefficient extraction.
struct SliceFrame {
    Quaternion j0, j2, j3; // j3 = j0 * j2
    std::pair<std::complex<double>, std::complex<double>> split(const Quaternion& x) const {
        // components against the orthonormal frame {1, j0, j2, j3}
        auto dot = [](const Quaternion& a, const Quaternion& b) {
            return a.x0 * b.x0 + a.x1 * b.x1 + a.x2 * b.x2 + a.x3 * b.x3;
        };
        return {{dot(x, Quaternion(1)), dot(x, j0)}, {dot(x, j2), dot(x, j3)}};
    }
    Quaternion merge(std::complex<double> a, std::complex<double> b) const {
        return Quaternion(a.real()) + j0 * a.imag() + j2 * b.real() + j3 * b.imag();
    }
    static SliceFrame around(const UnitImaginary& j0u) {
        const Quaternion j0 = j0u.value();
        Quaternion seed = std::abs(j0.x1) < 0.9 ? Quaternion::e1() : Quaternion::e2();
        // orthogonalise the imaginary 3-vector against j0
        const double proj = seed.x1 * j0.x1 + seed.x2 * j0.x2 + seed.x3 * j0.x3;
        Quaternion j2 = seed - j0 * proj;
        j2 = j2 * (1.0 / j2.norm());
        return {j0, j2, j0 * j2};
    }
};

/// Least squares by column-equilibrated normal equations with partial
/// pivoting; small dense systems only.
inline std::vector<std::complex<double>> complex_lsq(
    std::vector<std::vector<std::complex<double>>>& A,
    const std::vector<std::complex<double>>& b) {
    using C = std::complex<double>;
    const size_t rows = A.size(), cols = A[0].size();
    std::vector<double> colscale(cols, 0.0);
    for (size_t c = 0; c < cols; ++c) {
        for (size_t r = 0; r < rows; ++r) colscale[c] = std::max(colscale[c], std::abs(A[r][c]));
        if (colscale[c] == 0) colscale[c] = 1;
    }
    std::vector<std::vector<C>> N(cols, std::vector<C>(cols + 1));
    for (size_t i = 0; i < cols; ++i) {
        for (size_t k = 0; k < cols; ++k) {
            C acc = 0;
            for (size_t r = 0; r < rows; ++r)
                acc += std::conj(A[r][i] / colscale[i]) * (A[r][k] / colscale[k]);
            N[i][k] = acc;
        }
        C rhs = 0;
        for (size_t r = 0; r < rows; ++r) rhs += std::conj(A[r][i] / colscale[i]) * b[r];
        N[i][cols] = rhs;
    }
    for (size_t p = 0; p < cols; ++p) {
        size_t piv = p;
        for (size_t r = p + 1; r < cols; ++r)
            if (std::abs(N[r][p]) > std::abs(N[piv][p])) piv = r;
        std::swap(N[p], N[piv]);
        if (std::abs(N[p][p]) < 1e-300) throw NonConvergenceError("complex_lsq: singular system");
        for (size_t r = p + 1; r < cols; ++r) {
            const C m = N[r][p] / N[p][p];
            for (size_t k = p; k <= cols; ++k) N[r][k] -= m * N[p][k];
        }
    }
    std::vector<C> x(cols);
    for (size_t p = cols; p-- > 0;) {
        C acc = N[p][cols];
        for (size_t k = p + 1; k < cols; ++k) acc -= N[p][k] * x[k];
        x[p] = acc / N[p][p];
    }
    for (size_t c = 0; c < cols; ++c) x[c] /= colscale[c];
    return x;
}

} // namespace detail

/// Spherical Laurent coefficients of f around a non-real center [q0],
/// extracted by least squares against the basis {Q^n, Q^n (q - q0)} from
/// samples on circles of two radii around both slice representatives
/// z0 and conj(z0) in C_{j0}.
template <class F>
SphericalLaurentSeries spherical_coefficients(F&& f, const Quaternion& q0, int shell_min,
                                              int shell_max, double sample_radius = 0.0,
                                              int samples_per_circle = 32) {
    const double v0 = q0.im_norm();
    if (v0 < 1e-9)
        throw ParamError("spherical_coefficients: center must be non-real (real centers use "
                         "laurent_coefficients)");
    if (shell_min > shell_max) throw ParamError("spherical_coefficients: bad shell window");
    const UnitImaginary j0 = slice_unit(q0);
    const auto frame = detail::SliceFrame::around(j0);
    const double r_base = sample_radius > 0 ? sample_radius : 0.45 * v0;

    std::vector<Quaternion> points;
    for (const double vc : {v0, -v0})
        for (const double r : {0.6 * r_base, r_base})
            for (int k = 0; k < samples_per_circle; ++k) {
                const double th = 2 * 3.14159265358979323846 * (k + 0.5) / samples_per_circle;
                points.push_back(Quaternion(q0.re() + r * std::cos(th)) +
                                 j0.value() * (vc + r * std::sin(th)));
            }

    const int m_lo = 2 * shell_min, m_hi = 2 * shell_max + 1;
    const size_t cols = static_cast<size_t>(m_hi - m_lo + 1);
    std::vector<std::vector<std::complex<double>>> A(points.size(),
                                                     std::vector<std::complex<double>>(cols));
    std::vector<std::complex<double>> ba(points.size()), bb(points.size());
    for (size_t i = 0; i < points.size(); ++i) {
        const Quaternion& q = points[i];
        const auto [QA, QB] = frame.split(detail::characteristic(q0, q));
        (void)QB; // Q(q) lies in C_{j0}
        const auto [LA, LB] = frame.split(q - q0);
        (void)LB;
        const std::complex<double> Q = QA, L = LA;
        std::complex<double> power = std::pow(Q, shell_min);
        for (int n = shell_min; n <= shell_max; ++n) {
            A[i][2 * (n - shell_min)] = power;
            A[i][2 * (n - shell_min) + 1] = power * L;
            power *= Q;
        }
        const auto [fa, fb] = frame.split(f(q));
        ba[i] = fa;
        bb[i] = fb;
    }
    auto Acopy = A;
    const auto xa = detail::complex_lsq(A, ba);
    const auto xb = detail::complex_lsq(Acopy, bb);

    std::vector<Quaternion> coeffs(cols);
    for (size_t c = 0; c < cols; ++c) coeffs[c] = frame.merge(xa[c], xb[c]);
    return SphericalLaurentSeries(q0, m_lo, std::move(coeffs));
}

/// Spherical order of f at the singular sphere [q0]: the smallest even n0
/// such that all coefficients below -n0 vanish; std::nullopt when the
/// principal part persists at the window edge (infinite order flag).
/// Decided from shell windows 4 and 8; instability raises UndecidableError.
template <class F>
std::optional<int> spherical_order(F&& f, const Quaternion& q0, double sample_radius = 0.0) {
    auto order_from_window = [&](int W) -> std::pair<std::optional<int>, bool> {
        const auto s = spherical_coefficients(f, q0, -W, W, sample_radius);
        double fscale = 0;
        for (int m = s.n_min(); m <= s.n_max(); ++m)
            fscale = std::max(fscale, s.coeff(m).norm());
        const double tol = 1e-7 * std::max(fscale, 1e-30);
        int most_negative = 0;
        for (int m = s.n_min(); m < 0; ++m)
            if (s.coeff(m).norm() > tol) {
                most_negative = m;
                break;
            }
        if (most_negative == 0) return {0, false};
        if (most_negative <= 2 * (-W) + 1) return {std::nullopt, true}; // at the edge
        const int n0 = 2 * ((-most_negative + 1) / 2);
        return {n0, false};
    };

    const auto [o4, edge4] = order_from_window(4);
    const auto [o8, edge8] = order_from_window(8);
    if (edge4 && edge8) return std::nullopt;
    if (!edge4 && !edge8 && o4 == o8) return o8;
    if (!edge8 && !edge4 && o4 != o8)
        throw UndecidableError("spherical_order: windows disagree");
    // one window hit the edge: trust the wider one if it is interior
    if (!edge8) return o8;
    throw UndecidableError("spherical_order: window growth did not stabilise");
}

} // namespace slicereg
