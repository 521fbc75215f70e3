#include "test_support.hpp"

#include "slicereg/rng.hpp"
#include "slicereg/slice_function.hpp"

#include <complex>

using namespace slicereg;

namespace {

const Quaternion e1 = Quaternion::e1();
const Quaternion e2 = Quaternion::e2();
const Quaternion e3 = Quaternion::e3();

std::vector<Quaternion> random_coeffs(Rng& rng, int degree) {
    std::vector<Quaternion> c(degree + 1);
    for (auto& q : c) q = rng.quaternion();
    return c;
}

/// Coefficient-convolution oracle for the star product of polynomials
/// sum q^n a_n: c_k = sum_n a_n b_{k-n}.
std::vector<Quaternion> convolve(const std::vector<Quaternion>& a,
                                 const std::vector<Quaternion>& b) {
    std::vector<Quaternion> c(a.size() + b.size() - 1);
    for (size_t i = 0; i < a.size(); ++i)
        for (size_t j = 0; j < b.size(); ++j) c[i + j] += a[i] * b[j];
    return c;
}

/// Direct right-coefficient polynomial evaluation, independent of the
/// SliceFunction component machinery.
Quaternion eval_poly(const std::vector<Quaternion>& coeffs, const Quaternion& q) {
    Quaternion acc{}, power{1};
    for (const auto& c : coeffs) {
        acc += power * c;
        power = power * q;
    }
    return acc;
}

} // namespace

TEST_CASE("evaluation through the representation formula") {
    // slice form of q^2: f0 = u^2 - v^2, f1 = 2uv
    const SliceFunction sq([](double u, double v) { return Quaternion(u * u - v * v); },
                           [](double u, double v) { return Quaternion(2 * u * v); });
    CHECK_Q_NEAR(sq(e1), Quaternion(-1), 1e-15);
    CHECK_Q_NEAR(sq(Quaternion(1) + e2), 2 * e2, 1e-15);

    const SliceFunction id = SliceFunction::identity();
    Rng rng(3);
    for (int k = 0; k < 50; ++k) {
        const Quaternion q = rng.quaternion();
        CHECK_Q_NEAR(id(q), q, 1e-14 * (1 + q.norm()));
    }

    // real points use f0 only
    CHECK(id(Quaternion(2.5)) == Quaternion(2.5));
}

TEST_CASE("polynomial evaluation matches direct powers") {
    Rng rng(17);
    for (int k = 0; k < 200; ++k) {
        const auto coeffs = random_coeffs(rng, 4);
        const SliceFunction f = SliceFunction::polynomial(coeffs);
        const Quaternion q = rng.quaternion();
        CHECK_Q_NEAR(f(q), eval_poly(coeffs, q), 1e-12 * (1 + eval_poly(coeffs, q).norm()));
    }
}

TEST_CASE("representation formula recombination is consistent") {
    Rng rng(29);
    for (int k = 0; k < 1000; ++k) {
        const auto coeffs = random_coeffs(rng, 3);
        const SliceFunction f = SliceFunction::polynomial(coeffs);
        const Quaternion q = rng.quaternion();
        const UnitImaginary j = rng.unit_imaginary();

        const double u = q.re(), v = q.im_norm();
        const Quaternion jq = v > 0 ? q.im() * (1.0 / v) : j.value();
        const Quaternion pj = Quaternion(u) + j.value() * v;
        const Quaternion recombined = (Quaternion(1) - jq * j.value()) * 0.5 * f(pj) +
                                      (Quaternion(1) + jq * j.value()) * 0.5 * f(pj.conj());
        CHECK_Q_NEAR(recombined, f(q), 1e-12 * (1 + f(q).norm()));
    }
}

TEST_CASE("component symmetry of constructors") {
    Rng rng(41);
    const SliceFunction f = SliceFunction::polynomial(random_coeffs(rng, 5));
    for (int k = 0; k < 100; ++k) {
        const double u = rng.uniform(-2, 2), v = rng.uniform(0, 2);
        CHECK_Q_NEAR(f.f0(u, -v), f.f0(u, v), 1e-13);
        CHECK_Q_NEAR(f.f1(u, -v), -f.f1(u, v), 1e-13);
    }
    CHECK(f.f1(0.7, 0.0).norm() < 1e-15);
}

TEST_CASE("star product: constants and identity") {
    Rng rng(5);
    const Quaternion a = rng.quaternion(), b = rng.quaternion();
    const auto fa = SliceFunction::constant(a);
    const auto fb = SliceFunction::constant(b);
    CHECK_Q_NEAR(star_left(fa, fb)(rng.quaternion()), a * b, 1e-14);

    const auto f = SliceFunction::polynomial(random_coeffs(rng, 3));
    const auto one = SliceFunction::constant(Quaternion(1));
    const Quaternion q = rng.quaternion();
    CHECK_Q_NEAR(star_left(f, one)(q), f(q), 1e-13);
    CHECK_Q_NEAR(star_left(one, f)(q), f(q), 1e-13);
}

TEST_CASE("star product equals coefficient convolution") {
    const std::vector<Quaternion> pa = {-e1, Quaternion(1)}; // q - e1
    const std::vector<Quaternion> pb = {-e2, Quaternion(1)}; // q - e2
    const auto expect = convolve(pa, pb);
    REQUIRE(expect.size() == 3);
    CHECK_Q_NEAR(expect[0], e3, 1e-15);
    CHECK_Q_NEAR(expect[1], -e1 - e2, 1e-15);
    CHECK_Q_NEAR(expect[2], Quaternion(1), 1e-15);

    const auto prod = star_left(SliceFunction::polynomial(pa), SliceFunction::polynomial(pb));
    Rng rng(11);
    for (int k = 0; k < 100; ++k) {
        const Quaternion q = rng.quaternion();
        CHECK_Q_NEAR(prod(q), eval_poly(expect, q), 1e-12 * (1 + q.norm_sq()));
    }

    // random-coefficient convolution cross-check
    for (int k = 0; k < 50; ++k) {
        const auto a = random_coeffs(rng, 3), b = random_coeffs(rng, 2);
        const auto ab = convolve(a, b);
        const auto sp = star_left(SliceFunction::polynomial(a), SliceFunction::polynomial(b));
        const Quaternion q = rng.quaternion();
        CHECK_Q_NEAR(sp(q), eval_poly(ab, q), 1e-11 * (1 + eval_poly(ab, q).norm()));
    }
}

TEST_CASE("star product is associative on polynomials") {
    Rng rng(53);
    for (int k = 0; k < 50; ++k) {
        const auto a = random_coeffs(rng, 2);
        const auto b = random_coeffs(rng, 3);
        const auto c = random_coeffs(rng, 2);
        const auto left = convolve(convolve(a, b), c);
        const auto right = convolve(a, convolve(b, c));
        for (size_t i = 0; i < left.size(); ++i)
            CHECK_Q_NEAR(left[i], right[i], 1e-12 * (1 + left[i].norm()));
    }
}

TEST_CASE("star_right mirrors star_left in right form") {
    Rng rng(59);
    const Quaternion a = rng.quaternion(), b = rng.quaternion();
    const auto fa = SliceFunction::constant(a, Chirality::right);
    const auto fb = SliceFunction::constant(b, Chirality::right);
    CHECK_Q_NEAR(star_right(fa, fb)(rng.quaternion()), a * b, 1e-14);

    const auto f = SliceFunction::polynomial(random_coeffs(rng, 3), Chirality::right);
    const auto one = SliceFunction::constant(Quaternion(1), Chirality::right);
    const Quaternion q = rng.quaternion();
    CHECK_Q_NEAR(star_right(f, one)(q), f(q), 1e-13);

    // left-coefficient polynomials (right form) multiply by convolution too
    const std::vector<Quaternion> pa = {-e1, Quaternion(1)};
    const std::vector<Quaternion> pb = {-e2, Quaternion(1)};
    const auto prod = star_right(SliceFunction::polynomial(pa, Chirality::right),
                                 SliceFunction::polynomial(pb, Chirality::right));
    const auto conv = convolve(pa, pb);
    for (int k = 0; k < 50; ++k) {
        const Quaternion p = rng.quaternion();
        Quaternion expect{}, power{1};
        for (const auto& cc : conv) {
            expect += cc * power; // left coefficients
            power = power * p;
        }
        CHECK_Q_NEAR(prod(p), expect, 1e-12 * (1 + expect.norm()));
    }
    CHECK_THROWS_AS(star_right(SliceFunction::identity(), one), ParamError);
}

TEST_CASE("star products of regular inputs stay regular") {
    Rng rng(61);
    const auto f = SliceFunction::polynomial(random_coeffs(rng, 3));
    const auto g = SliceFunction::polynomial(random_coeffs(rng, 2));
    const auto fg = star_left(f, g);
    for (int k = 0; k < 20; ++k) {
        const double u = rng.uniform(-1, 1), v = rng.uniform(0.2, 1.5);
        CHECK(cr_residual(fg, u, v) < 1e-6);
    }
}

TEST_CASE("star inverse and star rational") {
    Rng rng(67);
    const Quaternion s = rng.quaternion();
    const std::vector<Quaternion> lin = {-s, Quaternion(1)}; // q - s
    const auto inv = star_inverse(SliceFunction::polynomial(lin));
    const auto prod = star_left(SliceFunction::polynomial(lin), inv);
    for (int k = 0; k < 30; ++k) {
        Quaternion p = rng.quaternion(1.5);
        if (dist_sphere_point(sphere_of(p), s) < 0.2) continue;
        CHECK_Q_NEAR(prod(p), Quaternion(1), 1e-10);
    }

    const auto rat = star_rational({Quaternion(1)}, lin);
    for (int k = 0; k < 10; ++k) {
        Quaternion p = rng.quaternion(1.5);
        if (dist_sphere_point(sphere_of(p), s) < 0.2) continue;
        CHECK_Q_NEAR(rat(p), inv(p), 1e-12);
    }
    CHECK_THROWS_AS(star_inverse(SliceFunction::constant(Quaternion{}))(Quaternion(1) + e1),
                    PoleError);
}

TEST_CASE("slice derivative") {
    const auto sq = SliceFunction::polynomial({Quaternion{}, Quaternion{}, Quaternion(1)});
    const Quaternion q = Quaternion(1) + e1;
    CHECK_Q_NEAR(slice_derivative(sq, q, 1e-5), Quaternion(2) + 2 * e1, 1e-8);

    Rng rng(71);
    const auto c = SliceFunction::constant(rng.quaternion());
    CHECK(slice_derivative(c, rng.quaternion()).norm() < 1e-10);

    const auto id = SliceFunction::identity();
    CHECK_Q_NEAR(slice_derivative(id, rng.quaternion()), Quaternion(1), 1e-9);

    // analytic derivative oracle 2q on random points
    for (int k = 0; k < 50; ++k) {
        const Quaternion p = rng.quaternion();
        CHECK_Q_NEAR(slice_derivative(sq, p), 2 * p, 1e-8 * (1 + p.norm()));
    }

    // at real points the derivative does not depend on the default slice
    const auto f = SliceFunction::polynomial(random_coeffs(rng, 4));
    CHECK_Q_NEAR(slice_derivative(f, Quaternion(0.4)), slice_derivative(f, Quaternion(0.4), 2e-5),
                 1e-7);
}

TEST_CASE("Cauchy-Riemann residual") {
    const auto sq = SliceFunction::polynomial({Quaternion{}, Quaternion{}, Quaternion(1)});
    CHECK(cr_residual(sq, 1.0, 0.5) < 1e-8);

    const auto conj = SliceFunction::conjugate_identity();
    CHECK(std::abs(cr_residual(conj, 0.3, 0.9) - 2.0) < 1e-8); // symbolic oracle: exactly 2

    const auto c = SliceFunction::constant(Quaternion(2) + Quaternion::e3());
    CHECK(cr_residual(c, -1.0, 0.25) < 1e-12);
}

TEST_CASE("domain restriction raises DomainError") {
    const auto f = SliceFunction::identity().restricted_to(AxiallySymmetricDomain::ball(0, 1));
    CHECK_NOTHROW(f(Quaternion(0.5)));
    CHECK_THROWS_AS(f(Quaternion(2)), DomainError);
    CHECK_THROWS_AS(cr_residual(f, 0.999999, 0.0), DomainError);

    const auto g = SliceFunction::identity().restricted_to(AxiallySymmetricDomain::ball(5, 1));
    CHECK_THROWS_AS(star_left(f, g), DomainError);
}

TEST_CASE("from_values recovers components of slice functions") {
    Rng rng(83);
    const auto coeffs = random_coeffs(rng, 4);
    const auto f = SliceFunction::polynomial(coeffs);
    const auto g = SliceFunction::from_values([&](const Quaternion& q) { return f(q); },
                                              UnitImaginary::e2());
    for (int k = 0; k < 50; ++k) {
        const Quaternion q = rng.quaternion();
        CHECK_Q_NEAR(g(q), f(q), 1e-12 * (1 + f(q).norm()));
    }
}

TEST_CASE("maximum modulus is attained on the boundary") {
    Rng rng(97);
    for (int rep = 0; rep < 5; ++rep) {
        const auto f = SliceFunction::polynomial(random_coeffs(rng, 4));
        const Quaternion center = rng.quaternion(0.5);
        const double radius = rng.uniform(0.5, 2.0);
        double interior = 0, boundary = 0;
        for (int k = 0; k < 1000; ++k) {
            interior = std::max(interior, f(rng.in_ball(center, radius)).norm());
            boundary = std::max(boundary, f(rng.on_sphere(center, radius)).norm());
        }
        CHECK(interior <= boundary + 1e-9);
    }
}
