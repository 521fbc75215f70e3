#pragma once

#include <cstdint>
#include <random>

#include "slicereg/quaternion.hpp"

namespace slicereg {

/// Seeded random source with a fixed value mapping, so that a given seed
/// produces the same stream on every standard library (std distributions
/// are not pinned by the standard; these mappings are).
class Rng {
  public:
    explicit Rng(std::uint64_t seed = 0) : gen_(seed) {}

    std::uint64_t bits() { return gen_(); }

    /// Uniform in [0, 1).
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    /// Standard normal via Box-Muller (polar form avoided to keep the
    /// draw count per call fixed).
    double normal() {
        const double u1 = 1.0 - uniform(); // (0, 1]
        const double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925286766559 * u2);
    }

    Quaternion quaternion(double scale = 1.0) {
        return {scale * normal(), scale * normal(), scale * normal(), scale * normal()};
    }

    /// Uniform direction on the sphere of unit imaginary quaternions.
    UnitImaginary unit_imaginary() {
        double a = normal(), b = normal(), c = normal();
        double n = std::sqrt(a * a + b * b + c * c);
        while (n < 1e-12) {
            a = normal(); b = normal(); c = normal();
            n = std::sqrt(a * a + b * b + c * c);
        }
        return UnitImaginary::from_components(a / n, b / n, c / n);
    }

    /// Uniform in the solid 4-ball of the given radius.
    Quaternion in_ball(const Quaternion& center, double radius) {
        while (true) {
            const Quaternion q{uniform(-1, 1), uniform(-1, 1), uniform(-1, 1), uniform(-1, 1)};
            if (q.norm_sq() <= 1.0) return center + q * radius;
        }
    }

    /// Uniform on the 3-sphere |q - center| = radius.
    Quaternion on_sphere(const Quaternion& center, double radius) {
        while (true) {
            const Quaternion g = quaternion();
            const double n = g.norm();
            if (n > 1e-12) return center + g * (radius / n);
        }
    }

  private:
    std::mt19937_64 gen_;
};

} // namespace slicereg
