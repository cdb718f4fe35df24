#pragma once

#include <array>
#include <cmath>
#include <limits>
#include <numbers>
#include <string_view>

#include "edwsax/errors.hpp"
#include "edwsax/normal.hpp"

namespace edwsax {

//! Smoothing kernel family. Every kernel is normalized to unit mass and unit
//! variance, so a given bandwidth means the same amount of smoothing
//! regardless of the kernel shape.
enum class KernelKind {
  uniform,
  triangular,
  epanechnikov,
  biweight,
  cosine,
  normal,
  laplace,
};

inline constexpr std::array<KernelKind, 7> all_kernels = {
    KernelKind::uniform,   KernelKind::triangular, KernelKind::epanechnikov,
    KernelKind::biweight,  KernelKind::cosine,     KernelKind::normal,
    KernelKind::laplace,
};

namespace detail {
inline constexpr double sqrt3 = 1.7320508075688772;
inline constexpr double sqrt5 = 2.23606797749979;
inline constexpr double sqrt6 = 2.449489742783178;
inline constexpr double sqrt7 = 2.6457513110645907;
// Frequency of the unit-variance cosine kernel and its support radius pi/c.
inline const double cosine_c = std::sqrt(std::numbers::pi * std::numbers::pi - 8.0);
inline const double cosine_radius = std::numbers::pi / cosine_c;
}  // namespace detail

struct Kernel {
  KernelKind kind = KernelKind::epanechnikov;

  //! Half-width of the support; infinite for the normal and Laplace kernels.
  double support_radius() const {
    switch (kind) {
      case KernelKind::uniform: return detail::sqrt3;
      case KernelKind::triangular: return detail::sqrt6;
      case KernelKind::epanechnikov: return detail::sqrt5;
      case KernelKind::biweight: return detail::sqrt7;
      case KernelKind::cosine: return detail::cosine_radius;
      case KernelKind::normal:
      case KernelKind::laplace: return std::numeric_limits<double>::infinity();
    }
    return 0.0;
  }

  bool has_bounded_support() const {
    return kind != KernelKind::normal && kind != KernelKind::laplace;
  }

  //! Radius beyond which the kernel is treated as zero when scanning
  //! neighbors. Eight scaled units truncate the unbounded tails below 1e-5
  //! of their mass.
  double evaluation_radius() const {
    return has_bounded_support() ? support_radius() : 8.0;
  }

  //! Density K(u).
  double operator()(double u) const {
    const double t = std::abs(u);
    switch (kind) {
      case KernelKind::uniform:
        return t <= detail::sqrt3 ? 1.0 / (2.0 * detail::sqrt3) : 0.0;
      case KernelKind::triangular:
        return t <= detail::sqrt6 ? (1.0 - t / detail::sqrt6) / detail::sqrt6 : 0.0;
      case KernelKind::epanechnikov:
        return t <= detail::sqrt5 ? 3.0 * (1.0 - u * u / 5.0) / (4.0 * detail::sqrt5)
                                  : 0.0;
      case KernelKind::biweight: {
        if (t > detail::sqrt7) return 0.0;
        const double q = 1.0 - u * u / 7.0;
        return 15.0 * q * q / (16.0 * detail::sqrt7);
      }
      case KernelKind::cosine:
        return t <= detail::cosine_radius
                   ? detail::cosine_c / 4.0 * std::cos(detail::cosine_c * u / 2.0)
                   : 0.0;
      case KernelKind::normal:
        return normal_pdf(u);
      case KernelKind::laplace:
        return std::exp(-std::numbers::sqrt2 * t) / std::numbers::sqrt2;
    }
    return 0.0;
  }

  //! Distribution function of K, in closed form.
  double cdf(double u) const {
    switch (kind) {
      case KernelKind::uniform: {
        const double r = detail::sqrt3;
        if (u <= -r) return 0.0;
        if (u >= r) return 1.0;
        return (u + r) / (2.0 * r);
      }
      case KernelKind::triangular: {
        const double r = detail::sqrt6;
        if (u <= -r) return 0.0;
        if (u >= r) return 1.0;
        if (u <= 0.0) {
          const double d = u + r;
          return d * d / (2.0 * r * r);
        }
        const double d = r - u;
        return 1.0 - d * d / (2.0 * r * r);
      }
      case KernelKind::epanechnikov: {
        const double r = detail::sqrt5;
        if (u <= -r) return 0.0;
        if (u >= r) return 1.0;
        return 0.5 + 3.0 * u / (4.0 * r) - u * u * u / (4.0 * r * r * r);
      }
      case KernelKind::biweight: {
        const double r = detail::sqrt7;
        if (u <= -r) return 0.0;
        if (u >= r) return 1.0;
        const double r2 = r * r;
        const double u3 = u * u * u;
        return 0.5 + 15.0 / (16.0 * r) *
                         (u - 2.0 * u3 / (3.0 * r2) + u3 * u * u / (5.0 * r2 * r2));
      }
      case KernelKind::cosine: {
        if (u <= -detail::cosine_radius) return 0.0;
        if (u >= detail::cosine_radius) return 1.0;
        return 0.5 * (std::sin(detail::cosine_c * u / 2.0) + 1.0);
      }
      case KernelKind::normal:
        return normal_cdf(u);
      case KernelKind::laplace:
        return u <= 0.0 ? 0.5 * std::exp(std::numbers::sqrt2 * u)
                        : 1.0 - 0.5 * std::exp(-std::numbers::sqrt2 * u);
    }
    return 0.0;
  }

  //! Roughness ∫ K(u)^2 du, used for equivalent-kernel bandwidth rescaling.
  double l2_norm() const {
    switch (kind) {
      case KernelKind::uniform: return 1.0 / (2.0 * detail::sqrt3);
      case KernelKind::triangular: return detail::sqrt6 / 9.0;
      case KernelKind::epanechnikov: return 3.0 / (5.0 * detail::sqrt5);
      case KernelKind::biweight: return 5.0 * detail::sqrt7 / 49.0;
      case KernelKind::cosine:
        return std::numbers::pi * detail::cosine_c / 16.0;
      case KernelKind::normal: return 0.5 / std::sqrt(std::numbers::pi);
      case KernelKind::laplace: return 0.5 / std::numbers::sqrt2;
    }
    return 0.0;
  }

  std::string_view name() const {
    switch (kind) {
      case KernelKind::uniform: return "uniform";
      case KernelKind::triangular: return "triangular";
      case KernelKind::epanechnikov: return "epanechnikov";
      case KernelKind::biweight: return "biweight";
      case KernelKind::cosine: return "cosine";
      case KernelKind::normal: return "normal";
      case KernelKind::laplace: return "laplace";
    }
    return "?";
  }
};

inline Kernel kernel_from_name(std::string_view name) {
  for (KernelKind kind : all_kernels) {
    if (Kernel{kind}.name() == name) return Kernel{kind};
  }
  throw Error("unknown kernel: " + std::string(name));
}

}  // namespace edwsax
