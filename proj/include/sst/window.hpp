#ifndef SST_WINDOW_HPP
#define SST_WINDOW_HPP

#include <string>

#include "sst/core.hpp"
#include "sst/quadrature.hpp"

namespace sst {

enum class WindowFamily { truncated_gaussian, raised_cosine };

inline std::string to_string(WindowFamily f) {
  return f == WindowFamily::truncated_gaussian ? "truncated_gaussian" : "raised_cosine";
}

/// How a window's amplitude is fixed.
enum class WindowGain {
  unit,       ///< shape as defined, G(0) = 1
  inversion,  ///< scaled so that G(0) = int |G|^2, making window_energy the STFT inversion constant
};

/// Even, C1, compactly supported analysis window on [-half_width, half_width].
struct WindowSpec {
  WindowFamily family = WindowFamily::truncated_gaussian;
  double half_width = 0.64;
  double sigma_ratio = 8.0;  ///< truncated Gaussian: std = half_width / sigma_ratio
  double gain = 1.0;

  /// Gaussian with std half_width / sigma_ratio, minus a quadratic that
  /// brings value and slope to zero at the support edge.
  static WindowSpec truncated_gaussian(double half_width = 0.64, double sigma_ratio = 8.0,
                                       WindowGain g = WindowGain::inversion) {
    if (!(sigma_ratio > 0.0)) throw ParameterError("window sigma_ratio must be positive");
    return finish({WindowFamily::truncated_gaussian, half_width, sigma_ratio, 1.0}, g);
  }

  /// cos^2(pi t / (2 half_width)).
  static WindowSpec raised_cosine(double half_width = 1.0, WindowGain g = WindowGain::inversion) {
    return finish({WindowFamily::raised_cosine, half_width, 0.0, 1.0}, g);
  }

  double sigma() const noexcept { return half_width / sigma_ratio; }

  double value(double t) const {
    if (!(std::abs(t) < half_width)) return 0.0;
    if (family == WindowFamily::raised_cosine) {
      const double c = std::cos(pi * t / (2.0 * half_width));
      return gain * c * c;
    }
    const double s2 = sigma() * sigma();
    const double edge = std::exp(-half_width * half_width / (2.0 * s2));
    return gain * (std::exp(-t * t / (2.0 * s2)) -
                   edge * (1.0 + (half_width * half_width - t * t) / (2.0 * s2)));
  }

  double derivative(double t) const {
    if (!(std::abs(t) < half_width)) return 0.0;
    if (family == WindowFamily::raised_cosine) {
      return -gain * pi / (2.0 * half_width) * std::sin(pi * t / half_width);
    }
    const double s2 = sigma() * sigma();
    const double edge = std::exp(-half_width * half_width / (2.0 * s2));
    return gain * (-t / s2) * (std::exp(-t * t / (2.0 * s2)) - edge);
  }

 private:
  static WindowSpec finish(WindowSpec w, WindowGain g);
};

/// int |G(t)|^2 dt.
inline double window_energy(const WindowSpec& w) {
  auto sq = [&w](double t) {
    const double v = w.value(t);
    return v * v;
  };
  return integrate_adaptive(sq, -w.half_width, 0.0) + integrate_adaptive(sq, 0.0, w.half_width);
}

inline WindowSpec WindowSpec::finish(WindowSpec w, WindowGain g) {
  if (!(w.half_width > 0.0) || !std::isfinite(w.half_width)) {
    throw ParameterError("window half_width must be positive");
  }
  if (g == WindowGain::inversion) w.gain = w.value(0.0) / window_energy(w);
  return w;
}

}  // namespace sst

#endif  // SST_WINDOW_HPP
