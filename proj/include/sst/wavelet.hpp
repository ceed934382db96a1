#ifndef SST_WAVELET_HPP
#define SST_WAVELET_HPP

#include <string>

#include "sst/core.hpp"
#include "sst/quadrature.hpp"

namespace sst {

enum class WaveletFamily {
  bump,           ///< C-infinity bump, e * exp(-1 / (1 - s^2)), s = (z - 1) / delta
  box_surrogate,  ///< indicator of [1 - delta, 1 + delta]; constants only
};

inline std::string to_string(WaveletFamily f) {
  return f == WaveletFamily::bump ? "bump" : "box_surrogate";
}

namespace detail {

inline double unit_bump(double s) {
  if (!(std::abs(s) < 1.0)) return 0.0;
  return std::exp(1.0 - 1.0 / (1.0 - s * s));
}

/// Radius holding 99.9% of the L1 mass of the inverse Fourier transform of
/// unit_bump (half-width 1). Computed once.
inline double unit_bump_support_radius() {
  static const double radius = [] {
    constexpr int n_nodes = 1200;
    constexpr double tau_max = 60.0;
    constexpr double dtau = 0.01;
    constexpr double kept_mass = 0.999;
    // midpoint rule on (0, 1); integrand vanishes to all orders at s = 1
    std::vector<double> nodes(n_nodes), weights(n_nodes);
    for (int i = 0; i < n_nodes; ++i) {
      nodes[i] = (i + 0.5) / n_nodes;
      weights[i] = 2.0 * unit_bump(nodes[i]) / n_nodes;
    }
    const auto n_tau = static_cast<std::size_t>(tau_max / dtau) + 1;
    std::vector<double> env(n_tau);
    double total = 0.0;
    for (std::size_t j = 0; j < n_tau; ++j) {
      const double tau = static_cast<double>(j) * dtau;
      double v = 0.0;
      for (int i = 0; i < n_nodes; ++i) v += weights[i] * std::cos(two_pi * nodes[i] * tau);
      env[j] = std::abs(v);
      total += env[j];
    }
    double tail = 0.0;
    for (std::size_t j = n_tau; j-- > 0;) {
      tail += env[j];
      if (tail > (1.0 - kept_mass) * total) return static_cast<double>(j + 1) * dtau;
    }
    return tau_max;
  }();
  return radius;
}

}  // namespace detail

/// Analytic mother wavelet specified by its Fourier transform, supported in
/// [1 - delta, 1 + delta].
struct WaveletSpec {
  WaveletFamily family = WaveletFamily::bump;
  double delta = 0.25;

  static WaveletSpec bump(double delta = 0.25) { return checked({WaveletFamily::bump, delta}); }
  static WaveletSpec box_surrogate(double delta) {
    return checked({WaveletFamily::box_surrogate, delta});
  }

  static WaveletSpec checked(WaveletSpec w) {
    if (!(w.delta > 0.0 && w.delta < 1.0)) {
      throw ParameterError("wavelet delta must lie in (0, 1)");
    }
    return w;
  }

  /// psi_hat(z), real and non-negative.
  double psi_hat(double z) const {
    const double s = (z - 1.0) / delta;
    if (family == WaveletFamily::bump) return detail::unit_bump(s);
    return std::abs(s) <= 1.0 ? 1.0 : 0.0;
  }

  bool is_smooth() const noexcept { return family == WaveletFamily::bump; }

  /// Time radius, in units of the scale, holding 99.9% of |psi|'s L1 mass.
  /// Cells closer than radius * a to an endpoint are boundary-affected.
  double support_radius() const {
    if (!is_smooth()) throw ParameterError("box surrogate wavelet has no finite time support");
    return detail::unit_bump_support_radius() / delta;
  }
};

/// int_0^inf psi_hat(z) / z dz, the CWT inversion constant.
inline double admissibility_constant(const WaveletSpec& w) {
  const double lo = 1.0 - w.delta;
  const double hi = 1.0 + w.delta;
  return integrate_adaptive([&w](double z) { return w.psi_hat(z) / z; }, lo, hi);
}

}  // namespace sst

#endif  // SST_WAVELET_HPP
