#ifndef SST_SYNCHROSQUEEZE_HPP
#define SST_SYNCHROSQUEEZE_HPP

// Phase transform and frequency reassignment ("squeezing") in the limit of
// a vanishing smoothing kernel: each retained cell moves its weighted value
// to the output bin nearest its phase-transform frequency.

#include <limits>
#include <optional>

#include "sst/core.hpp"
#include "sst/transforms.hpp"

namespace sst {

/// Local frequency omega = Re[dT / (2 pi i T)] for |T| > epsilon.
struct PhasePlane {
  RealMatrix omega;         ///< NaN where invalid
  MaskMatrix valid;
  RealMatrix imag_residue;  ///< Im of the quotient, a diagnostic; NaN where invalid
};

inline PhasePlane phase_transform(const ComplexMatrix& values, const ComplexMatrix& derivative,
                                  double epsilon) {
  if (!values.same_shape(derivative)) {
    throw DataError("phase transform: plane and derivative shapes differ");
  }
  if (!(epsilon >= 0.0)) throw ParameterError("epsilon must be non-negative");
  constexpr double nan = std::numeric_limits<double>::quiet_NaN();
  PhasePlane p{RealMatrix(values.rows(), values.cols(), nan),
               MaskMatrix(values.rows(), values.cols(), 0),
               RealMatrix(values.rows(), values.cols(), nan)};
  const auto v = values.flat();
  const auto d = derivative.flat();
  auto om = p.omega.flat();
  auto ok = p.valid.flat();
  auto im = p.imag_residue.flat();
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!(std::abs(v[i]) > epsilon)) continue;
    const cplx q = d[i] / (cplx{0.0, two_pi} * v[i]);
    if (!std::isfinite(q.real())) continue;
    om[i] = q.real();
    im[i] = q.imag();
    ok[i] = 1;
  }
  return p;
}

inline PhasePlane phase_transform(const TimeScalePlane& plane, const TimeScalePlane& derivative,
                                  double epsilon) {
  if (plane.scales != derivative.scales || plane.times != derivative.times) {
    throw DataError("phase transform: plane and derivative grids differ");
  }
  return phase_transform(plane.values, derivative.values, epsilon);
}

inline PhasePlane phase_transform(const TimeFrequencyPlane& plane,
                                  const TimeFrequencyPlane& derivative, double epsilon) {
  if (plane.freqs != derivative.freqs || plane.times != derivative.times) {
    throw DataError("phase transform: plane and derivative grids differ");
  }
  return phase_transform(plane.values, derivative.values, epsilon);
}

/// Partition of the frequency axis into bins around increasing centres.
/// Geometric grids split at geometric means, arithmetic ones at midpoints.
struct BinEdges {
  std::vector<double> edges;  ///< size n + 1
  std::vector<double> widths;

  BinEdges(std::span<const double> centres, FrequencySpacing spacing) {
    const std::size_t n = centres.size();
    if (n < 2) throw ParameterError("frequency grid needs at least two bins");
    for (std::size_t m = 1; m < n; ++m) {
      if (!(centres[m] > centres[m - 1])) throw ParameterError("frequency grid must increase");
    }
    if (!(centres[0] > 0.0)) throw ParameterError("frequency grid must be positive");
    edges.resize(n + 1);
    const bool geo = spacing == FrequencySpacing::geometric;
    auto split = [geo](double lo, double hi) { return geo ? std::sqrt(lo * hi) : 0.5 * (lo + hi); };
    for (std::size_t m = 1; m < n; ++m) edges[m] = split(centres[m - 1], centres[m]);
    if (geo) {
      edges[0] = centres[0] * std::sqrt(centres[0] / centres[1]);
      edges[n] = centres[n - 1] * std::sqrt(centres[n - 1] / centres[n - 2]);
    } else {
      edges[0] = centres[0] - 0.5 * (centres[1] - centres[0]);
      edges[n] = centres[n - 1] + 0.5 * (centres[n - 1] - centres[n - 2]);
    }
    widths.resize(n);
    for (std::size_t m = 0; m < n; ++m) widths[m] = edges[m + 1] - edges[m];
  }

  /// Bin m with edges[m] < f <= edges[m+1]; a value on an inner edge goes to
  /// the lower bin. Empty when f falls outside the grid.
  std::optional<std::size_t> locate(double f) const {
    if (!(f > edges.front() && f <= edges.back())) return std::nullopt;
    const auto it = std::lower_bound(edges.begin() + 1, edges.end(), f);
    return static_cast<std::size_t>(it - (edges.begin() + 1));
  }
};

struct SqueezeConfig {
  double epsilon = 0.0;               ///< absolute magnitude threshold
  std::optional<double> band_limit;   ///< M: keep a (or z) in [1/M, M]; empty keeps all
  std::vector<double> target_freqs;   ///< output eta bins
  FrequencySpacing target_spacing = FrequencySpacing::geometric;
};

struct DroppedReport {
  double dropped_fraction = 0.0;  ///< dropped |weight| over all retained-cell |weight|
  std::size_t n_dropped_cells = 0;
};

struct SqueezeResult {
  TimeFrequencyPlane plane;  ///< density: sum_m plane(m, t) * width_m = reassigned mass
  DroppedReport report;
  std::vector<double> bin_widths;
};

inline double max_magnitude(const ComplexMatrix& m) { return max_abs(m.flat()); }

inline double relative_threshold(const ComplexMatrix& m, double factor = 1e-6) {
  return factor * max_magnitude(m);
}

/// 3 MAD / 0.6745 of the magnitudes of the finest-resolution row.
inline double noise_adaptive_threshold(std::span<const cplx> finest_row) {
  std::vector<double> mag(finest_row.size());
  for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(finest_row[i]);
  const double med = median(mag);
  for (auto& v : mag) v = std::abs(v - med);
  return 3.0 * median(std::move(mag)) / 0.6745;
}

/// Smallest M whose band [1/M, M] contains every value of the axis.
inline double covering_band_limit(std::span<const double> axis) {
  double m = 1.0;
  for (double v : axis) m = std::max({m, v, 1.0 / v});
  return m;
}

inline SqueezeConfig default_squeeze_config(const TimeScalePlane& plane) {
  SqueezeConfig c;
  c.epsilon = relative_threshold(plane.values);
  c.band_limit = covering_band_limit(plane.scales);
  c.target_freqs.assign(plane.scales.size(), 0.0);
  for (std::size_t j = 0; j < plane.scales.size(); ++j) {
    c.target_freqs[plane.scales.size() - 1 - j] = 1.0 / plane.scales[j];
  }
  c.target_spacing = FrequencySpacing::geometric;
  return c;
}

inline SqueezeConfig default_squeeze_config(const TimeFrequencyPlane& plane) {
  SqueezeConfig c;
  c.epsilon = relative_threshold(plane.values);
  c.band_limit = covering_band_limit(plane.freqs);
  c.target_freqs = plane.freqs;
  c.target_spacing = plane.spacing;
  return c;
}

namespace detail {

/// Shared reassignment loop. weight[r] multiplies row r; in_band[r] gates it.
inline SqueezeResult squeeze_rows(const ComplexMatrix& values, const PhasePlane& phase,
                                  std::span<const double> weight, const std::vector<bool>& in_band,
                                  const SqueezeConfig& config, const std::vector<double>& times) {
  if (!values.same_shape(phase.omega)) throw DataError("squeeze: phase plane shape mismatch");
  if (!(config.epsilon >= 0.0)) throw ParameterError("epsilon must be non-negative");
  const BinEdges bins(config.target_freqs, config.target_spacing);
  const std::size_t n_out = config.target_freqs.size();
  const std::size_t n_t = values.cols();

  SqueezeResult out;
  out.plane.values = ComplexMatrix(n_out, n_t);
  out.plane.freqs = config.target_freqs;
  out.plane.times = times;
  out.plane.spacing = config.target_spacing;
  out.bin_widths = bins.widths;

  double kept = 0.0;
  double dropped = 0.0;
  for (std::size_t r = 0; r < values.rows(); ++r) {
    if (!in_band[r]) continue;
    for (std::size_t c = 0; c < n_t; ++c) {
      if (!phase.valid(r, c)) continue;
      const cplx v = values(r, c);
      if (!(std::abs(v) > config.epsilon)) continue;
      const cplx contribution = weight[r] * v;
      const double w = std::abs(contribution);
      const double om = phase.omega(r, c);
      const auto bin = om > 0.0 ? bins.locate(om) : std::nullopt;
      if (!bin) {
        dropped += w;
        ++out.report.n_dropped_cells;
        continue;
      }
      kept += w;
      out.plane.values(*bin, c) += contribution;
    }
  }
  for (std::size_t m = 0; m < n_out; ++m) {
    const double inv = 1.0 / bins.widths[m];
    for (auto& v : out.plane.values.row(m)) v *= inv;
  }
  out.report.dropped_fraction = (kept + dropped) > 0.0 ? dropped / (kept + dropped) : 0.0;
  return out;
}

}  // namespace detail

/// CWT reassignment: cell (a_j, t) contributes a^{-3/2} W da to the bin
/// nearest omega(a_j, t), with da = a_j ln 2 / n_voices.
inline SqueezeResult squeeze(const TimeScalePlane& plane, const PhasePlane& phase,
                             const SqueezeConfig& config) {
  const auto& a = plane.scales;
  std::vector<double> weight(a.size());
  std::vector<bool> in_band(a.size(), true);
  const double log_step = std::log(2.0) / plane.n_voices;
  for (std::size_t j = 0; j < a.size(); ++j) {
    weight[j] = std::pow(a[j], -1.5) * a[j] * log_step;
    if (config.band_limit) {
      const double m = *config.band_limit;
      in_band[j] = a[j] >= 1.0 / m && a[j] <= m;
    }
  }
  auto out = detail::squeeze_rows(plane.values, phase, weight, in_band, config, plane.times);

  // A bin at eta inherits the boundary reach of scale 1 / eta.
  auto& tf = out.plane;
  tf.coi = MaskMatrix(tf.freqs.size(), tf.times.size(), 0);
  const double t0 = tf.times.front();
  const double t1 = tf.times.back();
  for (std::size_t m = 0; m < tf.freqs.size(); ++m) {
    const double reach = plane.coi_radius / tf.freqs[m];
    for (std::size_t c = 0; c < tf.times.size(); ++c) {
      tf.coi(m, c) = (tf.times[c] - t0 < reach || t1 - tf.times[c] < reach) ? 1 : 0;
    }
  }
  return out;
}

/// STFT reassignment: cell (z_m, t) contributes V dz to the bin nearest
/// omega(z_m, t).
inline SqueezeResult squeeze(const TimeFrequencyPlane& plane, const PhasePlane& phase,
                             const SqueezeConfig& config) {
  const BinEdges source_bins(plane.freqs, plane.spacing);
  const auto& z = plane.freqs;
  std::vector<bool> in_band(z.size(), true);
  if (config.band_limit) {
    const double m = *config.band_limit;
    for (std::size_t i = 0; i < z.size(); ++i) in_band[i] = z[i] >= 1.0 / m && z[i] <= m;
  }
  auto out = detail::squeeze_rows(plane.values, phase, source_bins.widths, in_band, config,
                                  plane.times);
  auto& tf = out.plane;
  tf.coi = MaskMatrix(tf.freqs.size(), tf.times.size(), 0);
  for (std::size_t c = 0; c < tf.times.size(); ++c) {
    bool edge = false;
    for (std::size_t r = 0; r < plane.coi.rows() && !edge; ++r) edge = plane.coi(r, c) != 0;
    if (!edge) continue;
    for (std::size_t m = 0; m < tf.freqs.size(); ++m) tf.coi(m, c) = 1;
  }
  return out;
}

}  // namespace sst

#endif  // SST_SYNCHROSQUEEZE_HPP
