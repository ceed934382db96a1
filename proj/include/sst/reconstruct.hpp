#ifndef SST_RECONSTRUCT_HPP
#define SST_RECONSTRUCT_HPP

// Component recovery: integrate the squeezed density over a band around each
// ridge and divide by the backend's inversion constant.

#include <string>

#include "sst/core.hpp"
#include "sst/ridges.hpp"
#include "sst/synchrosqueeze.hpp"
#include "sst/wavelet.hpp"
#include "sst/window.hpp"

namespace sst {

inline double inversion_constant(const WaveletSpec& w) { return admissibility_constant(w); }
inline double inversion_constant(const WindowSpec& w) { return window_energy(w); }

/// Distance between two frequencies in the plane's natural axis units:
/// octaves on geometric grids, frequency units on arithmetic ones.
inline double axis_distance(double f1, double f2, FrequencySpacing spacing) {
  return spacing == FrequencySpacing::geometric ? std::abs(std::log2(f1 / f2)) : std::abs(f1 - f2);
}

struct BandPolicy {
  enum class Kind { fixed, adaptive };
  Kind kind = Kind::adaptive;
  double half_width = 0.5;  ///< fixed half-width, axis units
  double cap = 0.5;         ///< adaptive half-width never exceeds this

  /// Adaptive half-gap capped at half an octave (geometric) or ten bins
  /// (arithmetic).
  static BandPolicy default_for(const TimeFrequencyPlane& plane) {
    BandPolicy p;
    if (plane.spacing == FrequencySpacing::geometric) {
      p.cap = 0.5;
    } else {
      const double step = plane.freqs.size() > 1 ? plane.freqs[1] - plane.freqs[0] : 1.0;
      p.cap = 10.0 * step;
    }
    p.half_width = p.cap;
    return p;
  }
  static BandPolicy fixed(double half_width) {
    if (!(half_width > 0.0)) throw ParameterError("band half-width must be positive");
    return {Kind::fixed, half_width, half_width};
  }
};

inline std::string to_string(BandPolicy::Kind k) {
  return k == BandPolicy::Kind::fixed ? "fixed" : "adaptive";
}

struct Component {
  std::vector<cplx> samples;
  std::vector<double> band_half_width;  ///< per column; 0 where the ridge is absent
  std::vector<std::uint8_t> absent;     ///< ridge missing at the column
  std::vector<std::uint8_t> overlap;    ///< band intersects another ridge's band
};

struct ComponentSet {
  std::vector<Component> components;
  BandPolicy policy;
  FrequencySpacing spacing = FrequencySpacing::geometric;
};

/// component(t) = (1/C) sum_{|eta_m - f(t)| < hw(t)} S(eta_m, t) width_m.
/// band_half_width holds one value per plane column.
inline Component reconstruct_component(const TimeFrequencyPlane& squeezed, const Ridge& ridge,
                                       std::span<const double> band_half_width,
                                       double inversion_const) {
  const std::size_t n_t = squeezed.times.size();
  if (squeezed.values.cols() != n_t || squeezed.values.rows() != squeezed.freqs.size()) {
    throw DataError("squeezed plane axes do not match its values");
  }
  if (band_half_width.size() != n_t) throw ParameterError("one band half-width per column required");
  if (ridge.end() > n_t) throw DataError("ridge extends past the plane's time grid");
  if (!(inversion_const > 0.0)) throw ParameterError("inversion constant must be positive");

  const BinEdges bins(squeezed.freqs, squeezed.spacing);
  Component out;
  out.samples.assign(n_t, cplx{0.0, 0.0});
  out.band_half_width.assign(n_t, 0.0);
  out.absent.assign(n_t, 1);
  out.overlap.assign(n_t, 0);
  for (std::size_t c = ridge.start; c < ridge.end(); ++c) {
    const double f = ridge.freq_at(c);
    const double hw = band_half_width[c];
    if (!(hw > 0.0)) throw ParameterError("band half-width must be positive");
    out.absent[c] = 0;
    out.band_half_width[c] = hw;
    cplx acc{0.0, 0.0};
    for (std::size_t m = 0; m < squeezed.freqs.size(); ++m) {
      if (axis_distance(squeezed.freqs[m], f, squeezed.spacing) < hw) {
        acc += squeezed.values(m, c) * bins.widths[m];
      }
    }
    out.samples[c] = acc / inversion_const;
  }
  return out;
}

inline Component reconstruct_component(const TimeFrequencyPlane& squeezed, const Ridge& ridge,
                                       double band_half_width, double inversion_const) {
  const std::vector<double> hw(squeezed.times.size(), band_half_width);
  return reconstruct_component(squeezed, ridge, hw, inversion_const);
}

/// Reconstructs every ridge. Adaptive bands use half the distance to the
/// nearest other ridge alive at that column, capped.
inline ComponentSet reconstruct_all(const TimeFrequencyPlane& squeezed, const RidgeSet& ridges,
                                    const BandPolicy& policy, double inversion_const) {
  if (ridges.ridges.empty()) throw DataError("no ridges to reconstruct");
  const std::size_t n_t = squeezed.times.size();
  const auto& rs = ridges.ridges;
  ComponentSet set;
  set.policy = policy;
  set.spacing = squeezed.spacing;

  std::vector<std::vector<double>> widths(rs.size(), std::vector<double>(n_t, 0.0));
  for (std::size_t k = 0; k < rs.size(); ++k) {
    for (std::size_t c = rs[k].start; c < rs[k].end(); ++c) {
      double hw = policy.kind == BandPolicy::Kind::fixed ? policy.half_width : policy.cap;
      if (policy.kind == BandPolicy::Kind::adaptive) {
        for (std::size_t o = 0; o < rs.size(); ++o) {
          if (o == k || !rs[o].alive_at(c)) continue;
          const double gap = axis_distance(rs[k].freq_at(c), rs[o].freq_at(c), squeezed.spacing);
          if (gap > 0.0) hw = std::min(hw, 0.5 * gap);
        }
      }
      widths[k][c] = hw;
    }
  }
  for (std::size_t k = 0; k < rs.size(); ++k) {
    auto comp = reconstruct_component(squeezed, rs[k], widths[k], inversion_const);
    for (std::size_t c = rs[k].start; c < rs[k].end(); ++c) {
      for (std::size_t o = 0; o < rs.size(); ++o) {
        if (o == k || !rs[o].alive_at(c)) continue;
        const double gap = axis_distance(rs[k].freq_at(c), rs[o].freq_at(c), squeezed.spacing);
        if (gap < widths[k][c] + widths[o][c] - 1e-12) comp.overlap[c] = 1;
      }
    }
    set.components.push_back(std::move(comp));
  }
  return set;
}

/// 2 Re(component): the real-signal reconstruction, since the transforms
/// see only the positive-frequency half of a real input.
inline std::vector<double> reconstruct_real(std::span<const cplx> component) {
  std::vector<double> out(component.size());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 2.0 * component[i].real();
  return out;
}

}  // namespace sst

#endif  // SST_RECONSTRUCT_HPP
