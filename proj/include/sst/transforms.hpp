#ifndef SST_TRANSFORMS_HPP
#define SST_TRANSFORMS_HPP

// Continuous wavelet transform and modified STFT with their exact time
// derivatives.
//
// CWT:   W(a, t) = a^{-1/2} int f(u) conj(psi((u - t) / a)) du
//               = a^{1/2} int f_hat(xi) psi_hat(a xi) exp(2 pi i xi t) dxi
// mSTFT: V(t, z) = int f(u) G(u - t) exp(-2 pi i z (u - t)) du
//
// The CWT is evaluated per scale by FFT multiplication on a reflect-padded
// copy of the signal; its derivative multiplies the same spectrum by
// 2 pi i xi. The mSTFT is evaluated frame by frame on the requested
// frequency grid; its derivative is 2 pi i z V_G - V_{G'}.

#include <optional>
#include <sstream>
#include <utility>

#include "sst/core.hpp"
#include "sst/fft.hpp"
#include "sst/signal_model.hpp"
#include "sst/wavelet.hpp"
#include "sst/window.hpp"

namespace sst {

enum class FrequencySpacing { geometric, arithmetic };

/// W_psi f sampled on a geometric scale grid. coi marks cells whose
/// effective kernel support reaches past a signal endpoint.
struct TimeScalePlane {
  ComplexMatrix values;
  std::vector<double> scales;
  std::vector<double> times;
  MaskMatrix coi;
  int n_voices = 32;
  double coi_radius = 0.0;  ///< in units of scale
};

/// A complex plane over (frequency, time): a modified STFT or a squeezed
/// transform.
struct TimeFrequencyPlane {
  ComplexMatrix values;
  std::vector<double> freqs;
  std::vector<double> times;
  MaskMatrix coi;
  FrequencySpacing spacing = FrequencySpacing::arithmetic;
};

template <typename Plane>
struct PlanePair {
  Plane transform;
  Plane derivative;
};

struct ScaleRange {
  double a_min;
  double a_max;
};

struct FrequencyGrid {
  double z_min;
  double z_max;
  std::size_t n_freqs;
};

/// a_j = a_min 2^{j / n_voices}, j < ceil(n_voices log2(a_max / a_min)).
inline std::vector<double> geometric_scales(ScaleRange range, int n_voices) {
  if (!(range.a_min > 0.0)) throw ParameterError("a_min must be positive");
  if (!(range.a_max > range.a_min)) throw ParameterError("a_max must exceed a_min");
  if (n_voices < 4) throw ParameterError("n_voices must be at least 4");
  const double octaves = std::log2(range.a_max / range.a_min);
  const auto count = static_cast<std::size_t>(std::ceil(n_voices * octaves - 1e-9));
  std::vector<double> a(std::max<std::size_t>(count, 1));
  for (std::size_t j = 0; j < a.size(); ++j) {
    a[j] = range.a_min * std::exp2(static_cast<double>(j) / n_voices);
  }
  return a;
}

/// Largest scale whose dilated wavelet is resolved by the padded FFT grid:
/// its frequency support 2 delta / a must span at least four FFT bins.
inline double max_resolvable_scale(std::size_t n_samples, double sample_rate,
                                   const WaveletSpec& w) {
  const auto padded = static_cast<double>(next_pow2(n_samples));
  return w.delta * padded / (2.0 * sample_rate);
}

/// Highest centre frequency keeps the wavelet's support below Nyquist;
/// lowest is the resolvability limit.
inline ScaleRange default_scale_range(const SampledSignal& s, const WaveletSpec& w) {
  return {2.0 * (1.0 + w.delta) / s.sample_rate(),
          max_resolvable_scale(s.size(), s.sample_rate(), w)};
}

/// Arithmetic grid z_m = (m + 1) fs / N, m < N / 2, reaching Nyquist.
inline FrequencyGrid default_frequency_grid(const SampledSignal& s) {
  const auto n = s.size();
  return {s.sample_rate() / static_cast<double>(n), 0.5 * s.sample_rate(), n / 2};
}

inline std::vector<double> arithmetic_grid(const FrequencyGrid& g) {
  if (!(g.z_min > 0.0)) throw ParameterError("z_min must be positive");
  if (!(g.z_max > g.z_min)) throw ParameterError("z_max must exceed z_min");
  if (g.n_freqs < 8) throw ParameterError("n_freqs must be at least 8");
  std::vector<double> z(g.n_freqs);
  const double step = (g.z_max - g.z_min) / static_cast<double>(g.n_freqs - 1);
  for (std::size_t m = 0; m < z.size(); ++m) z[m] = g.z_min + step * static_cast<double>(m);
  z.back() = g.z_max;
  return z;
}

/// CWT and its exact time derivative on one grid.
inline PlanePair<TimeScalePlane> cwt_with_derivative(const SampledSignal& signal,
                                                     const WaveletSpec& wavelet, int n_voices,
                                                     ScaleRange range) {
  const std::size_t n = signal.size();
  if (n < 8) throw DataError("signal must have at least 8 samples");
  if (!wavelet.is_smooth()) throw ParameterError("cwt requires a C1 wavelet family");
  const auto scales = geometric_scales(range, n_voices);
  const double fs = signal.sample_rate();
  const double limit = max_resolvable_scale(n, fs, wavelet);
  if (scales.back() > limit * (1.0 + 1e-12)) {
    std::ostringstream msg;
    msg << "scale " << scales.back() << " exceeds the padded signal length; largest usable scale is "
        << limit;
    throw ParameterError(msg.str());
  }

  const std::size_t padded = next_pow2(n);
  const std::size_t left = (padded - n) / 2;
  FftPlan plan(padded);
  auto buf = plan.buffer();
  const auto x = signal.samples();
  for (std::size_t i = 0; i < padded; ++i) {
    buf[i] = x[reflect_index(static_cast<std::ptrdiff_t>(i) - static_cast<std::ptrdiff_t>(left), n)];
  }
  plan.forward();
  const std::vector<cplx> spectrum(buf.begin(), buf.end());

  // Signed DFT frequencies; the Nyquist bin counts as negative.
  std::vector<double> xi(padded);
  for (std::size_t k = 0; k < padded; ++k) {
    const auto kk = k < padded / 2 ? static_cast<double>(k)
                                   : static_cast<double>(k) - static_cast<double>(padded);
    xi[k] = kk * fs / static_cast<double>(padded);
  }

  PlanePair<TimeScalePlane> out;
  const auto times = signal.times();
  for (auto* p : {&out.transform, &out.derivative}) {
    p->values = ComplexMatrix(scales.size(), n);
    p->scales = scales;
    p->times = times;
    p->n_voices = n_voices;
  }

  for (std::size_t j = 0; j < scales.size(); ++j) {
    const double a = scales[j];
    const double root_a = std::sqrt(a);
    for (int pass = 0; pass < 2; ++pass) {
      for (std::size_t k = 0; k < padded; ++k) {
        const double h = xi[k] > 0.0 ? wavelet.psi_hat(a * xi[k]) : 0.0;
        if (h == 0.0) {
          buf[k] = 0.0;
          continue;
        }
        cplx v = spectrum[k] * (root_a * h);
        if (pass == 1) v *= cplx{0.0, two_pi * xi[k]};
        buf[k] = v;
      }
      plan.inverse();
      auto row = (pass == 0 ? out.transform : out.derivative).values.row(j);
      std::copy_n(buf.begin() + static_cast<std::ptrdiff_t>(left), n, row.begin());
    }
  }

  const double radius = wavelet.support_radius();
  MaskMatrix coi(scales.size(), n, 0);
  const double t0 = times.front();
  const double t1 = times.back();
  for (std::size_t j = 0; j < scales.size(); ++j) {
    const double reach = radius * scales[j];
    for (std::size_t c = 0; c < n; ++c) {
      coi(j, c) = (times[c] - t0 < reach || t1 - times[c] < reach) ? 1 : 0;
    }
  }
  out.transform.coi = coi;
  out.derivative.coi = std::move(coi);
  out.transform.coi_radius = out.derivative.coi_radius = radius;
  return out;
}

inline TimeScalePlane cwt(const SampledSignal& signal, const WaveletSpec& wavelet, int n_voices,
                          ScaleRange range) {
  return cwt_with_derivative(signal, wavelet, n_voices, range).transform;
}

inline TimeScalePlane cwt_time_derivative(const SampledSignal& signal, const WaveletSpec& wavelet,
                                          int n_voices, ScaleRange range) {
  return cwt_with_derivative(signal, wavelet, n_voices, range).derivative;
}

/// Modified STFT and its exact time derivative on an arithmetic grid.
inline PlanePair<TimeFrequencyPlane> mstft_with_derivative(const SampledSignal& signal,
                                                           const WindowSpec& window,
                                                           const FrequencyGrid& grid) {
  const std::size_t n = signal.size();
  if (n < 8) throw DataError("signal must have at least 8 samples");
  const auto z = arithmetic_grid(grid);
  const double fs = signal.sample_rate();
  if (window.half_width > 0.5 * signal.duration()) {
    throw ParameterError("window half_width exceeds half the signal duration");
  }
  const auto half = static_cast<std::ptrdiff_t>(std::floor(window.half_width * fs + 1e-9));
  if (half < 1) throw ParameterError("window shorter than one sample");
  const auto frame = static_cast<std::size_t>(2 * half + 1);

  std::vector<double> g(frame), dg(frame);
  for (std::ptrdiff_t k = -half; k <= half; ++k) {
    const double u = static_cast<double>(k) / fs;
    g[static_cast<std::size_t>(k + half)] = window.value(u);
    dg[static_cast<std::size_t>(k + half)] = window.derivative(u);
  }
  ComplexMatrix twiddle(z.size(), frame);
  for (std::size_t m = 0; m < z.size(); ++m) {
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
      const double cycles = z[m] * static_cast<double>(k) / fs;
      twiddle(m, static_cast<std::size_t>(k + half)) =
          std::polar(1.0, -two_pi * (cycles - std::round(cycles)));
    }
  }

  PlanePair<TimeFrequencyPlane> out;
  const auto times = signal.times();
  for (auto* p : {&out.transform, &out.derivative}) {
    p->values = ComplexMatrix(z.size(), n);
    p->freqs = z;
    p->times = times;
    p->spacing = FrequencySpacing::arithmetic;
  }

  const auto x = signal.samples();
  std::vector<cplx> y(frame), dy(frame);
  const double inv_fs = 1.0 / fs;
  for (std::size_t c = 0; c < n; ++c) {
    for (std::ptrdiff_t k = -half; k <= half; ++k) {
      const auto i = static_cast<std::size_t>(k + half);
      const cplx v = x[reflect_index(static_cast<std::ptrdiff_t>(c) + k, n)];
      y[i] = v * g[i];
      dy[i] = v * dg[i];
    }
    for (std::size_t m = 0; m < z.size(); ++m) {
      const auto tw = twiddle.row(m);
      cplx acc{0.0, 0.0}, dacc{0.0, 0.0};
      for (std::size_t i = 0; i < frame; ++i) {
        acc += tw[i] * y[i];
        dacc += tw[i] * dy[i];
      }
      acc *= inv_fs;
      dacc *= inv_fs;
      out.transform.values(m, c) = acc;
      out.derivative.values(m, c) = cplx{0.0, two_pi * z[m]} * acc - dacc;
    }
  }

  MaskMatrix coi(z.size(), n, 0);
  for (std::size_t c = 0; c < n; ++c) {
    const bool edge = times[c] - times.front() < window.half_width ||
                      times.back() - times[c] < window.half_width;
    if (!edge) continue;
    for (std::size_t m = 0; m < z.size(); ++m) coi(m, c) = 1;
  }
  out.transform.coi = coi;
  out.derivative.coi = std::move(coi);
  return out;
}

inline TimeFrequencyPlane mstft(const SampledSignal& signal, const WindowSpec& window,
                                const FrequencyGrid& grid) {
  return mstft_with_derivative(signal, window, grid).transform;
}

inline TimeFrequencyPlane mstft_time_derivative(const SampledSignal& signal,
                                                const WindowSpec& window,
                                                const FrequencyGrid& grid) {
  return mstft_with_derivative(signal, window, grid).derivative;
}

}  // namespace sst

#endif  // SST_TRANSFORMS_HPP
