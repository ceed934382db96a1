#ifndef SST_SIGNAL_MODEL_HPP
#define SST_SIGNAL_MODEL_HPP

// Sampled signals, analytic AM-FM component families with exact
// instantaneous frequencies, class-membership measurement, and the noise /
// impulse-train generators used by the robustness tests.

#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sst/core.hpp"

namespace sst {

/// Uniformly sampled complex time series. Real signals carry zero imaginary
/// parts. Immutable after construction.
class SampledSignal {
 public:
  SampledSignal(std::vector<cplx> samples, double sample_rate, double start_time = 0.0)
      : samples_(std::move(samples)), sample_rate_(sample_rate), start_time_(start_time) {
    if (!(sample_rate_ > 0.0) || !std::isfinite(sample_rate_)) {
      throw ParameterError("sample_rate must be positive and finite");
    }
    if (samples_.empty()) throw DataError("signal has no samples");
    if (!std::isfinite(start_time_)) throw ParameterError("start_time must be finite");
  }

  static SampledSignal from_real(const std::vector<double>& values, double sample_rate,
                                 double start_time = 0.0) {
    std::vector<cplx> s(values.begin(), values.end());
    return {std::move(s), sample_rate, start_time};
  }

  std::span<const cplx> samples() const noexcept { return samples_; }
  std::size_t size() const noexcept { return samples_.size(); }
  double sample_rate() const noexcept { return sample_rate_; }
  double start_time() const noexcept { return start_time_; }
  double time(std::size_t n) const noexcept {
    return start_time_ + static_cast<double>(n) / sample_rate_;
  }
  double duration() const noexcept {
    return static_cast<double>(samples_.size() - 1) / sample_rate_;
  }
  std::vector<double> times() const {
    std::vector<double> t(samples_.size());
    for (std::size_t n = 0; n < t.size(); ++n) t[n] = time(n);
    return t;
  }
  bool is_real() const noexcept {
    return std::all_of(samples_.begin(), samples_.end(),
                       [](const cplx& x) { return x.imag() == 0.0; });
  }

  friend bool operator==(const SampledSignal&, const SampledSignal&) = default;

 private:
  std::vector<cplx> samples_;
  double sample_rate_;
  double start_time_;
};

inline SampledSignal real_part(const SampledSignal& s) {
  std::vector<cplx> out(s.size());
  for (std::size_t n = 0; n < s.size(); ++n) out[n] = s.samples()[n].real();
  return {std::move(out), s.sample_rate(), s.start_time()};
}

// ---------------------------------------------------------------------------
// Amplitude families

struct ConstantAmplitude {
  double value = 1.0;
};

/// A(t) = base + height * exp(-(t - center)^2 / (2 width^2))
struct GaussianBumpAmplitude {
  double base = 1.0;
  double height = 0.0;
  double center = 0.0;
  double width = 1.0;
};

/// Amplitude samples on a uniform grid; evaluated at the nearest sample,
/// differentiated with centered differences.
struct TabulatedAmplitude {
  std::vector<double> values;
  double sample_rate = 1.0;
  double start_time = 0.0;
};

using Amplitude = std::variant<ConstantAmplitude, GaussianBumpAmplitude, TabulatedAmplitude>;

// ---------------------------------------------------------------------------
// Phase families (phase in cycles, so the IF is phi'(t) in cycles per unit time)

/// phi(t) = phase0 + frequency * t
struct PureTonePhase {
  double frequency = 1.0;
  double phase0 = 0.0;
};

/// phi(t) = phase0 + f0 * t + rate * t^2 / 2
struct LinearChirpPhase {
  double f0 = 0.0;
  double rate = 1.0;
  double phase0 = 0.0;
};

/// phi(t) = linear * t + sum_i coef_i t^exponent_i + sum_j amp_j sin(angular_j t + offset_j)
struct PowerSinusoidPhase {
  struct PowerTerm {
    double coef;
    double exponent;
  };
  struct SineTerm {
    double amp;
    double angular;
    double offset = 0.0;
  };
  double linear = 0.0;
  std::vector<PowerTerm> powers;
  std::vector<SineTerm> sines;
};

/// Phase samples on a uniform grid, optionally with the true IF supplied by
/// the caller. Without it, ground_truth_if refuses to guess.
struct TabulatedPhase {
  std::vector<double> phase;
  std::vector<double> if_ground_truth;
  double sample_rate = 1.0;
  double start_time = 0.0;
};

using Phase = std::variant<PureTonePhase, LinearChirpPhase, PowerSinusoidPhase, TabulatedPhase>;

namespace detail {

inline std::size_t tabulated_index(std::size_t n_values, double rate, double start, double t) {
  const double pos = std::round((t - start) * rate);
  if (pos < 0.0 || pos >= static_cast<double>(n_values)) {
    throw DataError("time " + std::to_string(t) + " outside tabulated component grid");
  }
  return static_cast<std::size_t>(pos);
}

inline double centered_diff(const std::vector<double>& v, std::size_t i, double rate) {
  if (v.size() < 2) return 0.0;
  if (i == 0) return (v[1] - v[0]) * rate;
  if (i + 1 == v.size()) return (v[i] - v[i - 1]) * rate;
  return 0.5 * (v[i + 1] - v[i - 1]) * rate;
}

inline double power_term(double coef, double exponent, double t) {
  if (coef == 0.0) return 0.0;
  if (exponent == 0.0) return coef;
  if (t == 0.0) return exponent > 0.0 ? 0.0 : std::numeric_limits<double>::infinity();
  return coef * std::pow(t, exponent);
}

}  // namespace detail

/// One AM-FM component A(t) exp(2 pi i phi(t)).
struct ComponentSpec {
  Amplitude amplitude = ConstantAmplitude{};
  Phase phase = PureTonePhase{};

  double amplitude_at(double t) const {
    return std::visit(
        [t](const auto& a) -> double {
          using A = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<A, ConstantAmplitude>) {
            return a.value;
          } else if constexpr (std::is_same_v<A, GaussianBumpAmplitude>) {
            const double u = (t - a.center) / a.width;
            return a.base + a.height * std::exp(-0.5 * u * u);
          } else {
            return a.values[detail::tabulated_index(a.values.size(), a.sample_rate, a.start_time, t)];
          }
        },
        amplitude);
  }

  double amplitude_derivative_at(double t) const {
    return std::visit(
        [t](const auto& a) -> double {
          using A = std::decay_t<decltype(a)>;
          if constexpr (std::is_same_v<A, ConstantAmplitude>) {
            return 0.0;
          } else if constexpr (std::is_same_v<A, GaussianBumpAmplitude>) {
            const double u = (t - a.center) / a.width;
            return -a.height * u / a.width * std::exp(-0.5 * u * u);
          } else {
            const auto i = detail::tabulated_index(a.values.size(), a.sample_rate, a.start_time, t);
            return detail::centered_diff(a.values, i, a.sample_rate);
          }
        },
        amplitude);
  }

  double phase_at(double t) const {
    return std::visit(
        [t](const auto& p) -> double {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, PureTonePhase>) {
            return p.phase0 + p.frequency * t;
          } else if constexpr (std::is_same_v<P, LinearChirpPhase>) {
            return p.phase0 + p.f0 * t + 0.5 * p.rate * t * t;
          } else if constexpr (std::is_same_v<P, PowerSinusoidPhase>) {
            double v = p.linear * t;
            for (const auto& pt : p.powers) v += detail::power_term(pt.coef, pt.exponent, t);
            for (const auto& s : p.sines) v += s.amp * std::sin(s.angular * t + s.offset);
            return v;
          } else {
            return p.phase[detail::tabulated_index(p.phase.size(), p.sample_rate, p.start_time, t)];
          }
        },
        phase);
  }

  bool has_analytic_if() const {
    if (const auto* tab = std::get_if<TabulatedPhase>(&phase)) {
      return !tab->if_ground_truth.empty();
    }
    return true;
  }

  /// Exact phi'(t). Tabulated phases must carry if_ground_truth.
  double if_at(double t) const {
    return std::visit(
        [t](const auto& p) -> double {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, PureTonePhase>) {
            return p.frequency;
          } else if constexpr (std::is_same_v<P, LinearChirpPhase>) {
            return p.f0 + p.rate * t;
          } else if constexpr (std::is_same_v<P, PowerSinusoidPhase>) {
            double v = p.linear;
            for (const auto& pt : p.powers) {
              v += detail::power_term(pt.coef * pt.exponent, pt.exponent - 1.0, t);
            }
            for (const auto& s : p.sines) v += s.amp * s.angular * std::cos(s.angular * t + s.offset);
            return v;
          } else {
            if (p.if_ground_truth.empty()) {
              throw DataError(
                  "tabulated phase has no closed-form derivative; supply if_ground_truth");
            }
            return p.if_ground_truth[detail::tabulated_index(p.if_ground_truth.size(),
                                                             p.sample_rate, p.start_time, t)];
          }
        },
        phase);
  }

  /// phi''(t); centered differences of the supplied IF for tabulated phases.
  double if_derivative_at(double t) const {
    return std::visit(
        [t](const auto& p) -> double {
          using P = std::decay_t<decltype(p)>;
          if constexpr (std::is_same_v<P, PureTonePhase>) {
            return 0.0;
          } else if constexpr (std::is_same_v<P, LinearChirpPhase>) {
            return p.rate;
          } else if constexpr (std::is_same_v<P, PowerSinusoidPhase>) {
            double v = 0.0;
            for (const auto& pt : p.powers) {
              v += detail::power_term(pt.coef * pt.exponent * (pt.exponent - 1.0),
                                      pt.exponent - 2.0, t);
            }
            for (const auto& s : p.sines) {
              v -= s.amp * s.angular * s.angular * std::sin(s.angular * t + s.offset);
            }
            return v;
          } else {
            if (p.if_ground_truth.empty()) {
              throw DataError(
                  "tabulated phase has no closed-form derivative; supply if_ground_truth");
            }
            const auto i = detail::tabulated_index(p.if_ground_truth.size(), p.sample_rate,
                                                   p.start_time, t);
            return detail::centered_diff(p.if_ground_truth, i, p.sample_rate);
          }
        },
        phase);
  }
};

inline std::vector<double> time_grid(double sample_rate, double duration, double start_time = 0.0) {
  if (!(sample_rate > 0.0)) throw ParameterError("sample_rate must be positive");
  if (!(duration > 0.0)) throw ParameterError("duration must be positive");
  const auto n = static_cast<std::size_t>(std::llround(sample_rate * duration));
  if (n == 0) throw ParameterError("duration shorter than one sample");
  std::vector<double> t(n);
  for (std::size_t i = 0; i < n; ++i) t[i] = start_time + static_cast<double>(i) / sample_rate;
  return t;
}

/// Sum of components on the grid t_n = n / sample_rate, n < round(rate * duration).
inline SampledSignal synthesize(const std::vector<ComponentSpec>& specs, double sample_rate,
                                double duration) {
  if (specs.empty()) throw ParameterError("no components");
  const auto t = time_grid(sample_rate, duration);
  std::vector<cplx> samples(t.size(), cplx{0.0, 0.0});
  double max_if = 0.0;
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const auto& spec = specs[k];
    for (std::size_t n = 0; n < t.size(); ++n) {
      const double a = spec.amplitude_at(t[n]);
      if (!(a > 0.0)) {
        throw DataError("component " + std::to_string(k) + " amplitude not positive at t=" +
                        std::to_string(t[n]));
      }
      if (spec.has_analytic_if()) {
        const double f = spec.if_at(t[n]);
        if (!(f > 0.0)) {
          throw DataError("component " + std::to_string(k) +
                          " instantaneous frequency not positive at t=" + std::to_string(t[n]));
        }
        max_if = std::max(max_if, f);
      }
      const double phase = spec.phase_at(t[n]);
      // Reduce the cycle count before scaling so large phases keep precision.
      const double frac = phase - std::floor(phase);
      samples[n] += a * std::polar(1.0, two_pi * frac);
    }
  }
  if (!(sample_rate > 2.0 * max_if)) {
    std::ostringstream msg;
    msg << "sample rate " << sample_rate << " violates Nyquist: max instantaneous frequency "
        << max_if << " requires rate > " << 2.0 * max_if;
    throw DataError(msg.str());
  }
  return {std::move(samples), sample_rate, 0.0};
}

inline std::vector<double> ground_truth_if(const ComponentSpec& spec, std::span<const double> times) {
  if (!spec.has_analytic_if()) {
    throw DataError("tabulated phase has no closed-form derivative; supply if_ground_truth");
  }
  std::vector<double> out(times.size());
  for (std::size_t n = 0; n < times.size(); ++n) out[n] = spec.if_at(times[n]);
  return out;
}

struct IfCrossing {
  std::size_t component;  // index k with phi'_k <= phi'_{k-1}
  double time;
};

struct ClassReport {
  double epsilon_measured = 0.0;
  std::optional<double> d_measured;  // empty when K = 1
  bool is_member = false;
  std::optional<IfCrossing> crossing;
};

/// Measures the slow-variation rate and relative IF separation of a
/// component list on the sample grid and tests membership for (epsilon, d).
/// Components must be ordered by increasing IF.
inline ClassReport validate_class(const std::vector<ComponentSpec>& specs, double epsilon, double d,
                                  double sample_rate, double duration) {
  if (specs.empty()) throw ParameterError("no components");
  const auto t = time_grid(sample_rate, duration);
  ClassReport report;
  double min_sep = std::numeric_limits<double>::infinity();
  std::vector<double> prev_if(t.size());
  for (std::size_t k = 0; k < specs.size(); ++k) {
    const auto& spec = specs[k];
    for (std::size_t n = 0; n < t.size(); ++n) {
      const double f = spec.if_at(t[n]);
      if (!(f > 0.0)) {
        report.crossing = report.crossing.value_or(IfCrossing{k, t[n]});
        continue;
      }
      const double rate = std::max(std::abs(spec.amplitude_derivative_at(t[n])),
                                   std::abs(spec.if_derivative_at(t[n]))) / f;
      report.epsilon_measured = std::max(report.epsilon_measured, rate);
      if (k > 0) {
        const double sep = (f - prev_if[n]) / (f + prev_if[n]);
        if (sep <= 0.0 && !report.crossing) report.crossing = IfCrossing{k, t[n]};
        min_sep = std::min(min_sep, sep);
      }
    }
    for (std::size_t n = 0; n < t.size(); ++n) prev_if[n] = spec.if_at(t[n]);
  }
  if (specs.size() > 1) report.d_measured = min_sep;
  // Measured ratios carry rounding; compare with a relative tolerance of 1e-12.
  constexpr double tol = 1e-12;
  report.is_member = !report.crossing && report.epsilon_measured <= epsilon * (1.0 + tol) &&
                     (!report.d_measured || *report.d_measured >= d * (1.0 - tol));
  return report;
}

/// Adds i.i.d. Gaussian noise of total variance `power`. Complex signals get
/// circular noise (power/2 per quadrature), real signals real noise.
inline SampledSignal add_white_noise(const SampledSignal& signal, double power,
                                     std::uint64_t seed) {
  if (!(power >= 0.0)) throw ParameterError("noise power must be non-negative");
  std::vector<cplx> out(signal.samples().begin(), signal.samples().end());
  if (power == 0.0) return {std::move(out), signal.sample_rate(), signal.start_time()};
  std::mt19937_64 rng(seed);
  if (signal.is_real()) {
    std::normal_distribution<double> dist(0.0, std::sqrt(power));
    for (auto& x : out) x += dist(rng);
  } else {
    std::normal_distribution<double> dist(0.0, std::sqrt(0.5 * power));
    for (auto& x : out) {
      const double re = dist(rng);
      const double im = dist(rng);
      x += cplx{re, im};
    }
  }
  return {std::move(out), signal.sample_rate(), signal.start_time()};
}

/// Discrete unit-area impulses: weight * sample_rate at the grid sample
/// nearest each event.
inline SampledSignal impulse_train(const std::vector<double>& event_times,
                                   const std::vector<double>& weights, double sample_rate,
                                   double duration) {
  if (event_times.size() != weights.size()) {
    throw ParameterError("event_times and weights differ in length");
  }
  const auto t = time_grid(sample_rate, duration);
  std::vector<cplx> samples(t.size(), cplx{0.0, 0.0});
  for (std::size_t i = 0; i < event_times.size(); ++i) {
    const double e = event_times[i];
    if (!(e >= 0.0 && e <= duration)) {
      throw DataError("event time " + std::to_string(e) + " outside [0, duration]");
    }
    if (i > 0 && !(e > event_times[i - 1])) {
      throw DataError("event times must be strictly increasing");
    }
    auto idx = static_cast<std::size_t>(std::llround(e * sample_rate));
    idx = std::min(idx, samples.size() - 1);
    samples[idx] += weights[i] * sample_rate;
  }
  return {std::move(samples), sample_rate, 0.0};
}

// ---------------------------------------------------------------------------
// Named presets

namespace presets {

/// cos(2 pi (0.1 t^2.6 + 3 sin(2t) + 10 t)) as its positive-frequency component.
inline ComponentSpec fig1() {
  PowerSinusoidPhase p;
  p.linear = 10.0;
  p.powers = {{0.1, 2.6}};
  p.sines = {{3.0, 2.0, 0.0}};
  return {ConstantAmplitude{1.0}, p};
}

inline std::vector<ComponentSpec> two_tone(double f1 = 5.0, double f2 = 12.0) {
  return {{ConstantAmplitude{1.0}, PureTonePhase{f1, 0.0}},
          {ConstantAmplitude{1.0}, PureTonePhase{f2, 0.0}}};
}

inline ComponentSpec chirp(double f0, double rate) {
  return {ConstantAmplitude{1.0}, LinearChirpPhase{f0, rate, 0.0}};
}

}  // namespace presets

}  // namespace sst

#endif  // SST_SIGNAL_MODEL_HPP
