#ifndef SST_RIDGES_HPP
#define SST_RIDGES_HPP

// Greedy ridge extraction by dynamic programming over time columns, and the
// density index (per-time L1 norm of the extracted frequencies).

#include <limits>
#include <optional>

#include "sst/core.hpp"
#include "sst/synchrosqueeze.hpp"

namespace sst {

/// One frequency path over a contiguous run of columns [start, start + size).
struct Ridge {
  std::size_t start = 0;
  std::vector<std::size_t> bins;
  std::vector<double> freqs;
  std::vector<double> mags;
  double energy = 0.0;  ///< sum of |cell| x bin width: an amplitude proxy on any grid

  std::size_t size() const noexcept { return bins.size(); }
  std::size_t end() const noexcept { return start + bins.size(); }
  bool alive_at(std::size_t c) const noexcept { return c >= start && c < end(); }
  double freq_at(std::size_t c) const { return freqs.at(c - start); }
  std::size_t bin_at(std::size_t c) const { return bins.at(c - start); }
  double mean_frequency() const {
    double s = 0.0;
    for (double f : freqs) s += f;
    return freqs.empty() ? 0.0 : s / static_cast<double>(freqs.size());
  }
};

struct RidgeParams {
  std::size_t count = 1;             ///< K, ridges to attempt
  double penalty = 0.0;              ///< lambda on squared log-frequency jumps
  double min_energy_fraction = 0.15; ///< relative to the first ridge
  std::size_t max_jump = 10;         ///< bins between consecutive columns
  double floor = 0.0;                ///< magnitudes <= floor count as absent
  std::size_t max_gap = 3;           ///< absent runs longer than this end a ridge
  std::size_t clear_radius = 1;      ///< bins zeroed either side after extraction
  bool clear_hill = true;            ///< also zero the monotone slopes around each cell
};

struct RidgeSet {
  std::vector<Ridge> ridges;  ///< ordered by mean frequency
  RidgeParams params;
  std::vector<double> times;
};

namespace detail {

inline double median_log_step(std::span<const double> freqs) {
  std::vector<double> steps;
  for (std::size_t m = 1; m < freqs.size(); ++m) steps.push_back(std::log(freqs[m] / freqs[m - 1]));
  return median(std::move(steps));
}

inline RealMatrix magnitudes(const ComplexMatrix& values) {
  RealMatrix mag(values.rows(), values.cols());
  auto out = mag.flat();
  const auto in = values.flat();
  for (std::size_t i = 0; i < in.size(); ++i) out[i] = std::abs(in[i]);
  return mag;
}

/// Bin per column maximising sum mag - penalty * sum (log f jump)^2 with
/// jumps of at most max_jump bins and forbidden cells excluded. Empty when
/// some column has no admissible cell.
inline std::vector<std::size_t> best_path(const RealMatrix& mag, const MaskMatrix& forbidden,
                                          std::span<const double> log_freq, double penalty,
                                          std::size_t max_jump) {
  const std::size_t n_f = mag.rows();
  const std::size_t n_t = mag.cols();
  constexpr double neg_inf = -std::numeric_limits<double>::infinity();
  std::vector<double> score(n_f), next(n_f);
  Matrix<std::uint32_t> back(n_f, n_t, 0);
  for (std::size_t m = 0; m < n_f; ++m) score[m] = forbidden(m, 0) ? neg_inf : mag(m, 0);
  for (std::size_t c = 1; c < n_t; ++c) {
    for (std::size_t m = 0; m < n_f; ++m) {
      next[m] = neg_inf;
      if (forbidden(m, c)) continue;
      const std::size_t lo = m > max_jump ? m - max_jump : 0;
      const std::size_t hi = std::min(n_f - 1, m + max_jump);
      double best = neg_inf;
      std::size_t arg = m;
      for (std::size_t p = lo; p <= hi; ++p) {
        if (score[p] == neg_inf) continue;
        const double jump = log_freq[m] - log_freq[p];
        const double s = score[p] - penalty * jump * jump;
        if (s > best) {
          best = s;
          arg = p;
        }
      }
      if (best == neg_inf) continue;
      next[m] = best + mag(m, c);
      back(m, c) = static_cast<std::uint32_t>(arg);
    }
    std::swap(score, next);
  }
  const auto it = std::max_element(score.begin(), score.end());
  if (it == score.end() || *it == neg_inf) return {};
  std::vector<std::size_t> path(n_t);
  path[n_t - 1] = static_cast<std::size_t>(it - score.begin());
  for (std::size_t c = n_t - 1; c > 0; --c) path[c - 1] = back(path[c], c);
  return path;
}

/// Highest-energy run of columns whose cells exceed floor, bridging absent
/// runs of at most max_gap columns. Returns [begin, end).
inline std::optional<std::pair<std::size_t, std::size_t>> strongest_run(
    std::span<const double> path_mag, double floor, std::size_t max_gap) {
  std::optional<std::pair<std::size_t, std::size_t>> best;
  double best_energy = -1.0;
  std::size_t c = 0;
  const std::size_t n = path_mag.size();
  while (c < n) {
    if (!(path_mag[c] > floor)) {
      ++c;
      continue;
    }
    const std::size_t begin = c;
    std::size_t last_alive = c;
    double energy = 0.0;
    while (c < n) {
      if (path_mag[c] > floor) {
        last_alive = c;
        energy += path_mag[c];
      } else if (c - last_alive > max_gap) {
        break;
      }
      ++c;
    }
    if (energy > best_energy) {
      best_energy = energy;
      best = std::make_pair(begin, last_alive + 1);
    }
    c = last_alive + 1;
  }
  return best;
}

}  // namespace detail

/// Penalty making a one-bin jump cost 2% of the median column maximum.
inline double default_jump_penalty(const TimeFrequencyPlane& plane) {
  const auto mag = detail::magnitudes(plane.values);
  std::vector<double> col_max(mag.cols(), 0.0);
  for (std::size_t m = 0; m < mag.rows(); ++m) {
    for (std::size_t c = 0; c < mag.cols(); ++c) col_max[c] = std::max(col_max[c], mag(m, c));
  }
  const double step = detail::median_log_step(plane.freqs);
  if (!(step > 0.0)) return 0.0;
  return 0.02 * median(std::move(col_max)) / (step * step);
}

/// Default absence floor: 1e-3 of the plane maximum.
inline double default_ridge_floor(const TimeFrequencyPlane& plane) {
  return 1e-3 * max_abs(plane.values.flat());
}

inline RidgeSet extract_ridges(const TimeFrequencyPlane& plane, const RidgeParams& params) {
  if (plane.values.empty()) throw DataError("ridge extraction on an empty plane");
  if (params.count < 1) throw ParameterError("ridge count K must be at least 1");
  if (!(params.penalty >= 0.0)) throw ParameterError("jump penalty must be non-negative");
  if (plane.freqs.size() != plane.values.rows() || plane.times.size() != plane.values.cols()) {
    throw DataError("plane axes do not match its values");
  }

  RidgeSet result;
  result.params = params;
  result.times = plane.times;

  auto mag = detail::magnitudes(plane.values);
  const std::size_t n_f = mag.rows();
  const std::size_t n_t = mag.cols();
  MaskMatrix forbidden(n_f, n_t, 0);
  std::vector<double> log_freq(n_f);
  for (std::size_t m = 0; m < n_f; ++m) log_freq[m] = std::log(plane.freqs[m]);

  std::vector<double> widths(n_f, 1.0);
  if (n_f >= 2) widths = BinEdges(plane.freqs, plane.spacing).widths;

  double first_energy = -1.0;
  std::vector<double> path_mag(n_t);
  for (std::size_t k = 0; k < params.count; ++k) {
    if (!(max_abs(plane.values.flat()) > 0.0)) break;
    const auto path = detail::best_path(mag, forbidden, log_freq, params.penalty, params.max_jump);
    if (path.empty()) break;
    for (std::size_t c = 0; c < n_t; ++c) path_mag[c] = mag(path[c], c);
    const auto run = detail::strongest_run(path_mag, params.floor, params.max_gap);
    if (!run) break;

    Ridge ridge;
    ridge.start = run->first;
    for (std::size_t c = run->first; c < run->second; ++c) {
      ridge.bins.push_back(path[c]);
      ridge.freqs.push_back(plane.freqs[path[c]]);
      ridge.mags.push_back(path_mag[c]);
      ridge.energy += path_mag[c] * widths[path[c]];
    }
    for (std::size_t c = run->first; c < run->second; ++c) {
      const std::size_t b = path[c];
      const std::size_t lo = b > params.clear_radius ? b - params.clear_radius : 0;
      const std::size_t hi = std::min(n_f - 1, b + params.clear_radius);
      std::size_t hill_lo = lo, hill_hi = hi;
      if (params.clear_hill) {
        while (hill_lo > 0 && mag(hill_lo - 1, c) <= mag(hill_lo, c)) --hill_lo;
        while (hill_hi + 1 < n_f && mag(hill_hi + 1, c) <= mag(hill_hi, c)) ++hill_hi;
      }
      for (std::size_t m = hill_lo; m <= hill_hi; ++m) mag(m, c) = 0.0;
      forbidden(b, c) = 1;
    }
    if (first_energy < 0.0) first_energy = ridge.energy;
    if (ridge.energy < params.min_energy_fraction * first_energy) continue;
    result.ridges.push_back(std::move(ridge));
  }
  std::stable_sort(result.ridges.begin(), result.ridges.end(),
                   [](const Ridge& a, const Ridge& b) { return a.mean_frequency() < b.mean_frequency(); });
  return result;
}

/// DI(t) = sum over ridges alive at t of |frequency|.
inline std::vector<double> density_index(const RidgeSet& set) {
  std::vector<double> di(set.times.size(), 0.0);
  for (const auto& r : set.ridges) {
    for (std::size_t i = 0; i < r.size(); ++i) di[r.start + i] += std::abs(r.freqs[i]);
  }
  return di;
}

}  // namespace sst

#endif  // SST_RIDGES_HPP
