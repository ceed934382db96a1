#ifndef SST_IO_HPP
#define SST_IO_HPP

// CSV and PGM serialization. Numbers are written in shortest round-trip
// form so that files are byte-reproducible and parse back exactly.

#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <istream>
#include <ostream>
#include <sstream>
#include <string>
#include <string_view>

#include "sst/ridges.hpp"
#include "sst/signal_model.hpp"
#include "sst/transforms.hpp"

namespace sst::io {

inline std::string format_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return {buf, res.ptr};
}

inline double parse_double(std::string_view s, const std::string& what) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) {
    throw DataError("cannot parse " + what + ": '" + std::string(s) + "'");
  }
  return v;
}

inline std::vector<std::string_view> split_csv(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t pos = 0;
  while (true) {
    const auto comma = line.find(',', pos);
    out.push_back(line.substr(pos, comma == std::string_view::npos ? line.npos : comma - pos));
    if (comma == std::string_view::npos) break;
    pos = comma + 1;
  }
  return out;
}

inline std::string trimmed(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return std::string(s);
}

// ---------------------------------------------------------------------------
// Signals: header `time,real,imag`; a missing imag column reads as zero.

inline void write_signal_csv(std::ostream& os, const SampledSignal& s) {
  os << "time,real,imag\n";
  const auto x = s.samples();
  for (std::size_t n = 0; n < s.size(); ++n) {
    os << format_double(s.time(n)) << ',' << format_double(x[n].real()) << ','
       << format_double(x[n].imag()) << '\n';
  }
}

inline SampledSignal read_signal_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line)) throw DataError("signal CSV is empty: header row required");
  const auto header = split_csv(line);
  std::ptrdiff_t col_t = -1, col_re = -1, col_im = -1;
  for (std::size_t i = 0; i < header.size(); ++i) {
    const auto name = trimmed(header[i]);
    if (name == "time") col_t = static_cast<std::ptrdiff_t>(i);
    if (name == "real") col_re = static_cast<std::ptrdiff_t>(i);
    if (name == "imag") col_im = static_cast<std::ptrdiff_t>(i);
  }
  if (col_t < 0) throw DataError("signal CSV header lacks a 'time' column");
  if (col_re < 0) throw DataError("signal CSV header lacks a 'real' column");

  std::vector<double> t;
  std::vector<cplx> x;
  std::size_t line_no = 1;
  while (std::getline(is, line)) {
    ++line_no;
    if (trimmed(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw DataError("line " + std::to_string(line_no) + ": expected " +
                      std::to_string(header.size()) + " fields");
    }
    const auto where = " on line " + std::to_string(line_no);
    t.push_back(parse_double(cells[static_cast<std::size_t>(col_t)], "time" + where));
    const double re = parse_double(cells[static_cast<std::size_t>(col_re)], "real" + where);
    const double im =
        col_im >= 0 ? parse_double(cells[static_cast<std::size_t>(col_im)], "imag" + where) : 0.0;
    x.emplace_back(re, im);
  }
  if (t.size() < 2) throw DataError("signal CSV needs at least two samples to infer the rate");
  const double span = t.back() - t.front();
  if (!(span > 0.0)) throw DataError("time column must increase");
  double rate = static_cast<double>(t.size() - 1) / span;
  const double nearest = std::round(rate);
  if (nearest > 0.0 && std::abs(rate - nearest) <= 1e-9 * rate) rate = nearest;
  for (std::size_t n = 0; n < t.size(); ++n) {
    const double expected = t.front() + static_cast<double>(n) / rate;
    if (std::abs(t[n] - expected) > 1e-6 / rate) {
      throw DataError("time column is not uniformly sampled near row " + std::to_string(n + 2));
    }
  }
  return {std::move(x), rate, t.front()};
}

inline void write_signal_csv(const std::string& path, const SampledSignal& s) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw DataError("cannot open " + path + " for writing");
  write_signal_csv(os, s);
}

inline SampledSignal read_signal_csv(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open " + path);
  return read_signal_csv(is);
}

// ---------------------------------------------------------------------------
// Planes: header `<axis>,t_0,...,t_{N-1}`, one row per scale or frequency
// holding magnitudes.

inline void write_plane_csv(std::ostream& os, std::string_view axis_name,
                            std::span<const double> axis, std::span<const double> times,
                            const ComplexMatrix& values) {
  os << axis_name;
  for (double t : times) os << ',' << format_double(t);
  os << '\n';
  for (std::size_t r = 0; r < values.rows(); ++r) {
    os << format_double(axis[r]);
    for (const auto& v : values.row(r)) os << ',' << format_double(std::abs(v));
    os << '\n';
  }
}

inline void write_plane_csv(std::ostream& os, const TimeScalePlane& p) {
  write_plane_csv(os, "scale", p.scales, p.times, p.values);
}

inline void write_plane_csv(std::ostream& os, const TimeFrequencyPlane& p) {
  write_plane_csv(os, "frequency", p.freqs, p.times, p.values);
}

/// 8-bit P5 rendering of log-magnitude, min-max normalised over non-COI
/// cells. `row_order[i]` is the matrix row drawn as image row i.
inline void write_pgm(std::ostream& os, const ComplexMatrix& values, const MaskMatrix& coi,
                      const std::vector<std::size_t>& row_order) {
  const std::size_t h = values.rows();
  const std::size_t w = values.cols();
  const double peak = max_abs(values.flat());
  const double floor = peak > 0.0 ? peak * 1e-8 : 1.0;
  auto level = [floor](const cplx& v) { return std::log(std::max(std::abs(v), floor)); };

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  bool any_interior = false;
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) any_interior = any_interior || !coi(r, c);
  }
  for (std::size_t r = 0; r < h; ++r) {
    for (std::size_t c = 0; c < w; ++c) {
      if (any_interior && coi(r, c)) continue;
      const double l = level(values(r, c));
      lo = std::min(lo, l);
      hi = std::max(hi, l);
    }
  }
  os << "P5\n" << w << ' ' << h << "\n255\n";
  std::string row(w, '\0');
  for (std::size_t i = 0; i < h; ++i) {
    const std::size_t r = row_order[i];
    for (std::size_t c = 0; c < w; ++c) {
      double u = hi > lo ? (level(values(r, c)) - lo) / (hi - lo) : 0.0;
      u = std::clamp(u, 0.0, 1.0);
      row[c] = static_cast<char>(static_cast<unsigned char>(std::lround(255.0 * u)));
    }
    os.write(row.data(), static_cast<std::streamsize>(w));
  }
}

/// Frequency increases downward, so large scales come first.
inline void write_pgm(std::ostream& os, const TimeScalePlane& p) {
  std::vector<std::size_t> order(p.scales.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = order.size() - 1 - i;
  write_pgm(os, p.values, p.coi, order);
}

inline void write_pgm(std::ostream& os, const TimeFrequencyPlane& p) {
  std::vector<std::size_t> order(p.freqs.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  write_pgm(os, p.values, p.coi, order);
}

// ---------------------------------------------------------------------------
// Ridges and density index

inline void write_ridges_csv(std::ostream& os, const RidgeSet& set) {
  os << "ridge_id,time,frequency,magnitude\n";
  for (std::size_t k = 0; k < set.ridges.size(); ++k) {
    const auto& r = set.ridges[k];
    for (std::size_t i = 0; i < r.size(); ++i) {
      os << k << ',' << format_double(set.times[r.start + i]) << ',' << format_double(r.freqs[i])
         << ',' << format_double(r.mags[i]) << '\n';
    }
  }
}

inline void write_density_csv(std::ostream& os, std::span<const double> times,
                              std::span<const double> density) {
  os << "time,density\n";
  for (std::size_t n = 0; n < times.size(); ++n) {
    os << format_double(times[n]) << ',' << format_double(density[n]) << '\n';
  }
}

/// Ridge rows parsed back: (ridge_id, time, frequency, magnitude).
struct RidgeRow {
  std::size_t id;
  double time;
  double frequency;
  double magnitude;
};

inline std::vector<RidgeRow> read_ridges_csv(std::istream& is) {
  std::string line;
  if (!std::getline(is, line) || trimmed(line) != "ridge_id,time,frequency,magnitude") {
    throw DataError("ridge CSV header must be 'ridge_id,time,frequency,magnitude'");
  }
  std::vector<RidgeRow> rows;
  while (std::getline(is, line)) {
    if (trimmed(line).empty()) continue;
    const auto cells = split_csv(line);
    if (cells.size() != 4) throw DataError("ridge CSV row needs 4 fields");
    rows.push_back({static_cast<std::size_t>(parse_double(cells[0], "ridge_id")),
                    parse_double(cells[1], "time"), parse_double(cells[2], "frequency"),
                    parse_double(cells[3], "magnitude")});
  }
  return rows;
}

}  // namespace sst::io

#endif  // SST_IO_HPP
