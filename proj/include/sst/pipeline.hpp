#ifndef SST_PIPELINE_HPP
#define SST_PIPELINE_HPP

// End-to-end analysis driven by a JSON configuration: transform, phase
// transform, squeeze, ridges, density index, reconstruction, and the files
// the command-line tool writes.

#include <filesystem>
#include <fstream>
#include <optional>
#include <string>
#include <variant>

#include <json.hpp>

#include "sst/io.hpp"
#include "sst/reconstruct.hpp"
#include "sst/ridges.hpp"
#include "sst/signal_model.hpp"
#include "sst/synchrosqueeze.hpp"
#include "sst/transforms.hpp"

namespace sst {

using json = nlohmann::json;

/// Thrown for configuration problems; the message names the field.
class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

enum class Backend { cwt, stft };

inline std::string to_string(Backend b) { return b == Backend::cwt ? "cwt" : "stft"; }

/// Every key with its default. `null` means "derive from the signal".
inline json default_config_json() {
  return json::parse(R"({
    "backend": "cwt",
    "wavelet": {"family": "bump", "delta": 0.25},
    "window": {"family": "truncated_gaussian", "half_width": 0.64, "sigma_ratio": 8.0},
    "cwt": {"n_voices": 32, "a_min": null, "a_max": null},
    "stft": {"n_freqs": null, "z_min": null, "z_max": null},
    "squeeze": {"epsilon_rule": "relative", "epsilon": 1e-6, "band_limit": null},
    "ridges": {"K": 4, "lambda": null, "min_energy_fraction": 0.15, "max_jump": 10,
               "floor": null, "max_gap": 3, "clear_radius": 1,
               "clear_hill": true},
    "reconstruct": {"band_policy": "adaptive", "half_width": null, "cap": null},
    "noise_power": 0.0,
    "seed": 0
  })");
}

namespace detail {

inline void merge_checked(json& base, const json& patch, const std::string& prefix) {
  if (!patch.is_object()) throw ConfigError("config" + prefix + " must be an object");
  for (const auto& [key, value] : patch.items()) {
    const auto path = prefix + "." + key;
    if (!base.contains(key)) throw ConfigError("unknown config key '" + path.substr(1) + "'");
    auto& slot = base[key];
    if (slot.is_object()) {
      merge_checked(slot, value, path);
    } else {
      const bool ok = value.is_null() || slot.is_null() ||
                      (slot.is_number() && value.is_number()) ||
                      (slot.is_boolean() && value.is_boolean()) ||
                      (slot.is_string() && value.is_string());
      if (!ok) throw ConfigError("config key '" + path.substr(1) + "' has the wrong type");
      slot = value;
    }
  }
}

}  // namespace detail

/// Applies `key.sub=value` on top of a config. The value is parsed as JSON
/// when possible, otherwise taken as a string.
inline void apply_override(json& config, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ConfigError("override '" + assignment + "' must look like key=value");
  }
  const auto key = assignment.substr(0, eq);
  const auto raw = assignment.substr(eq + 1);
  json value = json::parse(raw, nullptr, false);
  if (value.is_discarded()) value = raw;
  json patch = value;
  std::string rest = key;
  std::vector<std::string> parts;
  std::size_t pos = 0;
  while (true) {
    const auto dot = rest.find('.', pos);
    parts.push_back(rest.substr(pos, dot == std::string::npos ? std::string::npos : dot - pos));
    if (dot == std::string::npos) break;
    pos = dot + 1;
  }
  for (auto it = parts.rbegin(); it != parts.rend(); ++it) patch = json{{*it, patch}};
  detail::merge_checked(config, patch, "");
}

inline json load_config(const std::optional<std::string>& path, const std::vector<std::string>& sets) {
  json config = default_config_json();
  if (path) {
    std::ifstream is(*path);
    if (!is) throw ConfigError("cannot open config file " + *path);
    const json user = json::parse(is, nullptr, false);
    if (user.is_discarded()) throw ConfigError("config file " + *path + " is not valid JSON");
    detail::merge_checked(config, user, "");
  }
  for (const auto& s : sets) apply_override(config, s);
  return config;
}

/// Typed view of a validated configuration.
struct PipelineConfig {
  Backend backend = Backend::cwt;
  WaveletSpec wavelet;
  WindowSpec window;
  int n_voices = 32;
  std::optional<double> a_min, a_max;
  std::optional<std::size_t> n_freqs;
  std::optional<double> z_min, z_max;
  std::string epsilon_rule = "relative";
  double epsilon = 1e-6;
  std::optional<double> band_limit;
  RidgeParams ridge;
  std::optional<double> ridge_lambda;
  std::optional<double> ridge_floor;
  std::string band_policy = "adaptive";
  std::optional<double> band_half_width, band_cap;
  double noise_power = 0.0;
  std::uint64_t seed = 0;

  static PipelineConfig from_json(const json& j) {
    auto num = [&j](const char* section, const char* key) -> std::optional<double> {
      const auto& v = j.at(section).at(key);
      if (v.is_null()) return std::nullopt;
      if (!v.is_number()) {
        throw ConfigError("config key '" + std::string(section) + "." + key + "' must be a number or null");
      }
      return v.get<double>();
    };
    auto require = [](bool ok, const std::string& field, const std::string& why) {
      if (!ok) throw ConfigError("config key '" + field + "' " + why);
    };
    PipelineConfig c;
    const auto backend = j.at("backend").get<std::string>();
    require(backend == "cwt" || backend == "stft", "backend", "must be 'cwt' or 'stft'");
    c.backend = backend == "cwt" ? Backend::cwt : Backend::stft;

    const auto wfam = j.at("wavelet").at("family").get<std::string>();
    require(wfam == "bump", "wavelet.family", "must be 'bump'");
    const double delta = j.at("wavelet").at("delta").get<double>();
    require(delta > 0.0 && delta < 1.0, "wavelet.delta", "must lie in (0, 1)");
    c.wavelet = WaveletSpec::bump(delta);

    const auto gfam = j.at("window").at("family").get<std::string>();
    const double hw = j.at("window").at("half_width").get<double>();
    const double ratio = j.at("window").at("sigma_ratio").get<double>();
    require(hw > 0.0, "window.half_width", "must be positive");
    require(ratio > 0.0, "window.sigma_ratio", "must be positive");
    if (gfam == "truncated_gaussian") {
      c.window = WindowSpec::truncated_gaussian(hw, ratio);
    } else if (gfam == "raised_cosine") {
      c.window = WindowSpec::raised_cosine(hw);
    } else {
      require(false, "window.family", "must be 'truncated_gaussian' or 'raised_cosine'");
    }

    c.n_voices = j.at("cwt").at("n_voices").get<int>();
    require(c.n_voices >= 4, "cwt.n_voices", "must be at least 4");
    c.a_min = num("cwt", "a_min");
    c.a_max = num("cwt", "a_max");
    require(!c.a_min || *c.a_min > 0.0, "cwt.a_min", "must be positive");
    require(!c.a_max || !c.a_min || *c.a_max > *c.a_min, "cwt.a_max", "must exceed cwt.a_min");

    if (const auto nf = num("stft", "n_freqs")) {
      require(*nf >= 8 && *nf == std::floor(*nf), "stft.n_freqs", "must be an integer >= 8");
      c.n_freqs = static_cast<std::size_t>(*nf);
    }
    c.z_min = num("stft", "z_min");
    c.z_max = num("stft", "z_max");
    require(!c.z_min || *c.z_min > 0.0, "stft.z_min", "must be positive");

    c.epsilon_rule = j.at("squeeze").at("epsilon_rule").get<std::string>();
    require(c.epsilon_rule == "relative" || c.epsilon_rule == "absolute" ||
                c.epsilon_rule == "noise_adaptive",
            "squeeze.epsilon_rule", "must be 'relative', 'absolute' or 'noise_adaptive'");
    c.epsilon = j.at("squeeze").at("epsilon").get<double>();
    require(c.epsilon >= 0.0, "squeeze.epsilon", "must be non-negative");
    c.band_limit = num("squeeze", "band_limit");
    require(!c.band_limit || *c.band_limit > 1.0, "squeeze.band_limit", "must exceed 1");

    const auto& r = j.at("ridges");
    const double k = r.at("K").get<double>();
    require(k >= 1 && k == std::floor(k), "ridges.K", "must be an integer >= 1");
    c.ridge.count = static_cast<std::size_t>(k);
    c.ridge_lambda = num("ridges", "lambda");
    require(!c.ridge_lambda || *c.ridge_lambda >= 0.0, "ridges.lambda", "must be non-negative");
    c.ridge.min_energy_fraction = r.at("min_energy_fraction").get<double>();
    require(c.ridge.min_energy_fraction >= 0.0 && c.ridge.min_energy_fraction <= 1.0,
            "ridges.min_energy_fraction", "must lie in [0, 1]");
    const double jump = r.at("max_jump").get<double>();
    require(jump >= 1 && jump == std::floor(jump), "ridges.max_jump", "must be an integer >= 1");
    c.ridge.max_jump = static_cast<std::size_t>(jump);
    c.ridge_floor = num("ridges", "floor");
    require(!c.ridge_floor || *c.ridge_floor >= 0.0, "ridges.floor", "must be non-negative");
    const double gap = r.at("max_gap").get<double>();
    require(gap >= 0 && gap == std::floor(gap), "ridges.max_gap", "must be a non-negative integer");
    c.ridge.max_gap = static_cast<std::size_t>(gap);
    const double clear = r.at("clear_radius").get<double>();
    require(clear >= 0 && clear == std::floor(clear), "ridges.clear_radius",
            "must be a non-negative integer");
    c.ridge.clear_radius = static_cast<std::size_t>(clear);
    c.ridge.clear_hill = r.at("clear_hill").get<bool>();

    c.band_policy = j.at("reconstruct").at("band_policy").get<std::string>();
    require(c.band_policy == "adaptive" || c.band_policy == "fixed", "reconstruct.band_policy",
            "must be 'adaptive' or 'fixed'");
    c.band_half_width = num("reconstruct", "half_width");
    c.band_cap = num("reconstruct", "cap");
    require(!c.band_half_width || *c.band_half_width > 0.0, "reconstruct.half_width",
            "must be positive");
    require(!c.band_cap || *c.band_cap > 0.0, "reconstruct.cap", "must be positive");

    c.noise_power = j.at("noise_power").get<double>();
    require(c.noise_power >= 0.0, "noise_power", "must be non-negative");
    const double seed = j.at("seed").get<double>();
    require(seed >= 0 && seed == std::floor(seed), "seed", "must be a non-negative integer");
    c.seed = static_cast<std::uint64_t>(seed);
    return c;
  }
};

/// A named test signal together with its analytic components (empty for
/// signals without a closed-form IF, such as impulse trains).
struct Preset {
  SampledSignal signal;
  std::vector<ComponentSpec> components;
  double default_rate;
  double default_duration;
};

inline const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"fig1", "two-tone", "chirp", "impulse-train"};
  return names;
}

inline std::pair<double, double> preset_defaults(const std::string& name) {
  if (name == "fig1") return {100.0, 10.0};
  if (name == "two-tone") return {64.0, 24.0};
  if (name == "chirp") return {64.0, 10.0};
  if (name == "impulse-train") return {64.0, 20.0};
  std::string list;
  for (const auto& n : preset_names()) list += (list.empty() ? "" : ", ") + n;
  throw ConfigError("unknown signal '" + name + "'; available: " + list);
}

/// Real-valued by default (cosines); `analytic` keeps exp(2 pi i phi).
inline Preset make_preset(const std::string& name, std::optional<double> rate,
                          std::optional<double> duration, bool analytic = false) {
  const auto [r0, d0] = preset_defaults(name);
  const double fs = rate.value_or(r0);
  const double dur = duration.value_or(d0);
  if (name == "impulse-train") {
    std::vector<double> events;
    for (double t = 0.0; t <= dur + 1e-12; t += 1.0 / 6.0) {
      if (t <= dur) events.push_back(t);
    }
    std::vector<double> weights(events.size(), 1.0);
    return {impulse_train(events, weights, fs, dur), {}, r0, d0};
  }
  std::vector<ComponentSpec> comps;
  if (name == "fig1") comps = {presets::fig1()};
  if (name == "two-tone") comps = presets::two_tone();
  if (name == "chirp") comps = {presets::chirp(2.0, 1.0)};
  auto sig = synthesize(comps, fs, dur);
  if (!analytic) {
    std::vector<cplx> re(sig.size());
    for (std::size_t n = 0; n < re.size(); ++n) re[n] = sig.samples()[n].real();
    sig = SampledSignal(std::move(re), sig.sample_rate(), sig.start_time());
  }
  return {std::move(sig), std::move(comps), r0, d0};
}

struct AnalysisResult {
  Backend backend = Backend::cwt;
  bool real_input = false;
  std::optional<PlanePair<TimeScalePlane>> cwt;
  std::optional<PlanePair<TimeFrequencyPlane>> stft;
  double epsilon = 0.0;
  PhasePlane phase;
  SqueezeResult squeezed;
  RidgeSet ridges;
  std::vector<double> density;
  ComponentSet components;  ///< empty when no ridges were found
  double inversion_const = 1.0;
};

inline AnalysisResult run_analysis(const SampledSignal& input, const PipelineConfig& cfg) {
  AnalysisResult res;
  res.backend = cfg.backend;
  res.real_input = input.is_real();
  const SampledSignal signal =
      cfg.noise_power > 0.0 ? add_white_noise(input, cfg.noise_power, cfg.seed) : input;

  auto pick_epsilon = [&cfg](const ComplexMatrix& values, std::span<const cplx> finest) {
    if (cfg.epsilon_rule == "absolute") return cfg.epsilon;
    if (cfg.epsilon_rule == "noise_adaptive") return noise_adaptive_threshold(finest);
    return relative_threshold(values, cfg.epsilon);
  };

  SqueezeConfig sq;
  if (cfg.backend == Backend::cwt) {
    auto range = default_scale_range(signal, cfg.wavelet);
    if (cfg.a_min) range.a_min = *cfg.a_min;
    if (cfg.a_max) range.a_max = *cfg.a_max;
    res.cwt = cwt_with_derivative(signal, cfg.wavelet, cfg.n_voices, range);
    const auto& tr = res.cwt->transform;
    res.epsilon = pick_epsilon(tr.values, tr.values.row(0));
    res.phase = phase_transform(tr, res.cwt->derivative, res.epsilon);
    sq = default_squeeze_config(tr);
    sq.epsilon = res.epsilon;
    if (cfg.band_limit) sq.band_limit = cfg.band_limit;
    res.squeezed = squeeze(tr, res.phase, sq);
    res.inversion_const = inversion_constant(cfg.wavelet);
  } else {
    auto grid = default_frequency_grid(signal);
    if (cfg.n_freqs) grid.n_freqs = *cfg.n_freqs;
    if (cfg.z_min) grid.z_min = *cfg.z_min;
    if (cfg.z_max) grid.z_max = *cfg.z_max;
    res.stft = mstft_with_derivative(signal, cfg.window, grid);
    const auto& tr = res.stft->transform;
    res.epsilon = pick_epsilon(tr.values, tr.values.row(tr.values.rows() - 1));
    res.phase = phase_transform(tr, res.stft->derivative, res.epsilon);
    sq = default_squeeze_config(tr);
    sq.epsilon = res.epsilon;
    if (cfg.band_limit) sq.band_limit = cfg.band_limit;
    res.squeezed = squeeze(tr, res.phase, sq);
    res.inversion_const = inversion_constant(cfg.window);
  }

  const auto& plane = res.squeezed.plane;
  RidgeParams rp = cfg.ridge;
  rp.penalty = cfg.ridge_lambda ? *cfg.ridge_lambda : default_jump_penalty(plane);
  rp.floor = cfg.ridge_floor ? *cfg.ridge_floor : default_ridge_floor(plane);
  res.ridges = extract_ridges(plane, rp);
  res.density = density_index(res.ridges);

  BandPolicy policy = BandPolicy::default_for(plane);
  if (cfg.band_cap) policy.cap = *cfg.band_cap;
  if (cfg.band_policy == "fixed") {
    policy = BandPolicy::fixed(cfg.band_half_width.value_or(policy.cap));
  }
  res.components.policy = policy;
  res.components.spacing = plane.spacing;
  if (!res.ridges.ridges.empty()) {
    res.components = reconstruct_all(plane, res.ridges, policy, res.inversion_const);
  }
  return res;
}

/// Component samples as written to disk: 2 Re(.) for real inputs.
inline SampledSignal component_signal(const AnalysisResult& res, std::size_t k,
                                      const SampledSignal& input) {
  const auto& comp = res.components.components.at(k).samples;
  std::vector<cplx> s(comp.size());
  if (res.real_input) {
    const auto re = reconstruct_real(comp);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] = re[i];
  } else {
    s = comp;
  }
  return {std::move(s), input.sample_rate(), input.start_time()};
}

inline void write_analysis(const AnalysisResult& res, const SampledSignal& input,
                           const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  fs::create_directories(dir);
  auto open = [&dir](const std::string& name) {
    std::ofstream os(dir / name, std::ios::binary);
    if (!os) throw DataError("cannot write " + (dir / name).string());
    return os;
  };
  {
    auto csv = open("transform.csv");
    auto pgm = open("transform.pgm");
    if (res.cwt) {
      io::write_plane_csv(csv, res.cwt->transform);
      io::write_pgm(pgm, res.cwt->transform);
    } else {
      io::write_plane_csv(csv, res.stft->transform);
      io::write_pgm(pgm, res.stft->transform);
    }
  }
  {
    auto csv = open("squeezed.csv");
    io::write_plane_csv(csv, res.squeezed.plane);
    auto pgm = open("squeezed.pgm");
    io::write_pgm(pgm, res.squeezed.plane);
  }
  {
    auto os = open("ridges.csv");
    io::write_ridges_csv(os, res.ridges);
  }
  {
    auto os = open("density.csv");
    io::write_density_csv(os, res.ridges.times, res.density);
  }
  {
    auto os = open("squeeze_report.json");
    os << json{{"dropped_fraction", res.squeezed.report.dropped_fraction},
               {"n_dropped_cells", res.squeezed.report.n_dropped_cells}}
              .dump(2)
       << '\n';
  }

  double signal_energy = 0.0;
  for (const auto& x : input.samples()) signal_energy += std::norm(x);
  json comps = json::array();
  for (std::size_t k = 0; k < res.components.components.size(); ++k) {
    const auto name = "component_" + std::to_string(k) + ".csv";
    const auto sig = component_signal(res, k, input);
    auto os = open(name);
    io::write_signal_csv(os, sig);
    double e = 0.0;
    for (const auto& x : sig.samples()) e += std::norm(x);
    const auto& comp = res.components.components[k];
    json overlap = json::array();
    for (std::size_t c = 0; c < comp.overlap.size(); ++c) {
      if (comp.overlap[c]) overlap.push_back(c);
    }
    comps.push_back({{"component_id", k},
                     {"file", name},
                     {"band_policy", to_string(res.components.policy.kind)},
                     {"energy_fraction", signal_energy > 0.0 ? e / signal_energy : 0.0},
                     {"overlap_flags", overlap}});
  }
  json manifest{{"backend", to_string(res.backend)},
                {"real_input", res.real_input},
                {"n_samples", input.size()},
                {"sample_rate", input.sample_rate()},
                {"epsilon", res.epsilon},
                {"inversion_constant", res.inversion_const},
                {"n_ridges", res.ridges.ridges.size()},
                {"squeeze_report",
                 {{"dropped_fraction", res.squeezed.report.dropped_fraction},
                  {"n_dropped_cells", res.squeezed.report.n_dropped_cells}}},
                {"components", comps}};
  auto os = open("manifest.json");
  os << manifest.dump(2) << '\n';
}

}  // namespace sst

#endif  // SST_PIPELINE_HPP
