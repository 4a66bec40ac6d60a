// SPDX-License-Identifier: Apache-2.0

#include "ceui/config.hpp"

#include "ceui/window.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace ceui {

namespace pt = boost::property_tree;

std::string_view to_string(EmissionMode mode) { return mode == EmissionMode::ceui ? "ceui" : "pe"; }

void ScenarioConfig::reseed(std::uint64_t base) {
  medium_seed = base;
  emission_seed = base * 0x9E3779B97F4A7C15ULL + 1;
  noise_seed = base * 0xD1B54A32D192ED03ULL + 2;
}

Index ScenarioConfig::effective_mainlobe_halfwidth() const {
  return mainlobe_halfwidth.value_or(default_mainlobe_halfwidth(probe));
}

double ScenarioConfig::effective_peak_window() const { return peak_window.value_or(probe.wavelength()); }

double ScenarioConfig::effective_islr_margin() const { return islr_margin.value_or(probe.wavelength()); }

double ScenarioConfig::effective_islr_mainlobe() const { return islr_mainlobe.value_or(probe.wavelength() / 4.0); }

Index ScenarioConfig::echo_samples() const { return echo_length(n_e, r_max, probe); }

ScenarioConfig preset_defaults(std::string_view preset) {
  ScenarioConfig c;
  c.preset = std::string(preset);
  if (preset == "oscillating") {
    c.duration = 500e-6;
  } else if (preset == "blinking") {
    c.duration = 1.1e-3;
  } else if (preset == "cyst") {
    c.duration = 1e-3;
    c.compounding = 10;
  } else if (preset == "attenuated_column") {
    c.duration = 600e-6;
    c.r_max = 0.115;
    c.n_e = 4501;
    c.decimate = 24;
    c.attenuation = {1.5, true};
  } else if (!preset.empty()) {
    throw ConfigError("unknown preset '" + std::string(preset) + "'");
  }
  c.preset_options.duration = c.duration;
  return c;
}

namespace {

const std::map<std::string, std::set<std::string>> kKeys{
    {"probe", {"fc", "fs", "bw_frac", "c", "emit_x", "recv_x"}},
    {"medium", {"preset", "seed", "attenuation", "alpha", "cyst_amplitude", "cyst_frequency"}},
    {"scatterer", {"motion", "z0", "f_osc", "peak_to_peak", "v", "t_start", "t_stop", "knots", "centre", "strain",
                   "frequency", "echo", "amplitude", "blinks", "scale", "seed"}},
    {"emission", {"mode", "sigma", "seed", "duration", "cycles_per_chip", "pe_baseline"}},
    {"windows", {"n_e", "step", "r_max"}},
    {"decode", {"filters", "mainlobe_halfwidth", "loading", "decimate"}},
    {"mmode", {"upsample", "z_min", "z_max", "dz", "compounding", "db_range", "envelope"}},
    {"metrics", {"depths", "peak_window", "noise_band", "blink_depth", "blink_threshold", "islr_margin", "islr_mainlobe"}},
    {"noise", {"snr_db", "seed"}},
    {"output", {"dir", "png", "signals"}},
    {"doppler", {"velocities", "z0", "duration"}},
};

// Options that only make sense for the continuous emission.
const std::set<std::string> kCeuiOnly{"windows.n_e", "windows.step", "decode.filters", "decode.mainlobe_halfwidth",
                                      "decode.loading", "decode.decimate", "emission.sigma", "emission.pe_baseline"};

std::string trim(std::string s) {
  const auto b = s.find_first_not_of(" \t\r");
  const auto e = s.find_last_not_of(" \t\r");
  return b == std::string::npos ? std::string() : s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream in(s);
  while (std::getline(in, cur, sep))
    if (!trim(cur).empty()) out.push_back(trim(cur));
  return out;
}

class Field {
 public:
  Field(std::string name, std::string value) : name_(std::move(name)), value_(trim(std::move(value))) {}

  double number() const {
    std::string v = value_;
    std::transform(v.begin(), v.end(), v.begin(), [](unsigned char ch) { return std::tolower(ch); });
    if (v == "inf" || v == "+inf" || v == "off") return std::numeric_limits<double>::infinity();
    try {
      std::size_t used = 0;
      const double d = std::stod(value_, &used);
      if (used == value_.size()) return d;
    } catch (const std::exception&) {
    }
    fail("expected a number, got '" + value_ + "'");
  }

  Index integer() const {
    const double d = number();
    if (!std::isfinite(d) || d != std::floor(d)) fail("expected an integer, got '" + value_ + "'");
    return static_cast<Index>(d);
  }

  std::uint64_t seed() const {
    const Index i = integer();
    if (i < 0) fail("seed must be non-negative");
    return static_cast<std::uint64_t>(i);
  }

  bool boolean() const {
    if (value_ == "true" || value_ == "1" || value_ == "yes" || value_ == "on") return true;
    if (value_ == "false" || value_ == "0" || value_ == "no" || value_ == "off") return false;
    fail("expected a boolean, got '" + value_ + "'");
  }

  std::vector<double> numbers() const {
    std::vector<double> out;
    for (const auto& item : split(value_, ',')) out.push_back(Field(name_, item).number());
    return out;
  }

  /// `a:b:c; a:b:c` groups of exactly `arity` numbers.
  std::vector<std::vector<double>> tuples(std::size_t arity) const {
    std::vector<std::vector<double>> out;
    for (const auto& group : split(value_, ';')) {
      std::vector<double> t;
      for (const auto& item : split(group, ':')) t.push_back(Field(name_, item).number());
      if (t.size() != arity) fail("expected groups of " + std::to_string(arity) + " ':'-separated numbers");
      out.push_back(std::move(t));
    }
    return out;
  }

  const std::string& text() const { return value_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ConfigError("field '" + name_ + "': " + msg); }

 private:
  std::string name_;
  std::string value_;
};

using Section = std::map<std::string, Field>;

ScattererTrajectory parse_scatterer(const Section& s, const std::string& name) {
  auto get = [&](const std::string& k) -> const Field* {
    const auto it = s.find(k);
    return it == s.end() ? nullptr : &it->second;
  };
  auto num = [&](const std::string& k, double fallback) { return get(k) ? get(k)->number() : fallback; };
  auto require = [&](const std::string& k) -> const Field& {
    if (!get(k)) throw ConfigError("field '" + name + "." + k + "': required");
    return *get(k);
  };

  ScattererTrajectory t;
  const std::string kind = get("motion") ? get("motion")->text() : "static";
  if (kind == "static") {
    t.motion = motion::Static{require("z0").number()};
  } else if (kind == "sinusoidal_axial") {
    t.motion = motion::SinusoidalAxial{require("z0").number(), require("f_osc").number(),
                                       require("peak_to_peak").number()};
  } else if (kind == "constant_velocity") {
    t.motion = motion::ConstantVelocity{require("z0").number(), require("v").number(), num("t_start", 0.0),
                                        num("t_stop", std::numeric_limits<double>::infinity())};
  } else if (kind == "piecewise") {
    motion::Piecewise p;
    for (const auto& k : require("knots").tuples(2)) p.knots.push_back({k[0], k[1]});
    if (p.knots.empty()) require("knots").fail("at least one knot required");
    for (std::size_t i = 1; i < p.knots.size(); ++i)
      if (!(p.knots[i].t > p.knots[i - 1].t)) require("knots").fail("knot times must increase");
    t.motion = std::move(p);
  } else if (kind == "dilation") {
    t.motion = motion::Dilation{require("z0").number(), require("centre").number(), require("strain").number(),
                                require("frequency").number()};
  } else {
    require("motion").fail("unknown motion '" + kind + "'");
  }

  const std::string e = get("echo") ? get("echo")->text() : "constant";
  if (e == "constant") {
    t.echogenicity = echo::Constant{num("amplitude", 1.0)};
  } else if (e == "blinking") {
    echo::Blinking b;
    for (const auto& k : require("blinks").tuples(3)) b.blinks.push_back({k[0], k[1], k[2]});
    t.echogenicity = std::move(b);
  } else if (e == "rayleigh_random") {
    t.echogenicity = echo::RayleighRandom::draw(require("scale").number(), get("seed") ? get("seed")->seed() : 0);
  } else {
    require("echo").fail("unknown echogenicity '" + e + "'");
  }
  return t;
}

FilterKind parse_filter(const Field& f, const std::string& name) {
  try {
    return filter_kind_from_string(name);
  } catch (const std::invalid_argument&) {
    f.fail("unknown filter '" + name + "' (expected mf or mmf)");
  }
}

}  // namespace

ScenarioConfig parse_config(const std::string& text, const std::string& origin) {
  pt::ptree tree;
  try {
    std::istringstream in(text);
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }

  // Collect fields per section, rejecting unknown names.
  std::map<std::string, Section> sections;
  std::map<Index, Section> scatterer_sections;
  std::set<std::string> present;
  for (const auto& [sec_name, sec] : tree) {
    if (sec.empty() && !sec.data().empty())
      throw ConfigError(origin + ": key '" + sec_name + "' outside any section");
    std::string family = sec_name;
    std::optional<Index> index;
    if (sec_name.rfind("scatterer.", 0) == 0) {
      family = "scatterer";
      try {
        std::size_t used = 0;
        const std::string idx = sec_name.substr(10);
        index = std::stoll(idx, &used);
        if (used != idx.size() || *index < 0) throw std::invalid_argument(idx);
      } catch (const std::exception&) {
        throw ConfigError(origin + ": section [" + sec_name + "]: expected [scatterer.<non-negative integer>]");
      }
    }
    const auto allowed = kKeys.find(family);
    if (allowed == kKeys.end()) throw ConfigError(origin + ": unknown section [" + sec_name + "]");
    Section fields;
    for (const auto& [key, node] : sec) {
      if (!allowed->second.contains(key))
        throw ConfigError(origin + ": unknown key '" + key + "' in section [" + sec_name + "]");
      fields.emplace(key, Field(sec_name + "." + key, node.data()));
      present.insert(family + "." + key);
    }
    if (index) scatterer_sections[*index] = std::move(fields);
    else sections[sec_name] = std::move(fields);
  }
  auto field = [&](const std::string& sec, const std::string& key) -> const Field* {
    const auto s = sections.find(sec);
    if (s == sections.end()) return nullptr;
    const auto f = s->second.find(key);
    return f == s->second.end() ? nullptr : &f->second;
  };

  const Field* preset = field("medium", "preset");
  if (preset && !scatterer_sections.empty())
    throw ConfigError(origin + ": [medium] preset and explicit [scatterer.N] sections are mutually exclusive");
  if (!preset && scatterer_sections.empty())
    throw ConfigError(origin + ": the medium needs either [medium] preset or at least one [scatterer.N] section");

  ScenarioConfig c;
  try {
    c = preset_defaults(preset ? preset->text() : "");
  } catch (const ConfigError& e) {
    preset->fail(e.what());
  }

  auto set_num = [&](const std::string& sec, const std::string& key, double& dst) {
    if (const Field* f = field(sec, key)) dst = f->number();
  };
  auto set_opt = [&](const std::string& sec, const std::string& key, std::optional<double>& dst) {
    if (const Field* f = field(sec, key)) dst = f->number();
  };
  auto set_int = [&]<typename T>(const std::string& sec, const std::string& key, T& dst) {
    if (const Field* f = field(sec, key)) dst = static_cast<T>(f->integer());
  };
  auto set_seed = [&](const std::string& sec, const std::string& key, std::uint64_t& dst) {
    if (const Field* f = field(sec, key)) dst = f->seed();
  };
  auto set_bool = [&](const std::string& sec, const std::string& key, bool& dst) {
    if (const Field* f = field(sec, key)) dst = f->boolean();
  };

  set_num("probe", "fc", c.probe.fc);
  set_num("probe", "fs", c.probe.fs);
  set_num("probe", "bw_frac", c.probe.bw_frac);
  set_num("probe", "c", c.probe.c);
  if (const Field* f = field("probe", "emit_x")) c.probe.p_emit = Vec3(f->number(), 0.0, 0.0);
  if (const Field* f = field("probe", "recv_x")) c.probe.p_recv = Vec3(f->number(), 0.0, 0.0);

  set_seed("medium", "seed", c.medium_seed);
  set_bool("medium", "attenuation", c.attenuation.enabled);
  set_num("medium", "alpha", c.attenuation.alpha);
  if (field("medium", "alpha") && !field("medium", "attenuation")) c.attenuation.enabled = true;
  set_num("medium", "cyst_amplitude", c.preset_options.cyst_amplitude);
  set_num("medium", "cyst_frequency", c.preset_options.cyst_frequency);
  for (const auto& [idx, sec] : scatterer_sections)
    c.scatterers.push_back(parse_scatterer(sec, "scatterer." + std::to_string(idx)));

  if (const Field* f = field("emission", "mode")) {
    if (f->text() == "ceui") c.mode = EmissionMode::ceui;
    else if (f->text() == "pe") c.mode = EmissionMode::pe;
    else f->fail("expected ceui or pe");
  }
  set_num("emission", "sigma", c.sigma);
  set_seed("emission", "seed", c.emission_seed);
  set_num("emission", "duration", c.duration);
  c.preset_options.duration = c.duration;
  set_int("emission", "cycles_per_chip", c.cycles_per_chip);
  set_bool("emission", "pe_baseline", c.pe_baseline);

  set_int("windows", "n_e", c.n_e);
  set_int("windows", "step", c.step);
  set_num("windows", "r_max", c.r_max);

  if (const Field* f = field("decode", "filters")) {
    c.filters.clear();
    for (const auto& name : split(f->text(), ',')) c.filters.push_back(parse_filter(*f, name));
    if (c.filters.empty()) f->fail("at least one filter required");
  }
  if (const Field* f = field("decode", "mainlobe_halfwidth")) c.mainlobe_halfwidth = f->integer();
  set_num("decode", "loading", c.loading);
  set_int("decode", "decimate", c.decimate);

  set_int("mmode", "upsample", c.upsample);
  set_opt("mmode", "z_min", c.z_min);
  set_opt("mmode", "z_max", c.z_max);
  set_opt("mmode", "dz", c.dz);
  set_int("mmode", "compounding", c.compounding);
  set_num("mmode", "db_range", c.db_range);
  if (const Field* f = field("mmode", "envelope")) {
    try {
      c.envelope = envelope_order_from_string(f->text());
    } catch (const std::invalid_argument& e) {
      f->fail(e.what());
    }
  }

  if (const Field* f = field("metrics", "depths")) c.depths = f->numbers();
  set_opt("metrics", "peak_window", c.peak_window);
  set_num("metrics", "noise_band", c.noise_band);
  set_num("metrics", "blink_depth", c.blink_depth);
  set_num("metrics", "blink_threshold", c.blink_threshold);
  set_opt("metrics", "islr_margin", c.islr_margin);
  set_opt("metrics", "islr_mainlobe", c.islr_mainlobe);

  set_num("noise", "snr_db", c.snr_db);
  set_seed("noise", "seed", c.noise_seed);

  if (const Field* f = field("output", "dir")) c.out_dir = f->text();
  set_bool("output", "png", c.write_png);
  set_bool("output", "signals", c.write_signals);

  if (const Field* f = field("doppler", "velocities")) c.doppler_velocities = f->numbers();
  set_num("doppler", "z0", c.doppler_z0);
  set_num("doppler", "duration", c.doppler_duration);

  if (c.mode == EmissionMode::pe)
    for (const auto& key : kCeuiOnly)
      if (present.contains(key)) throw ConfigError(origin + ": field '" + key + "' is not allowed in pe mode");

  try {
    validate(c);
  } catch (const ConfigError& e) {
    throw ConfigError(origin + ": " + e.what());
  }
  return c;
}

ScenarioConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open configuration '" + path.string() + "'");
  std::ostringstream text;
  text << in.rdbuf();
  return parse_config(text.str(), path.string());
}

void validate(const ScenarioConfig& c) {
  try {
    c.probe.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(std::string("probe: ") + e.what());
  }
  auto require = [](bool ok, const std::string& rule) {
    if (!ok) throw ConfigError("invalid configuration: " + rule);
  };
  require(c.n_e >= 1 && c.n_e % 2 == 1, "windows.n_e must be a positive odd integer");
  require(c.step >= 1, "windows.step must be >= 1");
  require(c.r_max >= 0.0 && std::isfinite(c.r_max), "windows.r_max must be finite and >= 0");
  require(c.duration > 0.0, "emission.duration must be positive");
  require(c.sigma >= 0.0, "emission.sigma must be >= 0");
  require(c.cycles_per_chip >= 1, "emission.cycles_per_chip must be >= 1");
  require(!c.mainlobe_halfwidth || *c.mainlobe_halfwidth >= 0, "decode.mainlobe_halfwidth must be >= 0");
  require(c.loading >= 0.0, "decode.loading must be >= 0");
  require(c.decimate >= 1, "decode.decimate must be >= 1");
  require(c.upsample >= 1, "mmode.upsample must be >= 1");
  require(c.compounding >= 0, "mmode.compounding must be >= 0");
  require(c.db_range > 0.0, "mmode.db_range must be positive");
  require(!c.dz || *c.dz > 0.0, "mmode.dz must be positive");
  require(!c.z_min || *c.z_min >= 0.0, "mmode.z_min must be >= 0");
  require(!c.z_max || *c.z_max <= c.r_max + 1e-12, "mmode.z_max must not exceed windows.r_max");
  require(!c.z_min || !c.z_max || *c.z_min < *c.z_max, "mmode.z_min must be below mmode.z_max");
  require(c.noise_band > 0.0, "metrics.noise_band must be positive");
  require(!c.islr_margin || *c.islr_margin >= 0.0, "metrics.islr_margin must be >= 0");
  require(!c.islr_mainlobe || *c.islr_mainlobe >= 0.0, "metrics.islr_mainlobe must be >= 0");
  require(c.blink_threshold > 0.0 && c.blink_threshold <= 1.0, "metrics.blink_threshold must be in (0, 1]");
  require(!std::isnan(c.snr_db), "noise.snr_db must be a number");
  require(c.attenuation.alpha >= 0.0, "medium.alpha must be >= 0");
  require(c.doppler_duration > 0.0, "doppler.duration must be positive");
  for (double z : c.depths) require(z >= 0.0 && z <= c.r_max, "metrics.depths must lie in [0, r_max]");
  if (c.mode == EmissionMode::ceui) {
    const Index n_total = static_cast<Index>(std::llround(c.duration * c.probe.fs));
    require(n_total >= c.echo_samples(), "the acquisition (" + std::to_string(n_total) +
                                             " samples) must hold at least one echo window of " +
                                             std::to_string(c.echo_samples()) + " samples");
  }
}

Medium build_medium(const ScenarioConfig& config) {
  if (!config.preset.empty()) {
    Medium m = preset(config.preset, config.medium_seed, config.probe, config.preset_options);
    m.attenuation = config.attenuation;
    return m;
  }
  return Medium{config.scatterers, config.attenuation};
}

std::vector<std::pair<std::string, std::string>> describe(const ScenarioConfig& c) {
  std::vector<std::pair<std::string, std::string>> out;
  auto num = [](double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return std::string(buf);
  };
  auto list = [&](const std::vector<double>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + num(v[i]);
    return s;
  };
  out.emplace_back("probe.fc", num(c.probe.fc));
  out.emplace_back("probe.fs", num(c.probe.fs));
  out.emplace_back("probe.bw_frac", num(c.probe.bw_frac));
  out.emplace_back("probe.c", num(c.probe.c));
  out.emplace_back("probe.emit_x", num(c.probe.p_emit.x()));
  out.emplace_back("probe.recv_x", num(c.probe.p_recv.x()));
  out.emplace_back("medium.preset", c.preset.empty() ? "explicit" : c.preset);
  out.emplace_back("medium.scatterers", std::to_string(c.scatterers.size()));
  out.emplace_back("medium.seed", std::to_string(c.medium_seed));
  out.emplace_back("medium.attenuation", c.attenuation.enabled ? "true" : "false");
  out.emplace_back("medium.alpha", num(c.attenuation.alpha));
  out.emplace_back("medium.cyst_amplitude", num(c.preset_options.cyst_amplitude));
  out.emplace_back("medium.cyst_frequency", num(c.preset_options.cyst_frequency));
  out.emplace_back("emission.mode", std::string(to_string(c.mode)));
  out.emplace_back("emission.pe_baseline", c.pe_baseline ? "true" : "false");
  out.emplace_back("emission.sigma", num(c.sigma));
  out.emplace_back("emission.seed", std::to_string(c.emission_seed));
  out.emplace_back("emission.duration", num(c.duration));
  out.emplace_back("emission.cycles_per_chip", std::to_string(c.cycles_per_chip));
  out.emplace_back("windows.n_e", std::to_string(c.n_e));
  out.emplace_back("windows.step", std::to_string(c.step));
  out.emplace_back("windows.r_max", num(c.r_max));
  std::string filters;
  for (std::size_t i = 0; i < c.filters.size(); ++i) filters += (i ? "," : "") + std::string(to_string(c.filters[i]));
  out.emplace_back("decode.filters", filters);
  out.emplace_back("decode.mainlobe_halfwidth", std::to_string(c.effective_mainlobe_halfwidth()));
  out.emplace_back("decode.loading", num(c.loading));
  out.emplace_back("decode.decimate", std::to_string(c.decimate));
  out.emplace_back("mmode.upsample", std::to_string(c.upsample));
  out.emplace_back("mmode.z_min", c.z_min ? num(*c.z_min) : "auto");
  out.emplace_back("mmode.z_max", c.z_max ? num(*c.z_max) : "auto");
  out.emplace_back("mmode.dz", num(c.dz.value_or(c.probe.wavelength() / 8.0)));
  out.emplace_back("mmode.compounding", std::to_string(c.compounding));
  out.emplace_back("mmode.db_range", num(c.db_range));
  out.emplace_back("mmode.envelope", std::string(to_string(c.envelope)));
  out.emplace_back("metrics.depths", c.depths.empty() ? "auto" : list(c.depths));
  out.emplace_back("metrics.peak_window", num(c.effective_peak_window()));
  out.emplace_back("metrics.noise_band", num(c.noise_band));
  out.emplace_back("metrics.blink_depth", num(c.blink_depth));
  out.emplace_back("metrics.blink_threshold", num(c.blink_threshold));
  out.emplace_back("metrics.islr_margin", num(c.effective_islr_margin()));
  out.emplace_back("metrics.islr_mainlobe", num(c.effective_islr_mainlobe()));
  out.emplace_back("noise.snr_db", num(c.snr_db));
  out.emplace_back("noise.seed", std::to_string(c.noise_seed));
  out.emplace_back("output.png", c.write_png ? "true" : "false");
  out.emplace_back("output.signals", c.write_signals ? "true" : "false");
  out.emplace_back("doppler.velocities", list(c.doppler_velocities));
  out.emplace_back("doppler.z0", num(c.doppler_z0));
  out.emplace_back("doppler.duration", num(c.doppler_duration));
  return out;
}

}  // namespace ceui
