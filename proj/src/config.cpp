#include "rydeit/config.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <set>
#include <sstream>
#include <utility>

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>
#include <fmt/core.h>

#include "rydeit/units.hpp"

namespace rydeit {

namespace {

namespace pt = boost::property_tree;

using UnitTable = std::vector<std::pair<std::string_view, double>>;

const UnitTable& frequency_units() {
  static const UnitTable table{{"MHz", units::two_pi * 1e6}, {"kHz", units::two_pi * 1e3},
                               {"Hz", units::two_pi},        {"rad/s", 1.0},
                               {"/s", 1.0},                  {"1/s", 1.0},
                               {"s^-1", 1.0}};
  return table;
}

const UnitTable& length_units() {
  static const UnitTable table{{"um", 1.0}, {"μm", 1.0}, {"mm", 1e3}, {"m", 1e6}};
  return table;
}

const UnitTable& density_units() {
  static const UnitTable table{{"um^-3", 1.0}, {"μm^-3", 1.0}, {"mm^-3", 1e-9},
                               {"cm^-3", 1e-12}, {"m^-3", 1e-18}};
  return table;
}

enum class Dim { none, frequency, c6, length, density };

std::string_view trim(std::string_view s) {
  const auto ws = " \t\r\n";
  const auto b = s.find_first_not_of(ws);
  if (b == std::string_view::npos) return {};
  return s.substr(b, s.find_last_not_of(ws) - b + 1);
}

std::string expected_units(Dim dim) {
  auto join = [](const UnitTable& t, std::string_view suffix) {
    std::string out;
    for (const auto& [name, _] : t) {
      if (!out.empty()) out += ", ";
      out += fmt::format("'{}{}'", name, suffix);
    }
    return out;
  };
  switch (dim) {
    case Dim::frequency: return join(frequency_units(), "");
    case Dim::c6: return join(frequency_units(), " um^6");
    case Dim::length: return join(length_units(), "");
    case Dim::density: return join(density_units(), "");
    case Dim::none: break;
  }
  return "no unit";
}

std::optional<double> lookup(const UnitTable& table, std::string_view unit) {
  for (const auto& [name, factor] : table)
    if (name == unit) return factor;
  return std::nullopt;
}

std::optional<double> unit_factor(Dim dim, std::string_view unit) {
  switch (dim) {
    case Dim::none: return unit.empty() ? std::optional<double>(1.0) : std::nullopt;
    case Dim::frequency: return lookup(frequency_units(), unit);
    case Dim::length: return lookup(length_units(), unit);
    case Dim::density: return lookup(density_units(), unit);
    case Dim::c6: {
      const auto split = unit.find_first_of(" \t*");
      if (split == std::string_view::npos) return std::nullopt;
      const auto volume = trim(unit.substr(split + 1));
      if (volume != "um^6" && volume != "μm^6") return std::nullopt;
      return lookup(frequency_units(), trim(unit.substr(0, split)));
    }
  }
  return std::nullopt;
}

class Reader {
 public:
  Reader(std::string section, std::string key, std::string_view raw)
      : name_(fmt::format("[{}] {}", section, key)), raw_(trim(raw)) {}

  [[noreturn]] void fail(std::string_view why) const {
    throw ConfigError(fmt::format("{}: {} (got '{}')", name_, why, raw_));
  }

  // Parses a leading number and returns it with the trimmed remainder.
  std::pair<double, std::string_view> number_and_rest(std::string_view s) const {
    s = trim(s);
    if (!s.empty() && s.front() == '+') s.remove_prefix(1);
    double value = 0.0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
    if (ec != std::errc() || ptr == s.data()) fail("expected a number");
    if (!std::isfinite(value)) fail("value must be finite");
    return {value, trim(std::string_view(ptr, static_cast<std::size_t>(s.data() + s.size() - ptr)))};
  }

  double scale(Dim dim, std::string_view unit) const {
    if (dim != Dim::none && unit.empty()) fail("unit suffix required, one of " + expected_units(dim));
    const auto factor = unit_factor(dim, unit);
    if (!factor) fail("unknown unit '" + std::string(unit) + "', expected " + expected_units(dim));
    return *factor;
  }

  double quantity(Dim dim) const {
    const auto [value, unit] = number_and_rest(raw_);
    return value * scale(dim, unit);
  }

  std::vector<double> quantity_list(Dim dim) const {
    std::vector<std::string_view> items;
    std::string_view rest = raw_;
    for (auto comma = rest.find(','); comma != std::string_view::npos; comma = rest.find(',')) {
      items.push_back(rest.substr(0, comma));
      rest.remove_prefix(comma + 1);
    }
    items.push_back(rest);

    std::vector<double> values;
    std::string_view unit;
    for (std::size_t k = 0; k < items.size(); ++k) {
      const auto [value, tail] = number_and_rest(items[k]);
      if (!tail.empty() && k + 1 != items.size()) fail("the unit goes after the last value only");
      values.push_back(value);
      unit = tail;
    }
    const double factor = scale(dim, unit);
    for (auto& v : values) v *= factor;
    return values;
  }

  long long integer() const {
    long long value = 0;
    const auto [ptr, ec] = std::from_chars(raw_.data(), raw_.data() + raw_.size(), value);
    if (ec != std::errc() || ptr != raw_.data() + raw_.size()) fail("expected an integer");
    return value;
  }

  std::uint64_t unsigned64() const {
    std::uint64_t value = 0;
    const auto [ptr, ec] = std::from_chars(raw_.data(), raw_.data() + raw_.size(), value);
    if (ec != std::errc() || ptr != raw_.data() + raw_.size()) fail("expected an unsigned 64-bit integer");
    return value;
  }

  bool boolean() const {
    if (raw_ == "on" || raw_ == "true" || raw_ == "yes" || raw_ == "1") return true;
    if (raw_ == "off" || raw_ == "false" || raw_ == "no" || raw_ == "0") return false;
    fail("expected on|off");
  }

  template <typename Enum>
  Enum choice(std::initializer_list<std::pair<std::string_view, Enum>> options) const {
    std::string names;
    for (const auto& [name, value] : options) {
      if (raw_ == name) return value;
      names += names.empty() ? std::string(name) : "|" + std::string(name);
    }
    fail("expected one of " + names);
  }

  std::string text() const { return std::string(raw_); }

 private:
  std::string name_;
  std::string_view raw_;
};

void check(bool ok, std::string_view key, std::string_view constraint, double got) {
  if (!ok) throw ConfigError(fmt::format("{}: must satisfy {} (got {})", key, constraint, got));
}

using Setter = void (*)(RunConfig&, const Reader&);

struct KeySpec {
  std::string_view section;
  std::string_view key;
  Setter set;
  bool required;  // when no preset seeds the configuration
};

const std::vector<KeySpec>& key_specs() {
  static const std::vector<KeySpec> specs{
      {"system", "gamma_e_pop", [](RunConfig& c, const Reader& r) { c.system.gamma_e_pop = r.quantity(Dim::frequency); }, true},
      {"system", "gamma_r_pop", [](RunConfig& c, const Reader& r) { c.system.gamma_r_pop = r.quantity(Dim::frequency); }, true},
      {"system", "linewidth_1ph", [](RunConfig& c, const Reader& r) { c.system.linewidth_1ph = r.quantity(Dim::frequency); }, true},
      {"system", "linewidth_2ph", [](RunConfig& c, const Reader& r) { c.system.linewidth_2ph = r.quantity(Dim::frequency); }, true},
      {"system", "c6", [](RunConfig& c, const Reader& r) { c.system.c6 = r.quantity(Dim::c6); }, true},
      {"system", "omega_c", [](RunConfig& c, const Reader& r) { c.system.omega_c = r.quantity(Dim::frequency); }, true},
      {"system", "delta_c", [](RunConfig& c, const Reader& r) { c.system.delta_c = r.quantity(Dim::frequency); }, true},

      {"medium", "profile", [](RunConfig& c, const Reader& r) {
         c.medium.kind = r.choice<ProfileKind>({{"homogeneous", ProfileKind::homogeneous}, {"gaussian", ProfileKind::gaussian}});
       }, true},
      {"medium", "length", [](RunConfig& c, const Reader& r) { c.medium.length = r.quantity(Dim::length); }, true},
      {"medium", "density", [](RunConfig& c, const Reader& r) { c.medium.density = r.quantity(Dim::density); }, true},
      {"medium", "center", [](RunConfig& c, const Reader& r) { c.medium.center = r.quantity(Dim::length); }, false},
      {"medium", "sigma", [](RunConfig& c, const Reader& r) { c.medium.sigma = r.quantity(Dim::length); }, false},
      {"medium", "optical_depth", [](RunConfig& c, const Reader& r) { c.medium.optical_depth = r.quantity(Dim::none); }, true},

      {"sweep", "delta_p_min", [](RunConfig& c, const Reader& r) { c.sweep.delta_p_min = r.quantity(Dim::frequency); }, false},
      {"sweep", "delta_p_max", [](RunConfig& c, const Reader& r) { c.sweep.delta_p_max = r.quantity(Dim::frequency); }, false},
      {"sweep", "delta_p_points", [](RunConfig& c, const Reader& r) {
         const auto n = r.integer();
         if (n < 1 || n > 10'000'000) r.fail("must satisfy 1 <= delta_p_points <= 1e7");
         c.sweep.delta_p_points = static_cast<int>(n);
       }, false},
      {"sweep", "omega_p", [](RunConfig& c, const Reader& r) { c.sweep.omega_p_inputs = r.quantity_list(Dim::frequency); }, false},
      {"sweep", "realizations", [](RunConfig& c, const Reader& r) {
         const auto n = r.integer();
         if (n < 1 || n > 100'000'000) r.fail("must satisfy 1 <= realizations <= 1e8");
         c.sweep.realizations = static_cast<int>(n);
       }, false},
      {"sweep", "g2_input", [](RunConfig& c, const Reader& r) { c.sweep.g2_input = r.quantity(Dim::none); }, false},
      {"sweep", "line_window", [](RunConfig& c, const Reader& r) { c.sweep.line_window = r.quantity(Dim::frequency); }, false},

      {"propagation", "mode", [](RunConfig& c, const Reader& r) {
         c.propagation.mode = r.choice<IntegrationMode>({{"stochastic", IntegrationMode::stochastic}, {"continuous", IntegrationMode::continuous}});
       }, false},
      {"propagation", "seed", [](RunConfig& c, const Reader& r) { c.propagation.seed = r.unsigned64(); }, false},
      {"propagation", "substeps", [](RunConfig& c, const Reader& r) {
         const auto n = r.integer();
         if (n < 1 || n > 1'000'000) r.fail("must satisfy 1 <= substeps <= 1e6");
         c.propagation.substeps = static_cast<int>(n);
       }, false},
      {"propagation", "g2_feedback", [](RunConfig& c, const Reader& r) { c.propagation.g2_feedback = r.boolean(); }, false},
      {"propagation", "g2_decay_weight", [](RunConfig& c, const Reader& r) {
         c.propagation.g2_weight = r.choice<G2DecayWeight>({{"unconditional", G2DecayWeight::unconditional}, {"conditional", G2DecayWeight::conditional}});
       }, false},

      {"output", "dir", [](RunConfig& c, const Reader& r) {
         if (r.text().empty()) r.fail("must not be empty");
         c.output.dir = r.text();
       }, false},
      {"output", "json", [](RunConfig& c, const Reader& r) { c.output.json = r.boolean(); }, false},
  };
  return specs;
}

RunConfig pritchard2010() {
  RunConfig c;
  c.system.gamma_e_pop = 3.8e7;
  c.system.gamma_r_pop = 5e3;
  c.system.linewidth_1ph = units::from_mhz(0.057);
  c.system.linewidth_2ph = units::from_mhz(0.11);
  c.system.c6 = units::two_pi * 1.4e11;
  c.system.omega_c = units::from_mhz(2.25);
  c.system.delta_c = units::from_mhz(-0.1);

  c.medium.kind = ProfileKind::homogeneous;
  c.medium.length = 1.3 * units::um_per_mm;
  c.medium.density = units::per_mm3_to_per_um3(1.2e7);
  c.medium.optical_depth = 4.524;

  c.sweep.omega_p_inputs = {units::from_mhz(0.15), units::from_mhz(0.5), units::from_mhz(1.0)};
  c.sweep.realizations = 10;

  c.propagation.mode = IntegrationMode::stochastic;
  c.propagation.seed = 2010;
  return c;
}

RunConfig pritchard2010_gaussian() {
  RunConfig c = pritchard2010();
  c.medium.kind = ProfileKind::gaussian;
  c.medium.density = units::per_mm3_to_per_um3(1.32e7);
  c.medium.center = 0.5 * c.medium.length;
  c.medium.sigma = 0.7 * units::um_per_mm;
  return c;
}

}  // namespace

void RunConfig::validate() const {
  const auto& s = system;
  check(s.gamma_e_pop > 0.0, "[system] gamma_e_pop", "gamma_e_pop > 0", s.gamma_e_pop);
  check(s.gamma_r_pop >= 0.0, "[system] gamma_r_pop", "gamma_r_pop >= 0", s.gamma_r_pop);
  check(s.linewidth_1ph >= 0.0, "[system] linewidth_1ph", "linewidth_1ph >= 0", s.linewidth_1ph);
  check(s.linewidth_2ph >= 0.0, "[system] linewidth_2ph", "linewidth_2ph >= 0", s.linewidth_2ph);
  check(s.c6 > 0.0, "[system] c6", "c6 > 0", s.c6);
  check(s.omega_c > 0.0, "[system] omega_c", "omega_c > 0", s.omega_c);
  const auto rates = transverse_rates(s);
  check(rates.gamma_r < rates.gamma_e, "[system] gamma_r_pop/linewidth_2ph",
        "gamma_r < gamma_e", rates.gamma_r);

  check(medium.length > 0.0, "[medium] length", "length > 0", medium.length);
  check(medium.density > 0.0, "[medium] density", "density > 0", medium.density);
  check(medium.optical_depth > 0.0, "[medium] optical_depth", "optical_depth > 0", medium.optical_depth);
  check(medium.sigma >= 0.0, "[medium] sigma", "sigma >= 0", medium.sigma);
  if (medium.kind == ProfileKind::gaussian)
    check(medium.sigma > 0.0, "[medium] sigma", "sigma > 0 for a gaussian profile", medium.sigma);

  check(sweep.delta_p_points >= 1, "[sweep] delta_p_points", "delta_p_points >= 1", sweep.delta_p_points);
  if (sweep.delta_p_points > 1)
    check(sweep.delta_p_max > sweep.delta_p_min, "[sweep] delta_p_max", "delta_p_max > delta_p_min",
          units::to_mhz(sweep.delta_p_max));
  if (sweep.omega_p_inputs.empty()) throw ConfigError("[sweep] omega_p: at least one input is required");
  for (const double w : sweep.omega_p_inputs)
    check(w > 0.0, "[sweep] omega_p", "omega_p > 0", units::to_mhz(w));
  check(sweep.realizations >= 1, "[sweep] realizations", "realizations >= 1", sweep.realizations);
  check(sweep.g2_input >= 0.0, "[sweep] g2_input", "g2_input >= 0", sweep.g2_input);
  if (sweep.line_window)
    check(*sweep.line_window > 0.0, "[sweep] line_window", "line_window > 0", *sweep.line_window);
  check(propagation.substeps >= 1, "[propagation] substeps", "substeps >= 1", propagation.substeps);
}

MediumProfile RunConfig::make_medium() const {
  if (medium.kind == ProfileKind::homogeneous)
    return MediumProfile::homogeneous(medium.length, medium.density, medium.optical_depth);
  return MediumProfile::gaussian(medium.length, medium.density,
                                 medium.center.value_or(0.5 * medium.length), medium.sigma,
                                 medium.optical_depth);
}

SweepSpec RunConfig::make_sweep() const {
  SweepSpec spec;
  spec.delta_p_values = linspace(sweep.delta_p_min, sweep.delta_p_max, sweep.delta_p_points);
  spec.omega_p_inputs = sweep.omega_p_inputs;
  spec.n_realizations = sweep.realizations;
  spec.g2_input = sweep.g2_input;
  return spec;
}

std::vector<std::string> preset_names() { return {"pritchard2010", "pritchard2010-gaussian"}; }

RunConfig preset(std::string_view name) {
  if (name == "pritchard2010") return pritchard2010();
  if (name == "pritchard2010-gaussian") return pritchard2010_gaussian();
  std::string known;
  for (const auto& n : preset_names()) known += (known.empty() ? "" : ", ") + n;
  throw ConfigError(fmt::format("unknown preset '{}' (known: {})", name, known));
}

// Drops trailing "; ..." and "# ..." comments; the INI reader only knows
// whole-line comments.
static std::string strip_inline_comments(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool in_comment = false;
  char prev = '\n';
  for (const char c : text) {
    if (c == '\n') in_comment = false;
    if ((c == ';' || c == '#') && (prev == ' ' || prev == '\t')) in_comment = true;
    if (!in_comment) out.push_back(c);
    prev = c;
  }
  return out;
}

RunConfig parse_config(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{strip_inline_comments(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(fmt::format("config syntax error at line {}: {}", e.line(), e.message()));
  }

  RunConfig config;
  bool seeded = false;
  std::set<std::pair<std::string, std::string>> seen;

  const auto& specs = key_specs();
  auto is_section = [&](const std::string& name) {
    return std::any_of(specs.begin(), specs.end(), [&](const KeySpec& k) { return k.section == name; });
  };

  // Top-level keys and empty sections both show up as childless nodes.
  for (const auto& [name, node] : tree) {
    if (!node.empty()) continue;
    if (name == "preset") {
      config = preset(trim(node.data()));
      seeded = true;
    } else if (!(is_section(name) && node.data().empty())) {
      throw ConfigError(fmt::format("unknown top-level key '{}'", name));
    }
  }

  for (const auto& [section, node] : tree) {
    if (node.empty()) continue;
    if (!is_section(section)) throw ConfigError(fmt::format("unknown section [{}]", section));
    for (const auto& [key, leaf] : node) {
      const auto spec = std::find_if(specs.begin(), specs.end(), [&](const KeySpec& k) {
        return k.section == section && k.key == key;
      });
      if (spec == specs.end()) throw ConfigError(fmt::format("[{}] unknown key '{}'", section, key));
      spec->set(config, Reader(section, key, leaf.data()));
      seen.emplace(section, key);
    }
  }

  if (!seeded) {
    for (const auto& spec : specs) {
      if (spec.required && !seen.contains({std::string(spec.section), std::string(spec.key)}))
        throw ConfigError(fmt::format("[{}] missing required key '{}'", spec.section, spec.key));
    }
    if (config.medium.kind == ProfileKind::gaussian && !seen.contains({"medium", "sigma"}))
      throw ConfigError("[medium] missing required key 'sigma' for a gaussian profile");
    if (config.sweep.omega_p_inputs.empty())
      config.sweep.omega_p_inputs = pritchard2010().sweep.omega_p_inputs;
  }

  config.validate();
  return config;
}

std::string serialize_config(const RunConfig& c) {
  std::string out;
  auto line = [&out](std::string_view key, const std::string& value) {
    out += fmt::format("{} = {}\n", key, value);
  };
  auto rate = [](double v) { return fmt::format("{} rad/s", v); };
  auto length = [](double v) { return fmt::format("{} um", v); };

  out += "[system]\n";
  line("gamma_e_pop", rate(c.system.gamma_e_pop));
  line("gamma_r_pop", rate(c.system.gamma_r_pop));
  line("linewidth_1ph", rate(c.system.linewidth_1ph));
  line("linewidth_2ph", rate(c.system.linewidth_2ph));
  line("c6", fmt::format("{} rad/s um^6", c.system.c6));
  line("omega_c", rate(c.system.omega_c));
  line("delta_c", rate(c.system.delta_c));

  out += "\n[medium]\n";
  line("profile", c.medium.kind == ProfileKind::homogeneous ? "homogeneous" : "gaussian");
  line("length", length(c.medium.length));
  line("density", fmt::format("{} um^-3", c.medium.density));
  if (c.medium.center) line("center", length(*c.medium.center));
  line("sigma", length(c.medium.sigma));
  line("optical_depth", fmt::format("{}", c.medium.optical_depth));

  out += "\n[sweep]\n";
  line("delta_p_min", rate(c.sweep.delta_p_min));
  line("delta_p_max", rate(c.sweep.delta_p_max));
  line("delta_p_points", fmt::format("{}", c.sweep.delta_p_points));
  std::string inputs;
  for (const double w : c.sweep.omega_p_inputs)
    inputs += fmt::format("{}{}", inputs.empty() ? "" : ", ", w);
  line("omega_p", inputs + " rad/s");
  line("realizations", fmt::format("{}", c.sweep.realizations));
  line("g2_input", fmt::format("{}", c.sweep.g2_input));
  if (c.sweep.line_window) line("line_window", rate(*c.sweep.line_window));

  out += "\n[propagation]\n";
  line("mode", c.propagation.mode == IntegrationMode::stochastic ? "stochastic" : "continuous");
  line("seed", fmt::format("{}", c.propagation.seed));
  line("substeps", fmt::format("{}", c.propagation.substeps));
  line("g2_feedback", c.propagation.g2_feedback ? "on" : "off");
  line("g2_decay_weight",
       c.propagation.g2_weight == G2DecayWeight::unconditional ? "unconditional" : "conditional");

  out += "\n[output]\n";
  line("dir", c.output.dir);
  line("json", c.output.json ? "on" : "off");
  return out;
}

}  // namespace rydeit
