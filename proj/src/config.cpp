#include "mqpg/config.hpp"

#include <cctype>
#include <cmath>
#include <fstream>
#include <sstream>

namespace mqpg {

namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

// strips a trailing comment that is not inside a string literal
std::string strip_comment(const std::string& s) {
  bool in_string = false;
  for (size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"') in_string = !in_string;
    if (s[i] == '#' && !in_string) return s.substr(0, i);
  }
  return s;
}

double parse_number(const std::string& text, const std::string& where) {
  size_t used = 0;
  double v = 0.0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    throw ConfigError(where + ": not a number: '" + text + "'");
  }
  if (trim(text.substr(used)) != "")
    throw ConfigError(where + ": trailing characters after number: '" + text + "'");
  return v;
}

ConfigValue parse_value(const std::string& raw, int line,
                        const std::string& where) {
  ConfigValue v;
  v.line = line;
  if (raw.size() >= 2 && raw.front() == '"' && raw.back() == '"') {
    v.type = ConfigValue::Type::String;
    v.str = raw.substr(1, raw.size() - 2);
    return v;
  }
  if (raw == "true" || raw == "false") {
    v.type = ConfigValue::Type::Boolean;
    v.boolean = (raw == "true");
    return v;
  }
  if (!raw.empty() && raw.front() == '[') {
    if (raw.back() != ']') throw ConfigError(where + ": unterminated array");
    v.type = ConfigValue::Type::NumberArray;
    std::string body = raw.substr(1, raw.size() - 2);
    std::stringstream ss(body);
    std::string item;
    while (std::getline(ss, item, ',')) {
      item = trim(item);
      if (item.empty()) throw ConfigError(where + ": empty array element");
      v.array.push_back(parse_number(item, where));
    }
    return v;
  }
  v.type = ConfigValue::Type::Number;
  v.number = parse_number(raw, where);
  return v;
}

}  // namespace

ConfigFile ConfigFile::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  return parse_string(buf.str(), path);
}

ConfigFile ConfigFile::parse_string(const std::string& text,
                                    const std::string& name) {
  ConfigFile file;
  file.name_ = name;
  std::stringstream ss(text);
  std::string line;
  std::string section;
  int line_no = 0;
  while (std::getline(ss, line)) {
    ++line_no;
    const std::string where = name + ":" + std::to_string(line_no);
    line = trim(strip_comment(line));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']')
        throw ConfigError(where + ": malformed section header");
      section = trim(line.substr(1, line.size() - 2));
      if (section.empty()) throw ConfigError(where + ": empty section name");
      continue;
    }
    const size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError(where + ": expected 'key = value'");
    std::string key = trim(line.substr(0, eq));
    const std::string raw = trim(line.substr(eq + 1));
    if (key.empty()) throw ConfigError(where + ": empty key");
    if (raw.empty()) throw ConfigError(where + ": missing value for '" + key + "'");
    if (!section.empty()) key = section + "." + key;
    if (file.values_.count(key))
      throw ConfigError(where + ": duplicate key '" + key + "'");
    file.values_[key] = parse_value(raw, line_no, where);
  }
  return file;
}

const ConfigValue* ConfigFile::find(const std::string& key) const {
  auto it = values_.find(key);
  if (it == values_.end()) return nullptr;
  consumed_[key] = true;
  return &it->second;
}

void ConfigFile::fail(const std::string& key, const std::string& msg) const {
  auto it = values_.find(key);
  const std::string where =
      (it == values_.end()) ? name_ : name_ + ":" + std::to_string(it->second.line);
  throw ConfigError(where + ": field '" + key + "' " + msg);
}

bool ConfigFile::has(const std::string& key) const {
  return values_.count(key) > 0;
}

double ConfigFile::number(const std::string& key, double fallback) const {
  const ConfigValue* v = find(key);
  if (!v) return fallback;
  if (v->type != ConfigValue::Type::Number) fail(key, "must be a number");
  return v->number;
}

int ConfigFile::integer(const std::string& key, int fallback) const {
  const ConfigValue* v = find(key);
  if (!v) return fallback;
  if (v->type != ConfigValue::Type::Number || v->number != std::floor(v->number))
    fail(key, "must be an integer");
  return static_cast<int>(v->number);
}

std::int64_t ConfigFile::integer64(const std::string& key,
                                   std::int64_t fallback) const {
  const ConfigValue* v = find(key);
  if (!v) return fallback;
  if (v->type != ConfigValue::Type::Number || v->number != std::floor(v->number))
    fail(key, "must be an integer");
  return static_cast<std::int64_t>(v->number);
}

bool ConfigFile::boolean(const std::string& key, bool fallback) const {
  const ConfigValue* v = find(key);
  if (!v) return fallback;
  if (v->type != ConfigValue::Type::Boolean) fail(key, "must be true or false");
  return v->boolean;
}

std::string ConfigFile::string(const std::string& key,
                               const std::string& fallback) const {
  const ConfigValue* v = find(key);
  if (!v) return fallback;
  if (v->type != ConfigValue::Type::String) fail(key, "must be a quoted string");
  return v->str;
}

std::vector<double> ConfigFile::number_array(const std::string& key) const {
  const ConfigValue* v = find(key);
  if (!v) return {};
  if (v->type == ConfigValue::Type::Number) return {v->number};
  if (v->type != ConfigValue::Type::NumberArray) fail(key, "must be an array of numbers");
  return v->array;
}

void ConfigFile::check_all_consumed() const {
  for (const auto& [key, value] : values_)
    if (!consumed_.count(key))
      throw ConfigError(name_ + ":" + std::to_string(value.line) +
                        ": unknown field '" + key + "'");
}

namespace {

AlphabetKind parse_kind(const std::string& s, const std::string& where) {
  if (s == "time_bins") return AlphabetKind::TimeBins;
  if (s == "hg_modes") return AlphabetKind::HermiteGauss;
  if (s == "frequency_bins") return AlphabetKind::FrequencyBins;
  throw ConfigError(where + ": alphabet kind must be one of "
                            "time_bins, hg_modes, frequency_bins (got '" + s + "')");
}

PmShape parse_shape(const std::string& s, const std::string& where) {
  if (s == "sinc") return PmShape::Sinc;
  if (s == "gaussian") return PmShape::Gaussian;
  throw ConfigError(where + ": pm_shape must be sinc or gaussian (got '" + s + "')");
}

}  // namespace

ExperimentConfig experiment_config_from(ConfigFile& file) {
  ExperimentConfig c;
  const std::string preset_key = file.string("preset", "");
  if (!preset_key.empty()) c = preset(preset_key);

  if (file.has("alphabet.kind"))
    c.alphabet.kind = parse_kind(file.string("alphabet.kind", ""), file.name());
  c.alphabet.dimension = file.integer("alphabet.dimension", c.alphabet.dimension);
  c.alphabet.fwhm = file.number("alphabet.fwhm", c.alphabet.fwhm);
  c.alphabet.separation = file.number("alphabet.separation", c.alphabet.separation);
  c.alphabet.center = file.number("alphabet.center", c.alphabet.center);

  if (file.has("layout.type")) {
    const std::string t = file.string("layout.type", "");
    if (t == "standard") c.layout = PumpLayout::Standard;
    else if (t == "ffb") c.layout = PumpLayout::Ffb;
    else throw ConfigError(file.name() + ": layout.type must be standard or ffb");
  }
  c.basis_index = file.integer("layout.basis", c.basis_index);

  const int n_ch = file.integer("device.n_channels", c.device.n_channels);
  const double spacing =
      file.number("device.channel_spacing",
                  c.device.n_channels >= 2 ? c.device.channel_spacing() : 0.63);
  const double out_center = file.number("device.output_center", 347.0);
  const double pm_fwhm = file.number("device.pm_fwhm", c.device.pm_fwhm);
  DeviceSpec dev = make_device(n_ch, spacing, out_center, pm_fwhm);
  dev.pm_shape = c.device.pm_shape;
  if (file.has("device.pm_shape"))
    dev.pm_shape = parse_shape(file.string("device.pm_shape", ""), file.name());
  dev.pump_bandwidth_limit =
      file.number("device.pump_bandwidth_limit", c.device.pump_bandwidth_limit);
  dev.relative_delay = file.number("device.relative_delay", c.device.relative_delay);
  dev.pump_center = file.number("device.pump_center", c.device.pump_center);
  dev.input_center = c.alphabet.center;
  c.device = dev;

  c.spectrograph.resolution =
      file.number("spectrograph.resolution", c.spectrograph.resolution);

  c.counting.n_pulses = file.integer64("counting.n_pulses", c.counting.n_pulses);
  c.counting.mean_photon_number =
      file.number("counting.mean_photon_number", c.counting.mean_photon_number);
  c.counting.efficiency = file.number("counting.efficiency", c.counting.efficiency);
  c.counting.seed = static_cast<std::uint64_t>(
      file.integer64("counting.seed", static_cast<std::int64_t>(c.counting.seed)));

  c.grids.input_center = c.alphabet.center;
  c.grids.input_span = file.number("grids.input_span", c.grids.input_span);
  c.grids.input_points = file.integer("grids.input_points", c.grids.input_points);
  c.grids.output_center = out_center;
  c.grids.output_span = file.number("grids.output_span", c.grids.output_span);
  c.grids.output_points = file.integer("grids.output_points", c.grids.output_points);
  c.grids.pump_span = file.number("grids.pump_span", c.grids.pump_span);
  c.grids.pump_points = file.integer("grids.pump_points", c.grids.pump_points);

  file.check_all_consumed();
  c.validate();
  return c;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  ConfigFile file = ConfigFile::parse_file(path);
  return experiment_config_from(file);
}

SweepConfig sweep_config_from(ConfigFile& file) {
  SweepConfig c;
  const std::vector<double> dims = file.number_array("sweep.dimensions");
  for (double d : dims) {
    if (d != std::floor(d))
      throw ConfigError(file.name() + ": sweep.dimensions must be integers");
    c.dimensions.push_back(static_cast<int>(d));
  }
  c.ratios = file.number_array("sweep.ratios");
  if (c.dimensions.empty() || c.ratios.empty())
    throw ConfigError(file.name() +
                      ": sweep.dimensions and sweep.ratios are required");
  c.pm_fwhm = file.number("sweep.pm_fwhm", c.pm_fwhm);
  c.separation_factor = file.number("sweep.separation_factor", c.separation_factor);
  if (file.has("sweep.pm_shape"))
    c.pm_shape = parse_shape(file.string("sweep.pm_shape", ""), file.name());
  c.spectrograph_resolution =
      file.number("sweep.spectrograph_resolution", c.spectrograph_resolution);
  c.max_grid_points = file.integer("sweep.max_grid_points", c.max_grid_points);
  c.threads = file.integer("sweep.threads", c.threads);

  file.check_all_consumed();
  for (int d : c.dimensions)
    if (!is_odd_prime(d))
      throw ConfigError(file.name() + ": sweep dimensions must be odd primes");
  for (double r : c.ratios)
    if (r <= 0.0) throw ConfigError(file.name() + ": sweep ratios must be positive");
  return c;
}

SweepConfig load_sweep_config(const std::string& path) {
  ConfigFile file = ConfigFile::parse_file(path);
  return sweep_config_from(file);
}

}  // namespace mqpg
