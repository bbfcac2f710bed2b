#pragma once

#include <map>
#include <string>
#include <vector>

#include "mqpg/experiment.hpp"
#include "mqpg/scalability.hpp"

// Flat TOML-style configuration files: [section] headers, `key = value`
// lines, # comments. Values are strings, numbers, booleans, or arrays of
// numbers. Errors carry file and line.

namespace mqpg {

class ConfigError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct ConfigValue {
  enum class Type { String, Number, Boolean, NumberArray };
  Type type = Type::Number;
  std::string str;
  double number = 0.0;
  bool boolean = false;
  std::vector<double> array;
  int line = 0;
};

class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path);
  static ConfigFile parse_string(const std::string& text,
                                 const std::string& name = "<config>");

  bool has(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  int integer(const std::string& key, int fallback) const;
  std::int64_t integer64(const std::string& key, std::int64_t fallback) const;
  bool boolean(const std::string& key, bool fallback) const;
  std::string string(const std::string& key, const std::string& fallback) const;
  std::vector<double> number_array(const std::string& key) const;

  // throws if any key was never read (catches typos field-precisely)
  void check_all_consumed() const;

  const std::string& name() const { return name_; }

 private:
  [[noreturn]] void fail(const std::string& key, const std::string& msg) const;
  const ConfigValue* find(const std::string& key) const;

  std::string name_;
  std::map<std::string, ConfigValue> values_;
  mutable std::map<std::string, bool> consumed_;
};

// Layered loading: an optional `preset = "..."` key supplies the baseline,
// then individual keys override it.
ExperimentConfig load_experiment_config(const std::string& path);
ExperimentConfig experiment_config_from(ConfigFile& file);
SweepConfig load_sweep_config(const std::string& path);
SweepConfig sweep_config_from(ConfigFile& file);

}  // namespace mqpg
