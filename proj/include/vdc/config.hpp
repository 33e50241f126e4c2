#pragma once

#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <string>
#include <vector>

namespace vdc {

// key=value file; '#' starts a comment, blank lines ignored, later keys win.
struct ExperimentConfig {
  std::string family = "power";
  std::vector<double> params;
  std::optional<double> a, b;
  std::vector<std::int64_t> sweep;
  double psi_tol = 1e-8;
  double quad_tol = 1e-10;
  std::string out_dir;
  bool emit_csv = false, emit_json = false, emit_svg = false;
  std::map<std::string, std::string> entries;  // every key seen, raw text
};

ExperimentConfig parse_config(std::istream& in);
ExperimentConfig load_config(const std::string& path);

// Applies one key; throws ParameterError on malformed values.
void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value);

// "1,2,3", "arith:start:stop:step" or "geom:start:stop:factor"
std::vector<std::int64_t> parse_sweep(const std::string& spec);
std::vector<double> parse_real_list(const std::string& spec);

// Throws ParameterError when tolerances are not positive.
void validate_config(const ExperimentConfig& cfg, bool need_sweep);

}  // namespace vdc
