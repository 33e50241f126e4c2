#include "vdc/config.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "vdc/errors.hpp"

namespace vdc {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double to_real(const std::string& key, const std::string& v) {
  try {
    std::size_t used = 0;
    const double x = std::stod(v, &used);
    if (used != v.size() || !std::isfinite(x)) throw std::invalid_argument(v);
    return x;
  } catch (const std::exception&) {
    throw ParameterError("config: '" + key + "' expects a number, got '" + v + "'");
  }
}

std::int64_t to_int(const std::string& key, const std::string& v) {
  const double x = to_real(key, v);
  if (x != std::floor(x) || std::abs(x) > 9e15)
    throw ParameterError("config: '" + key + "' expects an integer, got '" + v + "'");
  return static_cast<std::int64_t>(x);
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true" || v == "yes" || v == "on") return true;
  if (v == "0" || v == "false" || v == "no" || v == "off") return false;
  throw ParameterError("config: '" + key + "' expects true/false, got '" + v + "'");
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::istringstream is(s);
  while (std::getline(is, cur, sep)) out.push_back(trim(cur));
  return out;
}

}  // namespace

std::vector<double> parse_real_list(const std::string& spec) {
  std::vector<double> out;
  if (trim(spec).empty()) return out;
  for (const auto& t : split(spec, ',')) out.push_back(to_real("list", t));
  return out;
}

std::vector<std::int64_t> parse_sweep(const std::string& spec) {
  const std::string s = trim(spec);
  std::vector<std::int64_t> out;
  if (s.rfind("arith:", 0) == 0 || s.rfind("geom:", 0) == 0) {
    const bool geo = s[0] == 'g';
    const auto parts = split(s.substr(s.find(':') + 1), ':');
    if (parts.size() != 3) throw ParameterError("sweep: expected kind:start:stop:step");
    const double start = to_real("sweep", parts[0]), stop = to_real("sweep", parts[1]),
                 step = to_real("sweep", parts[2]);
    if (geo ? !(step > 1.0) : !(step > 0.0)) throw ParameterError("sweep: step must advance");
    if (!(start > 0.0) && geo) throw ParameterError("sweep: geometric start must be positive");
    for (double v = start; v <= stop * (1.0 + 1e-12); v = geo ? v * step : v + step) {
      out.push_back(std::llround(v));
      if (out.size() > 10'000'000) throw ParameterError("sweep: too many points");
    }
  } else {
    for (const auto& t : split(s, ',')) out.push_back(to_int("sweep", t));
  }
  if (out.empty()) throw ParameterError("sweep: empty");
  return out;
}

void apply_config_entry(ExperimentConfig& cfg, const std::string& key, const std::string& value) {
  cfg.entries[key] = value;
  if (key == "family") cfg.family = value;
  else if (key == "params") cfg.params = parse_real_list(value);
  else if (key == "a") cfg.a = to_real(key, value);
  else if (key == "b") cfg.b = to_real(key, value);
  else if (key == "sweep") cfg.sweep = parse_sweep(value);
  else if (key == "psi_tol") cfg.psi_tol = to_real(key, value);
  else if (key == "quad_tol") cfg.quad_tol = to_real(key, value);
  else if (key == "out_dir") cfg.out_dir = value;
  else if (key == "emit_csv") cfg.emit_csv = to_bool(key, value);
  else if (key == "emit_json") cfg.emit_json = to_bool(key, value);
  else if (key == "emit_svg") cfg.emit_svg = to_bool(key, value);
  // other keys are kept in `entries` for subcommand-specific use
}

ExperimentConfig parse_config(std::istream& in) {
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ParameterError("config line " + std::to_string(lineno) + ": expected key=value");
    const std::string key = trim(line.substr(0, eq));
    if (key.empty())
      throw ParameterError("config line " + std::to_string(lineno) + ": empty key");
    apply_config_entry(cfg, key, trim(line.substr(eq + 1)));
  }
  return cfg;
}

ExperimentConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParameterError("cannot open config file '" + path + "'");
  return parse_config(in);
}

void validate_config(const ExperimentConfig& cfg, bool need_sweep) {
  if (!(cfg.psi_tol > 0.0) || !(cfg.quad_tol > 0.0))
    throw ParameterError("config: tolerances must be positive");
  if (need_sweep && cfg.sweep.empty()) throw ParameterError("config: sweep must be non-empty");
}

}  // namespace vdc
