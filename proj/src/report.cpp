#include "vdc/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "vdc/errors.hpp"
#include "vdc/kernels.hpp"
#include "vdc/version.hpp"

namespace vdc {
namespace {

// JSON has no infinities; non-finite magnitudes become strings.
Json num(double v) {
  if (std::isfinite(v)) return v;
  if (std::isnan(v)) return "nan";
  return v > 0 ? "inf" : "-inf";
}

Json opt(const std::optional<double>& v) { return v ? num(*v) : Json(nullptr); }

Json intervals(const std::vector<Interval>& v) {
  Json a = Json::array();
  for (const auto& I : v) a.push_back({num(I.lo), num(I.hi)});
  return a;
}

Json points(const std::vector<double>& v) {
  Json a = Json::array();
  for (double x : v) a.push_back(num(x));
  return a;
}

Json kpart(const KBreakdown& k) {
  return {{"integral", num(k.integral)},
          {"isolated", num(k.isolated)},
          {"boundary", num(k.boundary)},
          {"sign_changes", k.sign_changes},
          {"total", num(k.total())}};
}

}  // namespace

Json to_json(cplx z) { return {{"re", num(z.real())}, {"im", num(z.imag())}}; }

Json to_json(const ConditionMReport& r) {
  Json worst = Json::array();
  for (const auto& w : r.worst)
    worst.push_back({{"inequality", w.inequality}, {"ratio", num(w.ratio)}, {"x", num(w.x)},
                     {"z", num(w.z)}});
  Json viol = Json::array();
  for (const auto& v : r.violations)
    viol.push_back({{"inequality", v.inequality}, {"x", num(v.x)}, {"z", num(v.z)},
                    {"lhs", num(v.lhs)}, {"rhs", num(v.rhs)}});
  return {{"pass", r.pass},       {"part1", r.part1},         {"part2", r.part2},
          {"part3", r.part3},     {"part4", r.part4},         {"J", {num(r.J.lo), num(r.J.hi)}},
          {"c_a", r.c_a},         {"c_b", r.c_b},             {"grid", r.grid},
          {"z_samples", r.z_samples}, {"worst", worst},       {"violations", viol},
          {"violation_count", r.violation_count}, {"notes", r.notes}};
}

Json to_json(const AssumptionPartition& p) {
  Json flagged = intervals(p.flagged);
  return {{"J", {num(p.J.lo), num(p.J.hi)}},
          {"Jpm", intervals(p.Jpm)},
          {"J0", intervals(p.J0)},
          {"Jnull", points(p.Jnull)},
          {"Jpm_isolated", points(p.Jpm_isolated)},
          {"J0_isolated", points(p.J0_isolated)},
          {"boundary_pm", points(p.boundary_pm)},
          {"boundary_0", points(p.boundary_0)},
          {"flagged", flagged},
          {"final_assumption_ok", p.final_assumption_ok},
          {"diagnostics", p.diagnostics},
          {"samples", p.samples}};
}

Json to_json(const ErrorBudget& b) {
  const auto& d4 = b.delta4;
  return {{"delta1_a", num(b.delta1_a())},
          {"delta1_b", num(b.delta1_b())},
          {"delta1_case_a", b.end_a.delta1_case},
          {"delta1_case_b", b.end_b.delta1_case},
          {"delta2_a", num(b.delta2_a())},
          {"delta2_b", num(b.delta2_b())},
          {"delta3_a", num(b.delta3_a())},
          {"delta3_b", num(b.delta3_b())},
          {"delta3_parts",
           {{"integral_a", num(b.tails.integral_a)},
            {"boundary_a", num(b.tails.boundary_a)},
            {"integral_b", num(b.tails.integral_b)},
            {"boundary_b", num(b.tails.boundary_b)}}},
          {"delta4",
           {{"smooth_integral", num(d4.smooth_integral)},
            {"K0", kpart(d4.K0)},
            {"Kplus", kpart(d4.Kplus)},
            {"Kminus", kpart(d4.Kminus)},
            {"jnull_sum", num(d4.jnull_sum)},
            {"alternate_used", d4.alternate_used},
            {"total", num(d4.total())}}},
          {"k_terms", num(d4.k_terms())},
          {"jnull_sum", num(d4.jnull_sum)},
          {"m_a", b.end_a.m},
          {"m_b", b.end_b.m},
          {"abar", opt(b.bars.abar)},
          {"bbar", opt(b.bars.bbar)},
          {"d_bound_a", num(b.d_bound_a)},
          {"d_bound_b", num(b.d_bound_b)},
          {"total", num(b.total())},
          {"diagnostics", b.diagnostics}};
}

Json to_json(const TaggedTerm& t) {
  Json j = {{"kind", t.is_explicit() ? "explicit" : "bound"}, {"regime", t.regime}};
  if (t.is_explicit()) j["value"] = to_json(t.value);
  j["bound"] = num(t.bound);
  return j;
}

Json to_json(const EndpointTerm& d) {
  return {{"circ", to_json(d.circ)},
          {"star", to_json(d.star)},
          {"explicit", to_json(d.explicit_value())},
          {"bound", num(d.bound())}};
}

Json to_json(const TransformResult& t, bool with_terms) {
  Json j = {{"rhsMain", to_json(t.rhs_main)},
            {"dA", to_json(t.D_a)},
            {"dB", to_json(t.D_b)},
            {"rRange", {t.r_lo, t.r_hi}},
            {"failedTerms", t.failed_terms}};
  if (with_terms) {
    Json terms = Json::array();
    for (const auto& d : t.terms) {
      Json e = {{"r", d.r}, {"xr", num(d.xr)}, {"weight", d.weight}, {"value", to_json(d.value)}};
      if (!d.ok) e["error"] = d.error;
      terms.push_back(e);
    }
    j["terms"] = terms;
  }
  j["lhs"] = t.lhs ? to_json(*t.lhs) : Json(nullptr);
  j["measuredDelta"] = t.measured_delta ? to_json(*t.measured_delta) : Json(nullptr);
  return j;
}

Json to_json(const FullTransform& f) {
  return {{"transform", to_json(f.result, f.result.terms.size() <= 2000)},
          {"budget", to_json(f.budget)},
          {"condition", to_json(f.condition)},
          {"partition", to_json(f.partition)},
          {"diagnostics", f.diagnostics}};
}

Json to_json(const ExampleReport& r) {
  return {{"N", r.N},
          {"regime", r.regime},
          {"dist", num(r.dist)},
          {"signed_frac", num(r.signed_frac)},
          {"threshold", num(r.threshold)},
          {"lhs", to_json(r.lhs)},
          {"rhs", to_json(r.rhs)},
          {"delta", to_json(r.delta)},
          {"predicted", to_json(r.predicted)},
          {"residual", to_json(r.residual)},
          {"c_subtracted", r.c_subtracted},
          {"paper_bound", num(r.paper_bound)}};
}

Json to_json(const ConstantEstimate& e) {
  Json d = Json::array();
  for (std::size_t i = 0; i < e.ks.size(); ++i)
    d.push_back({{"k", e.ks[i]}, {"delta", to_json(e.deltas[i])}});
  return {{"c", to_json(e.c)},         {"slope", to_json(e.slope)},
          {"residual", num(e.residual)}, {"cauchy", e.cauchy},
          {"diagnostic", e.diagnostic}, {"samples", d}};
}

Json to_json(const CKReport& r) {
  return {{"omega", r.omega},
          {"n", r.n},
          {"N", r.N},
          {"lhs_sum", to_json(r.lhs_sum)},
          {"rhs_sum", to_json(r.rhs_sum)},
          {"difference", num(r.difference)},
          {"bound", num(r.bound)},
          {"pass", r.pass}};
}

Json to_json(const KLReport& r) {
  return {{"theta", num(r.theta)},
          {"starred_sum", to_json(r.starred_sum)},
          {"plain_sum", to_json(r.plain_sum)},
          {"cot_bound", num(r.cot_bound)},
          {"classical_ok", r.classical_ok},
          {"inv_pi_theta", num(r.inv_pi_theta)},
          {"corollary_applicable", r.corollary_applicable},
          {"explicit_value", to_json(r.explicit_value)},
          {"residual", num(r.residual)},
          {"corollary_bound", num(r.corollary_bound)},
          {"full_prediction", to_json(r.full_prediction)},
          {"residual_full", num(r.residual_full)},
          {"T", num(r.T)},
          {"M", num(r.M)}};
}

Json to_json(const IKReport& r) {
  return {{"alpha", r.alpha}, {"beta", r.beta},   {"nu", r.nu},
          {"mu", r.mu},       {"N", r.N},         {"X", r.X},
          {"M", r.M},         {"lhs", to_json(r.lhs)}, {"rhs", to_json(r.rhs)},
          {"delta", to_json(r.delta)}, {"rhs_transform", to_json(r.rhs_transform)},
          {"scale", num(r.scale)}, {"ratio", num(r.ratio)}};
}

Json to_json(const PoissonReport& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows)
    rows.push_back({{"R", row.R},
                    {"partial", to_json(row.partial)},
                    {"error", num(row.error)},
                    {"tail_estimate", num(row.tail_estimate)},
                    {"ok", row.ok}});
  return {{"direct", to_json(r.direct)}, {"rows", rows}, {"all_ok", r.all_ok}};
}

Json to_json(const ExperimentConfig& c) {
  Json entries = Json::object();
  for (const auto& [k, v] : c.entries) entries[k] = v;
  Json params = Json::array();
  for (double p : c.params) params.push_back(num(p));
  return {{"family", c.family},
          {"params", params},
          {"a", opt(c.a)},
          {"b", opt(c.b)},
          {"sweep", c.sweep},
          {"psi_tol", c.psi_tol},
          {"quad_tol", c.quad_tol},
          {"out_dir", c.out_dir},
          {"emit", {{"csv", c.emit_csv}, {"json", c.emit_json}, {"svg", c.emit_svg}}},
          {"entries", entries}};
}

Json envelope(const std::string& kind, const ExperimentConfig& cfg, Json result) {
  return {{"schema_version", kSchemaVersion},
          {"library_version", kVersion},
          {"kind", kind},
          {"kernel", kernels::isa_name(kernels::active_isa())},
          {"config", to_json(cfg)},
          {"result", std::move(result)}};
}

void write_json_file(const std::string& path, const Json& j) {
  const std::filesystem::path p(path);
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw ParameterError("cannot write '" + path + "'");
  out << j.dump(2) << '\n';
}

void write_curve_svg(std::ostream& os, std::span<const CurveSample> samples,
                     const std::string& title) {
  double xmin = 0, xmax = 1, ymin = 0, ymax = 1;
  if (!samples.empty()) {
    xmin = xmax = samples[0].value.real();
    ymin = ymax = samples[0].value.imag();
    for (const auto& s : samples) {
      xmin = std::min(xmin, s.value.real());
      xmax = std::max(xmax, s.value.real());
      ymin = std::min(ymin, s.value.imag());
      ymax = std::max(ymax, s.value.imag());
    }
  }
  const double span = std::max({xmax - xmin, ymax - ymin, 1e-12});
  const double pad = 0.03 * span;
  const double size = 800.0;
  const double scale = size / (span + 2 * pad);
  char buf[64];
  os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
     << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size
     << "\" height=\"" << size << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n";
  std::string esc;
  for (char ch : title) {
    if (ch == '<') esc += "&lt;";
    else if (ch == '>') esc += "&gt;";
    else if (ch == '&') esc += "&amp;";
    else esc += ch;
  }
  os << "<title>" << esc << "</title>\n";
  os << "<polyline fill=\"none\" stroke=\"black\" stroke-width=\"0.5\" points=\"";
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = (samples[i].value.real() - xmin + pad) * scale;
    const double y = size - (samples[i].value.imag() - ymin + pad) * scale;
    std::snprintf(buf, sizeof buf, "%s%.3f,%.3f", i ? " " : "", x, y);
    os << buf;
  }
  os << "\"/>\n</svg>\n";
}

}  // namespace vdc
