#include "vdc/cli.hpp"

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "vdc/config.hpp"
#include "vdc/errors.hpp"
#include "vdc/experiments.hpp"
#include "vdc/expsum.hpp"
#include "vdc/phase.hpp"
#include "vdc/report.hpp"
#include "vdc/transform.hpp"
#include "vdc/version.hpp"

namespace vdc {
namespace {

struct Common {
  std::string config, family, params, json;
  std::optional<double> a, b, psi_tol;
};

void add_common(CLI::App* sc, Common& c) {
  sc->add_option("--config", c.config, "key=value config file");
  sc->add_option("--family", c.family, "phase family name");
  sc->add_option("--params", c.params, "comma-separated family parameters");
  sc->add_option("--a", c.a, "left end");
  sc->add_option("--b", c.b, "right end");
  sc->add_option("--psi-tol", c.psi_tol, "tolerance of the sawtooth series");
  sc->add_option("--json", c.json, "JSON report path (a trailing '/' means a directory)");
}

ExperimentConfig resolve(const Common& c) {
  ExperimentConfig cfg = c.config.empty() ? ExperimentConfig{} : load_config(c.config);
  if (!c.family.empty()) apply_config_entry(cfg, "family", c.family);
  if (!c.params.empty()) apply_config_entry(cfg, "params", c.params);
  if (c.a) cfg.a = *c.a;
  if (c.b) cfg.b = *c.b;
  if (c.psi_tol) cfg.psi_tol = *c.psi_tol;
  return cfg;
}

// flag, then config entry, then fallback
double pick(const std::optional<double>& flag, const ExperimentConfig& cfg, const std::string& key,
            double fallback) {
  if (flag) return *flag;
  auto it = cfg.entries.find(key);
  if (it == cfg.entries.end()) return fallback;
  const auto v = parse_real_list(it->second);
  if (v.size() != 1) throw ParameterError("config: '" + key + "' expects one number");
  return v[0];
}

std::int64_t pick_int(const std::optional<std::int64_t>& flag, const ExperimentConfig& cfg,
                      const std::string& key, std::int64_t fallback) {
  if (flag) return *flag;
  const double v = pick(std::nullopt, cfg, key, static_cast<double>(fallback));
  if (v != std::floor(v)) throw ParameterError("config: '" + key + "' expects an integer");
  return static_cast<std::int64_t>(v);
}

std::string pick_str(const std::string& flag, const ExperimentConfig& cfg,
                     const std::string& key) {
  if (!flag.empty()) return flag;
  auto it = cfg.entries.find(key);
  return it == cfg.entries.end() ? std::string{} : it->second;
}

// Returns "" when no JSON file is wanted.
std::string json_target(const Common& c, const ExperimentConfig& cfg, const std::string& kind) {
  std::string path = c.json;
  if (path.empty() && cfg.emit_json) path = (cfg.out_dir.empty() ? "." : cfg.out_dir) + "/";
  if (path.empty()) return {};
  if (path.back() == '/' || std::filesystem::is_directory(path)) {
    std::filesystem::path p(path);
    return (p / (kind + ".json")).string();
  }
  return path;
}

void emit(const Common& c, const ExperimentConfig& cfg, const std::string& kind, Json result,
          std::ostream& out) {
  const std::string path = json_target(c, cfg, kind);
  if (path.empty()) return;
  write_json_file(path, envelope(kind, cfg, std::move(result)));
  out << "json=" << path << '\n';
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string fmt(cplx z) {
  char buf[80];
  std::snprintf(buf, sizeof buf, "%.12g%+.12gi", z.real(), z.imag());
  return buf;
}

struct Loaded {
  FamilyInstance inst;
  double a, b;
};

Loaded load_family(const ExperimentConfig& cfg) {
  const Family fam = parse_family(cfg.family);
  std::optional<Interval> dom;
  if (cfg.a || cfg.b) {
    const Interval d = default_domain(fam, cfg.params);
    dom = Interval{cfg.a.value_or(d.lo), cfg.b.value_or(d.hi)};
    if (!(dom->hi > dom->lo)) throw ParameterError("need a < b");
  }
  Loaded L{builtin_family(fam, cfg.params, dom), 0.0, 0.0};
  L.a = L.inst.model.domain.lo;
  L.b = L.inst.model.domain.hi;
  return L;
}

std::optional<cplx> parse_c(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto v = parse_real_list(s);
  if (v.size() != 2) throw ParameterError("--c expects re,im");
  return cplx(v[0], v[1]);
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"van der Corput transform toolkit"};
  app.set_version_flag("--version", std::string(kVersion));
  app.require_subcommand(1);

  Common c_sum, c_tr, c_bud, c_ex, c_est, c_ck, c_kl, c_ik, c_cur;

  auto* sum = app.add_subcommand("sum", "direct starred sum over [a, b]");
  add_common(sum, c_sum);
  bool sum_check = false;
  sum->add_flag("--check", sum_check, "also evaluate without modular reduction");

  auto* tr = app.add_subcommand("transform", "dual sum, endpoint terms and measured remainder");
  add_common(tr, c_tr);
  bool tr_terms = false;
  tr->add_flag("--terms", tr_terms, "print every dual term");

  auto* bud = app.add_subcommand("budget", "condition (M) and the error budget");
  add_common(bud, c_bud);
  std::optional<int> bud_samples;
  bud->add_option("--samples", bud_samples, "partition sampling resolution");

  auto* ex = app.add_subcommand("example", "regime report for the power family at N");
  add_common(ex, c_ex);
  std::optional<std::int64_t> ex_N;
  std::string ex_c, ex_sweep;
  ex->add_option("--N", ex_N, "sum length");
  ex->add_option("--sweep", ex_sweep, "list, arith:s:e:step or geom:s:e:factor");
  ex->add_option("--c", ex_c, "constant to subtract, re,im");

  auto* est = app.add_subcommand("estimate-c", "fit the constant from N = 12k^2");
  add_common(est, c_est);
  std::optional<std::int64_t> kmin, kmax;
  std::optional<double> est_res;
  est->add_option("--kmin", kmin, "smallest k");
  est->add_option("--kmax", kmax, "largest k");
  est->add_option("--residual-limit", est_res, "Cauchy threshold of the fit");

  auto* ck = app.add_subcommand("ck", "quadratic reciprocity bound");
  add_common(ck, c_ck);
  std::optional<double> ck_omega, ck_C;
  std::optional<std::int64_t> ck_n;
  ck->add_option("--omega", ck_omega, "0 < |omega| < 1");
  ck->add_option("--n", ck_n, "dual length, >= 1");
  ck->add_option("--C", ck_C, "bound constant");

  auto* kl = app.add_subcommand("kl", "first-derivative bound against endpoint terms");
  add_common(kl, c_kl);

  auto* ik = app.add_subcommand("ik", "monomial pair of conjugate exponents");
  add_common(ik, c_ik);
  std::optional<double> ik_alpha, ik_nu, ik_N, ik_X;
  ik->add_option("--alpha", ik_alpha, "alpha > 1");
  ik->add_option("--nu", ik_nu, "nu > 1");
  ik->add_option("--N", ik_N, "N >= 1");
  ik->add_option("--X", ik_X, "X >= N^2");

  auto* cur = app.add_subcommand("curve", "partial-sum curve as CSV and/or SVG");
  add_common(cur, c_cur);
  std::optional<double> tmax;
  std::optional<int> spu;
  std::string csv_path, svg_path;
  cur->add_option("--tmax", tmax, "largest t");
  cur->add_option("--spu", spu, "samples per unit of t");
  cur->add_option("--csv", csv_path, "CSV output path");
  cur->add_option("--svg", svg_path, "SVG output path");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    if (code == 0) return 0;
    err << app.help();
    return 2;
  }

  try {
    if (sum->parsed()) {
      auto cfg = resolve(c_sum);
      validate_config(cfg, false);
      auto L = load_family(cfg);
      const cplx s = direct_starred_sum(L.inst.model, L.a, L.b);
      out << "family=" << L.inst.model.name << "\na=" << fmt(L.a) << "\nb=" << fmt(L.b)
          << "\nsum=" << fmt(s) << "\nabs=" << fmt(std::abs(s)) << '\n';
      Json r = {{"a", L.a}, {"b", L.b}, {"sum", to_json(s)}};
      if (sum_check) {
        const cplx u = direct_starred_sum_unreduced(L.inst.model, L.a, L.b);
        out << "unreduced=" << fmt(u) << "\nreduction_gap=" << fmt(std::abs(u - s)) << '\n';
        r["unreduced"] = to_json(u);
      }
      emit(c_sum, cfg, "sum", r, out);
      return 0;
    }

    if (tr->parsed() || bud->parsed()) {
      const bool is_budget = bud->parsed();
      const Common& cc = is_budget ? c_bud : c_tr;
      auto cfg = resolve(cc);
      validate_config(cfg, false);
      auto L = load_family(cfg);
      TransformOptions opt;
      opt.psi_tol = cfg.psi_tol;
      if (bud_samples) opt.partition_samples = *bud_samples;
      const FullTransform F = full_transform(L.inst.model, L.inst.profile, L.a, L.b, opt);
      const auto& R = F.result;
      out << "family=" << L.inst.model.name << "\na=" << fmt(L.a) << "\nb=" << fmt(L.b)
          << "\nM=" << L.inst.profile.M_form << "\neps_verified=" << L.inst.profile.verified
          << "\ncondition_M=" << (F.condition.pass ? "pass" : "fail") << '\n';
      if (!is_budget) {
        out << "r_range=" << R.r_lo << ".." << R.r_hi << "\nrhs_main=" << fmt(R.rhs_main)
            << "\nD_a=" << fmt(R.D_a.explicit_value()) << " bound " << fmt(R.D_a.bound())
            << "\nD_b=" << fmt(R.D_b.explicit_value()) << " bound " << fmt(R.D_b.bound())
            << '\n';
        if (R.lhs) out << "lhs=" << fmt(*R.lhs) << '\n';
        if (R.measured_delta)
          out << "measured_delta=" << fmt(*R.measured_delta)
              << "\nabs_delta=" << fmt(std::abs(*R.measured_delta)) << '\n';
        if (tr_terms)
          for (const auto& t : R.terms)
            out << "term r=" << t.r << " x=" << fmt(t.xr) << " w=" << fmt(t.weight) << " "
                << fmt(t.value) << (t.ok ? "" : " error: " + t.error) << '\n';
      }
      const auto& B = F.budget;
      out << "delta1=" << fmt(B.delta1_a()) << "," << fmt(B.delta1_b())
          << "\ndelta2=" << fmt(B.delta2_a()) << "," << fmt(B.delta2_b())
          << "\ndelta3=" << fmt(B.delta3_a()) << "," << fmt(B.delta3_b())
          << "\ndelta4=" << fmt(B.delta4.total()) << "\nbudget_total=" << fmt(B.total())
          << '\n';
      for (const auto& d : F.diagnostics) out << "note: " << d << '\n';
      if (!F.condition.pass)
        for (const auto& n : F.condition.notes) out << "condition: " << n << '\n';
      emit(cc, cfg, is_budget ? "budget" : "transform", to_json(F), out);
      if (is_budget && !F.condition.pass) {
        err << "condition (M) fails on [" << fmt(L.a) << ", " << fmt(L.b) << "]\n";
        return 1;
      }
      return 0;
    }

    if (ex->parsed()) {
      auto cfg = resolve(c_ex);
      if (!ex_sweep.empty()) cfg.sweep = parse_sweep(ex_sweep);
      validate_config(cfg, false);
      const auto c = parse_c(pick_str(ex_c, cfg, "c"));
      std::vector<std::int64_t> Ns = cfg.sweep;
      if (ex_N || cfg.entries.count("N") || Ns.empty())
        Ns = {pick_int(ex_N, cfg, "N", 120000)};
      for (auto N : Ns)
        if (N < 13) throw ParameterError("N must be >= 13");
      const auto reps = example_regimes_batch(Ns, c);
      Json arr = Json::array();
      for (const auto& r : reps) {
        out << "N=" << r.N << " regime=" << r.regime << " dist=" << fmt(r.dist)
            << " delta=" << fmt(r.delta) << " predicted=" << fmt(r.predicted)
            << " residual=" << fmt(r.residual) << " bound=" << fmt(r.paper_bound) << '\n';
        arr.push_back(to_json(r));
      }
      emit(c_ex, cfg, "example", reps.size() == 1 ? arr[0] : arr, out);
      return 0;
    }

    if (est->parsed()) {
      auto cfg = resolve(c_est);
      validate_config(cfg, false);
      const auto k0 = pick_int(kmin, cfg, "kmin", 50), k1 = pick_int(kmax, cfg, "kmax", 100);
      if (!(k1 > k0 && k0 >= 10)) throw ParameterError("need kmax > kmin >= 10");
      const auto E = estimate_c(k0, k1, pick(est_res, cfg, "residual_limit", 0.05));
      out << "c=" << fmt(E.c) << "\nslope=" << fmt(E.slope) << "\nresidual=" << fmt(E.residual)
          << "\ncauchy=" << (E.cauchy ? "yes" : "no") << '\n';
      if (!E.diagnostic.empty()) out << "note: " << E.diagnostic << '\n';
      emit(c_est, cfg, "estimate-c", to_json(E), out);
      return 0;
    }

    if (ck->parsed()) {
      auto cfg = resolve(c_ck);
      validate_config(cfg, false);
      const double omega = pick(ck_omega, cfg, "omega", 0.7);
      const auto n = pick_int(ck_n, cfg, "n", 2);
      if (!(std::abs(omega) > 0.0 && std::abs(omega) < 1.0) || n < 1)
        throw ParameterError("need 0 < |omega| < 1 and n >= 1");
      const auto R = ck_quadratic(omega, n, pick(ck_C, cfg, "C", 3.14));
      out << "N=" << R.N << "\nlhs=" << fmt(R.lhs_sum) << "\nrhs=" << fmt(R.rhs_sum)
          << "\ndifference=" << fmt(R.difference) << "\nbound=" << fmt(R.bound)
          << "\npass=" << (R.pass ? "yes" : "no") << '\n';
      emit(c_ck, cfg, "ck", to_json(R), out);
      return R.pass ? 0 : 1;
    }

    if (kl->parsed()) {
      auto cfg = resolve(c_kl);
      if (c_kl.family.empty() && !cfg.entries.count("family")) {
        cfg.family = "quadratic";
        if (cfg.params.empty()) cfg.params = {0.001, 0.2};
        if (!cfg.a) cfg.a = 0.0;
        if (!cfg.b) cfg.b = 200.0;
      }
      validate_config(cfg, false);
      auto L = load_family(cfg);
      const auto R = kusmin_landau_compare(L.inst.model, L.a, L.b, cfg.psi_tol);
      out << "theta=" << fmt(R.theta) << "\nsum=" << fmt(R.starred_sum)
          << "\nabs_sum=" << fmt(std::abs(R.starred_sum)) << "\ncot_bound=" << fmt(R.cot_bound)
          << "\nclassical_ok=" << (R.classical_ok ? "yes" : "no")
          << "\ncorollary_applicable=" << (R.corollary_applicable ? "yes" : "no")
          << "\nexplicit=" << fmt(R.explicit_value) << "\nresidual=" << fmt(R.residual)
          << "\ncorollary_bound=" << fmt(R.corollary_bound) << '\n';
      emit(c_kl, cfg, "kl", to_json(R), out);
      return R.classical_ok ? 0 : 1;
    }

    if (ik->parsed()) {
      auto cfg = resolve(c_ik);
      validate_config(cfg, false);
      const double alpha = pick(ik_alpha, cfg, "alpha", 2.0), nu = pick(ik_nu, cfg, "nu", 2.0),
                   N = pick(ik_N, cfg, "N", 100.0), X = pick(ik_X, cfg, "X", 1e4);
      if (!(alpha > 1.0 && nu > 1.0 && N >= 1.0 && N * N <= X))
        throw ParameterError("need alpha > 1, nu > 1, N >= 1 and N^2 <= X");
      const auto R = ik_experiment(alpha, nu, N, X);
      out << "beta=" << fmt(R.beta) << "\nmu=" << fmt(R.mu) << "\nM=" << fmt(R.M)
          << "\nlhs=" << fmt(R.lhs) << "\nrhs=" << fmt(R.rhs) << "\ndelta=" << fmt(R.delta)
          << "\nscale=" << fmt(R.scale) << "\nratio=" << fmt(R.ratio) << '\n';
      emit(c_ik, cfg, "ik", to_json(R), out);
      return 0;
    }

    if (cur->parsed()) {
      auto cfg = resolve(c_cur);
      validate_config(cfg, false);
      const double T = pick(tmax, cfg, "tmax", 1200.0);
      const int S = static_cast<int>(pick(spu ? std::optional<double>(*spu) : std::nullopt, cfg,
                                          "spu", 8.0));
      if (!(T > 0.0) || S < 1) throw ParameterError("need tmax > 0 and spu >= 1");
      if (!cfg.a) cfg.a = 1.0;
      if (!cfg.b) cfg.b = std::floor(T) + 2.0;
      auto L = load_family(cfg);
      const auto samples = curve_samples(L.inst.model, T, S);
      std::string csv = pick_str(csv_path, cfg, "csv"), svg = pick_str(svg_path, cfg, "svg");
      const std::string dir = cfg.out_dir.empty() ? "." : cfg.out_dir;
      if (csv.empty() && cfg.emit_csv) csv = dir + "/curve.csv";
      if (svg.empty() && cfg.emit_svg) svg = dir + "/curve.svg";
      auto open = [](const std::string& p) {
        const std::filesystem::path fp(p);
        if (fp.has_parent_path()) std::filesystem::create_directories(fp.parent_path());
        std::ofstream f(fp);
        if (!f) throw ParameterError("cannot write '" + p + "'");
        return f;
      };
      if (!csv.empty()) {
        auto f = open(csv);
        write_curve_csv(f, samples);
        out << "csv=" << csv << '\n';
      }
      if (!svg.empty()) {
        auto f = open(svg);
        write_curve_svg(f, samples, L.inst.model.name + " partial sums, t <= " + fmt(T));
        out << "svg=" << svg << '\n';
      }
      out << "samples=" << samples.size() << "\nend=" << fmt(samples.back().value) << '\n';
      emit(c_cur, cfg, "curve",
           {{"samples", samples.size()}, {"end", to_json(samples.back().value)},
            {"csv", csv}, {"svg", svg}},
           out);
      return 0;
    }
  } catch (const ParameterError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const RangeError& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  err << app.help();
  return 2;
}

int cli_main(int argc, char** argv) {
  std::vector<std::string> args;
  for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
  return cli_main(args, std::cout, std::cerr);
}

}  // namespace vdc
