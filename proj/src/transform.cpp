#include "vdc/transform.hpp"

#include <cmath>

#include "vdc/errors.hpp"
#include "vdc/expsum.hpp"

namespace vdc {
namespace {

struct FpInfo {
  std::int64_t k = 0;  // [[f'(mu)]]
  double eps = 0.0;    // <f'(mu)>, exactly 0 when f'(mu) is integral
  bool integral = false;
};

FpInfo fp_info(const PhaseAmplitudeModel& m, double mu) {
  FpInfo out;
  const auto dec = fprime_decomp(m, mu);
  out.integral = fprime_integral(m, mu);
  out.k = out.integral ? std::llround(m.f1(mu)) : dec.nearest;
  out.eps = out.integral ? 0.0 : dec.signed_frac;
  return out;
}

// e(f(mu) - k mu)
cplx shifted_phase(const PhaseAmplitudeModel& m, double mu, std::int64_t k) {
  const long double x = mu;
  return expi_turns(m.f(x) - static_cast<long double>(k) * x);
}

const cplx kTwoPiI(0.0, kTwoPi);

}  // namespace

TransformResult rhs_main_sum(const PhaseAmplitudeModel& m, double a, double b) {
  if (b < a) throw ParameterError("rhs_main_sum: need a <= b");
  TransformResult R;
  const double fa = m.f1(a), fb = m.f1(b);
  const bool ia = fprime_integral(m, a), ib = fprime_integral(m, b);
  R.r_lo = ia ? std::llround(fa) : static_cast<std::int64_t>(std::ceil(fa));
  R.r_hi = ib ? std::llround(fb) : static_cast<std::int64_t>(std::floor(fb));
  if (R.r_hi < R.r_lo) return R;
  if (R.r_lo == R.r_hi && ia && ib) return R;  // a == b

  ComplexAccumulator acc;
  for (std::int64_t r = R.r_lo; r <= R.r_hi; ++r) {
    DualTerm t;
    t.r = r;
    t.weight = ((r == R.r_lo && ia) || (r == R.r_hi && ib)) ? 0.5 : 1.0;
    try {
      if (r == R.r_lo && ia)
        t.xr = a;
      else if (r == R.r_hi && ib)
        t.xr = b;
      else
        t.xr = invert_fprime(m, static_cast<double>(r));
      double turns;
      if (m.dual_phase_turns) {
        turns = (*m.dual_phase_turns)(r);
      } else {
        const long double x = t.xr;
        const long double v = m.f(x) - static_cast<long double>(r) * x;
        turns = static_cast<double>(v - std::nearbyintl(v));
      }
      const double f2 = m.f2(t.xr);
      if (!(f2 > 0.0)) throw RangeError("f'' must be positive at x_r", 0.0, INFINITY);
      t.value = t.weight * m.g(t.xr) / std::sqrt(f2) * expi_turns(turns + 0.125);
      acc.add(t.value);
    } catch (const std::exception& e) {
      t.ok = false;
      t.error = e.what();
      ++R.failed_terms;
    }
    R.terms.push_back(std::move(t));
  }
  R.rhs_main = acc.value();
  return R;
}

EndpointTerm endpoint_term(const PhaseAmplitudeModel& m, const ConditionMProfile& p, double mu,
                           Endpoint, double psi_tol) {
  EndpointTerm D;
  const FpInfo fi = fp_info(m, mu);
  const double d = std::abs(fi.eps);
  const double f2 = m.f2(mu);
  const double g = m.g(mu);
  const cplx E = shifted_phase(m, mu, fi.k);

  if (d > 0.0 && f2 <= d) {
    D.circ.value = g * E * (-1.0 / (kTwoPiI * fi.eps) + modified_sawtooth(mu, fi.eps, psi_tol));
    D.circ.regime = "explicit_reciprocal";
  } else if (f2 < 1.0 - d) {
    D.circ.value = g * E * modified_sawtooth(mu, fi.eps, psi_tol);
    D.circ.regime = "explicit_psi";
  } else if (f2 < 1.0) {
    D.circ.kind = TermKind::bound;
    D.circ.bound = p.U(mu);
    D.circ.regime = "bound_U";
  } else {
    const double M = p.M(mu);
    D.circ.kind = TermKind::bound;
    D.circ.bound = p.U(mu) * (1.0 + 1.0 / M + 1.0 / (std::sqrt(f2) * M));
    D.circ.regime = "bound_large_f2";
  }

  if (d == 0.0) {
    D.star.value = g * m.f3(mu) * E / (cplx(0.0, 6.0 * kPi) * f2 * f2) -
                   m.g1(mu) * E / (kTwoPiI * f2);
    D.star.regime = "integer";
  } else {
    D.star.regime = "zero";
  }
  return D;
}

RefinedEndpoint refined_endpoint_term(const PhaseAmplitudeModel& m, const ConditionMProfile& p,
                                      double mu, double C, double L) {
  const double M = p.M(mu), f2 = m.f2(mu), U = p.U(mu);
  if (!(M >= 1.0) || !(f2 >= 1.0))
    throw ParameterError("refined endpoint term needs M(mu) >= 1 and f''(mu) >= 1");
  if (!(C >= 1.0 / std::sqrt(f2)) || !(C < M))
    throw RangeError("refined endpoint term: C out of range", 1.0 / std::sqrt(f2), M);
  const double Lmax = f2 * std::min(1.0, C);
  if (!(L >= std::sqrt(f2)) || !(L < Lmax))
    throw RangeError("refined endpoint term: L out of range", std::sqrt(f2), Lmax);

  RefinedEndpoint R;
  R.C = C;
  R.L = L;
  const FpInfo fi = fp_info(m, mu);
  R.eps_prime = fi.eps;
  R.eps = is_integer_limit(mu) ? 0.0 : nearest_decomp(mu).signed_frac;
  const double ae = std::abs(R.eps), aep = std::abs(R.eps_prime);

  R.residual_bound = U * f2 * std::pow(C, 4) * L / M + U * L / (f2 * C) + U * f2 / (L * L) +
                     U / (f2 * C * C) + U / M;

  if (R.eps_prime == 0.0 && ae > C) {
    R.d0.kind = TermKind::bound;
    R.d0.bound = U / ((ae - C) * std::sqrt(f2));
    R.regime = "integral_far";
  } else if (R.eps_prime == 0.0) {
    R.d0.value = sawtooth_psi(mu) * m.g(mu) * shifted_phase(m, mu, fi.k);
    R.regime = "integral";
  } else if (R.eps == 0.0) {
    R.d0.kind = TermKind::bound;
    R.d0.bound = U * aep * L / f2 + U * aep * (1.0 + aep * C) * std::log(1.0 + f2) / std::sqrt(f2) +
                 U * f2 * aep * aep * aep * std::pow(C, 4);
    R.regime = "integer_endpoint";
  } else {
    R.d0.kind = TermKind::bound;
    R.d0.bound = U * (1.0 + 1.0 / M + 1.0 / (std::sqrt(f2) * M));
    R.regime = "unrefined";
  }
  R.d0.regime = R.regime;
  return R;
}

RefinedEndpoint optimized_refined_endpoint_term(const PhaseAmplitudeModel& m,
                                                const ConditionMProfile& p, double mu) {
  const double M = p.M(mu), F = m.f2(mu), U = p.U(mu);
  if (!fprime_integral(m, mu))
    throw ParameterError("optimised refinement needs f'(mu) to be an integer");
  if (!(M >= 1.0) || !(F >= 1.0))
    throw ParameterError("refined endpoint term needs M(mu) >= 1 and f''(mu) >= 1");
  if (M > std::pow(F, 7.0)) throw ParameterError("optimised refinement needs M(mu) <= f''(mu)^7");

  const double eps = is_integer_limit(mu) ? 0.0 : nearest_decomp(mu).signed_frac;
  const double ae = std::abs(eps);
  const double t1 = std::pow(F, -0.6) * std::pow(M, -0.2);
  const double t2 = std::pow(F, -0.4) * std::pow(M, 0.2);
  const double th = 1.0 / std::sqrt(F);

  RefinedEndpoint R;
  R.eps = eps;
  std::string choice;
  if (ae <= t1 || ae >= t2) {
    R.L = std::pow(F, 8.0 / 15.0) * std::pow(M, 1.0 / 15.0);
    R.C = t2;
    choice = "balanced";
  } else if (ae <= th) {
    R.L = std::pow(F, 1.0 / 3.0) * std::pow(ae, -1.0 / 3.0);
    R.C = 1.0 / (F * ae);
    choice = "near";
  } else {
    R.L = std::pow(F, 2.0 / 3.0) * std::pow(ae, 1.0 / 3.0);
    R.C = ae / 2.0;
    choice = "far";
  }
  const double common = U / (std::pow(M, 2.0 / 15.0) * std::pow(F, 1.0 / 15.0)) + U / M;
  if (ae <= th) {
    R.d0.value = sawtooth_psi(mu) * m.g(mu) * shifted_phase(m, mu, std::llround(m.f1(mu)));
    R.residual_bound = U * std::cbrt(F) * std::pow(ae, 2.0 / 3.0) + common;
    R.regime = "optimized_near:" + choice;
  } else {
    R.d0.kind = TermKind::bound;
    R.d0.bound = U / (std::cbrt(F) * std::pow(ae, 2.0 / 3.0));
    R.residual_bound = common;
    R.regime = "optimized_far:" + choice;
  }
  R.d0.regime = R.regime;
  return R;
}

TaggedTerm short_interval_endpoint_term(const PhaseAmplitudeModel& m, double mu, double T,
                                        double M, double U, double psi_tol) {
  TaggedTerm t;
  const FpInfo fi = fp_info(m, mu);
  const double d = std::abs(fi.eps);
  const double f2 = m.f2(mu);
  const cplx E = shifted_phase(m, mu, fi.k);
  if (d == 0.0) {
    t.value = m.g(mu) * m.f3(mu) * E / (cplx(0.0, 6.0 * kPi) * f2 * f2) -
              m.g1(mu) * E / (kTwoPiI * f2);
    t.regime = "integer";
  } else if (d <= std::sqrt(f2)) {
    t.kind = TermKind::bound;
    t.bound = U * M / std::sqrt(T);
    t.regime = "near_integer";
  } else {
    t.value = m.g(mu) * E * (-1.0 / (kTwoPiI * fi.eps) + modified_sawtooth(mu, fi.eps, psi_tol));
    t.bound = U / (M * d * d) + U * T / (M * M * d * d * d);
    t.regime = "far";
  }
  return t;
}

FullTransform full_transform(const PhaseAmplitudeModel& m, const ConditionMProfile& p, double a,
                             double b, const TransformOptions& opt) {
  if (b < a) throw ParameterError("full_transform: need a <= b");
  FullTransform F;
  F.result = rhs_main_sum(m, a, b);
  if (F.result.failed_terms > 0)
    F.diagnostics.push_back(std::to_string(F.result.failed_terms) + " dual term(s) failed");
  F.result.D_a = endpoint_term(m, p, a, Endpoint::a, opt.psi_tol);
  F.result.D_b = endpoint_term(m, p, b, Endpoint::b, opt.psi_tol);

  if (opt.with_budget && b > a) {
    F.condition = check_condition_M(m, p, a, b, opt.condition_grid);
    if (!F.condition.pass) {
      F.diagnostics.push_back("condition (M) not verified on [a,b]");
      for (const auto& n : F.condition.notes) F.diagnostics.push_back(n);
    }
    const Interval J = F.condition.part3 ? F.condition.J : Interval{a, b};
    F.partition = partition_assumptions(m, J.lo, J.hi, opt.partition_samples);
    BudgetOptions bo;
    bo.partition_samples = opt.partition_samples;
    bo.allow_alternate = opt.allow_alternate;
    F.budget = compute_budget(m, p, a, b, F.partition, bo);
    F.budget.d_bound_a = F.result.D_a.bound();
    F.budget.d_bound_b = F.result.D_b.bound();
    for (const auto& s : F.budget.diagnostics) F.diagnostics.push_back(s);
  }

  if (opt.measure_delta) {
    const cplx lhs = direct_starred_sum(m, a, b);
    F.result.lhs = lhs;
    F.result.measured_delta =
        lhs - F.result.rhs_main + F.result.D_b.explicit_value() - F.result.D_a.explicit_value();
  }
  return F;
}

}  // namespace vdc
