#include <array>
#include <cmath>
#include <sstream>

#include "vdc/errbudget.hpp"
#include "vdc/errors.hpp"
#include "vdc/phase.hpp"

namespace vdc {
namespace {

double param(std::span<const double> p, std::size_t i, double fallback) {
  return i < p.size() ? p[i] : fallback;
}

RealFn zero() {
  return [](double) { return 0.0; };
}

void unit_amplitude(PhaseAmplitudeModel& m) {
  m.g = [](double) { return 1.0; };
  m.g1 = m.g2 = m.g3 = zero();
}

// (x/3)^{3/2}
void set_power_phase(PhaseAmplitudeModel& m) {
  m.f = [](long double x) {
    const long double t = x / 3.0L;
    return t * std::sqrt(t);
  };
  m.f1 = [](double x) { return 0.5 * std::sqrt(x / 3.0); };
  m.f2 = [](double x) { return 1.0 / (12.0 * std::sqrt(x / 3.0)); };
  m.f3 = [](double x) { return -1.0 / (72.0 * std::pow(x / 3.0, 1.5)); };
  m.f4 = [](double x) { return 1.0 / (144.0 * std::pow(x / 3.0, 2.5)); };
  m.fprime_inverse = [](double r) { return 12.0 * r * r; };
  // f(12 r^2) - 12 r^3 = -4 r^3
  m.dual_phase_turns = [](std::int64_t) { return 0.0; };
  m.fprime_is_integer = [](double x) {
    if (!(x >= 0.0)) return false;
    const double k = std::nearbyint(std::sqrt(x / 12.0));
    return 12.0 * k * k == x;
  };
}

// sin(gx)/x and its first four derivatives by Leibniz.
std::array<double, 5> sinc_derivs(double gamma, double x) {
  std::array<double, 5> s{};
  static constexpr int binom[5][5] = {
      {1, 0, 0, 0, 0}, {1, 1, 0, 0, 0}, {1, 2, 1, 0, 0}, {1, 3, 3, 1, 0}, {1, 4, 6, 4, 1}};
  std::array<double, 5> trig{}, inv{};
  double gk = 1.0;
  for (int k = 0; k < 5; ++k) {
    trig[k] = gk * std::sin(gamma * x + k * kPi / 2.0);
    gk *= gamma;
  }
  double fact = 1.0;
  for (int j = 0; j < 5; ++j) {
    if (j > 0) fact *= j;
    inv[j] = ((j % 2) ? -1.0 : 1.0) * fact / std::pow(x, j + 1);
  }
  for (int n = 0; n < 5; ++n)
    for (int k = 0; k <= n; ++k) s[n] += binom[n][k] * trig[k] * inv[n - k];
  return s;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ParameterError(what);
}

ConditionMProfile search_eps(const PhaseAmplitudeModel& m, MForm form, const RealFn& U) {
  for (double eps = 0.5; eps >= 1.0 / 4096.0; eps *= 0.5) {
    ConditionMProfile p = make_profile(form, eps, U);
    if (check_condition_M(m, p, m.domain.lo, m.domain.hi, 64).pass) {
      p.verified = true;
      return p;
    }
  }
  return make_profile(form, 0.5, U);
}

}  // namespace

Family parse_family(std::string_view name) {
  if (name == "power" || name == "power_phase") return Family::power;
  if (name == "quadratic") return Family::quadratic;
  if (name == "ik_monomial" || name == "ik") return Family::ik_monomial;
  if (name == "exponential") return Family::exponential;
  if (name == "zeta_log") return Family::zeta_log;
  if (name == "oscillatory") return Family::oscillatory;
  if (name == "power_sine") return Family::power_sine;
  if (name == "cubic_dual") return Family::cubic_dual;
  throw ParameterError("unknown family '" + std::string(name) +
                       "' (power, quadratic, ik_monomial, exponential, zeta_log, oscillatory, "
                       "power_sine, cubic_dual)");
}

const char* family_name(Family f) {
  switch (f) {
    case Family::power: return "power";
    case Family::quadratic: return "quadratic";
    case Family::ik_monomial: return "ik_monomial";
    case Family::exponential: return "exponential";
    case Family::zeta_log: return "zeta_log";
    case Family::oscillatory: return "oscillatory";
    case Family::power_sine: return "power_sine";
    case Family::cubic_dual: return "cubic_dual";
  }
  return "?";
}

Interval default_domain(Family f, std::span<const double> p) {
  switch (f) {
    case Family::power: return {1.0, 1e7};
    case Family::quadratic: return {0.0, 1000.0};
    case Family::ik_monomial: {
      const double N = param(p, 1, 100.0);
      return {N / 2.0, 64.0 * N};
    }
    case Family::exponential: return {0.0, 20.0};
    case Family::zeta_log: return {1.0, std::max(10.0, param(p, 0, 100.0))};
    case Family::oscillatory: return {10.0, 1000.0};
    case Family::power_sine: return {10.0, 1000.0};
    case Family::cubic_dual: return {1.0, 10.0};
  }
  return {0.0, 1.0};
}

FamilyInstance builtin_family(Family family, std::span<const double> p,
                              std::optional<Interval> domain) {
  FamilyInstance out;
  PhaseAmplitudeModel& m = out.model;
  m.domain = domain.value_or(default_domain(family, p));
  require(m.domain.hi > m.domain.lo, "family domain must have lo < hi");
  std::ostringstream name;
  name.precision(10);
  name << family_name(family);
  if (!p.empty()) {
    name << "[";
    for (std::size_t i = 0; i < p.size(); ++i) name << (i ? "," : "") << p[i];
    name << "]";
  }
  m.name = name.str();

  const RealFn one = [](double) { return 1.0; };

  switch (family) {
    case Family::power: {
      require(m.domain.lo > 0.0, "power: domain must be positive");
      set_power_phase(m);
      unit_amplitude(m);
      out.profile = search_eps(m, MForm::linear, one);
      break;
    }
    case Family::quadratic: {
      const double w = param(p, 0, 1.0), beta = param(p, 1, 0.0);
      require(std::isfinite(w) && std::isfinite(beta), "quadratic: non-finite parameter");
      require(w != 0.0, "quadratic: omega must be non-zero");
      require(w > 0.0, "quadratic: omega < 0 gives f'' < 0; conjugate the sum and use -omega");
      m.f = [w, beta](long double x) { return 0.5L * w * x * x + beta * x; };
      m.f1 = [w, beta](double x) { return w * x + beta; };
      m.f2 = [w](double) { return w; };
      m.f3 = m.f4 = zero();
      m.fprime_inverse = [w, beta](double r) { return (r - beta) / w; };
      m.dual_phase_turns = [w, beta](std::int64_t r) {
        const long double d = static_cast<long double>(r) - beta;
        const long double v = -d * d / (2.0L * w);
        return static_cast<double>(v - std::nearbyintl(v));
      };
      unit_amplitude(m);
      out.profile = make_profile(MForm::constant, m.domain.length(), one);
      out.profile.verified =
          check_condition_M(m, out.profile, m.domain.lo, m.domain.hi, 64).pass;
      break;
    }
    case Family::ik_monomial: {
      const double al = param(p, 0, 2.0), N = param(p, 1, 100.0), X = param(p, 2, 1e4);
      require(al > 1.0, "ik_monomial: alpha must exceed 1");
      require(N > 0.0 && X > 0.0, "ik_monomial: N and X must be positive");
      require(m.domain.lo > 0.0, "ik_monomial: domain must be positive");
      m.f = [al, N, X](long double x) {
        return static_cast<long double>(X) / al * std::pow(x / N, static_cast<long double>(al));
      };
      m.f1 = [al, N, X](double x) { return X / N * std::pow(x / N, al - 1.0); };
      m.f2 = [al, N, X](double x) { return X / (N * N) * (al - 1.0) * std::pow(x / N, al - 2.0); };
      m.f3 = [al, N, X](double x) {
        return X / (N * N * N) * (al - 1.0) * (al - 2.0) * std::pow(x / N, al - 3.0);
      };
      m.f4 = [al, N, X](double x) {
        return X / (N * N * N * N) * (al - 1.0) * (al - 2.0) * (al - 3.0) *
               std::pow(x / N, al - 4.0);
      };
      m.fprime_inverse = [al, N, X](double r) { return N * std::pow(r * N / X, 1.0 / (al - 1.0)); };
      const double sa = std::sqrt(al);
      m.g = [sa](double x) { return sa / std::sqrt(x); };
      m.g1 = [sa](double x) { return -0.5 * sa * std::pow(x, -1.5); };
      m.g2 = [sa](double x) { return 0.75 * sa * std::pow(x, -2.5); };
      m.g3 = [sa](double x) { return -1.875 * sa * std::pow(x, -3.5); };
      out.profile = search_eps(m, MForm::linear, m.g);
      break;
    }
    case Family::exponential: {
      const double al = param(p, 0, 1.0), beta = param(p, 1, std::exp(1.0));
      require(al > 0.0, "exponential: alpha must be positive");
      require(beta > 1.0, "exponential: beta must exceed 1");
      const double lb = std::log(beta);
      const long double lbl = std::log(static_cast<long double>(beta));
      m.f = [al, lbl](long double x) { return al * std::exp(lbl * x); };
      m.f1 = [al, lb](double x) { return al * lb * std::exp(lb * x); };
      m.f2 = [al, lb](double x) { return al * lb * lb * std::exp(lb * x); };
      m.f3 = [al, lb](double x) { return al * lb * lb * lb * std::exp(lb * x); };
      m.f4 = [al, lb](double x) { return al * lb * lb * lb * lb * std::exp(lb * x); };
      m.fprime_inverse = [al, lb](double r) { return std::log(r / (al * lb)) / lb; };
      unit_amplitude(m);
      out.profile = search_eps(m, MForm::constant, one);
      break;
    }
    case Family::zeta_log: {
      const double t = param(p, 0, 100.0), sigma = param(p, 1, 0.5);
      require(t > 0.0, "zeta_log: t must be positive");
      require(m.domain.lo > 0.0, "zeta_log: domain must be positive");
      constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;
      m.f = [t](long double x) { return -static_cast<long double>(t) * std::log(x) / kTwoPiL; };
      m.f1 = [t](double x) { return -t / (kTwoPi * x); };
      m.f2 = [t](double x) { return t / (kTwoPi * x * x); };
      m.f3 = [t](double x) { return -t / (kPi * x * x * x); };
      m.f4 = [t](double x) { return 3.0 * t / (kPi * x * x * x * x); };
      m.fprime_inverse = [t](double r) { return -t / (kTwoPi * r); };
      m.g = [sigma](double x) { return std::pow(x, -sigma); };
      m.g1 = [sigma](double x) { return -sigma * std::pow(x, -sigma - 1.0); };
      m.g2 = [sigma](double x) { return sigma * (sigma + 1.0) * std::pow(x, -sigma - 2.0); };
      m.g3 = [sigma](double x) {
        return -sigma * (sigma + 1.0) * (sigma + 2.0) * std::pow(x, -sigma - 3.0);
      };
      out.profile = search_eps(m, MForm::linear, m.g);
      break;
    }
    case Family::oscillatory: {
      const double al = param(p, 0, 1.0), beta = param(p, 1, 1.0), gamma = param(p, 2, 1.0);
      require(al > 0.0, "oscillatory: alpha must be positive");
      require(m.domain.lo > 0.0, "oscillatory: domain must be positive");
      m.f = [al, beta, gamma](long double x) {
        return al * x * x + beta * std::sin(static_cast<long double>(gamma) * x) / x;
      };
      m.f1 = [al, beta, gamma](double x) { return 2.0 * al * x + beta * sinc_derivs(gamma, x)[1]; };
      m.f2 = [al, beta, gamma](double x) { return 2.0 * al + beta * sinc_derivs(gamma, x)[2]; };
      m.f3 = [beta, gamma](double x) { return beta * sinc_derivs(gamma, x)[3]; };
      m.f4 = [beta, gamma](double x) { return beta * sinc_derivs(gamma, x)[4]; };
      for (int i = 0; i <= 1024; ++i) {
        const double x = m.domain.lo + m.domain.length() * i / 1024.0;
        require(m.f2(x) > 0.0, "oscillatory: f'' is not positive on the domain");
      }
      unit_amplitude(m);
      out.profile = search_eps(m, MForm::sqrt, one);
      break;
    }
    case Family::power_sine: {
      const double kappa = param(p, 0, 1.0), shift = param(p, 1, 0.0);
      require(kappa > 0.0, "power_sine: kappa must be positive");
      require(m.domain.lo > 0.0, "power_sine: domain must be positive");
      set_power_phase(m);
      m.g = [kappa, shift](double x) { return std::sin(kappa * x) + shift; };
      m.g1 = [kappa](double x) { return kappa * std::cos(kappa * x); };
      m.g2 = [kappa](double x) { return -kappa * kappa * std::sin(kappa * x); };
      m.g3 = [kappa](double x) { return -kappa * kappa * kappa * std::cos(kappa * x); };
      out.profile = search_eps(m, MForm::constant, one);
      break;
    }
    case Family::cubic_dual: {
      require(m.domain.lo > 0.0, "cubic_dual: domain must be positive");
      m.f = [](long double x) { return 4.0L * x * x * x; };
      m.f1 = [](double x) { return 12.0 * x * x; };
      m.f2 = [](double x) { return 24.0 * x; };
      m.f3 = [](double) { return 24.0; };
      m.f4 = zero();
      m.fprime_inverse = [](double r) { return std::sqrt(r / 12.0); };
      const double s24 = std::sqrt(24.0);
      m.g = [](double x) { return std::sqrt(24.0 * x); };
      m.g1 = [s24](double x) { return 0.5 * s24 / std::sqrt(x); };
      m.g2 = [s24](double x) { return -0.25 * s24 * std::pow(x, -1.5); };
      m.g3 = [s24](double x) { return 0.375 * s24 * std::pow(x, -2.5); };
      out.profile = search_eps(m, MForm::linear, m.g);
      break;
    }
  }
  return out;
}

}  // namespace vdc
