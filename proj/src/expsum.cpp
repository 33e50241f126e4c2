#include "vdc/expsum.hpp"

#include <cmath>
#include <cstdio>

#include "vdc/kernels.hpp"

namespace vdc {
namespace {

double reduced_turns(const PhaseAmplitudeModel& m, std::int64_t n) {
  const long double v = m.f(static_cast<long double>(n));
  return static_cast<double>(v - std::nearbyintl(v));
}

cplx term(const PhaseAmplitudeModel& m, std::int64_t n) {
  return m.g(static_cast<double>(n)) * expi_turns(reduced_turns(m, n));
}

struct Limits {
  std::int64_t first, last;
  bool first_int, last_int;
};

Limits limits(double a, double b) {
  Limits L;
  L.first_int = is_integer_limit(a);
  L.last_int = is_integer_limit(b);
  L.first = L.first_int ? std::llround(a) : static_cast<std::int64_t>(std::ceil(a));
  L.last = L.last_int ? std::llround(b) : static_cast<std::int64_t>(std::floor(b));
  return L;
}

}  // namespace

bool is_integer_limit(double x) { return x == std::floor(x) || is_near_integer(x); }

cplx direct_starred_sum(const PhaseAmplitudeModel& m, double a, double b) {
  if (b < a) throw ParameterError("direct_starred_sum: need a <= b");
  const Limits L = limits(a, b);
  if (L.last < L.first) return {0.0, 0.0};
  if (L.first == L.last) {
    if (L.first_int && L.last_int) return {0.0, 0.0};
    return (L.first_int || L.last_int) ? 0.5 * term(m, L.first) : term(m, L.first);
  }
  ComplexAccumulator acc;
  {
    kernels::CisBatch batch(acc);
    for (std::int64_t n = L.first; n <= L.last; ++n) {
      double w = m.g(static_cast<double>(n));
      if ((n == L.first && L.first_int) || (n == L.last && L.last_int)) w *= 0.5;
      batch.push(w, reduced_turns(m, n));
    }
  }
  return acc.value();
}

cplx direct_starred_sum_unreduced(const PhaseAmplitudeModel& m, double a, double b) {
  if (b < a) throw ParameterError("direct_starred_sum: need a <= b");
  const Limits L = limits(a, b);
  if (L.last < L.first) return {0.0, 0.0};
  if (L.first == L.last && L.first_int && L.last_int) return {0.0, 0.0};
  ComplexAccumulator acc;
  constexpr long double kTwoPiL = 6.283185307179586476925286766559005768L;
  for (std::int64_t n = L.first; n <= L.last; ++n) {
    double w = m.g(static_cast<double>(n));
    if ((n == L.first && L.first_int) || (n == L.last && L.last_int)) w *= 0.5;
    const long double ph = kTwoPiL * m.f(static_cast<long double>(n));
    acc.add({w * static_cast<double>(std::cos(ph)), w * static_cast<double>(std::sin(ph))});
  }
  return acc.value();
}

std::vector<cplx> direct_starred_sums(const PhaseAmplitudeModel& m, double a,
                                      std::span<const double> ends) {
  std::vector<cplx> out;
  out.reserve(ends.size());
  const bool a_int = is_integer_limit(a);
  const std::int64_t first = a_int ? std::llround(a) : static_cast<std::int64_t>(std::ceil(a));
  const cplx first_term_half = 0.5 * term(m, first);

  ComplexAccumulator running;  // sum_{first<=n<=next-1}, unstarred
  std::int64_t next = first;
  double prev_end = -INFINITY;
  for (double e : ends) {
    if (e < prev_end) throw ParameterError("direct_starred_sums: ends must be ascending");
    prev_end = e;
    if (e < a) throw ParameterError("direct_starred_sums: end below a");
    const bool e_int = is_integer_limit(e);
    const std::int64_t last = e_int ? std::llround(e) : static_cast<std::int64_t>(std::floor(e));
    {
      kernels::CisBatch batch(running);
      for (; next <= last; ++next) batch.push(m.g(static_cast<double>(next)), reduced_turns(m, next));
    }
    if (last < first) {
      out.emplace_back(0.0, 0.0);
      continue;
    }
    if (last == first && a_int && e_int) {
      out.emplace_back(0.0, 0.0);
      continue;
    }
    ComplexAccumulator v = running;
    if (a_int) v.add(-first_term_half);
    if (e_int) v.add(-0.5 * term(m, last));
    out.push_back(v.value());
  }
  return out;
}

std::vector<CurveSample> curve_samples(const PhaseAmplitudeModel& m, double t_max,
                                       int samples_per_unit) {
  if (!(t_max >= 1.0) || samples_per_unit < 1)
    throw ParameterError("curve_samples: need t_max >= 1 and samples_per_unit >= 1");
  const auto count = static_cast<std::int64_t>(std::floor(t_max * samples_per_unit + 1e-9));
  std::vector<CurveSample> out;
  out.reserve(static_cast<std::size_t>(count) + 1);
  ComplexAccumulator partial;  // sum_{1<=n<=k}
  std::int64_t k = 0;
  cplx next_term = term(m, 1);
  for (std::int64_t j = 0; j <= count; ++j) {
    const double t = static_cast<double>(j) / samples_per_unit;
    const auto fl = static_cast<std::int64_t>(std::floor(t));
    while (k < fl) {
      partial.add(next_term);
      ++k;
      next_term = term(m, k + 1);
    }
    const double ft = t - static_cast<double>(fl);
    out.push_back({t, partial.value() + ft * next_term});
  }
  return out;
}

void write_curve_csv(std::ostream& os, std::span<const CurveSample> samples) {
  os << "t,re,im\n";
  char buf[96];
  for (const auto& s : samples) {
    std::snprintf(buf, sizeof buf, "%.17g,%.17g,%.17g\n", s.t, s.value.real(), s.value.imag());
    os << buf;
  }
}

}  // namespace vdc
