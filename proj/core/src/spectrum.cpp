#include "sdsieve/spectrum.hpp"

#include <algorithm>
#include <cstdlib>

namespace sdsieve {

std::string_view to_string(SpectrumStatus s) {
  switch (s) {
    case SpectrumStatus::Ok: return "ok";
    case SpectrumStatus::TooFewRealRoots: return "quartic has fewer than four real roots";
    case SpectrumStatus::RepeatedRoot: return "quartic has a repeated root";
    case SpectrumStatus::RootOutOfRange: return "quartic has a real root outside [-1, 1)";
    case SpectrumStatus::SignPattern: return "roots violate b < 0 < c";
    case SpectrumStatus::OrderingViolation: return "roots violate |a| > |d| > |b| > |c|";
    case SpectrumStatus::NeedsPrecision: return "precision insufficient to certify the spectrum";
  }
  return "?";
}

std::string_view to_string(IntegralityOutcome o) {
  switch (o) {
    case IntegralityOutcome::CertifiedNonInteger: return "certified_non_integer";
    case IntegralityOutcome::NumericallyInteger: return "numerically_integer";
    case IntegralityOutcome::Undecided: return "undecided";
  }
  return "?";
}

std::string_view to_string(AnalysisOutcome o) {
  switch (o) {
    case AnalysisOutcome::Refuted: return "refuted";
    case AnalysisOutcome::Survivor: return "survivor";
    case AnalysisOutcome::Undecided: return "undecided";
  }
  return "?";
}

namespace {

enum class Certified { True, False, Unknown };

// Certifies lhs < 0 for an enclosure of the sum.
Certified sum_negative(const Interval& u, const Interval& v) {
  if (u.hi() + v.hi() < 0) return Certified::True;
  if (u.lo() + v.lo() >= 0) return Certified::False;
  return Certified::Unknown;
}

Certified sum_positive(const Interval& u, const Interval& v) {
  if (u.lo() + v.lo() > 0) return Certified::True;
  if (u.hi() + v.hi() <= 0) return Certified::False;
  return Certified::Unknown;
}

SpectrumResult with_status(SpectrumResult r, SpectrumStatus s, std::string detail = {}) {
  r.status = s;
  r.detail = detail.empty() ? std::string(to_string(s)) : std::move(detail);
  return r;
}

}  // namespace

SpectrumResult solve_quartic(const Quartic& q, unsigned precision_bits) {
  if (q[0] <= 0) throw DomainError("solve_quartic: leading coefficient must be positive");
  const IntPolynomial p(q.begin(), q.end());
  SpectrumResult result;

  const SturmSequence sturm(p);
  if (!sturm.squarefree()) return with_status(std::move(result), SpectrumStatus::RepeatedRoot);
  if (sturm.count_real() < 4) {
    return with_status(std::move(result), SpectrumStatus::TooFewRealRoots,
                       "quartic has " + std::to_string(sturm.count_real()) + " real roots");
  }

  const Dyadic minus_one = Dyadic::from_integer(-1);
  const Dyadic one = Dyadic::from_integer(1);
  if (sign_at(p, minus_one) == 0) result.roots.push_back({Interval::point(mpq_class(-1)), true});
  auto inner = isolate_roots(p, minus_one, one, precision_bits);
  for (auto& r : inner) {
    if (r.exact && r.interval.lo() == 1) {
      return with_status(std::move(result), SpectrumStatus::RootOutOfRange, "quartic has root t = 1");
    }
    result.roots.push_back(std::move(r));
  }
  if (result.roots.size() < 4) {
    return with_status(std::move(result), SpectrumStatus::RootOutOfRange,
                       "only " + std::to_string(result.roots.size()) + " roots lie in [-1, 1)");
  }

  InnerProductSpectrum s{result.roots[0].interval, result.roots[1].interval,
                         result.roots[2].interval, result.roots[3].interval, precision_bits};

  // b < 0 < c
  if (s.b.lo() >= 0 || s.c.hi() <= 0) return with_status(std::move(result), SpectrumStatus::SignPattern);
  if (!s.b.negative() || !s.c.positive()) {
    return with_status(std::move(result), SpectrumStatus::NeedsPrecision);
  }
  // |a| > |d|, |d| > |b|, |b| > |c| with a, b < 0 < c, d.
  const std::array<Certified, 3> ordering = {sum_negative(s.a, s.d), sum_positive(s.d, s.b),
                                             sum_negative(s.b, s.c)};
  if (std::ranges::any_of(ordering, [](Certified c) { return c == Certified::False; })) {
    return with_status(std::move(result), SpectrumStatus::OrderingViolation);
  }
  if (std::ranges::any_of(ordering, [](Certified c) { return c == Certified::Unknown; })) {
    return with_status(std::move(result), SpectrumStatus::NeedsPrecision);
  }

  result.status = SpectrumStatus::Ok;
  result.detail = std::string(to_string(SpectrumStatus::Ok));
  result.spectrum = std::move(s);
  return result;
}

namespace {

const mpq_class kOne(1);

// -(1-u^2)(1-v^2)(1-w^2) / (r (r^2-u^2)(r^2-v^2)(r^2-w^2))
Interval distance_count(const Interval& r, const Interval& u, const Interval& v, const Interval& w) {
  const Interval r2 = r.square(), u2 = u.square(), v2 = v.square(), w2 = w.square();
  const Interval numerator = (kOne - u2) * (kOne - v2) * (kOne - w2);
  const Interval denominator = r * (r2 - u2) * (r2 - v2) * (r2 - w2);
  return -(numerator / denominator);
}

// (1-u)(1-v)(1-w) / ((r-u)(r-v)(r-w))
Interval nozaki_quotient(const Interval& r, const Interval& u, const Interval& v, const Interval& w) {
  return ((kOne - u) * (kOne - v) * (kOne - w)) / ((r - u) * (r - v) * (r - w));
}

}  // namespace

DistanceDistribution distance_distribution(const InnerProductSpectrum& s,
                                           const ExactRational& exact_product) {
  return {distance_count(s.a, s.b, s.c, s.d), distance_count(s.b, s.a, s.c, s.d),
          distance_count(s.c, s.a, s.b, s.d), distance_count(s.d, s.a, s.b, s.c), exact_product};
}

DistanceDistribution distance_distribution(const InnerProductSpectrum& s, const DesignCandidate& c) {
  return distance_distribution(s, xyzt_product(c));
}

std::int64_t nozaki_dimension(std::int64_t n) {
  if (n < 1) throw DomainError("nozaki_dimension: n must be positive");
  return to_int64(big(n) * (n + 1) * (n + 5) / 6);
}

std::int64_t nozaki_bound(std::int64_t n) {
  const BigInt big_n = big(nozaki_dimension(n));
  if (big_n < 2) throw DomainError("nozaki_bound: N must exceed 1");
  // k <= 1/2 + sqrt(N^2/(2N-2) + 1/4)  <=>  (2k-1)^2 (N-1) <= (2N-1)(N+1).
  const BigInt q = floor_div((2 * big_n - 1) * (big_n + 1), big_n - 1);
  const BigInt odd = isqrt(q);  // largest j with j^2 <= q; need 2k-1 <= j
  return to_int64((odd + 1) / 2);
}

NozakiCoefficients nozaki_coefficients(const InnerProductSpectrum& s, std::int64_t n,
                                       const ExactRational& exact_product) {
  return {nozaki_quotient(s.a, s.b, s.c, s.d), nozaki_quotient(s.b, s.a, s.c, s.d),
          nozaki_quotient(s.c, s.a, s.b, s.d), nozaki_quotient(s.d, s.a, s.b, s.c), exact_product,
          nozaki_bound(n)};
}

NozakiCoefficients nozaki_coefficients(const InnerProductSpectrum& s, const DesignCandidate& c) {
  return nozaki_coefficients(s, c.n(), nozaki_product(c));
}

bool nozaki_factorization_feasible(const BigInt& product, std::int64_t bound) {
  if (bound < 0) return false;
  if (product == 0) return bound >= 1;  // (0, 0, 0, 1)
  BigInt magnitude = abs(product);
  std::vector<std::int64_t> divisors;
  for (std::int64_t d = 1; d <= bound; ++d) {
    if (mpz_divisible_ui_p(magnitude.get_mpz_t(), static_cast<unsigned long>(d))) {
      divisors.push_back(d);
      divisors.push_back(-d);
    }
  }
  std::ranges::sort(divisors);
  const BigInt big_bound = big(bound);
  for (std::size_t i = 0; i < divisors.size(); ++i) {
    for (std::size_t j = i; j < divisors.size(); ++j) {
      const BigInt p2 = big(divisors[i]) * divisors[j];
      if (!mpz_divisible_p(product.get_mpz_t(), p2.get_mpz_t())) continue;
      for (std::size_t k = j; k < divisors.size(); ++k) {
        const BigInt p3 = p2 * divisors[k];
        if (!mpz_divisible_p(product.get_mpz_t(), p3.get_mpz_t())) continue;
        const BigInt last = product / p3;
        if (abs(last) > big_bound) continue;
        if (last + divisors[i] + divisors[j] + divisors[k] == 1) return true;
      }
    }
  }
  return false;
}

IntegralityVerdict integrality_test(const Interval& e, const PrecisionPolicy& policy,
                                    unsigned precision_used) {
  IntegralityVerdict v;
  v.precision_used = precision_used;
  const BigInt first = ceil_div(e.lo().get_num(), e.lo().get_den());
  const BigInt last = floor_div(e.hi().get_num(), e.hi().get_den());
  if (first > last) {
    v.outcome = IntegralityOutcome::CertifiedNonInteger;
    return v;
  }
  mpq_class limit(1);
  mpq_div_2exp(limit.get_mpq_t(), limit.get_mpq_t(), policy.confirmation_width);
  if (first == last && e.width() <= limit) {
    v.outcome = IntegralityOutcome::NumericallyInteger;
    v.value = first;
    return v;
  }
  v.outcome = IntegralityOutcome::Undecided;
  return v;
}

SpectrumAnalysis full_candidate_analysis(const DesignCandidate& c, const PrecisionPolicy& policy) {
  return full_candidate_analysis(c, derived_quantities(c), policy);
}

SpectrumAnalysis full_candidate_analysis(const DesignCandidate& c, const DerivedQuantities& q,
                                         const PrecisionPolicy& policy) {
  if (policy.start_bits == 0 || policy.max_bits < policy.start_bits) {
    throw DomainError("precision policy requires 0 < start_bits <= max_bits");
  }
  SpectrumAnalysis analysis;
  std::optional<ExactRational> exact_xyzt, exact_nozaki;

  for (unsigned bits = policy.start_bits;; bits = std::min(bits * 2, policy.max_bits)) {
    analysis.precision_bits = bits;
    auto solved = solve_quartic(q.quartic, bits);
    analysis.spectrum_status = solved.status;
    const bool last_round = bits >= policy.max_bits;

    if (solved.status != SpectrumStatus::Ok && solved.status != SpectrumStatus::NeedsPrecision) {
      analysis.outcome = AnalysisOutcome::Refuted;
      analysis.refutation = "spectrum: " + solved.detail;
      return analysis;
    }
    if (solved.status == SpectrumStatus::NeedsPrecision) {
      if (last_round) break;
      continue;
    }

    // Four distinct roots, so R(n, M) != 0 and the closed forms are defined.
    if (!exact_xyzt) {
      exact_xyzt = xyzt_product(c, q);
      exact_nozaki = nozaki_product(c, q);
    }
    analysis.spectrum = *solved.spectrum;
    try {
      analysis.distribution = distance_distribution(*analysis.spectrum, *exact_xyzt);
      analysis.nozaki = nozaki_coefficients(*analysis.spectrum, c.n(), *exact_nozaki);
    } catch (const ZeroDivisorEnclosure&) {
      analysis.distribution.reset();
      analysis.nozaki.reset();
      if (last_round) break;
      continue;
    }

    analysis.verdicts.clear();
    const auto& dd = *analysis.distribution;
    const auto& nk = *analysis.nozaki;
    const std::array<std::pair<const char*, const Interval*>, 8> quantities = {{
        {"X", &dd.x}, {"Y", &dd.y}, {"Z", &dd.z}, {"T", &dd.t},
        {"k_a", &nk.ka}, {"k_b", &nk.kb}, {"k_c", &nk.kc}, {"k_d", &nk.kd},
    }};
    bool undecided = false;
    std::string refutation;
    for (std::size_t i = 0; i < quantities.size(); ++i) {
      const auto& [name, enclosure] = quantities[i];
      auto verdict = integrality_test(*enclosure, policy, bits);
      if (refutation.empty()) {
        if (verdict.outcome == IntegralityOutcome::CertifiedNonInteger) {
          refutation = std::string(name) + " is not an integer";
        } else if (verdict.outcome == IntegralityOutcome::NumericallyInteger) {
          if (i < 4 && verdict.value <= 0) {
            refutation = std::string(name) + " = " + verdict.value.get_str() + " is not positive";
          } else if (i >= 4 && abs(verdict.value) > nk.bound) {
            refutation = std::string(name) + " = " + verdict.value.get_str() +
                         " exceeds the Nozaki bound " + std::to_string(nk.bound);
          }
        }
      }
      undecided = undecided || verdict.outcome == IntegralityOutcome::Undecided;
      analysis.verdicts.push_back({name, std::move(verdict)});
    }

    if (!refutation.empty()) {
      analysis.outcome = AnalysisOutcome::Refuted;
      analysis.refutation = std::move(refutation);
      return analysis;
    }
    if (!undecided) {
      analysis.outcome = AnalysisOutcome::Survivor;
      return analysis;
    }
    if (last_round) break;
  }
  analysis.outcome = AnalysisOutcome::Undecided;
  return analysis;
}

}  // namespace sdsieve
