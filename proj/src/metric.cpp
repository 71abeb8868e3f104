#include "berk/metric.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "berk/primes.hpp"

namespace berk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

int GlobalTropFSMetric::formal_degree() const {
  Rat n = d * m;
  if (rat_den(n) != 1 || n < 0) throw input_error("m*d must be a nonnegative integer");
  return static_cast<int>(rat_num(n).convert_to<long>());
}

bool GlobalTropFSMetric::pure() const {
  return std::all_of(terms.begin(), terms.end(),
                     [](const MetricTerm& t) { return t.lambda == 0; });
}

void GlobalTropFSMetric::validate() const {
  if (terms.empty()) throw input_error("metric needs at least one term");
  if (m < 1) throw input_error("section multiple m must be positive");
  if (d < 0) throw input_error("degree d must be nonnegative");
  int N = formal_degree();
  bool any_nonzero = false;
  for (const auto& t : terms) {
    if (t.section.degree() != N)
      throw input_error("every section must have degree m*d");
    if (!t.section.is_zero()) any_nonzero = true;
  }
  if (!any_nonzero) throw input_error("all sections are zero");
}

GlobalTropFSMetric standard_metric() {
  GlobalTropFSMetric phi;
  phi.d = 1;
  phi.m = 1;
  phi.terms.push_back({BinaryForm({Int(0), Int(1)}), Rat(0)});  // X
  phi.terms.push_back({BinaryForm({Int(1), Int(0)}), Rat(0)});  // Y
  return phi;
}

namespace {

std::vector<BinaryForm> nonzero_sections(const std::vector<BinaryForm>& sections) {
  std::vector<BinaryForm> out;
  for (const auto& s : sections)
    if (!s.is_zero()) out.push_back(s);
  if (out.empty()) throw input_error("all sections are zero");
  return out;
}

// Integer D != 0 divisible by every prime p at which u and v share a
// projective root over the closure of F_p; 0 when u, v share a root over Q-bar.
Int candidate_divisor(const BinaryForm& u, const BinaryForm& v) {
  if (u.degree() + v.degree() <= 64) {
    Int r = form_resultant(u, v);
    return r < 0 ? Int(-r) : r;
  }
  Int cu = u.content(), cv = v.content();
  std::vector<Int> du = u.primitive().dehom_t(), dv = v.primitive().dehom_t();
  Int r = uni_resultant(du, dv);
  if (r == 0) return 0;
  Int top = u.coeff(u.degree()) * v.coeff(v.degree());
  if (top == 0) top = 1;
  Int d = cu * cv * top * r;
  return d < 0 ? Int(-d) : d;
}

}  // namespace

CommonZeroReport check_no_common_zero(const std::vector<BinaryForm>& sections_in) {
  CommonZeroReport out;
  auto sections = nonzero_sections(sections_in);

  BinaryForm g = sections[0];
  for (size_t i = 1; i < sections.size() && g.degree() > 0; ++i)
    g = form_gcd(g, sections[i]);
  if (g.degree() > 0) {
    out.status = CommonZeroReport::BadGeneric;
    return out;
  }

  // Candidate primes divide the resultant of any pair of Q-coprime
  // combinations of the sections; gcd a couple of such resultants and factor.
  Int D = 0;
  int successes = 0;
  auto try_pair = [&](const BinaryForm& u, const BinaryForm& v) {
    if (u.is_zero() || v.is_zero()) return;
    Int r = candidate_divisor(u, v);
    if (r == 0) return;
    D = D == 0 ? r : boost::multiprecision::gcd(D, r);
    ++successes;
  };
  size_t n = sections.size();
  for (size_t i = 0; i < n && successes < 2; ++i)
    for (size_t j = i + 1; j < n && successes < 2; ++j)
      try_pair(sections[i], sections[j]);
  for (int k = 1; k <= 40 && successes < 2; ++k) {
    if (n == 1) break;
    BinaryForm u = BinaryForm::zero(sections[0].degree());
    BinaryForm v = BinaryForm::zero(sections[0].degree());
    for (size_t j = 0; j < n; ++j) {
      u = u + sections[j].scaled(Int(1 + static_cast<int>(j % 3)));
      v = v + sections[j].scaled(Int(1 + static_cast<int>((k * (j + 1)) % 7)));
    }
    try_pair(u, v);
  }
  if (successes == 0) {
    if (n == 1) {
      // A single section with unit gcd is a nonzero constant.
      return out;
    }
    throw unsupported_error("could not certify the common-zero candidate set");
  }

  std::vector<Int> bad;
  if (D > 1) {
    for (auto& [p, e] : factorize(D))
      if (common_root_mod_p(sections, p)) bad.push_back(p);
  }
  if (!bad.empty()) {
    out.status = CommonZeroReport::BadPrimes;
    out.primes = std::move(bad);
  }
  return out;
}

std::optional<MetricFactorization> metric_linear_factors(const GlobalTropFSMetric& phi) {
  MetricFactorization out;
  for (const auto& t : phi.terms) {
    if (t.section.is_zero()) return std::nullopt;
    auto f = factor_linear(t.section);
    if (!f) return std::nullopt;
    out.sections.push_back(std::move(*f));
  }
  return out;
}

Rat QDivisor::horizontal_degree() const {
  Rat acc = 0;
  for (const auto& [f, c] : horizontal) acc += c * f.degree();
  return acc;
}

bool QDivisor::effective() const {
  for (const auto& [f, c] : horizontal)
    if (c < 0) return false;
  for (const auto& [p, c] : vertical)
    if (c < 0) return false;
  return true;
}

QDivisor QDivisor::scaled(const Rat& c) const {
  QDivisor out = *this;
  for (auto& [f, a] : out.horizontal) a *= c;
  for (auto& [p, a] : out.vertical) a *= c;
  return out;
}

QDivisor operator+(const QDivisor& a, const QDivisor& b) {
  QDivisor out = a;
  for (const auto& [f, c] : b.horizontal) {
    bool merged = false;
    for (auto& [g, cc] : out.horizontal)
      if (g == f) {
        cc += c;
        merged = true;
        break;
      }
    if (!merged) out.horizontal.push_back({f, c});
  }
  for (const auto& [p, c] : b.vertical) {
    bool merged = false;
    for (auto& [q, cc] : out.vertical)
      if (q == p) {
        cc += c;
        merged = true;
        break;
      }
    if (!merged) out.vertical.push_back({p, c});
  }
  return out;
}

void GreenFunction::validate() const {
  metric.validate();
  if (divisor.horizontal_degree() != metric.d)
    throw input_error("reference divisor degree must equal the metric degree d");
}

GreenValue metric_potential(const GlobalTropFSMetric& phi, const FiberPoint& x) {
  GreenValue out;
  if (x.kind == FiberPoint::Arch) {
    // Evaluate at exponent 1, then scale: exact norm-equivariance in eps.
    FiberPoint x1 = x;
    x1.base = SpectrumPoint::archimedean(Rat(1));
    double best = -kInf;
    for (const auto& t : phi.terms) {
      if (t.section.is_zero()) continue;
      double lv = form_seminorm(x1, t.section).log_value + to_double(t.lambda);
      best = std::max(best, lv);
    }
    if (best == -kInf) throw input_error("metric degenerates at the point");
    out.value = to_double(x.base.t) * best / phi.m;
    return out;
  }

  // Non-Archimedean places carry the model-metric analytification: the
  // lambda constants are Archimedean data and do not enter here, which keeps
  // values exact and the boundary Green's function zero on the interior.
  FiberVal fv = FiberVal::from_base(x.base);
  QVal best_val = QVal::infinity();
  for (const auto& t : phi.terms) {
    if (t.section.is_zero()) continue;
    Seminorm s = form_seminorm(x, t.section);
    best_val = min(best_val, s.val);
  }
  if (best_val.is_inf()) throw input_error("metric degenerates at the point");
  out.has_val = true;
  out.val_units = -best_val.finite() / phi.m;
  out.value = to_double(out.val_units) * fv.unit_log;
  return out;
}

GreenValue green_eval(const GreenFunction& G, const FiberPoint& x) {
  G.validate();
  GreenValue pot = metric_potential(G.metric, x);
  GreenValue out = pot;

  if (x.kind == FiberPoint::Arch) {
    FiberPoint x1 = x;
    x1.base = SpectrumPoint::archimedean(Rat(1));
    double logd = 0;
    for (const auto& [f, c] : G.divisor.horizontal) {
      double lv = form_seminorm(x1, f).log_value;
      if (lv == -kInf) {
        out.on_divisor = true;
        out.value = -kInf;
        return out;
      }
      logd += to_double(c) * lv;
    }
    for (const auto& [p, c] : G.divisor.vertical)
      logd += to_double(c) * std::log(p.convert_to<double>());
    out.value = pot.value - to_double(x.base.t) * logd;
    return out;
  }

  FiberVal fv = FiberVal::from_base(x.base);
  QVal dv(Rat(0));
  for (const auto& [f, c] : G.divisor.horizontal) {
    Seminorm s = form_seminorm(x, f);
    if (s.has_val) {
      if (s.val.is_inf()) {
        out.on_divisor = true;
        out.value = -kInf;
        out.has_val = false;
        return out;
      }
      dv = dv + QVal(c * s.val.finite());
    } else {
      if (s.log_value == -kInf) {
        out.on_divisor = true;
        out.value = -kInf;
        out.has_val = false;
        return out;
      }
      dv = dv + QVal(c * rat_from_double(-s.log_value / fv.unit_log));
    }
  }
  for (const auto& [p, c] : G.divisor.vertical) {
    QVal pv = fv.val(Rat(p));
    if (pv.is_inf()) {  // the whole fiber lies on the vertical divisor
      out.on_divisor = true;
      out.value = -kInf;
      out.has_val = false;
      return out;
    }
    dv = dv + QVal(c * pv.finite());
  }
  // g = potential + val(s_D) in valuation units (log|s_D| = -val * unit).
  if (pot.has_val) {
    out.val_units = pot.val_units + dv.finite();
    out.value = to_double(out.val_units) * fv.unit_log;
    out.has_val = true;
  } else {
    out.value = pot.value + to_double(dv.finite()) * fv.unit_log;
  }
  return out;
}

GreenValue FiberMetricEvaluator::potential(const FiberPoint& pt) const {
  if (!(pt.base == x_)) throw input_error("fiber point belongs to a different fiber");
  return metric_potential(phi_, pt);
}

GreenValue FiberMetricEvaluator::green(const QDivisor& D, const FiberPoint& pt) const {
  if (!(pt.base == x_)) throw input_error("fiber point belongs to a different fiber");
  GreenFunction G{phi_, D};
  return green_eval(G, pt);
}

FiberMetricEvaluator restrict_to_fiber(GlobalTropFSMetric phi, SpectrumPoint x) {
  phi.validate();
  return FiberMetricEvaluator(std::move(phi), std::move(x));
}

GlobalTropFSMetric pullback(const GlobalTropFSMetric& phi, const BinaryForm& fx,
                            const BinaryForm& fy) {
  phi.validate();
  if (fx.degree() != fy.degree() || fx.degree() < 1)
    throw input_error("pullback pair must be two forms of equal positive degree");
  auto rep = check_no_common_zero({fx, fy});
  if (rep.status != CommonZeroReport::Ok)
    throw input_error("pullback pair has a common zero on P^1_Z");
  int q = fx.degree();
  GlobalTropFSMetric out;
  out.d = phi.d;
  out.m = phi.m * q;
  for (const auto& t : phi.terms)
    out.terms.push_back({t.section.compose(fx, fy), t.lambda});
  out.validate();
  return out;
}

}  // namespace berk
