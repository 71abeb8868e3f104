#include "berk/adelic.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

#include "berk/pl_tree.hpp"
#include "berk/primes.hpp"

namespace berk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();

BinaryForm signed_primitive(const BinaryForm& f) {
  BinaryForm p = f.primitive();
  for (int i = p.degree(); i >= 0; --i) {
    if (p.coeff(i) == 0) continue;
    if (p.coeff(i) < 0) return -p;
    break;
  }
  return p;
}

}  // namespace

Rat ArithDivisor::potential_degree() const {
  Rat acc = 0;
  for (const auto& [c, phi] : potentials) acc += c * phi.d;
  return acc;
}

void ArithDivisor::validate() const {
  for (const auto& [c, phi] : potentials) {
    (void)c;
    phi.validate();
  }
  for (const auto& [f, c] : divisor.horizontal) {
    (void)c;
    if (f.is_zero()) throw input_error("zero form in divisor support");
    if (f.content() != 1)
      throw input_error("divisor forms must be primitive (move contents to vertical parts)");
  }
  for (const auto& [p, c] : divisor.vertical) {
    (void)c;
    if (!is_prime(p)) throw input_error("vertical components must be primes");
  }
  if (potential_degree() != divisor.horizontal_degree())
    throw input_error("Green potential degree must match the divisor degree");
}

ArithDivisor ArithDivisor::scaled(const Rat& c) const {
  ArithDivisor out = *this;
  out.divisor = divisor.scaled(c);
  for (auto& [cc, phi] : out.potentials) cc *= c;
  return out;
}

ArithDivisor operator+(const ArithDivisor& a, const ArithDivisor& b) {
  if (a.model_id != b.model_id) throw input_error("mismatched models");
  ArithDivisor out = a;
  out.divisor = a.divisor + b.divisor;
  for (const auto& t : b.potentials) out.potentials.push_back(t);
  return out;
}

ArithDivisor operator-(const ArithDivisor& a, const ArithDivisor& b) {
  return a + b.scaled(Rat(-1));
}

GreenValue ArithDivisor::green(const FiberPoint& x) const {
  GreenValue out;
  if (x.kind == FiberPoint::Arch) {
    FiberPoint x1 = x;
    x1.base = SpectrumPoint::archimedean(Rat(1));
    double acc = 0;
    for (const auto& [c, phi] : potentials)
      acc += to_double(c) * metric_potential(phi, x1).value;
    for (const auto& [f, c] : divisor.horizontal) {
      double lv = form_seminorm(x1, f).log_value;
      if (lv == -kInf) {
        if (c != 0) {
          out.on_divisor = true;
          out.value = -kInf;
          return out;
        }
        continue;
      }
      acc -= to_double(c) * lv;
    }
    for (const auto& [p, c] : divisor.vertical)
      acc -= to_double(c) * std::log(p.convert_to<double>());
    out.value = to_double(x.base.t) * acc;
    return out;
  }
  FiberVal fv = FiberVal::from_base(x.base);
  Rat acc = 0;
  for (const auto& [c, phi] : potentials) {
    GreenValue pv = metric_potential(phi, x);
    acc += c * pv.val_units;
  }
  for (const auto& [f, c] : divisor.horizontal) {
    Seminorm s = form_seminorm(x, f);
    if (s.val.is_inf()) {
      if (c != 0) {
        out.on_divisor = true;
        out.value = -kInf;
        return out;
      }
      continue;
    }
    acc += c * s.val.finite();
  }
  for (const auto& [p, c] : divisor.vertical) {
    QVal pv = fv.val(Rat(p));
    if (pv.is_inf()) {
      if (c != 0) {
        out.on_divisor = true;
        out.value = -kInf;
        return out;
      }
      continue;
    }
    acc += c * pv.finite();
  }
  out.has_val = true;
  out.val_units = acc;
  out.value = to_double(acc) * fv.unit_log;
  return out;
}

void ModelAdelicDivisor::validate() const {
  rational_part.validate();
  for (const auto& [f, c] : integral_part.horizontal) {
    (void)f;
    if (rat_den(c) != 1) throw input_error("integral part requires integer coefficients");
  }
  for (const auto& [p, c] : integral_part.vertical) {
    (void)p;
    if (rat_den(c) != 1) throw input_error("integral part requires integer coefficients");
  }
}

bool ModelAdelicDivisor::integral_zero() const {
  for (const auto& [f, c] : integral_part.horizontal)
    if (c != 0) return false;
  for (const auto& [p, c] : integral_part.vertical)
    if (c != 0) return false;
  return true;
}

OpenSubscheme BoundaryDivisor::open_part() const {
  OpenSubscheme U;
  for (const auto& [f, c] : data.divisor.horizontal)
    if (c > 0) U.horizontal.push_back(signed_primitive(f));
  for (const auto& [p, c] : data.divisor.vertical)
    if (c > 0) U.vertical.push_back(p);
  return U;
}

void BoundaryDivisor::validate() const {
  data.validate();
  for (const auto& [f, c] : data.divisor.horizontal) {
    (void)f;
    if (c <= 0) throw input_error("boundary divisor coefficients must be positive");
  }
  for (const auto& [p, c] : data.divisor.vertical) {
    (void)p;
    if (c <= 0) throw input_error("boundary divisor coefficients must be positive");
  }
  // Strict positivity spot check at the Archimedean place.
  SpectrumPoint arch = SpectrumPoint::archimedean(Rat(1));
  for (double r : {0.0, 0.3, 0.7, 1.0, 1.6, 3.0}) {
    for (int k = 0; k < 8; ++k) {
      double th = 0.7853981633974483 * k + 0.05;
      FiberPoint z = FiberPoint::arch(arch, {r * std::cos(th), r * std::sin(th)});
      GreenValue g = data.green(z);
      if (g.on_divisor) continue;
      if (!(g.value > 0))
        throw input_error("boundary Green data is not strictly positive at the "
                          "Archimedean place");
    }
  }
}

namespace {

struct GreenIngredients {
  // Shared tree/terms of E and D0 greens on one non-Archimedean fiber.
  pl::Tree tree;
  struct Lin {
    Rat coeff;
    pl::TropTerm term;
  };
  std::vector<Lin> e_terms, d0_terms;
  Rat e_const = 0, d0_const = 0;  // vertical contributions on this fiber
};

// Exact value of a linear combination at a tree point, valuation units.
Rat combo_value(const GreenIngredients& gi, const std::vector<GreenIngredients::Lin>& ls,
                const Rat& cst, size_t ray, const Rat& rho) {
  Rat acc = cst;
  for (const auto& l : ls) {
    pl::TermValue tv = pl::term_value(gi.tree, l.term, ray, rho);
    if (tv.minus_inf) throw std::logic_error("unexpected -inf at a disc point");
    acc += l.coeff * tv.v;
  }
  return acc;
}

Rat combo_slope(const GreenIngredients& gi, const std::vector<GreenIngredients::Lin>& ls,
                size_t ray, const Rat& lo, const std::optional<Rat>& hi, bool at_hi) {
  Rat acc = 0;
  for (const auto& l : ls) {
    pl::EnvelopeResult env = pl::term_envelope(gi.tree, l.term, ray, lo, hi);
    acc += l.coeff * (at_hi ? env.b_hi : env.b_lo) / l.term.m;
  }
  return acc;
}

struct RatioTracker {
  bool infinite = false;
  std::string obstruction;
  Rat best = 0;

  void add(const Rat& num_abs, const Rat& den, const std::string& where) {
    if (infinite) return;
    if (den < 0) throw input_error("boundary Green data negative at " + where);
    if (den == 0) {
      if (num_abs != 0) {
        infinite = true;
        obstruction = "Green condition unbounded at " + where;
      }
      return;
    }
    Rat r = num_abs / den;
    if (r > best) best = r;
  }
};

std::vector<Int> relevant_primes(const ArithDivisor& E, const ArithDivisor& D0,
                                 const std::vector<Int>& extra) {
  std::set<Int> primes(extra.begin(), extra.end());
  for (const auto* d : {&E, &D0}) {
    for (const auto& [p, c] : d->divisor.vertical) {
      (void)c;
      primes.insert(p);
    }
  }
  // Primes where the joint root configuration degenerates: divisors of the
  // root coordinates, contents, and pairwise collision resultants.
  std::vector<ProjRat> roots;
  Int units = 1;
  auto absorb_metric = [&](const GlobalTropFSMetric& phi) {
    auto fac = metric_linear_factors(phi);
    if (!fac) return false;
    for (const auto& s : fac->sections) {
      units *= s.unit < 0 ? Int(-s.unit) : s.unit;
      for (const auto& lf : s.factors) roots.push_back(lf.root);
    }
    return true;
  };
  auto absorb_form = [&](const BinaryForm& f) {
    auto fac = factor_linear(f);
    if (!fac) return false;
    units *= fac->unit < 0 ? Int(-fac->unit) : fac->unit;
    for (const auto& lf : fac->factors) roots.push_back(lf.root);
    return true;
  };
  bool ok = true;
  for (const auto* d : {&E, &D0}) {
    for (const auto& [c, phi] : d->potentials) {
      (void)c;
      ok = ok && absorb_metric(phi);
    }
    for (const auto& [f, c] : d->divisor.horizontal) {
      (void)c;
      ok = ok && absorb_form(f);
    }
  }
  if (!ok) return {primes.begin(), primes.end()};  // sampled regime anyway
  Int prod = units;
  for (const auto& r : roots) {
    if (r.num != 0) prod *= r.num < 0 ? Int(-r.num) : r.num;
    if (r.den != 0) prod *= r.den;
  }
  for (size_t i = 0; i < roots.size(); ++i)
    for (size_t j = i + 1; j < roots.size(); ++j) {
      Int res = roots[i].num * roots[j].den - roots[j].num * roots[i].den;
      if (res != 0) prod *= res < 0 ? Int(-res) : res;
    }
  if (prod < 0) prod = -prod;
  if (prod > 1)
    for (auto& [p, e] : factorize(prod)) {
      (void)e;
      primes.insert(p);
    }
  return {primes.begin(), primes.end()};
}

bool all_linear_factor(const ArithDivisor& d) {
  for (const auto& [c, phi] : d.potentials) {
    (void)c;
    if (!metric_linear_factors(phi)) return false;
  }
  for (const auto& [f, c] : d.divisor.horizontal) {
    (void)c;
    if (!factor_linear(f)) return false;
  }
  return true;
}

GreenIngredients prepare_fiber(const ArithDivisor& E, const ArithDivisor& D0,
                               const SpectrumPoint& x) {
  GreenIngredients gi;
  FiberVal fv = FiberVal::from_base(x);
  std::vector<ProjRat> roots;
  auto add_metric_roots = [&](const GlobalTropFSMetric& phi) {
    auto fac = metric_linear_factors(phi);
    pl::collect_roots(fv, *fac, roots);
  };
  for (const auto& [c, phi] : E.potentials) {
    (void)c;
    add_metric_roots(phi);
  }
  for (const auto& [c, phi] : D0.potentials) {
    (void)c;
    add_metric_roots(phi);
  }
  for (const auto& [f, c] : E.divisor.horizontal) {
    (void)c;
    pl::collect_form_roots(fv, f, roots);
  }
  for (const auto& [f, c] : D0.divisor.horizontal) {
    (void)c;
    pl::collect_form_roots(fv, f, roots);
  }
  gi.tree = pl::build_tree(x, std::move(roots));

  auto build = [&](const ArithDivisor& d, std::vector<GreenIngredients::Lin>& out,
                   Rat& cst) {
    for (const auto& [c, phi] : d.potentials) {
      auto fac = metric_linear_factors(phi);
      out.push_back({c, pl::prepare_term(fv, phi, *fac)});
    }
    // -log|F| = +val(F) in valuation units: coefficient -c on the log term.
    for (const auto& [f, c] : d.divisor.horizontal)
      out.push_back({-c, pl::prepare_form(fv, f)});
    for (const auto& [p, c] : d.divisor.vertical) {
      QVal v = fv.val(Rat(p));
      if (v.is_inf()) throw input_error("vertical component meets a t=0 fiber");
      cst += c * v.finite();
    }
  };
  build(E, gi.e_terms, gi.e_const);
  build(D0, gi.d0_terms, gi.d0_const);
  return gi;
}

Rat abs_rat(const Rat& r) { return r < 0 ? Rat(-r) : r; }

}  // namespace

BoundaryNormResult boundary_norm(const ModelAdelicDivisor& E, const BoundaryDivisor& D0,
                                 const BoundaryNormConfig& cfg) {
  if (E.rational_part.model_id != D0.data.model_id)
    throw input_error("mismatched models");
  E.validate();
  D0.validate();

  BoundaryNormResult out;
  if (!E.integral_zero()) {
    out.infinite = true;
    out.obstruction = "integral part nonzero";
    return out;
  }

  RatioTracker track;

  // Divisor coefficient sandwich: components of E must sit inside the
  // boundary support.
  for (const auto& [f, c] : E.rational_part.divisor.horizontal) {
    if (c == 0) continue;
    BinaryForm key = signed_primitive(f);
    bool found = false;
    for (const auto& [g, d0c] : D0.data.divisor.horizontal)
      if (signed_primitive(g) == key) {
        track.add(abs_rat(c), d0c, "component " + key.str());
        found = true;
        break;
      }
    if (!found) {
      out.infinite = true;
      out.obstruction = "horizontal component outside the boundary support: " + key.str();
      return out;
    }
  }
  for (const auto& [p, c] : E.rational_part.divisor.vertical) {
    if (c == 0) continue;
    bool found = false;
    for (const auto& [q, d0c] : D0.data.divisor.vertical)
      if (q == p) {
        track.add(abs_rat(c), d0c, "fiber " + p.str());
        found = true;
        break;
      }
    if (!found) {
      out.infinite = true;
      out.obstruction = "vertical component outside the boundary support: " + p.str();
      return out;
    }
  }

  // Green sandwich on the finite places.
  bool exact_regime =
      all_linear_factor(E.rational_part) && all_linear_factor(D0.data);
  std::vector<Int> primes =
      relevant_primes(E.rational_part, D0.data, cfg.extra_primes);
  std::vector<SpectrumPoint> fibers{SpectrumPoint::trivial()};
  for (const auto& p : primes) fibers.push_back(SpectrumPoint::at_prime(p, Rat(1, p)));

  if (exact_regime) {
    for (const auto& x : fibers) {
      GreenIngredients gi = prepare_fiber(E.rational_part, D0.data, x);
      for (size_t r = 0; r < gi.tree.rays.size() && !track.infinite; ++r) {
        const auto& stops = gi.tree.stops[r];
        for (size_t k = 0; k < stops.size(); ++k) {
          Rat lo = stops[k];
          std::optional<Rat> hi;
          if (k + 1 < stops.size()) hi = stops[k + 1];
          if (hi && !gi.tree.owns_segment(r, *hi)) continue;
          // Candidate positions: segment ends plus every term's corners.
          std::vector<Rat> pos{lo};
          if (hi) pos.push_back(*hi);
          for (const auto* group : {&gi.e_terms, &gi.d0_terms})
            for (const auto& l : *group) {
              pl::EnvelopeResult env = pl::term_envelope(gi.tree, l.term, r, lo, hi);
              for (auto& c : env.corners) pos.push_back(c.pos);
            }
          std::sort(pos.begin(), pos.end());
          pos.erase(std::unique(pos.begin(), pos.end()), pos.end());
          for (const auto& rho : pos) {
            Rat ge = combo_value(gi, gi.e_terms, gi.e_const, r, rho);
            Rat g0 = combo_value(gi, gi.d0_terms, gi.d0_const, r, rho);
            track.add(abs_rat(ge), g0,
                      x.str() + " " + gi.tree.point_at(r, rho).str());
            if (track.infinite) break;
          }
          if (!hi && !track.infinite) {
            // Leaf direction: compare final slopes.
            Rat se = combo_slope(gi, gi.e_terms, r, lo, hi, true);
            Rat s0 = combo_slope(gi, gi.d0_terms, r, lo, hi, true);
            track.add(abs_rat(se), s0, x.str() + " leaf slope");
          }
          if (track.infinite) break;
        }
      }
      if (track.infinite) break;
    }
    out.regime = "nonarch-exact+arch-sampled";
  } else {
    // Sampled battery on each fiber (exact values, sampled certification).
    for (const auto& x : fibers) {
      std::vector<FiberPoint> pts{FiberPoint::gauss(x)};
      for (const Rat& a : {Rat(0), Rat(1), Rat(-1), Rat(2), Rat(1, 2), Rat(1, 3)})
        for (const Rat& rho : {Rat(1, 3), Rat(1, 2), Rat(1), Rat(2), Rat(3)})
          pts.push_back(FiberPoint::disc(x, a, rho));
      for (const Rat& rho : {Rat(1, 2), Rat(1), Rat(2)})
        pts.push_back(FiberPoint::disc(x, Rat(0), rho, true));
      for (const auto& pt : pts) {
        GreenValue ge = E.rational_part.green(pt);
        GreenValue g0 = D0.data.green(pt);
        if (ge.on_divisor || g0.on_divisor) continue;
        track.add(abs_rat(ge.val_units), g0.val_units, x.str() + " " + pt.str());
        if (track.infinite) break;
      }
      if (track.infinite) break;
    }
    out.regime = "sampled";
  }

  // Archimedean sample grid at exponent 1, assembled exactly from
  // rationalized ingredient values so the norm axioms hold exactly.
  if (!track.infinite) {
    SpectrumPoint arch = SpectrumPoint::archimedean(Rat(1));
    auto green_pair_at = [&](const FiberPoint& z, Rat& ge, Rat& g0) -> bool {
      auto assemble = [&](const ArithDivisor& d, Rat& acc) -> bool {
        acc = 0;
        for (const auto& [c, phi] : d.potentials) {
          double v = metric_potential(phi, z).value;
          if (!std::isfinite(v)) return false;
          acc += c * rat_from_double(v);
        }
        for (const auto& [f, c] : d.divisor.horizontal) {
          double v = form_seminorm(z, f).log_value;
          if (!std::isfinite(v)) return false;
          acc -= c * rat_from_double(v);
        }
        for (const auto& [p, c] : d.divisor.vertical)
          acc -= c * rat_from_double(std::log(p.convert_to<double>()));
        return true;
      };
      return assemble(E.rational_part, ge) && assemble(D0.data, g0);
    };
    for (int i = 0; i < cfg.arch_radii && !track.infinite; ++i) {
      double r = 0.05 * std::pow(400.0, i / std::max(1.0, cfg.arch_radii - 1.0));
      for (int j = 0; j < cfg.arch_angles; ++j) {
        double th = (2 * std::acos(-1.0)) * (j + 0.37) / cfg.arch_angles;
        FiberPoint z = FiberPoint::arch(arch, {r * std::cos(th), r * std::sin(th)});
        Rat ge, g0;
        if (!green_pair_at(z, ge, g0)) continue;  // on a divisor: skip
        track.add(abs_rat(ge), g0, "arch sample");
        if (track.infinite) break;
      }
    }
  }

  if (track.infinite) {
    out.infinite = true;
    out.obstruction = track.obstruction;
    return out;
  }
  out.value = track.best;
  return out;
}

CauchyWitness verify_cauchy(const std::vector<ModelAdelicDivisor>& seq,
                            const BoundaryDivisor& D0, double target_rate,
                            int rate_from, const BoundaryNormConfig& cfg) {
  if (seq.size() < 2) throw input_error("verify_cauchy needs at least two entries");
  CauchyWitness w;
  for (size_t i = 0; i + 1 < seq.size(); ++i) {
    Rat eps = 0;
    for (size_t j = i + 1; j < seq.size(); ++j) {
      ModelAdelicDivisor diff;
      diff.rational_part = seq[j].rational_part - seq[i].rational_part;
      diff.integral_part = seq[j].integral_part + seq[i].integral_part.scaled(Rat(-1));
      BoundaryNormResult n = boundary_norm(diff, D0, cfg);
      if (n.infinite) {
        w.failure = "||E_" + std::to_string(j) + " - E_" + std::to_string(i) +
                    "|| = inf (" + n.obstruction + ")";
        return w;
      }
      if (n.value > eps) eps = n.value;
    }
    w.epsilons.push_back(eps);
  }
  w.verified_through = static_cast<int>(seq.size()) - 1;
  w.ok = true;
  for (size_t i = 0; i + 1 < w.epsilons.size(); ++i) {
    if (w.epsilons[i + 1] > w.epsilons[i]) {
      w.ok = false;
      w.failure = "epsilons are not nonincreasing at index " + std::to_string(i);
      return w;
    }
    if (static_cast<int>(i) < rate_from) continue;
    if (w.epsilons[i] > 0 &&
        to_double(w.epsilons[i + 1]) > target_rate * to_double(w.epsilons[i])) {
      w.ok = false;
      w.failure = "decay rate worse than target at index " + std::to_string(i);
      return w;
    }
  }
  return w;
}

std::vector<GlobalTropFSMetric> invariant_metric_sequence(const BinaryForm& fx,
                                                          const BinaryForm& fy,
                                                          int i_max,
                                                          const IterationConfig& cfg) {
  if (fx.degree() != fy.degree() || fx.degree() < 2)
    throw input_error("polarized pair must have equal degree >= 2");
  auto rep = check_no_common_zero({fx, fy});
  if (rep.status != CommonZeroReport::Ok)
    throw input_error("pair has a common zero on P^1_Z; the model is not polarized");
  double growth = std::pow(fx.degree(), i_max);
  if (growth > cfg.degree_cap)
    throw input_error("degree cap exceeded: q^i_max > " + std::to_string(cfg.degree_cap));
  std::vector<GlobalTropFSMetric> seq{standard_metric()};
  for (int i = 0; i < i_max; ++i) seq.push_back(pullback(seq.back(), fx, fy));
  return seq;
}

namespace {

// True when a equals b as a metric through the k-th power presentation
// (a.m = k b.m and the terms of a are exactly the k-th powers of b's terms).
bool metric_power_equal(const GlobalTropFSMetric& a, const GlobalTropFSMetric& b) {
  if (a.d != b.d || b.m <= 0 || a.m % b.m != 0) return false;
  unsigned k = static_cast<unsigned>(a.m / b.m);
  if (a.terms.size() != b.terms.size()) return false;
  std::vector<bool> used(b.terms.size(), false);
  for (const auto& ta : a.terms) {
    bool matched = false;
    for (size_t j = 0; j < b.terms.size(); ++j) {
      if (used[j] || ta.lambda != b.terms[j].lambda) continue;
      if (ta.section == b.terms[j].section.pow(k)) {
        used[j] = true;
        matched = true;
        break;
      }
    }
    if (!matched) return false;
  }
  return true;
}

}  // namespace

double invariance_residual(const GlobalTropFSMetric& phi, const BinaryForm& fx,
                           const BinaryForm& fy,
                           const std::vector<FiberPoint>& sample) {
  GlobalTropFSMetric pulled = pullback(phi, fx, fy);
  if (metric_power_equal(pulled, phi)) return 0.0;  // exact fixed point
  double sup = 0;
  for (const auto& pt : sample) {
    double a = metric_potential(pulled, pt).value;
    double b = metric_potential(phi, pt).value;
    sup = std::max(sup, std::abs(a - b));
  }
  return sup;
}

std::vector<FiberPoint> standard_sample_points() {
  std::vector<FiberPoint> pts;
  SpectrumPoint arch = SpectrumPoint::archimedean(Rat(1));
  const double radii[] = {0.3, 0.7, 1.0, 1.4, 3.0};
  for (double r : radii)
    for (int k = 0; k < 8; ++k) {
      double th = (2 * std::acos(-1.0)) * (k + 0.21) / 8;
      pts.push_back(FiberPoint::arch(arch, {r * std::cos(th), r * std::sin(th)}));
    }
  for (const Int& p : {Int(2), Int(3), Int(5)}) {
    SpectrumPoint x = SpectrumPoint::at_prime(p, Rat(1, p));
    pts.push_back(FiberPoint::gauss(x));
    pts.push_back(FiberPoint::disc(x, Rat(0), Rat(1)));
    pts.push_back(FiberPoint::disc(x, Rat(1), Rat(2)));
  }
  pts.push_back(FiberPoint::gauss(SpectrumPoint::trivial()));
  return pts;  // 40 Archimedean + 10 finite-place points
}

double analytic_boundary_green(const BoundaryDivisor& D0, const FiberPoint& x) {
  GreenValue g = D0.data.green(x);
  if (g.on_divisor) return kInf;
  return g.value;
}

bool delta_membership(const BoundaryDivisor& D0, const FiberPoint& x) {
  GreenValue g = D0.data.green(x);
  if (g.on_divisor) return false;      // not a point of U^an
  if (g.has_val && g.val_units == 0) return false;  // interior
  if (g.value == 0) return false;
  if (x.kind == FiberPoint::Arch) {
    FiberPoint x1 = x;
    x1.base = SpectrumPoint::archimedean(Rat(1));
    Rat g1 = rat_from_double(D0.data.green(x1).value);
    if (x.base.t * g1 == 1) return true;           // g = 1 slice
    return x.base.t == 1 && g1 <= 1;               // ray maximum under the cap
  }
  // Finite places: the norm-equivalence ray is unbounded, so only the g = 1
  // slice contributes.
  FiberVal fv = FiberVal::from_base(x.base);
  if (fv.kind != FiberVal::PAdicV) return g.val_units == 1;
  return g.value == 1.0;
}

}  // namespace berk
