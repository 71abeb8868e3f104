#include "berk/pl_tree.hpp"

#include <algorithm>

#include "berk/primes.hpp"

namespace berk::pl {

Rat Tree::conf(size_t i, size_t j) const {
  if (rays[i].w_side != rays[j].w_side) return Rat(0);
  QVal v = fv.val(rays[i].pos - rays[j].pos);
  if (v.is_inf()) throw std::logic_error("duplicate rays in PL tree");
  return v.finite() < 0 ? Rat(0) : v.finite();
}

FiberPoint Tree::point_at(size_t ray, const Rat& rho) const {
  if (rho == 0) return FiberPoint::gauss(base);
  return FiberPoint::disc(base, rays[ray].pos, rho, rays[ray].w_side);
}

bool Tree::owns_segment(size_t r, const Rat& hi) const {
  for (size_t j = 0; j < r; ++j)
    if (rays[j].w_side == rays[r].w_side && conf(r, j) >= hi) return false;
  return true;
}

std::pair<size_t, Rat> Tree::canon(size_t ray, const Rat& rho) const {
  if (rho == 0) return {0, Rat(0)};
  size_t best = ray;
  for (size_t j = 0; j < ray; ++j)
    if (rays[j].w_side == rays[ray].w_side && conf(ray, j) >= rho) {
      best = j;
      break;
    }
  return {best, rho};
}

Tree build_tree(const SpectrumPoint& base, std::vector<ProjRat> marked) {
  Tree t;
  t.base = base;
  t.fv = FiberVal::from_base(base);
  for (auto& m : marked) m = t.fv.reduce_coord(m);
  marked.push_back(ProjRat::infinity());
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());

  for (auto& m : marked) {
    Ray r;
    r.orig = m;
    if (m.is_infinity()) {
      r.w_side = true;
      r.pos = 0;
    } else {
      Rat c = m.as_rat();
      bool negval = false;
      if (t.fv.kind == FiberVal::PAdicV && c != 0) negval = padic_val(c, t.fv.p) < 0;
      if (negval) {
        r.w_side = true;
        r.pos = Rat(1) / c;
      } else {
        r.w_side = false;
        r.pos = c;
      }
    }
    t.rays.push_back(std::move(r));
    if (m.is_infinity()) t.inf_ray = static_cast<int>(t.rays.size()) - 1;
  }

  size_t n = t.rays.size();
  t.stops.resize(n);
  for (size_t i = 0; i < n; ++i) {
    t.stops[i].push_back(Rat(0));
    for (size_t j = 0; j < n; ++j)
      if (j != i && t.rays[j].w_side == t.rays[i].w_side)
        t.stops[i].push_back(t.conf(i, j));
    std::sort(t.stops[i].begin(), t.stops[i].end());
    t.stops[i].erase(std::unique(t.stops[i].begin(), t.stops[i].end()), t.stops[i].end());
  }
  return t;
}

namespace {

Option make_option(const FiberVal& fv, const Int& unit,
                   const std::vector<LinearFactor>& factors) {
  Option o;
  o.factors.reserve(factors.size());
  for (const auto& lf : factors) {
    Factor f;
    f.q = Rat(lf.form.coeff(1));
    f.p = Rat(-lf.form.coeff(0));
    f.mult = lf.mult;
    o.factors.push_back(std::move(f));
  }
  o.content_val = fv.val(Rat(unit));
  return o;
}

}  // namespace

TropTerm prepare_term(const FiberVal& fv, const GlobalTropFSMetric& phi,
                      const MetricFactorization& fac) {
  TropTerm term;
  term.m = phi.m;
  term.formal_degree = phi.formal_degree();
  for (size_t j = 0; j < phi.terms.size(); ++j) {
    if (phi.terms[j].section.is_zero()) continue;
    Option o = make_option(fv, fac.sections[j].unit, fac.sections[j].factors);
    if (o.content_val.is_inf()) continue;  // section vanishes on this fiber
    term.options.push_back(std::move(o));
  }
  if (term.options.empty())
    throw input_error("metric degenerates on this fiber (common zero mod p)");
  return term;
}

TropTerm prepare_form(const FiberVal& fv, const BinaryForm& F) {
  auto fac = factor_linear(F);
  if (!fac) throw unsupported_error("form does not split into integer linear factors");
  TropTerm term;
  term.m = 1;
  term.formal_degree = F.degree();
  Option o = make_option(fv, fac->unit, fac->factors);
  if (o.content_val.is_inf())
    throw input_error("form vanishes identically on this fiber");
  term.options.push_back(std::move(o));
  return term;
}

void collect_roots(const FiberVal& fv, const MetricFactorization& fac,
                   std::vector<ProjRat>& out) {
  for (const auto& s : fac.sections)
    for (const auto& lf : s.factors) out.push_back(fv.reduce_coord(lf.root));
}

void collect_form_roots(const FiberVal& fv, const BinaryForm& F, std::vector<ProjRat>& out) {
  auto fac = factor_linear(F);
  if (!fac) throw unsupported_error("form does not split into integer linear factors");
  for (const auto& lf : fac->factors) out.push_back(fv.reduce_coord(lf.root));
}

QVal factor_val_at(const Tree& t, size_t ray, const Rat& rho, const Factor& f) {
  const FiberVal& fv = t.fv;
  const Ray& r = t.rays[ray];
  if (!r.w_side) {
    // val(q T - p) at D(alpha, rho) = min(val(q) + rho, val(q alpha - p)).
    return min(fv.val(f.q) + QVal(rho), fv.val(f.q * r.pos - f.p));
  }
  // W side: val(q T - p) = val(q - p W) - val(W) at D_W(w0, sigma).
  QVal num = min(fv.val(f.p) + QVal(rho), fv.val(f.q - f.p * r.pos));
  QVal den = min(QVal(rho), fv.val(r.pos));
  if (den.is_inf()) throw std::logic_error("W coordinate valuation overflow");
  return num + QVal(-den.finite());
}

TermValue term_value(const Tree& t, const TropTerm& term, size_t ray, const Rat& rho) {
  TermValue out;
  bool have = false;
  Rat best = 0;
  for (const auto& o : term.options) {
    QVal v = o.content_val;
    for (const auto& f : o.factors) {
      QVal fval = factor_val_at(t, ray, rho, f);
      if (fval.is_inf()) {
        v = QVal::infinity();
        break;
      }
      v = v + QVal(Rat(f.mult) * fval.finite());
    }
    if (v.is_inf()) continue;  // this option hits its zero locus at the point
    Rat cand = -v.finite();
    if (!have || cand > best) best = cand;
    have = true;
  }
  if (!have) {
    out.minus_inf = true;
    return out;
  }
  out.v = best / term.m;
  return out;
}

namespace {

// Resolve min(affc + rho, cst) on [lo, hi]: true = affine branch.
bool resolve_branch(const QVal& affc, const QVal& cst, const Rat& lo,
                    const std::optional<Rat>& hi) {
  if (affc.is_inf()) return false;
  if (cst.is_inf()) return true;
  Rat corner = cst.finite() - affc.finite();
  if (corner <= lo) return false;
  if (!hi || corner >= *hi) return true;
  throw std::logic_error("segment crosses a factor corner");
}

}  // namespace

Affine option_on_segment(const Tree& t, size_t ray, const Rat& lo,
                         const std::optional<Rat>& hi, const Option& o) {
  Affine a;
  if (o.content_val.is_inf()) {
    a.minus_inf = true;
    return a;
  }
  Rat acc_a = o.content_val.finite();
  Rat acc_b = 0;
  const FiberVal& fv = t.fv;
  const Ray& r = t.rays[ray];
  for (const auto& f : o.factors) {
    Rat fa, fb;
    if (!r.w_side) {
      QVal affc = fv.val(f.q);
      QVal cst = fv.val(f.q * r.pos - f.p);
      if (resolve_branch(affc, cst, lo, hi)) {
        fa = affc.finite();
        fb = 1;
      } else {
        if (cst.is_inf()) {
          a.minus_inf = true;
          return a;
        }
        fa = cst.finite();
        fb = 0;
      }
    } else {
      QVal affc = fv.val(f.p);
      QVal cst = fv.val(f.q - f.p * r.pos);
      if (resolve_branch(affc, cst, lo, hi)) {
        fa = affc.finite();
        fb = 1;
      } else {
        if (cst.is_inf()) {
          a.minus_inf = true;
          return a;
        }
        fa = cst.finite();
        fb = 0;
      }
      // subtract val(W) = min(rho, val(w0))
      QVal vw = fv.val(r.pos);
      bool den_is_rho;
      if (vw.is_inf())
        den_is_rho = true;
      else if (QVal(lo) >= vw)
        den_is_rho = false;
      else if (!hi || QVal(*hi) <= vw)
        den_is_rho = true;
      else
        throw std::logic_error("segment crosses a W-denominator corner");
      if (den_is_rho)
        fb -= 1;
      else
        fa -= vw.finite();
    }
    acc_a += Rat(f.mult) * fa;
    acc_b += Rat(f.mult) * fb;
  }
  a.a = -acc_a;
  a.b = -acc_b;
  return a;
}

EnvelopeResult envelope_on_segment(const std::vector<Affine>& fs, const Rat& lo,
                                   const std::optional<Rat>& hi) {
  struct Piece {
    Rat a, b;
  };
  std::vector<Piece> ps;
  for (const auto& f : fs)
    if (!f.minus_inf) ps.push_back({f.a, f.b});
  if (ps.empty()) throw std::logic_error("empty envelope");
  std::sort(ps.begin(), ps.end(), [](const Piece& x, const Piece& y) {
    if (x.b != y.b) return x.b < y.b;
    return x.a < y.a;
  });
  std::vector<Piece> uniq;
  for (auto& p : ps) {
    if (!uniq.empty() && uniq.back().b == p.b)
      uniq.back() = p;  // keep the larger intercept per slope
    else
      uniq.push_back(p);
  }
  std::vector<Piece> hull;
  std::vector<Rat> xs;  // xs[i]: crossing between hull[i] and hull[i+1]
  for (auto& p : uniq) {
    while (!hull.empty()) {
      const Piece& top = hull.back();
      if (p.a >= top.a) {  // p has larger slope and intercept: dominates on rho >= 0
        hull.pop_back();
        if (!xs.empty()) xs.pop_back();
        continue;
      }
      Rat c = (top.a - p.a) / (p.b - top.b);
      if (!xs.empty() && c <= xs.back()) {
        hull.pop_back();
        xs.pop_back();
        continue;
      }
      xs.push_back(c);
      break;
    }
    hull.push_back(p);
  }

  EnvelopeResult out;
  size_t active_lo = 0;
  while (active_lo < xs.size() && xs[active_lo] <= lo) ++active_lo;
  out.b_lo = hull[active_lo].b;
  size_t active_hi = hull.size() - 1;
  if (hi) {
    active_hi = active_lo;
    while (active_hi < xs.size() && xs[active_hi] < *hi) ++active_hi;
  }
  out.b_hi = hull[active_hi].b;
  for (size_t i = active_lo; i < active_hi; ++i)
    out.corners.push_back({xs[i], hull[i + 1].b - hull[i].b});
  return out;
}

EnvelopeResult term_envelope(const Tree& t, const TropTerm& term, size_t ray,
                             const Rat& lo, const std::optional<Rat>& hi) {
  std::vector<Affine> fs;
  fs.reserve(term.options.size());
  for (const auto& o : term.options) fs.push_back(option_on_segment(t, ray, lo, hi, o));
  return envelope_on_segment(fs, lo, hi);
}

}  // namespace berk::pl
