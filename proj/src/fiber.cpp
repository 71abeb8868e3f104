#include "berk/fiber.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "berk/primes.hpp"

namespace berk {

FiberVal FiberVal::from_base(const SpectrumPoint& x) {
  FiberVal fv;
  if (x.is_trivial()) {
    fv.kind = TrivialQV;
    fv.unit_log = 1.0;
    return fv;
  }
  if (x.place.archimedean)
    throw input_error("Archimedean fiber carries no valuation");
  fv.p = x.place.p;
  if (x.t == 0) {
    fv.kind = TrivialFpV;
    fv.unit_log = 1.0;
  } else {
    fv.kind = PAdicV;
    fv.unit_log = -std::log(to_double(x.t));
  }
  return fv;
}

QVal FiberVal::val(const Rat& x) const {
  if (x == 0) return QVal::infinity();
  switch (kind) {
    case TrivialQV:
      return QVal(Rat(0));
    case PAdicV:
      return QVal(Rat(padic_val(x, p)));
    case TrivialFpV: {
      Int v = padic_val(x, p);
      if (v < 0) throw std::logic_error("coordinate outside the valuation ring of F_p");
      return v > 0 ? QVal::infinity() : QVal(Rat(0));
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

Int mod_lift(const Int& a, const Int& p) {
  Int r = a % p;
  if (r < 0) r += p;
  return r;
}

Int mod_inv(const Int& a, const Int& p) {
  Int t = 0, newt = 1, r = p, newr = mod_lift(a, p);
  while (newr != 0) {
    Int q = r / newr;
    Int tmp = t - q * newt;
    t = newt;
    newt = tmp;
    tmp = r - q * newr;
    r = newr;
    newr = tmp;
  }
  if (t < 0) t += p;
  return t;
}

/// Residue of a projective rational point in P^1(F_p), as a canonical lift.
ProjRat residue_mod(const ProjRat& c, const Int& p) {
  Int n = mod_lift(c.num, p), d = mod_lift(c.den, p);
  if (d == 0) return ProjRat::infinity();
  return ProjRat{mod_lift(n * mod_inv(d, p), p), Int(1)};
}

}  // namespace

ProjRat FiberVal::reduce_coord(const ProjRat& c) const {
  if (kind != TrivialFpV) return c;
  return residue_mod(c, p);
}

FiberPoint FiberPoint::type1(SpectrumPoint base, ProjRat coord) {
  if (!base.is_trivial() && base.place.archimedean)
    throw input_error("Type1 points live over non-Archimedean bases");
  FiberPoint x;
  x.base = std::move(base);
  x.kind = Type1;
  x.coord = FiberVal::from_base(x.base).reduce_coord(coord);
  return x;
}

FiberPoint FiberPoint::disc(SpectrumPoint base, Rat center, Rat radius_val, bool chart_w) {
  if (!base.is_trivial() && base.place.archimedean)
    throw input_error("Disc points live over non-Archimedean bases");
  FiberPoint x;
  x.base = std::move(base);
  x.kind = Disc;
  FiberVal fv = FiberVal::from_base(x.base);

  // Geometric valuation used for chart normalization (v_p even at t=0 ends).
  auto geo_val = [&](const Rat& c) -> QVal {
    if (c == 0) return QVal::infinity();
    if (fv.kind == FiberVal::TrivialQV) return QVal(Rat(0));
    return QVal(Rat(padic_val(c, fv.p)));
  };

  bool w = chart_w;
  Rat c = std::move(center), rho = std::move(radius_val);
  for (int pass = 0; pass < 3; ++pass) {
    QVal vc = geo_val(c);
    if (rho < 0) {
      if (vc < QVal(rho)) {
        c = Rat(1) / c;  // proper disc away from the chart origin
        rho = rho - 2 * vc.finite();
        w = !w;
      } else {
        c = 0;  // contains the chart's unit disc
        rho = -rho;
        w = !w;
      }
      continue;
    }
    if (vc < QVal(Rat(0))) {
      c = Rat(1) / c;
      rho = rho - 2 * vc.finite();
      w = !w;
      continue;
    }
    // Canonical W-chart discs have strictly positive center valuation.
    if (w && rho > 0 && c != 0 && vc == QVal(Rat(0))) {
      c = Rat(1) / c;
      w = false;
      continue;
    }
    break;
  }
  if (rho == 0) {  // Gauss point
    w = false;
    c = 0;
  }
  if (fv.kind == FiberVal::TrivialFpV && c != 0) {
    Int v = padic_val(c, fv.p);
    if (v > 0) {
      c = 0;
    } else {
      ProjRat r = residue_mod(ProjRat::from_rat(c), fv.p);
      c = Rat(r.num, r.den);
    }
  }
  x.chart_w = w;
  x.center = std::move(c);
  x.radius_val = std::move(rho);
  return x;
}

FiberPoint FiberPoint::gauss(SpectrumPoint base) {
  return disc(std::move(base), Rat(0), Rat(0), false);
}

FiberPoint FiberPoint::arch(SpectrumPoint base, std::complex<double> z) {
  if (base.is_trivial() || !base.place.archimedean)
    throw input_error("Arch points live over the Archimedean branch");
  FiberPoint x;
  x.base = std::move(base);
  x.kind = Arch;
  x.z = z.imag() < 0 ? std::conj(z) : z;
  return x;
}

FiberPoint FiberPoint::arch_infinity(SpectrumPoint base) {
  FiberPoint x = arch(std::move(base), {0, 0});
  x.z_infinity = true;
  return x;
}

bool FiberPoint::same_point(const FiberPoint& o) const {
  if (!(base == o.base) || kind != o.kind) return false;
  switch (kind) {
    case Type1:
      return coord == o.coord;
    case Arch:
      if (z_infinity != o.z_infinity) return false;
      return z_infinity || z == o.z;
    case Disc: {
      if (chart_w != o.chart_w || radius_val != o.radius_val) return false;
      if (center == o.center) return true;
      FiberVal fv = FiberVal::from_base(base);
      return fv.val(center - o.center) >= QVal(radius_val);
    }
  }
  return false;
}

std::string FiberPoint::str() const {
  std::ostringstream os;
  switch (kind) {
    case Type1:
      os << "type1(" << coord.str() << ")";
      break;
    case Disc:
      if (is_gauss()) {
        os << "gauss";
      } else {
        os << "disc(" << (chart_w ? "W," : "T,") << rat_to_string(center) << ", rho="
           << rat_to_string(radius_val) << ")";
      }
      break;
    case Arch:
      if (z_infinity)
        os << "arch(inf)";
      else
        os << "arch(" << z.real() << (z.imag() >= 0 ? "+" : "") << z.imag() << "i)";
      break;
  }
  os << " over " << base.str();
  return os.str();
}

namespace {

std::vector<Rat> taylor_at(const std::vector<Int>& f, const Rat& c) {
  int n = uni_degree(f);
  if (n < 0) return {Rat(0)};
  std::vector<Rat> a(n + 1);
  for (int i = 0; i <= n; ++i) a[i] = Rat(f[i]);
  for (int k = 0; k <= n; ++k)
    for (int i = n - 1; i >= k; --i) a[i] += c * a[i + 1];
  return a;
}

QVal disc_val(const FiberVal& fv, const std::vector<Int>& f, const Rat& center,
              const Rat& rho) {
  if (fv.kind == FiberVal::TrivialQV) {
    // Taylor coefficients have trivial valuation, so the minimum is
    // rho * ord_center(f): peel factors of (T - center) until nonvanishing.
    int n = uni_degree(f);
    if (n < 0) return QVal::infinity();
    std::vector<Rat> cur(n + 1);  // trimmed to the true degree
    for (int i = 0; i <= n; ++i) cur[i] = Rat(f[i]);
    for (int ord = 0;; ++ord) {
      Rat value = 0;
      for (int i = static_cast<int>(cur.size()) - 1; i >= 0; --i)
        value = value * center + cur[i];
      if (value != 0 || cur.size() == 1) {
        if (value == 0) return QVal::infinity();
        return QVal(Rat(ord) * rho);
      }
      // synthetic division by (T - center)
      std::vector<Rat> next(cur.size() - 1);
      Rat carry = cur.back();
      for (int i = static_cast<int>(next.size()) - 1; i >= 0; --i) {
        next[i] = carry;
        carry = cur[i] + carry * center;
      }
      cur = std::move(next);
    }
  }
  if (fv.kind == FiberVal::TrivialFpV) {
    // Reduce first: trivial valuations of the residues, so again rho * ord.
    std::vector<Int> fbar = reduce_mod(f, fv.p);
    if (uni_degree(fbar) < 0) return QVal::infinity();
    fbar.resize(uni_degree(fbar) + 1);  // reduction can drop the degree
    Int c = rat_num(center) % fv.p;  // centers are canonical lifts
    for (int ord = 0;; ++ord) {
      Int value = 0;
      for (int i = uni_degree(fbar); i >= 0; --i) value = (value * c + fbar[i]) % fv.p;
      if (value != 0) return QVal(Rat(ord) * rho);
      if (uni_degree(fbar) == 0) return QVal::infinity();
      std::vector<Int> next(fbar.size() - 1, Int(0));
      Int carry = fbar[uni_degree(fbar)];
      for (int i = static_cast<int>(next.size()) - 1; i >= 0; --i) {
        next[i] = carry;
        carry = (fbar[i] + carry * c) % fv.p;
      }
      fbar = std::move(next);
      fbar.resize(std::max(1, uni_degree(fbar) + 1));
    }
  }
  auto d = taylor_at(f, center);
  QVal best = QVal::infinity();
  for (size_t k = 0; k < d.size(); ++k) {
    if (d[k] == 0) continue;
    QVal term = fv.val(d[k]) + QVal(Rat(k) * rho);
    best = min(best, term);
  }
  return best;
}

Seminorm from_val(const FiberVal& fv, QVal v) {
  Seminorm s;
  s.has_val = true;
  s.val = v;
  s.log_value = v.is_inf() ? -std::numeric_limits<double>::infinity()
                           : -to_double(v.finite()) * fv.unit_log;
  return s;
}

}  // namespace

Seminorm poly_seminorm(const FiberPoint& x, const std::vector<Int>& f) {
  if (x.kind == FiberPoint::Arch) {
    double eps = to_double(x.base.t);
    Seminorm s;
    if (x.z_infinity) {
      if (uni_degree(f) > 0)
        throw input_error("cannot evaluate a nonconstant polynomial at infinity; "
                          "pass the swapped chart");
      s.log_value = f.empty() || f[0] == 0
                        ? -std::numeric_limits<double>::infinity()
                        : eps * log_abs_eval({f[0]}, {0, 0});
      return s;
    }
    s.log_value = eps * log_abs_eval(f, x.z);
    return s;
  }
  FiberVal fv = FiberVal::from_base(x.base);
  if (x.kind == FiberPoint::Type1) {
    if (x.coord.is_infinity()) {
      if (uni_degree(f) > 0)
        throw input_error("cannot evaluate a nonconstant polynomial at infinity; "
                          "pass the swapped chart");
      return from_val(fv, f.empty() ? QVal::infinity() : fv.val(Rat(f[0])));
    }
    Rat a = x.coord.as_rat();
    Rat value = 0;
    for (int i = uni_degree(f); i >= 0; --i) value = value * a + Rat(f[i]);
    return from_val(fv, fv.val(value));
  }
  // Disc point, in its own chart.
  return from_val(fv, disc_val(fv, f, x.center, x.radius_val));
}

Seminorm form_seminorm(const FiberPoint& x, const BinaryForm& F) {
  bool w_chart = false;
  if (x.kind == FiberPoint::Disc) w_chart = x.chart_w;
  if (x.kind == FiberPoint::Type1) w_chart = x.coord.is_infinity();
  if (x.kind == FiberPoint::Arch) w_chart = x.z_infinity;
  if (!w_chart) return poly_seminorm(x, F.dehom_t());
  // Evaluate F(1, W) at the W-coordinate of x.
  std::vector<Int> g = F.dehom_w();
  FiberPoint xw = x;
  if (x.kind == FiberPoint::Type1) {
    xw.coord = ProjRat{Int(0), Int(1)};
  } else if (x.kind == FiberPoint::Arch) {
    xw.z_infinity = false;
    xw.z = {0, 0};
  } else {
    xw.chart_w = false;  // reuse the T-chart evaluator on the W coordinate
  }
  return poly_seminorm(xw, g);
}

std::string ReductionPoint::str() const {
  switch (kind) {
    case GenericFiber:
      return "generic-fiber";
    case GenericPoint:
      return "generic-point";
    case HorizontalPoint:
      return "horizontal(" + point.str() + ")";
    case SpecialGeneric:
      return "special-generic(" + p.str() + ")";
    case SpecialPoint:
      return "special(" + p.str() + ", " + point.str() + ")";
  }
  return "?";
}

ReductionPoint reduction(const FiberPoint& x) {
  ReductionPoint r;
  if (x.kind == FiberPoint::Arch) {
    r.kind = ReductionPoint::GenericFiber;
    return r;
  }
  FiberVal fv = FiberVal::from_base(x.base);
  bool gauss = x.is_gauss();
  ProjRat tcoord{Int(0), Int(1)};
  if (!gauss) {
    if (x.kind == FiberPoint::Type1) {
      tcoord = x.coord;
    } else if (!x.chart_w) {
      tcoord = ProjRat::from_rat(x.center);
    } else if (x.center == 0) {
      tcoord = ProjRat::infinity();
    } else {
      tcoord = ProjRat::normalized(rat_den(x.center), rat_num(x.center));  // 1/w
    }
  }
  switch (fv.kind) {
    case FiberVal::TrivialQV:
      if (gauss) {
        r.kind = ReductionPoint::GenericPoint;
      } else {
        r.kind = ReductionPoint::HorizontalPoint;
        r.point = tcoord;
      }
      return r;
    case FiberVal::PAdicV:
    case FiberVal::TrivialFpV:
      r.p = fv.p;
      if (gauss) {
        r.kind = ReductionPoint::SpecialGeneric;
      } else {
        r.kind = ReductionPoint::SpecialPoint;
        r.point = residue_mod(tcoord, fv.p);
      }
      return r;
  }
  throw std::logic_error("unreachable");
}

bool OpenSubscheme::contains(const ReductionPoint& r) const {
  switch (r.kind) {
    case ReductionPoint::GenericFiber:
    case ReductionPoint::GenericPoint:
      return true;
    case ReductionPoint::HorizontalPoint:
      for (const auto& F : horizontal)
        if (F.vanishes_at(r.point)) return false;
      return true;
    case ReductionPoint::SpecialGeneric:
      for (const auto& q : vertical)
        if (q == r.p) return false;
      return true;
    case ReductionPoint::SpecialPoint: {
      for (const auto& q : vertical)
        if (q == r.p) return false;
      for (const auto& F : horizontal) {
        Int acc = 0, xp = 1;
        int n = F.degree();
        std::vector<Int> yp(n + 1);
        yp[0] = 1;
        for (int i = 1; i <= n; ++i) yp[i] = (yp[i - 1] * r.point.den) % r.p;
        for (int i = 0; i <= n; ++i) {
          acc = (acc + F.coeff(i) * xp % r.p * yp[n - i]) % r.p;
          xp = (xp * r.point.num) % r.p;
        }
        if (acc % r.p == 0) return false;
      }
      return true;
    }
  }
  return false;
}

bool is_interior(const FiberPoint& x, const OpenSubscheme& U) {
  if (x.kind == FiberPoint::Arch) return false;
  return U.contains(reduction(x));
}

TreeSkeleton build_skeleton(const SpectrumPoint& base, std::vector<ProjRat> marked) {
  FiberVal fv = FiberVal::from_base(base);
  for (auto& m : marked) m = fv.reduce_coord(m);
  std::sort(marked.begin(), marked.end());
  marked.erase(std::unique(marked.begin(), marked.end()), marked.end());

  struct Root {
    ProjRat orig;
    bool w_side;
    Rat pos;  // chart coordinate of the root (w = 1/coord on the W side)
  };
  std::vector<Root> roots;
  for (auto& m : marked) {
    Root r;
    r.orig = m;
    if (m.is_infinity()) {
      r.w_side = true;
      r.pos = 0;
    } else {
      Rat c = m.as_rat();
      bool negval = false;
      if (fv.kind == FiberVal::PAdicV && c != 0) negval = padic_val(c, fv.p) < 0;
      if (negval) {
        r.w_side = true;
        r.pos = Rat(1) / c;
      } else {
        r.w_side = false;
        r.pos = c;
      }
    }
    roots.push_back(std::move(r));
  }

  auto conf = [&](size_t i, size_t j) -> Rat {
    if (roots[i].w_side != roots[j].w_side) return Rat(0);
    QVal v = fv.val(roots[i].pos - roots[j].pos);
    if (v.is_inf()) throw std::logic_error("duplicate marked roots");
    return v.finite() < 0 ? Rat(0) : v.finite();
  };

  // Positions along each root ray, starting from the Gauss point.
  size_t n = roots.size();
  std::vector<std::vector<Rat>> stops(n);
  for (size_t i = 0; i < n; ++i) {
    stops[i].push_back(Rat(0));
    for (size_t j = 0; j < n; ++j)
      if (j != i) stops[i].push_back(conf(i, j));
    std::sort(stops[i].begin(), stops[i].end());
    stops[i].erase(std::unique(stops[i].begin(), stops[i].end()), stops[i].end());
  }

  // Canonical vertex id: minimal ray index within confluence distance.
  auto canon = [&](size_t ray, const Rat& rho) -> std::pair<size_t, Rat> {
    if (rho == 0) return {0, Rat(0)};
    size_t best = ray;
    for (size_t j = 0; j < n; ++j)
      if (j != ray && roots[j].w_side == roots[ray].w_side && conf(ray, j) >= rho)
        best = std::min(best, j);
    return {best, rho};
  };

  TreeSkeleton out;
  std::vector<std::pair<size_t, Rat>> keys;
  auto vertex_id = [&](size_t ray, const Rat& rho) -> int {
    auto key = canon(ray, rho);
    for (size_t k = 0; k < keys.size(); ++k)
      if (keys[k] == key) return static_cast<int>(k);
    keys.push_back(key);
    if (key.second == 0) {
      out.vertices.push_back(FiberPoint::gauss(base));
    } else {
      out.vertices.push_back(
          FiberPoint::disc(base, roots[key.first].pos, key.second, roots[key.first].w_side));
    }
    return static_cast<int>(keys.size() - 1);
  };
  vertex_id(0, Rat(0));  // ensure the Gauss point exists even with no roots
  if (marked.empty()) return out;

  std::vector<std::pair<int, int>> seen_edges;
  for (size_t i = 0; i < n; ++i) {
    for (size_t k = 0; k + 1 < stops[i].size(); ++k) {
      int a = vertex_id(i, stops[i][k]);
      int b = vertex_id(i, stops[i][k + 1]);
      auto key = std::minmax(a, b);
      std::pair<int, int> kp{key.first, key.second};
      if (std::find(seen_edges.begin(), seen_edges.end(), kp) != seen_edges.end()) continue;
      seen_edges.push_back(kp);
      out.edges.push_back({a, b, stops[i][k + 1] - stops[i][k]});
    }
    out.rays.push_back({vertex_id(i, stops[i].back()), roots[i].orig});
  }
  return out;
}

}  // namespace berk
