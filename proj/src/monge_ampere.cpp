#include "berk/monge_ampere.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

#include "berk/pl_tree.hpp"

namespace berk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

FiberMeasure ma_nonarch(const GlobalTropFSMetric& phi, const SpectrumPoint& x) {
  phi.validate();
  if (!x.is_trivial() && x.place.archimedean)
    throw input_error("ma_nonarch called on an Archimedean fiber");
  auto fac = metric_linear_factors(phi);
  if (!fac)
    throw unsupported_error(
        "sections must be products of integer linear forms for the exact measure");

  FiberMeasure out;
  out.base = x;
  out.degree = phi.d;

  FiberVal fv = FiberVal::from_base(x);
  std::vector<ProjRat> roots;
  pl::collect_roots(fv, *fac, roots);
  pl::Tree tree = pl::build_tree(x, std::move(roots));
  pl::TropTerm term = pl::prepare_term(fv, phi, *fac);
  Rat m(phi.m);

  // Slope bookkeeping: outgoing-slope sums per node, plus envelope corners
  // and residual slopes at the type-1 leaves.
  std::map<std::pair<size_t, Rat>, Rat> node_slope;

  std::vector<MassAtom> atoms;
  auto push_atom = [&](FiberPoint pt, Rat mass) {
    if (mass == 0) return;
    if (mass < 0) throw std::logic_error("negative Monge-Ampere mass");
    for (auto& a : atoms)
      if (a.point.same_point(pt)) {
        a.mass += mass;
        return;
      }
    atoms.push_back({std::move(pt), std::move(mass)});
  };

  for (size_t r = 0; r < tree.rays.size(); ++r) {
    const auto& stops = tree.stops[r];
    for (size_t k = 0; k < stops.size(); ++k) {
      Rat lo = stops[k];
      std::optional<Rat> hi;
      if (k + 1 < stops.size()) hi = stops[k + 1];
      bool leaf = !hi.has_value();
      if (!leaf) {
        if (!tree.owns_segment(r, *hi)) continue;
      }
      pl::EnvelopeResult env = pl::term_envelope(tree, term, r, lo, hi);
      node_slope[tree.canon(r, lo)] += env.b_lo;
      if (!leaf) {
        node_slope[tree.canon(r, *hi)] -= env.b_hi;
      } else if (static_cast<int>(r) == tree.inf_ray) {
        push_atom(FiberPoint::type1(x, ProjRat::infinity()),
                  (Rat(term.formal_degree) - env.b_hi) / m);
      } else {
        push_atom(FiberPoint::type1(x, tree.rays[r].orig), -env.b_hi / m);
      }
      for (auto& c : env.corners) push_atom(tree.point_at(r, c.pos), c.delta_b / m);
    }
  }
  for (auto& [key, slope] : node_slope)
    push_atom(tree.point_at(key.first, key.second), slope / m);

  Rat total = 0;
  for (auto& a : atoms) total += a.mass;
  if (total != phi.d)
    throw std::logic_error("tree Laplacian mass " + rat_to_string(total) +
                           " differs from degree " + rat_to_string(phi.d));
  std::sort(atoms.begin(), atoms.end(), [](const MassAtom& a, const MassAtom& b) {
    return a.point.str() < b.point.str();
  });
  out.atoms = std::move(atoms);
  out.atom_total = total;
  return out;
}

namespace {

struct ArchPotential {
  const GlobalTropFSMetric& phi;
  std::vector<std::vector<Int>> dehom_t, dehom_w;
  std::vector<double> lambda;

  explicit ArchPotential(const GlobalTropFSMetric& m) : phi(m) {
    for (const auto& t : m.terms) {
      if (t.section.is_zero()) continue;
      dehom_t.push_back(t.section.dehom_t());
      dehom_w.push_back(t.section.dehom_w());
      lambda.push_back(to_double(t.lambda));
    }
  }

  // Potential at exponent 1 in the given chart; -inf marks an exact hit of a
  // section zero (grid must shift).
  double eval(int chart, std::complex<double> z, bool& exact_zero) const {
    const auto& polys = chart == 0 ? dehom_t : dehom_w;
    double best = -kInf;
    bool all_zero = true;
    for (size_t j = 0; j < polys.size(); ++j) {
      double lv = log_abs_eval(polys[j], z);
      if (lv == -kInf) {
        exact_zero = true;
        continue;
      }
      all_zero = false;
      best = std::max(best, lv + lambda[j]);
    }
    if (all_zero) exact_zero = true;
    return best / phi.m;
  }
};

double seam_weight(double r) {
  // 1 on |z| <= 1.05, 0 on |z| >= 1.20, smooth in between.
  if (r <= 1.05) return 1.0;
  if (r >= 1.20) return 0.0;
  double s = (r - 1.05) / 0.15;
  return 1.0 - s * s * (3 - 2 * s);
}

}  // namespace

FiberMeasure ma_arch(const GlobalTropFSMetric& phi, const Rat& eps, int resolution) {
  phi.validate();
  if (resolution < 16 || (resolution & (resolution - 1)) != 0)
    throw input_error("resolution must be a power of two, at least 16");
  if (eps <= 0 || eps > 1) throw input_error("eps must lie in (0,1]");

  const double S = 1.25;
  int R = resolution;
  double h = 2 * S / R;
  ArchPotential pot(phi);

  FiberMeasure out;
  out.base = SpectrumPoint::archimedean(eps);
  out.degree = phi.d;
  out.resolution = R;
  out.grid_half_width = S;

  double shift = 0;
  for (int attempt = 0; attempt < 64; ++attempt) {
    bool exact_zero = false;
    // u[chart][i][j] on the extended lattice i,j in [-1, R]: cell centers.
    std::vector<std::vector<double>> u(2);
    int W = R + 2;
    for (int chart = 0; chart < 2; ++chart) {
      u[chart].assign(static_cast<size_t>(W) * W, 0.0);
      for (int i = -1; i <= R && !exact_zero; ++i) {
        double xr = -S + (i + 0.5) * h + shift;
        for (int j = -1; j <= R; ++j) {
          double yi = -S + (j + 0.5) * h + shift;
          double v = pot.eval(chart, {xr, yi}, exact_zero);
          if (exact_zero) break;
          u[chart][static_cast<size_t>(i + 1) * W + (j + 1)] = v;
        }
      }
      if (exact_zero) break;
    }
    if (exact_zero) {
      shift += h * std::ldexp(1.0, -20);
      continue;
    }
    auto at = [&](int chart, int i, int j) {
      return u[chart][static_cast<size_t>(i + 1) * W + (j + 1)];
    };
    out.cells.clear();
    out.clipped_negative = 0;
    double total = 0;
    const double two_pi = 2 * std::acos(-1.0);
    for (int chart = 0; chart < 2; ++chart) {
      std::vector<double> mass(static_cast<size_t>(R) * R, 0.0);
      for (int i = 0; i < R; ++i) {
        double xr = -S + (i + 0.5) * h + shift;
        for (int j = 0; j < R; ++j) {
          double yi = -S + (j + 0.5) * h + shift;
          double r = std::hypot(xr, yi);
          double zabs = chart == 0 ? r : (r == 0 ? kInf : 1.0 / r);
          double w = chart == 0 ? seam_weight(r) : 1.0 - seam_weight(zabs);
          if (w <= 0) continue;
          double lap = at(chart, i + 1, j) + at(chart, i - 1, j) + at(chart, i, j + 1) +
                       at(chart, i, j - 1) - 4 * at(chart, i, j);
          mass[static_cast<size_t>(i) * R + j] = w * lap / two_pi;
        }
      }
      // The discrete Laplacian rings around atoms: negative side lobes are
      // moved into their largest neighbor (total-preserving, one-cell
      // localization error), leftover dust is zeroed and reported.
      for (int pass = 0; pass < 4; ++pass) {
        bool any = false;
        for (int i = 0; i < R; ++i)
          for (int j = 0; j < R; ++j) {
            double& m0 = mass[static_cast<size_t>(i) * R + j];
            if (m0 >= 0) continue;
            int bi = -1, bj = -1;
            double best = 0;
            for (int di = -1; di <= 1; ++di)
              for (int dj = -1; dj <= 1; ++dj) {
                int ni = i + di, nj = j + dj;
                if (ni < 0 || nj < 0 || ni >= R || nj >= R || (di == 0 && dj == 0))
                  continue;
                double mn = mass[static_cast<size_t>(ni) * R + nj];
                if (mn > best) {
                  best = mn;
                  bi = ni;
                  bj = nj;
                }
              }
            if (bi >= 0 && best > 0) {
              mass[static_cast<size_t>(bi) * R + bj] += m0;
              m0 = 0;
              any = true;
            }
          }
        if (!any) break;
      }
      for (int i = 0; i < R; ++i) {
        double xr = -S + (i + 0.5) * h + shift;
        for (int j = 0; j < R; ++j) {
          double m0 = mass[static_cast<size_t>(i) * R + j];
          if (m0 == 0) continue;
          if (m0 < 0) {
            out.clipped_negative += -m0;
            continue;
          }
          double yi = -S + (j + 0.5) * h + shift;
          double r = std::hypot(xr, yi);
          double zabs = chart == 0 ? r : (r == 0 ? kInf : 1.0 / r);
          out.cells.push_back({chart, i, j, zabs, m0});
          total += m0;
        }
      }
    }
    out.cell_total = total;
    out.grid_shift = shift;
    return out;
  }
  throw std::logic_error("grid shifting failed to avoid section zeros");
}

FiberMeasure ma_at(const GlobalTropFSMetric& phi, const SpectrumPoint& x,
                   const MaConfig& cfg) {
  if (!x.is_trivial() && x.place.archimedean)
    return ma_arch(phi, x.t, cfg.arch_resolution);
  FiberMeasure m = ma_nonarch(phi, x);
  m.base = x;
  return m;
}

MassReport total_mass_check(const GlobalTropFSMetric& phi,
                            const std::vector<SpectrumPoint>& sample,
                            const MaConfig& cfg) {
  phi.validate();
  MassReport rep;
  for (const auto& x : sample) {
    if (!is_zariski_dense(x))
      throw input_error("total-mass samples must be Zariski dense: " + x.str());
    FiberMeasure m = ma_at(phi, x, cfg);
    MassReportEntry e;
    e.x = x;
    e.mass = m.total_mass();
    if (m.archimedean()) {
      e.exact = false;
      e.deviation = std::abs(e.mass - to_double(phi.d));
    } else {
      e.exact = m.atom_total == phi.d;
      e.deviation = e.exact ? 0.0 : std::abs(e.mass - to_double(phi.d));
    }
    rep.max_deviation = std::max(rep.max_deviation, e.deviation);
    rep.entries.push_back(std::move(e));
  }
  return rep;
}

NondegeneracyReport nondegeneracy_check(const GlobalTropFSMetric& phi) {
  NondegeneracyReport rep;
  rep.witness = ma_nonarch(phi, SpectrumPoint::trivial());
  rep.nondegenerate = rep.witness.atom_total != 0;
  return rep;
}

}  // namespace berk
