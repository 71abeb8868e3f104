#include "berk/global_measure.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "berk/primes.hpp"

namespace berk {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

FiberTestFunction FiberTestFunction::constant(Rat value) {
  FiberTestFunction f;
  f.kind = Constant;
  f.c = std::move(value);
  return f;
}

FiberTestFunction FiberTestFunction::boundary_green(BoundaryDivisor d0, bool cap1) {
  FiberTestFunction f;
  f.kind = cap1 ? BoundaryGreenCap1 : BoundaryGreen;
  f.boundary = std::make_shared<BoundaryDivisor>(std::move(d0));
  return f;
}

FiberTestFunction FiberTestFunction::metric_green(GreenFunction g) {
  FiberTestFunction f;
  f.kind = MetricGreen;
  f.green = std::make_shared<GreenFunction>(std::move(g));
  return f;
}

double FiberTestFunction::eval(const FiberPoint& pt) const {
  switch (kind) {
    case Constant:
      return to_double(c);
    case BoundaryGreen:
      return analytic_boundary_green(*boundary, pt);
    case BoundaryGreenCap1:
      return std::min(1.0, analytic_boundary_green(*boundary, pt));
    case MetricGreen: {
      GreenValue g = green_eval(*green, pt);
      if (g.on_divisor) throw input_error("test function hits the divisor at " + pt.str());
      return g.value;
    }
  }
  throw std::logic_error("unreachable");
}

namespace {

// Per-fiber pairing data: for greens the valuation-unit ingredient is cached
// per atom (it does not depend on the branch parameter), so inner integrals
// along a branch cost one multiply per atom and node.
struct PreparedPairing {
  enum Mode { ConstMode, LinearVal, CappedVal, ArchFixed } mode = ConstMode;
  double constant = 0;          // ConstMode value, or exponent-1 pairing for arch greens
  std::vector<double> masses;   // atom/cell masses
  std::vector<double> vals;     // per-atom valuation units (or exponent-1 values)
  bool cap = false;

  double inner(double unit_log_or_eps) const {
    switch (mode) {
      case ConstMode:
        return constant;
      case ArchFixed: {
        if (!cap) return constant * unit_log_or_eps;  // greens scale with eps
        double acc = 0;
        for (size_t i = 0; i < masses.size(); ++i)
          acc += masses[i] * std::min(1.0, unit_log_or_eps * vals[i]);
        return acc;
      }
      case LinearVal:
      case CappedVal: {
        double acc = 0;
        for (size_t i = 0; i < masses.size(); ++i) {
          double v = vals[i] * unit_log_or_eps;
          acc += masses[i] * (mode == CappedVal ? std::min(1.0, v) : v);
        }
        return acc;
      }
    }
    return 0;
  }
};

double green_val_units(const FiberTestFunction& f, const FiberPoint& pt) {
  GreenValue g;
  if (f.kind == FiberTestFunction::MetricGreen)
    g = green_eval(*f.green, pt);
  else
    g = f.boundary->data.green(pt);
  if (g.on_divisor) throw input_error("test function hits the divisor at " + pt.str());
  if (!g.has_val) throw std::logic_error("expected exact valuation data");
  return to_double(g.val_units);
}

PreparedPairing prepare_nonarch(const FiberMeasure& m, const FiberTestFunction& f,
                                double total_mass) {
  PreparedPairing pp;
  if (f.kind == FiberTestFunction::Constant) {
    pp.mode = PreparedPairing::ConstMode;
    pp.constant = to_double(f.c) * total_mass;
    return pp;
  }
  pp.mode = f.kind == FiberTestFunction::BoundaryGreenCap1 ? PreparedPairing::CappedVal
                                                           : PreparedPairing::LinearVal;
  for (const auto& a : m.atoms) {
    pp.masses.push_back(to_double(a.mass));
    pp.vals.push_back(green_val_units(f, a.point));
  }
  return pp;
}

FiberPoint cell_point(const SpectrumPoint& base, const GridCell& c, double S, int R,
                      double shift) {
  double h = 2 * S / R;
  double xr = -S + (c.ix + 0.5) * h + shift;
  double yi = -S + (c.iy + 0.5) * h + shift;
  std::complex<double> z{xr, yi};
  if (c.chart == 1) z = 1.0 / z;
  return FiberPoint::arch(base, z);
}

PreparedPairing prepare_arch(const FiberMeasure& m, const FiberTestFunction& f) {
  PreparedPairing pp;
  if (f.kind == FiberTestFunction::Constant) {
    pp.mode = PreparedPairing::ConstMode;
    pp.constant = to_double(f.c) * m.cell_total;
    return pp;
  }
  pp.mode = PreparedPairing::ArchFixed;
  pp.cap = f.kind == FiberTestFunction::BoundaryGreenCap1;
  SpectrumPoint e1 = SpectrumPoint::archimedean(Rat(1));
  double acc = 0;
  for (const auto& c : m.cells) {
    FiberPoint pt = cell_point(e1, c, m.grid_half_width, m.resolution, m.grid_shift);
    double v;
    if (f.kind == FiberTestFunction::MetricGreen) {
      GreenValue g = green_eval(*f.green, pt);
      if (g.on_divisor) throw input_error("test function hits the divisor at a grid cell");
      v = g.value;
    } else {
      v = analytic_boundary_green(*f.boundary, pt);
      if (!std::isfinite(v)) throw input_error("test function hits the divisor at a grid cell");
    }
    pp.masses.push_back(c.mass);
    pp.vals.push_back(v);
    acc += c.mass * v;
  }
  pp.constant = acc;  // exponent-1 pairing; scales linearly in eps when uncapped
  return pp;
}

double max_abs_val(const PreparedPairing& pp) {
  double m = 0;
  for (double v : pp.vals) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace

FiberIntegral fiber_integral(const GlobalTropFSMetric& phi, const FiberTestFunction& f,
                             const SpectrumPoint& x, const GlobalIntegralConfig& cfg) {
  FiberIntegral out;
  if (!x.is_trivial() && x.place.archimedean) {
    FiberMeasure m = ma_arch(phi, x.t, cfg.arch_resolution);
    PreparedPairing pp = prepare_arch(m, f);
    out.value = pp.inner(to_double(x.t));
    return out;
  }
  FiberMeasure m = ma_nonarch(phi, x);
  if (f.kind == FiberTestFunction::Constant) {
    out.exact = true;
    out.exact_value = f.c * m.atom_total;
    out.value = to_double(out.exact_value);
    return out;
  }
  FiberVal fv = FiberVal::from_base(x);
  bool trivial_base = fv.kind != FiberVal::PAdicV;
  Rat exact_acc = 0;
  double acc = 0;
  bool exact = trivial_base;
  for (const auto& a : m.atoms) {
    GreenValue g;
    if (f.kind == FiberTestFunction::MetricGreen)
      g = green_eval(*f.green, a.point);
    else
      g = f.boundary->data.green(a.point);
    if (g.on_divisor) throw input_error("test function hits the divisor at " + a.point.str());
    double v = g.value;
    if (f.kind == FiberTestFunction::BoundaryGreenCap1) v = std::min(1.0, v);
    acc += to_double(a.mass) * v;
    if (exact && g.has_val) {
      Rat ve = g.val_units;  // unit_log = 1 over trivially valued bases
      if (f.kind == FiberTestFunction::BoundaryGreenCap1 && ve > 1) ve = 1;
      exact_acc += a.mass * ve;
    } else {
      exact = false;
    }
  }
  out.value = acc;
  out.exact = exact;
  if (exact) {
    out.exact_value = exact_acc;
    out.value = to_double(exact_acc);
  }
  return out;
}

GlobalIntegralResult global_ma_integrate(const GlobalTropFSMetric& phi,
                                         const FiberTestFunction& f,
                                         const GlobalIntegralConfig& cfg,
                                         bool keep_nodes) {
  phi.validate();
  GlobalIntegralResult out;
  MuTotalResult total = mu_total(cfg.mu);
  auto primes = sieve_primes(cfg.mu.prime_cutoff);
  int K = cfg.mu.nodes_per_branch;
  if (K < 2) throw input_error("nodes_per_branch must be >= 2");

  auto weight_of = [](const Place& v) {
    if (v.archimedean) return std::exp(-1.0);
    double p = v.p.convert_to<double>();
    return 1.0 / (p * std::log(p));
  };

  auto branch_stats = [&](const Place& v, const PreparedPairing& pp, double& mean_full,
                          double& mean_half) {
    auto node_arg = [&](const Rat& t) {
      if (v.archimedean) return to_double(t);  // eps itself
      return -std::log(to_double(t));          // unit_log = log(1/t)
    };
    double acc = 0;
    for (int k = 0; k < K; ++k) {
      Rat t(2 * k + 1, 2 * K);
      double inner = pp.inner(node_arg(t));
      acc += inner;
      if (keep_nodes)
        out.per_node.push_back({v, to_double(t), inner});
    }
    mean_full = acc / K;
    int Kh = K / 2;
    acc = 0;
    for (int k = 0; k < Kh; ++k) acc += pp.inner(node_arg(Rat(2 * k + 1, 2 * Kh)));
    mean_half = acc / Kh;
  };

  double raw = 0, quad = 0;
  double arch_err_raw = 0;

  // Archimedean branch: measure computed once at exponent 1.
  {
    FiberMeasure m = ma_arch(phi, Rat(1), cfg.arch_resolution);
    PreparedPairing pp = prepare_arch(m, f);
    double mean_full, mean_half;
    branch_stats(Place::infinity(), pp, mean_full, mean_half);
    raw += weight_of(Place::infinity()) * mean_full;
    quad += weight_of(Place::infinity()) * std::abs(mean_full - mean_half);
    double fmax = f.kind == FiberTestFunction::Constant ? std::abs(to_double(f.c))
                                                        : std::max(1.0, max_abs_val(pp));
    arch_err_raw = weight_of(Place::infinity()) *
                   (std::abs(m.cell_total - to_double(phi.d)) + m.clipped_negative) * fmax;
  }

  // Prime branches: one exact measure per prime, rebased per node.
  double last_avg = 0;
  std::vector<double> averages;
  for (uint64_t p : primes) {
    Place v = Place::prime(Int(p));
    SpectrumPoint canonical = SpectrumPoint::at_prime(Int(p), Rat(1, Int(p)));
    FiberMeasure m = ma_nonarch(phi, canonical);
    PreparedPairing pp = prepare_nonarch(m, f, to_double(phi.d));
    double mean_full, mean_half;
    branch_stats(v, pp, mean_full, mean_half);
    raw += weight_of(v) * mean_full;
    quad += weight_of(v) * std::abs(mean_full - mean_half);
    averages.push_back(mean_full);
    last_avg = mean_full;
  }

  double dev = 0;
  size_t look = std::min<size_t>(averages.size(), 8);
  for (size_t i = averages.size() - look; i < averages.size(); ++i)
    dev = std::max(dev, std::abs(averages[i] - last_avg));
  // Branches past the cutoff carry the remaining mu-weight; their inner
  // integrals are estimated by the last computed prime branch.
  double covered = std::exp(-1.0);
  for (uint64_t p : primes) {
    double pd = static_cast<double>(p);
    covered += 1.0 / (pd * std::log(pd));
  }
  double uncovered = total.value.mid() - covered;
  double tail_rad = total.value.radius();
  raw += uncovered * last_avg;

  double denom = total.value.mid();
  out.value = raw / denom;
  out.mu_tail = (tail_rad * std::abs(last_avg) + std::abs(uncovered) * dev) / denom;
  out.quad_err = quad / denom;
  out.arch_err = arch_err_raw / denom;
  return out;
}

}  // namespace berk
