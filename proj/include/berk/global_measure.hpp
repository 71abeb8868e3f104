#pragma once

#include <memory>
#include <vector>

#include "berk/adelic.hpp"
#include "berk/metric.hpp"
#include "berk/monge_ampere.hpp"
#include "berk/spectrum.hpp"

namespace berk {

/// Built-in fiber test functions, evaluable exactly at non-Archimedean atoms:
/// constants, the boundary Green's function (optionally capped at 1), and the
/// Green's function of a chosen metric.
struct FiberTestFunction {
  enum Kind { Constant, BoundaryGreen, BoundaryGreenCap1, MetricGreen } kind = Constant;
  Rat c = 1;
  std::shared_ptr<BoundaryDivisor> boundary;
  std::shared_ptr<GreenFunction> green;

  static FiberTestFunction constant(Rat value);
  static FiberTestFunction boundary_green(BoundaryDivisor d0, bool cap1);
  static FiberTestFunction metric_green(GreenFunction g);

  double eval(const FiberPoint& pt) const;
};

struct GlobalIntegralConfig {
  MuQuadratureConfig mu;
  int arch_resolution = 512;
};

struct FiberIntegral {
  double value = 0;
  bool exact = false;  // atomic fiber with exactly rational pairing
  Rat exact_value = 0;
};

FiberIntegral fiber_integral(const GlobalTropFSMetric& phi, const FiberTestFunction& f,
                             const SpectrumPoint& x, const GlobalIntegralConfig& cfg);

struct GlobalIntegralResult {
  double value = 0;
  double mu_tail = 0;   // uncertainty from prime branches past the cutoff
  double quad_err = 0;  // per-branch quadrature refinement estimate
  double arch_err = 0;  // Archimedean discretization contribution
  double total_error() const { return mu_tail + quad_err + arch_err; }

  struct NodeSample {
    Place v;
    double t;
    double inner;
  };
  std::vector<NodeSample> per_node;
};

/// Integral of f against the global Monge-Ampere measure: fiberwise pairings
/// integrated over M(Z) against mu.
GlobalIntegralResult global_ma_integrate(const GlobalTropFSMetric& phi,
                                         const FiberTestFunction& f,
                                         const GlobalIntegralConfig& cfg,
                                         bool keep_nodes = false);

}  // namespace berk
