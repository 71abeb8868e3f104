#pragma once

#include <vector>

#include "berk/fiber.hpp"
#include "berk/metric.hpp"

namespace berk {

struct MassAtom {
  FiberPoint point;
  Rat mass;
};

struct GridCell {
  int chart;  // 0: standard coordinate z, 1: swapped coordinate w = 1/z
  int ix, iy;
  double z_abs;  // |z| of the cell center (1/|w| on the swapped chart)
  double mass;
};

struct FiberMeasure {
  SpectrumPoint base;
  Rat degree = 0;  // expected total mass d

  // non-Archimedean fibers
  std::vector<MassAtom> atoms;
  Rat atom_total = 0;

  // Archimedean fibers
  std::vector<GridCell> cells;
  int resolution = 0;
  double grid_half_width = 0;
  double grid_shift = 0;
  double clipped_negative = 0;
  double cell_total = 0;

  bool archimedean() const { return resolution > 0; }
  double total_mass() const { return archimedean() ? cell_total : to_double(atom_total); }
};

/// Exact fiberwise Monge-Ampere measure (tree Laplacian of the PL potential)
/// over a non-Archimedean or trivially valued point. Sections must split into
/// integer linear forms.
FiberMeasure ma_nonarch(const GlobalTropFSMetric& phi, const SpectrumPoint& x);

/// Archimedean fiber: (1/2pi) 5-point finite-difference Laplacian of the
/// potential on two chart grids blended across a smooth seam. The measure is
/// computed at exponent 1 and reported for general eps (total mass is
/// exponent-independent).
FiberMeasure ma_arch(const GlobalTropFSMetric& phi, const Rat& eps, int resolution);

struct MaConfig {
  int arch_resolution = 512;
};

FiberMeasure ma_at(const GlobalTropFSMetric& phi, const SpectrumPoint& x,
                   const MaConfig& cfg = {});

struct MassReportEntry {
  SpectrumPoint x;
  double mass = 0;
  bool exact = false;  // exact rational identity mass == d held
  double deviation = 0;
};

struct MassReport {
  std::vector<MassReportEntry> entries;
  double max_deviation = 0;
};

/// Total-mass check over Zariski-dense sample points: exact equality with d
/// on non-Archimedean fibers, discretization tolerance on Archimedean ones.
MassReport total_mass_check(const GlobalTropFSMetric& phi,
                            const std::vector<SpectrumPoint>& sample,
                            const MaConfig& cfg = {});

struct NondegeneracyReport {
  bool nondegenerate = false;
  FiberMeasure witness;
};

/// Total mass of the measure over the trivially valued point x0.
NondegeneracyReport nondegeneracy_check(const GlobalTropFSMetric& phi);

}  // namespace berk
