#pragma once

// Piecewise-linear potential calculus on the skeleton tree of a fiber of
// (P^1_Z)^an: shared between the Monge-Ampere measures and the boundary-norm
// effectivity checks. Values are kept in valuation units (multiples of
// log(1/t) on p-branches, nats over trivially valued bases) and are exact:
// lambda constants contribute only at Archimedean places, so all finite-place
// data is rational.

#include <optional>
#include <vector>

#include "berk/fiber.hpp"
#include "berk/metric.hpp"

namespace berk::pl {

struct Ray {
  bool w_side = false;
  Rat pos = 0;  // chart coordinate of the target root (w = 1/coord on W side)
  ProjRat orig{Int(0), Int(1)};
};

struct Tree {
  SpectrumPoint base;
  FiberVal fv;
  std::vector<Ray> rays;
  int inf_ray = -1;  // index of the ray toward infinity (always present)
  std::vector<std::vector<Rat>> stops;  // per-ray positions, sorted from 0

  Rat conf(size_t i, size_t j) const;
  FiberPoint point_at(size_t ray, const Rat& rho) const;
  /// True if ray r canonically owns the segment ending at height hi.
  bool owns_segment(size_t r, const Rat& hi) const;
  /// Canonical node key (minimal equivalent ray, height).
  std::pair<size_t, Rat> canon(size_t ray, const Rat& rho) const;
};

/// Tree spanned by the Gauss point, the marked roots, and infinity.
Tree build_tree(const SpectrumPoint& base, std::vector<ProjRat> marked);

/// One linear factor q X - p Y with multiplicity.
struct Factor {
  Rat q, p;
  int mult = 1;
};

/// One section of a tropical term: content times a product of linear factors.
struct Option {
  QVal content_val;
  std::vector<Factor> factors;
};

struct TropTerm {
  int m = 1;
  int formal_degree = 0;
  std::vector<Option> options;
};

/// Prepares a linear-factor metric against the fiber; drops sections that
/// vanish identically on it. Throws if all sections drop.
TropTerm prepare_term(const FiberVal& fv, const GlobalTropFSMetric& phi,
                      const MetricFactorization& fac);
/// log|F| as a single-option term (F must split into linear factors).
TropTerm prepare_form(const FiberVal& fv, const BinaryForm& F);

void collect_roots(const FiberVal& fv, const MetricFactorization& fac,
                   std::vector<ProjRat>& out);
void collect_form_roots(const FiberVal& fv, const BinaryForm& F, std::vector<ProjRat>& out);

/// Valuation of one factor along a ray at height rho (exact, both charts).
QVal factor_val_at(const Tree& t, size_t ray, const Rat& rho, const Factor& f);

struct TermValue {
  Rat v = 0;  // valuation units, includes the 1/m factor
  bool minus_inf = false;
};
TermValue term_value(const Tree& t, const TropTerm& term, size_t ray, const Rat& rho);

/// Affine representation a + b*rho of one option on a corner-free segment.
struct Affine {
  Rat a = 0;
  Rat b = 0;
  bool minus_inf = false;
};
Affine option_on_segment(const Tree& t, size_t ray, const Rat& lo,
                         const std::optional<Rat>& hi, const Option& o);

struct EnvelopeCorner {
  Rat pos = 0;
  Rat delta_b = 0;  // slope jump (b_after - b_before), > 0
};
struct EnvelopeResult {
  Rat b_lo = 0;  // active slope just above lo
  Rat b_hi = 0;  // active slope just below hi (final slope when hi is infinite)
  std::vector<EnvelopeCorner> corners;
};
EnvelopeResult envelope_on_segment(const std::vector<Affine>& fs, const Rat& lo,
                                   const std::optional<Rat>& hi);

/// Per-segment slope data of the upper envelope of a term (after max, before /m).
EnvelopeResult term_envelope(const Tree& t, const TropTerm& term, size_t ray,
                             const Rat& lo, const std::optional<Rat>& hi);

}  // namespace berk::pl
