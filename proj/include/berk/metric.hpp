#pragma once

#include <optional>
#include <vector>

#include "berk/binary_form.hpp"
#include "berk/fiber.hpp"
#include "berk/rational.hpp"
#include "berk/spectrum.hpp"

namespace berk {

struct MetricTerm {
  BinaryForm section;  // homogeneous of degree m*d
  Rat lambda = 0;      // additive constant, natural-log scale at exponent 1
};

/// phi = m^-1 max_j (log|s_j| + eps(x) lambda_j) on O(d) over P^1_Z.
/// Constants scale with the branch exponent so the metric is norm-equivariant;
/// at the canonical points (exponent 1) this is the plain analytification
/// formula, and pure metrics (all lambda = 0) are unaffected everywhere.
struct GlobalTropFSMetric {
  Rat d = 1;
  int m = 1;
  std::vector<MetricTerm> terms;

  int formal_degree() const;  // N = m*d as an integer
  bool pure() const;
  void validate() const;  // degrees, nonemptiness; throws input_error
};

GlobalTropFSMetric standard_metric();  // max(log|X|, log|Y|) on O(1)

struct CommonZeroReport {
  enum Status { Ok, BadGeneric, BadPrimes } status = Ok;
  std::vector<Int> primes;
};

/// Verifies that the sections have no common projective zero on P^1_Z:
/// a unit gcd over Q and no common root over any residue field F_p.
CommonZeroReport check_no_common_zero(const std::vector<BinaryForm>& sections);

/// Per-section splitting into integer linear forms, when every section splits.
struct MetricFactorization {
  std::vector<LinearFactorization> sections;  // aligned with metric terms
};
std::optional<MetricFactorization> metric_linear_factors(const GlobalTropFSMetric& phi);

/// Q-divisor on P^1_Z: horizontal forms and vertical fibers, rational coefficients.
struct QDivisor {
  std::vector<std::pair<BinaryForm, Rat>> horizontal;
  std::vector<std::pair<Int, Rat>> vertical;

  Rat horizontal_degree() const;
  bool effective() const;  // all coefficients >= 0
  QDivisor scaled(const Rat& c) const;
  friend QDivisor operator+(const QDivisor& a, const QDivisor& b);
};

struct GreenFunction {
  GlobalTropFSMetric metric;
  QDivisor divisor;  // reference divisor of degree d

  void validate() const;
};

struct GreenValue {
  double value = 0;      // -inf signals evaluation on |D|
  bool on_divisor = false;
  bool has_val = false;  // exact valuation-coordinate form (non-Archimedean, pure)
  Rat val_units = 0;     // value = val_units * unit_log when has_val
};

/// Metric potential m^-1 max_j(log|s_j|_x + eps lambda_j) trivialized in the
/// chart of x.
GreenValue metric_potential(const GlobalTropFSMetric& phi, const FiberPoint& x);

/// g = potential - log|s_D|_x; the value diverges on |D| (flagged, with the
/// double set to -inf as the singularity signal).
GreenValue green_eval(const GreenFunction& G, const FiberPoint& x);

/// Restriction of the analytified metric to the fiber over x.
class FiberMetricEvaluator {
 public:
  FiberMetricEvaluator(GlobalTropFSMetric phi, SpectrumPoint x)
      : phi_(std::move(phi)), x_(std::move(x)) {}

  const SpectrumPoint& base() const { return x_; }
  GreenValue potential(const FiberPoint& pt) const;
  GreenValue green(const QDivisor& D, const FiberPoint& pt) const;

 private:
  GlobalTropFSMetric phi_;
  SpectrumPoint x_;
};

FiberMetricEvaluator restrict_to_fiber(GlobalTropFSMetric phi, SpectrumPoint x);

/// q^-1 f* phi for f = (fx : fy) of degree q with no common zero on P^1_Z:
/// sections compose, the multiple becomes m*q, and O(d) is preserved.
GlobalTropFSMetric pullback(const GlobalTropFSMetric& phi, const BinaryForm& fx,
                            const BinaryForm& fy);

}  // namespace berk
