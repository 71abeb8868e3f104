#pragma once

#include <string>
#include <vector>

#include "berk/metric.hpp"
#include "berk/monge_ampere.hpp"

namespace berk {

/// Arithmetic Q-divisor on the fixed model P^1_Z together with tropical Green
/// data: g = sum_a c_a * pot_a - sum_k a_k log|F_k| - sum_p b_p log|p|.
struct ArithDivisor {
  std::string model_id = "P1Z";
  QDivisor divisor;
  std::vector<std::pair<Rat, GlobalTropFSMetric>> potentials;

  Rat potential_degree() const;
  void validate() const;
  ArithDivisor scaled(const Rat& c) const;
  friend ArithDivisor operator+(const ArithDivisor& a, const ArithDivisor& b);
  friend ArithDivisor operator-(const ArithDivisor& a, const ArithDivisor& b);

  GreenValue green(const FiberPoint& x) const;
};

/// Model adelic divisor: rational part with Green data plus an integral part
/// supported on the open subscheme (fibered-product condition).
struct ModelAdelicDivisor {
  ArithDivisor rational_part;
  QDivisor integral_part;  // integer coefficients
  void validate() const;
  bool integral_zero() const;
};

/// Boundary divisor (X_0, D_0): effective support = complement of U, Green
/// data strictly positive off the support at the Archimedean place.
struct BoundaryDivisor {
  ArithDivisor data;

  OpenSubscheme open_part() const;
  void validate() const;
};

struct BoundaryNormConfig {
  int arch_radii = 16;
  int arch_angles = 64;
  std::vector<Int> extra_primes;
};

struct BoundaryNormResult {
  bool infinite = false;
  Rat value = 0;
  std::string regime;  // "nonarch-exact+arch-sampled" or "sampled"
  std::string obstruction;  // set when infinite
};

/// ||E||_{D0} = inf { eps > 0 : -eps D0 <= E <= eps D0 }, computed as the
/// exact supremum of component and Green ratios over corner candidates at the
/// finite places and a fixed sample grid at the Archimedean place.
BoundaryNormResult boundary_norm(const ModelAdelicDivisor& E, const BoundaryDivisor& D0,
                                 const BoundaryNormConfig& cfg = {});

struct CauchyWitness {
  std::vector<Rat> epsilons;  // eps_i = max_{j>i} ||E_j - E_i||
  int verified_through = 0;
  bool ok = false;
  std::string failure;
};

/// eps_i = max_{j>i} ||E_j - E_i||; succeeds when the epsilons are
/// nonincreasing and decay at or better than target_rate from index
/// rate_from on (early indices carry telescoped sums and need a warm-up).
CauchyWitness verify_cauchy(const std::vector<ModelAdelicDivisor>& seq,
                            const BoundaryDivisor& D0, double target_rate,
                            int rate_from = 1, const BoundaryNormConfig& cfg = {});

struct IterationConfig {
  int degree_cap = 512;
};

/// phi_0 = phi_std, phi_{i+1} = q^-1 f* phi_i for the polarized pair
/// f = (fx : fy) of degree q >= 2 with no common zero on P^1_Z.
std::vector<GlobalTropFSMetric> invariant_metric_sequence(const BinaryForm& fx,
                                                          const BinaryForm& fy,
                                                          int i_max,
                                                          const IterationConfig& cfg = {});

/// sup over the sample of |q^-1 (f* phi) - phi|: isometry defect proxy.
double invariance_residual(const GlobalTropFSMetric& phi, const BinaryForm& fx,
                           const BinaryForm& fy,
                           const std::vector<FiberPoint>& sample);

/// Deterministic 50-point evaluation battery (Archimedean and finite fibers).
std::vector<FiberPoint> standard_sample_points();

/// Analytified boundary Green's function; zero exactly on the interior of U.
double analytic_boundary_green(const BoundaryDivisor& D0, const FiberPoint& x);

/// Membership in the delta-set slice of the normalized boundary: either the
/// Green value is exactly 1, or the point is the maximum of its
/// norm-equivalence ray with ray maximum <= 1 (Archimedean cap).
bool delta_membership(const BoundaryDivisor& D0, const FiberPoint& x);

}  // namespace berk
