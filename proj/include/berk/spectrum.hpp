#pragma once

#include <functional>
#include <map>
#include <string>
#include <vector>

#include "berk/rational.hpp"

namespace berk {

struct Place {
  bool archimedean = false;
  Int p = 0;  // prime when !archimedean

  static Place infinity() { return {true, Int(0)}; }
  static Place prime(Int q) { return {false, std::move(q)}; }

  friend bool operator==(const Place& a, const Place& b) {
    return a.archimedean == b.archimedean && (a.archimedean || a.p == b.p);
  }
  friend bool operator<(const Place& a, const Place& b) {
    if (a.archimedean != b.archimedean) return a.archimedean;  // infinity first
    return a.p < b.p;
  }
  std::string str() const { return archimedean ? "inf" : p.str(); }
};

/// A point of the Berkovich spectrum of Z in the [0,1] branch chart:
/// on a p-branch t = |p|_x (t=1 glues to the trivial point, t=0 is the
/// trivially valued F_p end); on the infinity branch t is the exponent
/// (t=0 glues to the trivial point).
struct SpectrumPoint {
  Place place;
  Rat t;

  SpectrumPoint() : place(Place::infinity()), t(0) {}
  SpectrumPoint(Place pl, Rat tt);

  static SpectrumPoint trivial() { return {Place::infinity(), Rat(0)}; }
  static SpectrumPoint at_prime(Int p, Rat t) { return {Place::prime(std::move(p)), std::move(t)}; }
  static SpectrumPoint archimedean(Rat eps) { return {Place::infinity(), std::move(eps)}; }

  bool is_trivial() const {
    return place.archimedean ? t == 0 : t == 1;
  }
  friend bool operator==(const SpectrumPoint& a, const SpectrumPoint& b) {
    if (a.is_trivial() || b.is_trivial()) return a.is_trivial() && b.is_trivial();
    return a.place == b.place && a.t == b.t;
  }
  std::string str() const;
};

double seminorm_eval(const SpectrumPoint& x, const Int& n);

struct Residue {
  enum Kind { TrivialQ, ArchimedeanReal, PAdic, TrivialFp } kind;
  Int p;          // for PAdic / TrivialFp
  double epsilon; // exponent: t on the infinity branch, log(1/t)/log p on p-branches
};

Residue residue_class(const SpectrumPoint& x);

/// False exactly at the trivially valued F_p branch ends (t = 0 on a p-branch).
bool is_zariski_dense(const SpectrumPoint& x);

/// Per-place finite unions of closed subintervals of [0,1] plus a default
/// rule for unlisted prime branches ("empty" or "full"). The infinity branch
/// participates only when listed.
struct BranchSet {
  bool default_full = false;
  std::map<Place, std::vector<std::pair<Rat, Rat>>> branches;

  void normalize();  // sorts, merges, validates endpoints
  Rat branch_length(const Place& v) const;  // uses the default for unlisted primes
  static BranchSet whole_space();
  static BranchSet single_branch(Place v, Rat a, Rat b);
};

struct MuQuadratureConfig {
  uint64_t prime_cutoff = 10000;
  int nodes_per_branch = 256;
};

/// Rigorous enclosure [lo, hi] with a convenience midpoint/radius view.
struct Enclosure {
  double lo = 0, hi = 0;
  double mid() const { return 0.5 * (lo + hi); }
  double radius() const { return 0.5 * (hi - lo); }
};

struct MuPrimeResult {
  /// Exact per-branch lengths of the listed branches (symbolic layer:
  /// the coefficient of the weight 1/(v log v), or 1/e at infinity).
  std::map<Place, Rat> lengths;
  bool tail_full = false;  // unlisted prime branches contribute length 1 each
  Enclosure value;
};

/// mu'(E) = sum_v len(E cap I_v) / (v log v), infinity weighted 1/e.
MuPrimeResult mu_prime(const BranchSet& E, const MuQuadratureConfig& cfg);

struct MuTotalResult {
  double partial_sum = 0;  // 1/e + sum over sieved primes
  Enclosure tail;          // rigorous bracket of the remaining prime sum
  Enclosure value;
  uint64_t sieve_limit = 0;
};

/// mu'(M(Z)) = 1/e + sum_p 1/(p log p), as a certified interval. The tail
/// past the sieve is bracketed through explicit prime-counting bounds
/// (pi(x) >= x/log x (1 + 1/log x) for x >= 599 and
///  pi(x) <= x/log x (1 + 1.2762/log x)) via Abel summation.
MuTotalResult mu_total(const MuQuadratureConfig& cfg);

/// mu(E) = mu'(E)/mu'(M(Z)) in [0,1].
Enclosure mu(const BranchSet& E, const MuQuadratureConfig& cfg);

struct IntegrateResult {
  double value = 0;
  double tail_error = 0;   // uncertainty from branches past the cutoff
  double total_weight = 0; // mu-mass covered by explicit quadrature nodes
};

/// Composite midpoint quadrature of h against mu. Branch ends (non
/// Zariski-dense points) are never quadrature nodes. The tail past the
/// prime cutoff is accounted with the last computed prime-branch average.
IntegrateResult integrate_mu(const std::function<double(const SpectrumPoint&)>& h,
                             const MuQuadratureConfig& cfg);

}  // namespace berk
