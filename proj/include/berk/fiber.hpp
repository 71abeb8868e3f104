#pragma once

#include <complex>
#include <string>
#include <vector>

#include "berk/binary_form.hpp"
#include "berk/rational.hpp"
#include "berk/spectrum.hpp"

namespace berk {

/// Valuation data of the residue field of a non-Archimedean SpectrumPoint.
/// Valuation coordinates are normalized so that a uniformizer has value 1 on
/// p-branches; over trivially valued bases the unit is 1 (radii e^-rho).
struct FiberVal {
  enum Kind { PAdicV, TrivialQV, TrivialFpV } kind = TrivialQV;
  Int p = 0;
  double unit_log = 1.0;  // log(1/t) on p-branches, 1 otherwise

  static FiberVal from_base(const SpectrumPoint& x);
  QVal val(const Rat& x) const;
  /// Canonical coordinate of a P^1(Q) point on this fiber; reduces mod p for
  /// trivially valued F_p bases.
  ProjRat reduce_coord(const ProjRat& c) const;
};

/// A point of the Berkovich projective line over the residue field of `base`.
/// Disc points live in an explicit affine chart: T (the standard coordinate)
/// or W = 1/T; in either chart radius_val >= 0 in valuation coordinates.
struct FiberPoint {
  SpectrumPoint base;
  enum Kind { Type1, Disc, Arch } kind = Type1;

  // Type1
  ProjRat coord{Int(0), Int(1)};

  // Disc
  bool chart_w = false;
  Rat center = 0;
  Rat radius_val = 0;

  // Arch
  std::complex<double> z{0, 0};
  bool z_infinity = false;

  static FiberPoint type1(SpectrumPoint base, ProjRat coord);
  static FiberPoint type1_rat(SpectrumPoint base, const Rat& a) {
    return type1(std::move(base), ProjRat::from_rat(a));
  }
  static FiberPoint disc(SpectrumPoint base, Rat center, Rat radius_val, bool chart_w = false);
  static FiberPoint gauss(SpectrumPoint base);
  static FiberPoint arch(SpectrumPoint base, std::complex<double> z);
  static FiberPoint arch_infinity(SpectrumPoint base);

  bool is_gauss() const { return kind == Disc && radius_val == 0; }
  /// Seminorm equality (same base fiber).
  bool same_point(const FiberPoint& o) const;
  std::string str() const;
};

struct Seminorm {
  double log_value = 0;  // natural log of |f|_x; -inf on the zero locus
  bool has_val = false;  // exact valuation-coordinate form available
  QVal val;              // log_value = -val * unit_log when has_val
  double value() const { return std::exp(log_value); }
};

/// Seminorm of a univariate integer polynomial (coefficients by ascending
/// power of the chart coordinate of x).
Seminorm poly_seminorm(const FiberPoint& x, const std::vector<Int>& f);

/// Seminorm of a binary form trivialized in the chart of x (F(T,1) or F(1,W)).
Seminorm form_seminorm(const FiberPoint& x, const BinaryForm& F);

struct ReductionPoint {
  enum Kind {
    GenericFiber,     // Archimedean image inside the generic fiber
    GenericPoint,     // generic point of P^1_Q
    HorizontalPoint,  // closed point of the generic fiber (rational coordinate)
    SpecialGeneric,   // generic point of the special fiber at p
    SpecialPoint      // closed point of the special fiber, residue in P^1(F_p)
  } kind = GenericFiber;
  Int p = 0;
  ProjRat point{Int(0), Int(1)};  // coordinate / residue lift
  std::string str() const;
};

ReductionPoint reduction(const FiberPoint& x);

/// Open subscheme of P^1_Z given as the complement of finitely many
/// horizontal forms and vertical fibers.
struct OpenSubscheme {
  std::vector<BinaryForm> horizontal;  // nonzero primitive forms
  std::vector<Int> vertical;           // primes

  bool contains(const ReductionPoint& r) const;
};

bool is_interior(const FiberPoint& x, const OpenSubscheme& U);

struct TreeSkeleton {
  std::vector<FiberPoint> vertices;  // vertex 0 is the Gauss point
  struct Edge {
    int from, to;
    Rat length;
  };
  std::vector<Edge> edges;
  struct Ray {  // infinite branch from a vertex to a marked type-1 point
    int from;
    ProjRat to;
  };
  std::vector<Ray> rays;
};

/// Convex hull tree of the Gauss point and the marked type-1 points.
TreeSkeleton build_skeleton(const SpectrumPoint& base, std::vector<ProjRat> marked);

}  // namespace berk
