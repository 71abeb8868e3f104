#include <doctest.h>

#include <cmath>
#include <random>

#include "berk/metric.hpp"

using namespace berk;

namespace {
const SpectrumPoint q2 = SpectrumPoint::at_prime(2, Rat(1, 2));
const SpectrumPoint q3 = SpectrumPoint::at_prime(3, Rat(1, 3));
const SpectrumPoint x0 = SpectrumPoint::trivial();
const SpectrumPoint e1 = SpectrumPoint::archimedean(Rat(1));

GreenFunction std_green() {
  GreenFunction g;
  g.metric = standard_metric();
  g.divisor.horizontal.push_back({BinaryForm::parse("Y"), Rat(1)});
  return g;
}
}  // namespace

TEST_CASE("common zero verification") {
  auto ok = check_no_common_zero({BinaryForm::parse("X^3"), BinaryForm::parse("Y^3")});
  CHECK(ok.status == CommonZeroReport::Ok);

  auto bad2 = check_no_common_zero({BinaryForm::parse("X"), BinaryForm::parse("X+2Y")});
  REQUIRE(bad2.status == CommonZeroReport::BadPrimes);
  REQUIRE(bad2.primes.size() == 1);
  CHECK(bad2.primes[0] == 2);

  auto badg = check_no_common_zero({BinaryForm::parse("X*Y"), BinaryForm::parse("X^2")});
  CHECK(badg.status == CommonZeroReport::BadGeneric);

  CHECK_THROWS_AS(check_no_common_zero({BinaryForm::zero(2)}), input_error);

  // shared contents are caught as bad primes
  auto cont = check_no_common_zero({BinaryForm::parse("2X"), BinaryForm::parse("2Y")});
  REQUIRE(cont.status == CommonZeroReport::BadPrimes);
  CHECK(cont.primes[0] == 2);

  // polarized pairs used downstream
  CHECK(check_no_common_zero({BinaryForm::parse("X^2+Y^2"), BinaryForm::parse("Y^2")})
            .status == CommonZeroReport::Ok);
  CHECK(check_no_common_zero({BinaryForm::parse("X^2"), BinaryForm::parse("Y^2")})
            .status == CommonZeroReport::Ok);
}

TEST_CASE("green evaluation at reference points") {
  GreenFunction g = std_green();
  // Type1(1/p) over (p, 1/p): g = log p
  GreenValue v = green_eval(g, FiberPoint::type1_rat(q3, Rat(1, 3)));
  CHECK(v.has_val);
  CHECK(v.val_units == Rat(1));
  CHECK(v.value == doctest::Approx(std::log(3.0)).epsilon(1e-14));

  v = green_eval(g, FiberPoint::gauss(q3));
  CHECK(v.val_units == Rat(0));
  CHECK(v.value == 0.0);

  v = green_eval(g, FiberPoint::arch(e1, {2.0, 0.0}));
  CHECK(v.value == doctest::Approx(std::log(2.0)).epsilon(1e-14));

  // on the divisor: singular
  v = green_eval(g, FiberPoint::type1(q3, ProjRat::infinity()));
  CHECK(v.on_divisor);
  v = green_eval(g, FiberPoint::arch_infinity(e1));
  CHECK(v.on_divisor);

  GreenFunction badg = g;
  badg.divisor.horizontal[0].second = Rat(2);  // degree mismatch
  CHECK_THROWS_AS(green_eval(badg, FiberPoint::gauss(q3)), input_error);
}

TEST_CASE("restriction commutes with evaluation") {
  GreenFunction g = std_green();
  auto ev2 = restrict_to_fiber(g.metric, q2);
  std::mt19937 rng(9);
  std::uniform_int_distribution<int> num(-8, 8), den(1, 8), rad(0, 4);
  for (int i = 0; i < 100; ++i) {
    FiberPoint pt = FiberPoint::disc(q2, Rat(num(rng), den(rng)), Rat(rad(rng), 2));
    GreenValue a = green_eval(g, pt);
    GreenValue b = ev2.green(g.divisor, pt);
    CHECK(a.val_units == b.val_units);
  }
  CHECK_THROWS_AS(ev2.green(g.divisor, FiberPoint::gauss(q3)), input_error);
}

TEST_CASE("branch rescaling acts linearly on green values") {
  GreenFunction g = std_green();
  // t -> t^s rescales all values by s, exactly in valuation coordinates
  for (int s : {2, 3}) {
    SpectrumPoint a = SpectrumPoint::at_prime(5, Rat(1, 5));
    Rat ts = 1;
    for (int i = 0; i < s; ++i) ts /= 5;
    SpectrumPoint b = SpectrumPoint::at_prime(5, ts);
    FiberPoint pa = FiberPoint::disc(a, Rat(2), Rat(1, 2));
    FiberPoint pb = FiberPoint::disc(b, Rat(2), Rat(1, 2));
    GreenValue va = green_eval(g, pa), vb = green_eval(g, pb);
    CHECK(va.val_units == vb.val_units);
    CHECK(vb.value == doctest::Approx(s * va.value).epsilon(1e-13));
  }
  // Archimedean: value at eps equals eps times the value at 1, exactly
  FiberPoint z1 = FiberPoint::arch(e1, {0.3, 0.4});
  FiberPoint zq = FiberPoint::arch(SpectrumPoint::archimedean(Rat(1, 4)), {0.3, 0.4});
  GreenValue v1 = green_eval(g, z1), vq = green_eval(g, zq);
  CHECK(vq.value == 0.25 * v1.value);
}

TEST_CASE("pullback") {
  GlobalTropFSMetric phi = standard_metric();
  // exact fixed point under (X^2, Y^2)
  GlobalTropFSMetric p1 = pullback(phi, BinaryForm::parse("X^2"), BinaryForm::parse("Y^2"));
  CHECK(p1.m == 2);
  CHECK(p1.d == Rat(1));
  REQUIRE(p1.terms.size() == 2);
  CHECK(p1.terms[0].section == BinaryForm::parse("X^2"));
  CHECK(p1.terms[1].section == BinaryForm::parse("Y^2"));

  // evaluation after one pullback along (X^2+Y^2, Y^2) at z = 0
  GlobalTropFSMetric p2 =
      pullback(phi, BinaryForm::parse("X^2+Y^2"), BinaryForm::parse("Y^2"));
  GreenValue v = metric_potential(p2, FiberPoint::arch(e1, {0.0, 0.0}));
  CHECK(v.value == doctest::Approx(0.0));

  // degree bookkeeping under a double pullback
  GlobalTropFSMetric p3 = pullback(p1, BinaryForm::parse("X^2"), BinaryForm::parse("Y^2"));
  CHECK(p3.m == 4);
  CHECK(p3.terms[0].section.degree() == 4);

  CHECK_THROWS_AS(pullback(phi, BinaryForm::parse("X"), BinaryForm::parse("X+2Y")),
                  input_error);
  CHECK_THROWS_AS(pullback(phi, BinaryForm::parse("X*Y"), BinaryForm::parse("X^2")),
                  input_error);
}

TEST_CASE("chart independence on the overlap") {
  GreenFunction g = std_green();
  // same disc presented in both charts (unit-valuation center)
  FiberPoint t_rep = FiberPoint::disc(q3, Rat(2), Rat(3, 2));
  FiberPoint w_rep = FiberPoint::disc(q3, Rat(1, 2), Rat(3, 2), true);
  CHECK(t_rep.same_point(w_rep));
  CHECK(green_eval(g, t_rep).val_units == green_eval(g, w_rep).val_units);
  // Archimedean overlap: |z| = 1 point and its inversion differ by complex
  // conjugation, which the conjugation-invariant metric cannot see
  FiberPoint za = FiberPoint::arch(e1, {0.6, 0.8});
  GreenValue va = green_eval(g, za);
  FiberPoint zb = FiberPoint::arch(e1, 1.0 / std::complex<double>(0.6, 0.8));
  GreenValue vb = green_eval(g, zb);
  CHECK(va.value == doctest::Approx(vb.value).epsilon(1e-10));
}

TEST_CASE("max structure: dominated terms never change values") {
  GlobalTropFSMetric phi;
  phi.d = 2;
  phi.m = 1;
  phi.terms.push_back({BinaryForm::parse("X^2"), Rat(0)});
  phi.terms.push_back({BinaryForm::parse("Y^2"), Rat(0)});
  GlobalTropFSMetric dom = phi;
  dom.terms.push_back({BinaryForm::parse("X*Y"), Rat(0)});  // |XY| <= max(|X^2|,|Y^2|)

  std::mt19937 rng(17);
  std::uniform_int_distribution<int> num(-6, 6), den(1, 6), rad(0, 6);
  for (int i = 0; i < 120; ++i) {
    FiberPoint pt = FiberPoint::disc(q2, Rat(num(rng), den(rng)), Rat(rad(rng), 3));
    CHECK(metric_potential(phi, pt).val_units == metric_potential(dom, pt).val_units);
  }
  for (int i = 0; i < 80; ++i) {
    double re = num(rng) / 4.0, im = num(rng) / 4.0;
    FiberPoint pt = FiberPoint::arch(e1, {re, im});
    CHECK(metric_potential(phi, pt).value ==
          doctest::Approx(metric_potential(dom, pt).value).epsilon(1e-13));
  }
}

TEST_CASE("continuity across the branch point") {
  // Green's function of div(X) for phi_std; coherent families keep the real
  // log-radius fixed, so valuation radii are c/log(1/t) along a branch.
  GreenFunction g;
  g.metric = standard_metric();
  g.divisor.horizontal.push_back({BinaryForm::parse("X"), Rat(1)});
  double c = 0.8;

  // family through D(0, c): green value is exactly c at every t and at x0
  double target = green_eval(g, FiberPoint::disc(x0, Rat(0), rat_from_double(c))).value;
  CHECK(target == doctest::Approx(c).epsilon(1e-14));
  for (int k : {4, 8, 16, 32}) {
    SpectrumPoint b = SpectrumPoint::at_prime(3, Rat(k - 1, k));
    double L = -std::log(to_double(Rat(k - 1, k)));
    FiberPoint pt = FiberPoint::disc(b, Rat(0), rat_from_double(c / L));
    CHECK(green_eval(g, pt).value == doctest::Approx(c).epsilon(1e-12));
  }

  // family through D(6, c): value min(L, c) -> 0, matching the x0 value 0
  double target2 = green_eval(g, FiberPoint::disc(x0, Rat(6), rat_from_double(c))).value;
  CHECK(target2 == 0.0);
  double prev = 1e9;
  for (int k : {4, 8, 16, 32}) {
    SpectrumPoint b = SpectrumPoint::at_prime(3, Rat(k - 1, k));
    double L = -std::log(to_double(Rat(k - 1, k)));
    FiberPoint pt = FiberPoint::disc(b, Rat(6), rat_from_double(c / L));
    double v = green_eval(g, pt).value;
    CHECK(std::abs(v - target2) < prev);
    prev = std::abs(v - target2);
  }
  CHECK(prev <= 0.05);

  // Archimedean side: eps -> 0 at a rational point off the divisor
  double target3 = green_eval(g, FiberPoint::type1_rat(x0, Rat(2))).value;
  for (int k : {4, 16, 64}) {
    SpectrumPoint b = SpectrumPoint::archimedean(Rat(1, k));
    double v = green_eval(g, FiberPoint::arch(b, {2.0, 0.0})).value;
    CHECK(std::abs(v - target3) <= 2.0 / k);
  }
}

TEST_CASE("metric validation") {
  GlobalTropFSMetric phi;
  phi.d = 2;
  phi.m = 1;
  CHECK_THROWS_AS(phi.validate(), input_error);  // no terms
  phi.terms.push_back({BinaryForm::parse("X"), Rat(0)});
  CHECK_THROWS_AS(phi.validate(), input_error);  // degree mismatch
  phi.d = 1;
  CHECK_NOTHROW(phi.validate());
  phi.d = Rat(1, 2);
  phi.m = 2;
  CHECK_NOTHROW(phi.validate());  // O(1/2) with degree-1 sections
  CHECK(metric_linear_factors(standard_metric()).has_value());
  GlobalTropFSMetric irr;
  irr.d = 2;
  irr.m = 1;
  irr.terms.push_back({BinaryForm::parse("X^2+Y^2"), Rat(0)});
  irr.terms.push_back({BinaryForm::parse("X^2-Y^2"), Rat(0)});
  CHECK(!metric_linear_factors(irr).has_value());
}

namespace {

// Independent oracle: enumerate P^1(F_p) and test every section directly.
bool brute_force_common_root(const std::vector<BinaryForm>& sections, const Int& p) {
  auto vanishes_all = [&](const Int& x, const Int& y) {
    for (const auto& s : sections) {
      Int acc = 0, xp = 1;
      int n = s.degree();
      std::vector<Int> yp(n + 1);
      yp[0] = 1;
      for (int i = 1; i <= n; ++i) yp[i] = (yp[i - 1] * y) % p;
      for (int i = 0; i <= n; ++i) {
        acc = (acc + s.coeff(i) % p * xp % p * yp[n - i]) % p;
        xp = (xp * x) % p;
      }
      if (acc % p != 0) return false;
    }
    return true;
  };
  for (Int a = 0; a < p; ++a)
    if (vanishes_all(a, Int(1))) return true;
  return vanishes_all(Int(1), Int(0));
}

}  // namespace

TEST_CASE("common zero verification against brute force over F_p") {
  std::mt19937 rng(31);
  std::uniform_int_distribution<int> coeff(-6, 6), deg(1, 3), count(2, 4);
  auto small_primes = std::vector<int>{2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47};
  int interesting = 0;
  for (int trial = 0; trial < 120; ++trial) {
    std::vector<BinaryForm> sections;
    int n = count(rng), d = deg(rng);
    for (int i = 0; i < n; ++i) {
      std::vector<Int> cs(d + 1);
      for (auto& c : cs) c = coeff(rng);
      BinaryForm f(cs);
      if (f.is_zero()) f = BinaryForm::monomial(d, 0, Int(1));
      sections.push_back(f);
    }
    BinaryForm g = sections[0];
    for (size_t i = 1; i < sections.size() && g.degree() > 0; ++i)
      g = form_gcd(g, sections[i]);
    CommonZeroReport rep = check_no_common_zero(sections);
    // generic status must match the gcd computation
    CHECK((rep.status == CommonZeroReport::BadGeneric) == (g.degree() > 0));
    if (rep.status == CommonZeroReport::BadGeneric) continue;
    // soundness floor: every F_p-rational common root must be reported
    // (reported primes may also come from roots in the algebraic closure
    // that brute force over P^1(F_p) cannot see)
    for (int p : small_primes) {
      bool rational_bad = brute_force_common_root(sections, Int(p));
      bool reported = false;
      for (const auto& q : rep.primes) reported = reported || q == p;
      if (rational_bad) CHECK(reported);
      if (reported) ++interesting;
    }
    // necessary condition for every reported prime: all pairwise binary
    // resultants vanish mod p (independent Sylvester-determinant route)
    for (const auto& q : rep.primes) {
      for (size_t i = 0; i < sections.size(); ++i)
        for (size_t j = i + 1; j < sections.size(); ++j)
          CHECK(form_resultant(sections[i], sections[j]) % q == 0);
    }
  }
  CHECK(interesting > 0);  // the sample must exercise nontrivial bad primes
}

TEST_CASE("restriction evaluator agrees at Archimedean points") {
  GreenFunction g = std_green();
  SpectrumPoint eps = SpectrumPoint::archimedean(Rat(2, 3));
  auto ev = restrict_to_fiber(g.metric, eps);
  std::mt19937 rng(5);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int i = 0; i < 50; ++i) {
    FiberPoint z = FiberPoint::arch(eps, {u(rng), u(rng)});
    CHECK(green_eval(g, z).value == ev.green(g.divisor, z).value);
  }
}
