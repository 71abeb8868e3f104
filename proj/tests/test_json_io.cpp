#include <doctest.h>

#include "berk/json_io.hpp"

using namespace berk;

TEST_CASE("spectrum point and branch set round trips") {
  SpectrumPoint x = SpectrumPoint::at_prime(7, Rat(2, 7));
  CHECK(spectrum_point_from_json(spectrum_point_to_json(x)) == x);
  CHECK(spectrum_point_from_json(spectrum_point_to_json(SpectrumPoint::trivial())) ==
        SpectrumPoint::trivial());

  Json j = Json::parse(R"({"default":"full","branches":[
    {"place":"inf","intervals":[["0","1"]]},
    {"place":2,"intervals":[["0.25","0.75"],["0","0.125"]]}]})");
  BranchSet e = branch_set_from_json(j);
  CHECK(e.default_full);
  CHECK(e.branch_length(Place::prime(2)) == Rat(5, 8));
  CHECK(e.branch_length(Place::prime(3)) == Rat(1));  // default full
  Json back = branch_set_to_json(e);
  BranchSet e2 = branch_set_from_json(back);
  CHECK(e2.branch_length(Place::prime(2)) == Rat(5, 8));
}

TEST_CASE("fiber point round trips") {
  SpectrumPoint q3 = SpectrumPoint::at_prime(3, Rat(1, 3));
  for (const FiberPoint& pt :
       {FiberPoint::gauss(q3), FiberPoint::disc(q3, Rat(2, 3), Rat(5, 2)),
        FiberPoint::disc(q3, Rat(0), Rat(1), true),
        FiberPoint::type1_rat(q3, Rat(-7, 2)),
        FiberPoint::type1(q3, ProjRat::infinity()),
        FiberPoint::arch(SpectrumPoint::archimedean(Rat(1)), {0.5, -1.25})}) {
    FiberPoint rt = fiber_point_from_json(fiber_point_to_json(pt));
    CHECK(rt.same_point(pt));
  }
}

TEST_CASE("metric and green round trips") {
  Json j = Json::parse(R"({"d":"1","m":1,"terms":[
     {"s":"X","lambda":"0"},{"s":"Y","lambda":"1/2"}]})");
  GlobalTropFSMetric phi = metric_from_json(j);
  CHECK(phi.terms.size() == 2);
  CHECK(!phi.pure());
  GlobalTropFSMetric rt = metric_from_json(metric_to_json(phi));
  CHECK(rt.terms[1].lambda == Rat(1, 2));
  CHECK(rt.terms[1].section == BinaryForm::parse("Y"));

  GreenFunction g;
  g.metric = standard_metric();
  g.divisor.horizontal.push_back({BinaryForm::parse("Y"), Rat(1)});
  GreenFunction grt = green_from_json(green_to_json(g));
  CHECK(grt.divisor.horizontal.size() == 1);

  Json bad = Json::parse(R"({"d":"1","m":1,"terms":[{"s":"X^2","lambda":"0"}]})");
  CHECK_THROWS_AS(metric_from_json(bad), input_error);
}

TEST_CASE("measure serialization") {
  FiberMeasure m = ma_nonarch(standard_metric(), SpectrumPoint::at_prime(5, Rat(1, 5)));
  Json j = measure_to_json(m);
  FiberMeasure rt = measure_from_json(j);
  REQUIRE(rt.atoms.size() == 1);
  CHECK(rt.atoms[0].mass == Rat(1));
  CHECK(rt.atom_total == m.atom_total);

  FiberMeasure am = ma_arch(standard_metric(), Rat(1), 64);
  Json aj = measure_to_json(am);
  FiberMeasure art = measure_from_json(aj);
  CHECK(art.cell_total == doctest::Approx(am.cell_total).epsilon(1e-12));
  std::string csv = measure_grid_csv(am);
  CHECK(csv.rfind("chart,ix,iy,mass\n", 0) == 0);
}

TEST_CASE("adelic divisor serialization") {
  ModelAdelicDivisor e;
  e.rational_part.divisor.horizontal.push_back({BinaryForm::parse("Y"), Rat(1, 2)});
  GlobalTropFSMetric phi;
  phi.d = 1;
  phi.m = 1;
  phi.terms.push_back({BinaryForm::parse("X"), Rat(0)});
  phi.terms.push_back({BinaryForm::parse("Y"), Rat(1)});
  e.rational_part.potentials.push_back({Rat(1, 2), phi});
  e.integral_part.vertical.push_back({Int(3), Rat(2)});
  Json j = adelic_divisor_to_json(e);
  ModelAdelicDivisor rt = adelic_divisor_from_json(j);
  CHECK(rt.rational_part.divisor.horizontal[0].second == Rat(1, 2));
  CHECK(rt.integral_part.vertical[0].first == 3);
  CHECK(!rt.integral_zero());

  BoundaryDivisor d0;
  d0.data = e.rational_part.scaled(Rat(2));
  d0.validate();
  BoundaryDivisor drt = boundary_divisor_from_json(boundary_divisor_to_json(d0));
  CHECK(drt.data.divisor.horizontal[0].second == Rat(1));
}
