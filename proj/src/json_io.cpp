#include "berk/json_io.hpp"

#include <fstream>
#include <sstream>

namespace berk {

namespace {

Rat rat_from_json(const Json& j) {
  if (j.is_number_integer()) return Rat(Int(j.get<long long>()));
  if (j.is_string()) return parse_rat(j.get<std::string>());
  throw input_error("expected a rational as \"a/b\" string or integer");
}

Json rat_json(const Rat& r) { return rat_to_string(r); }

}  // namespace

Json place_to_json(const Place& v) {
  if (v.archimedean) return "inf";
  long long small = 0;
  try {
    small = v.p.convert_to<long long>();
    return small;
  } catch (...) {
    return v.p.str();
  }
}

Place place_from_json(const Json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return Place::infinity();
    return Place::prime(Int(s));
  }
  if (j.is_number_integer()) return Place::prime(Int(j.get<long long>()));
  throw input_error("place must be \"inf\" or a prime");
}

Json spectrum_point_to_json(const SpectrumPoint& x) {
  if (x.is_trivial()) return Json{{"place", "x0"}};
  return Json{{"place", place_to_json(x.place)}, {"t", rat_json(x.t)}};
}

SpectrumPoint spectrum_point_from_json(const Json& j) {
  if (j.is_string() && j.get<std::string>() == "x0") return SpectrumPoint::trivial();
  if (j.contains("place") && j["place"].is_string() &&
      j["place"].get<std::string>() == "x0")
    return SpectrumPoint::trivial();
  return SpectrumPoint(place_from_json(j.at("place")), rat_from_json(j.at("t")));
}

Json branch_set_to_json(const BranchSet& e) {
  Json out;
  out["default"] = e.default_full ? "full" : "empty";
  Json branches = Json::array();
  for (const auto& [place, ivs] : e.branches) {
    Json b;
    b["place"] = place_to_json(place);
    Json list = Json::array();
    for (auto& [a, bnd] : ivs) list.push_back({rat_json(a), rat_json(bnd)});
    b["intervals"] = list;
    branches.push_back(b);
  }
  out["branches"] = branches;
  return out;
}

BranchSet branch_set_from_json(const Json& j) {
  BranchSet e;
  if (j.contains("default")) {
    std::string d = j.at("default").get<std::string>();
    if (d != "empty" && d != "full") throw input_error("default must be empty|full");
    e.default_full = d == "full";
  }
  if (j.contains("branches")) {
    for (const auto& b : j.at("branches")) {
      Place v = place_from_json(b.at("place"));
      std::vector<std::pair<Rat, Rat>> ivs;
      for (const auto& iv : b.at("intervals"))
        ivs.push_back({rat_from_json(iv.at(0)), rat_from_json(iv.at(1))});
      e.branches[v] = std::move(ivs);
    }
  }
  e.normalize();
  return e;
}

Json fiber_point_to_json(const FiberPoint& x) {
  Json out;
  out["base"] = spectrum_point_to_json(x.base);
  switch (x.kind) {
    case FiberPoint::Type1:
      out["kind"] = "type1";
      out["coord"] = x.coord.is_infinity() ? Json("inf") : Json(x.coord.str());
      break;
    case FiberPoint::Disc:
      out["kind"] = "disc";
      out["chart"] = x.chart_w ? "w" : "t";
      out["center"] = rat_json(x.center);
      out["radius_val"] = rat_json(x.radius_val);
      break;
    case FiberPoint::Arch:
      out["kind"] = "arch";
      if (x.z_infinity)
        out["z"] = "inf";
      else
        out["z"] = Json::array({x.z.real(), x.z.imag()});
      break;
  }
  return out;
}

FiberPoint fiber_point_from_json(const Json& j) {
  SpectrumPoint base = spectrum_point_from_json(j.at("base"));
  std::string kind = j.at("kind").get<std::string>();
  if (kind == "type1") {
    const Json& c = j.at("coord");
    if (c.is_string() && c.get<std::string>() == "inf")
      return FiberPoint::type1(base, ProjRat::infinity());
    Rat r = rat_from_json(c);
    return FiberPoint::type1(base, ProjRat::from_rat(r));
  }
  if (kind == "disc") {
    bool w = j.contains("chart") && j.at("chart").get<std::string>() == "w";
    return FiberPoint::disc(base, rat_from_json(j.at("center")),
                            rat_from_json(j.at("radius_val")), w);
  }
  if (kind == "arch") {
    const Json& z = j.at("z");
    if (z.is_string() && z.get<std::string>() == "inf")
      return FiberPoint::arch_infinity(base);
    return FiberPoint::arch(base, {z.at(0).get<double>(), z.at(1).get<double>()});
  }
  throw input_error("unknown fiber point kind '" + kind + "'");
}

Json metric_to_json(const GlobalTropFSMetric& phi) {
  Json out;
  out["d"] = rat_json(phi.d);
  out["m"] = phi.m;
  Json terms = Json::array();
  for (const auto& t : phi.terms)
    terms.push_back({{"s", t.section.str()}, {"lambda", rat_json(t.lambda)}});
  out["terms"] = terms;
  out["pure"] = phi.pure();
  return out;
}

GlobalTropFSMetric metric_from_json(const Json& j) {
  GlobalTropFSMetric phi;
  phi.d = rat_from_json(j.at("d"));
  phi.m = j.at("m").get<int>();
  for (const auto& t : j.at("terms")) {
    MetricTerm term;
    term.section = BinaryForm::parse(t.at("s").get<std::string>());
    if (t.contains("lambda")) term.lambda = rat_from_json(t.at("lambda"));
    phi.terms.push_back(std::move(term));
  }
  phi.validate();
  return phi;
}

Json qdivisor_to_json(const QDivisor& d) {
  Json out;
  Json h = Json::array();
  for (const auto& [f, c] : d.horizontal)
    h.push_back({{"form", f.str()}, {"coeff", rat_json(c)}});
  Json v = Json::array();
  for (const auto& [p, c] : d.vertical)
    v.push_back({{"prime", p.str()}, {"coeff", rat_json(c)}});
  out["horizontal"] = h;
  out["vertical"] = v;
  return out;
}

QDivisor qdivisor_from_json(const Json& j) {
  QDivisor d;
  if (j.contains("horizontal"))
    for (const auto& e : j.at("horizontal"))
      d.horizontal.push_back({BinaryForm::parse(e.at("form").get<std::string>()),
                              rat_from_json(e.at("coeff"))});
  if (j.contains("vertical"))
    for (const auto& e : j.at("vertical")) {
      const Json& p = e.at("prime");
      Int prime = p.is_string() ? Int(p.get<std::string>()) : Int(p.get<long long>());
      d.vertical.push_back({prime, rat_from_json(e.at("coeff"))});
    }
  return d;
}

Json green_to_json(const GreenFunction& g) {
  return Json{{"metric", metric_to_json(g.metric)}, {"divisor", qdivisor_to_json(g.divisor)}};
}

GreenFunction green_from_json(const Json& j) {
  GreenFunction g{metric_from_json(j.at("metric")), qdivisor_from_json(j.at("divisor"))};
  g.validate();
  return g;
}

Json arith_divisor_to_json(const ArithDivisor& d) {
  Json out;
  out["model"] = d.model_id;
  out["divisor"] = qdivisor_to_json(d.divisor);
  Json pots = Json::array();
  for (const auto& [c, phi] : d.potentials)
    pots.push_back({{"coeff", rat_json(c)}, {"metric", metric_to_json(phi)}});
  out["potentials"] = pots;
  return out;
}

ArithDivisor arith_divisor_from_json(const Json& j) {
  ArithDivisor d;
  if (j.contains("model")) d.model_id = j.at("model").get<std::string>();
  d.divisor = qdivisor_from_json(j.at("divisor"));
  if (j.contains("potentials"))
    for (const auto& e : j.at("potentials"))
      d.potentials.push_back(
          {rat_from_json(e.at("coeff")), metric_from_json(e.at("metric"))});
  d.validate();
  return d;
}

Json adelic_divisor_to_json(const ModelAdelicDivisor& d) {
  return Json{{"rational", arith_divisor_to_json(d.rational_part)},
              {"integral", qdivisor_to_json(d.integral_part)}};
}

ModelAdelicDivisor adelic_divisor_from_json(const Json& j) {
  ModelAdelicDivisor d;
  d.rational_part = arith_divisor_from_json(j.at("rational"));
  if (j.contains("integral")) d.integral_part = qdivisor_from_json(j.at("integral"));
  d.validate();
  return d;
}

Json boundary_divisor_to_json(const BoundaryDivisor& d) {
  return arith_divisor_to_json(d.data);
}

BoundaryDivisor boundary_divisor_from_json(const Json& j) {
  BoundaryDivisor d;
  d.data = arith_divisor_from_json(j);
  d.validate();
  return d;
}

Json measure_to_json(const FiberMeasure& m) {
  Json out;
  out["base"] = spectrum_point_to_json(m.base);
  out["d"] = rat_json(m.degree);
  if (!m.archimedean()) {
    Json atoms = Json::array();
    for (const auto& a : m.atoms)
      atoms.push_back({{"point", fiber_point_to_json(a.point)}, {"mass", rat_json(a.mass)}});
    out["atoms"] = atoms;
    out["total_mass"] = rat_json(m.atom_total);
    return out;
  }
  out["resolution"] = m.resolution;
  out["grid_half_width"] = m.grid_half_width;
  out["grid_shift"] = m.grid_shift;
  out["clipped_negative"] = m.clipped_negative;
  out["total_mass"] = m.cell_total;
  Json cells = Json::array();
  for (const auto& c : m.cells) cells.push_back({c.chart, c.ix, c.iy, c.mass});
  out["cells"] = cells;
  return out;
}

FiberMeasure measure_from_json(const Json& j) {
  FiberMeasure m;
  m.base = spectrum_point_from_json(j.at("base"));
  m.degree = rat_from_json(j.at("d"));
  if (j.contains("atoms")) {
    for (const auto& a : j.at("atoms")) {
      m.atoms.push_back({fiber_point_from_json(a.at("point")), rat_from_json(a.at("mass"))});
      m.atom_total += m.atoms.back().mass;
    }
    return m;
  }
  m.resolution = j.at("resolution").get<int>();
  m.grid_half_width = j.at("grid_half_width").get<double>();
  m.grid_shift = j.value("grid_shift", 0.0);
  m.clipped_negative = j.value("clipped_negative", 0.0);
  for (const auto& c : j.at("cells")) {
    GridCell cell{c.at(0).get<int>(), c.at(1).get<int>(), c.at(2).get<int>(), 0.0,
                  c.at(3).get<double>()};
    m.cells.push_back(cell);
    m.cell_total += cell.mass;
  }
  return m;
}

std::string measure_grid_csv(const FiberMeasure& m) {
  std::ostringstream os;
  os << "chart,ix,iy,mass\n";
  for (const auto& c : m.cells)
    os << c.chart << "," << c.ix << "," << c.iy << "," << c.mass << "\n";
  return os.str();
}

Json load_json_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw input_error("cannot open file '" + path + "'");
  Json j;
  in >> j;
  return j;
}

}  // namespace berk
