// berk: desk-scale computations on the Berkovich analytification of P^1_Z:
// seminorms, tropical Fubini-Study metrics, fiberwise and global
// Monge-Ampere measures, boundary norms, and invariant metrics of polarized
// dynamical systems.

#include <CLI11.hpp>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

#include "berk/json_io.hpp"

using namespace berk;

namespace {

uint64_t default_cutoff() {
  if (const char* env = std::getenv("BERK_CUTOFF")) {
    try {
      return std::stoull(env);
    } catch (...) {
      throw input_error("BERK_CUTOFF must be a positive integer");
    }
  }
  return 10000;
}

SpectrumPoint parse_base(const std::string& place, const std::string& t) {
  if (place == "x0") return SpectrumPoint::trivial();
  if (place == "inf" || place == "infinity")
    return SpectrumPoint::archimedean(parse_rat(t));
  return SpectrumPoint::at_prime(Int(place), parse_rat(t));
}

struct PointArgs {
  std::string place = "x0", t = "0";
  std::string point_json;
  bool gauss = false;
  std::string type1, disc, arch;

  void add_options(CLI::App* cmd) {
    cmd->add_option("--place", place, "base place: prime, 'inf', or 'x0'");
    cmd->add_option("--t", t, "branch parameter in [0,1]");
    cmd->add_option("--point-json", point_json, "full fiber point as JSON");
    cmd->add_flag("--gauss", gauss, "the Gauss point of the fiber");
    cmd->add_option("--type1", type1, "type-1 point: rational coordinate or 'inf'");
    cmd->add_option("--disc", disc, "disc point: center,radius_val[,w]");
    cmd->add_option("--arch", arch, "Archimedean point: re,im or 'inf'");
  }

  FiberPoint build() const {
    if (!point_json.empty()) return fiber_point_from_json(Json::parse(point_json));
    SpectrumPoint base = parse_base(place, t);
    if (gauss) return FiberPoint::gauss(base);
    if (!type1.empty()) {
      if (type1 == "inf") return FiberPoint::type1(base, ProjRat::infinity());
      return FiberPoint::type1_rat(base, parse_rat(type1));
    }
    if (!disc.empty()) {
      auto c1 = disc.find(',');
      if (c1 == std::string::npos) throw input_error("--disc needs center,radius_val");
      auto c2 = disc.find(',', c1 + 1);
      std::string center = disc.substr(0, c1);
      std::string radius = c2 == std::string::npos ? disc.substr(c1 + 1)
                                                   : disc.substr(c1 + 1, c2 - c1 - 1);
      bool w = c2 != std::string::npos && disc.substr(c2 + 1) == "w";
      return FiberPoint::disc(base, parse_rat(center), parse_rat(radius), w);
    }
    if (!arch.empty()) {
      if (arch == "inf") return FiberPoint::arch_infinity(base);
      auto c1 = arch.find(',');
      if (c1 == std::string::npos) throw input_error("--arch needs re,im");
      return FiberPoint::arch(base, {std::stod(arch.substr(0, c1)),
                                     std::stod(arch.substr(c1 + 1))});
    }
    throw input_error("no fiber point given (use --gauss/--type1/--disc/--arch)");
  }
};

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

GlobalTropFSMetric load_metric(const std::string& path) {
  return metric_from_json(load_json_file(path));
}

FiberTestFunction parse_test_function(const std::string& text) {
  auto colon = text.find(':');
  std::string kind = colon == std::string::npos ? text : text.substr(0, colon);
  std::string arg = colon == std::string::npos ? "" : text.substr(colon + 1);
  if (kind == "const" || colon == std::string::npos) {
    return FiberTestFunction::constant(parse_rat(arg.empty() ? text : arg));
  }
  if (kind == "green")
    return FiberTestFunction::metric_green(green_from_json(load_json_file(arg)));
  if (kind == "boundary")
    return FiberTestFunction::boundary_green(
        boundary_divisor_from_json(load_json_file(arg)), false);
  if (kind == "boundary-cap")
    return FiberTestFunction::boundary_green(
        boundary_divisor_from_json(load_json_file(arg)), true);
  throw input_error("unknown test function '" + text + "'");
}

int run(int argc, char** argv) {
  CLI::App app{"global pluripotential toolkit for the Berkovich projective line over Z"};
  app.require_subcommand(1);
  app.get_formatter()->column_width(40);

  // ---- spectrum ----
  auto* spectrum = app.add_subcommand("spectrum", "points and measures on M(Z)");
  spectrum->require_subcommand(1);

  auto* sp_eval = spectrum->add_subcommand("eval", "evaluate a seminorm |n|_x");
  std::string sp_place, sp_t = "1", sp_n;
  sp_eval->add_option("--place", sp_place, "prime or 'inf'")->required();
  sp_eval->add_option("--t", sp_t, "branch parameter")->required();
  sp_eval->add_option("--n", sp_n, "integer to evaluate")->required();
  sp_eval->callback([&] {
    SpectrumPoint x = parse_base(sp_place, sp_t);
    emit(Json{{"value", seminorm_eval(x, Int(sp_n))}});
  });

  auto* sp_mu = spectrum->add_subcommand("mu", "measure of a branch set");
  std::string sp_set;
  uint64_t sp_cutoff = default_cutoff();
  bool sp_prime_only = false;
  sp_mu->add_option("--set", sp_set, "branch set JSON file")->required();
  sp_mu->add_option("--cutoff", sp_cutoff, "prime cutoff");
  sp_mu->add_flag("--unnormalized", sp_prime_only, "report mu' instead of mu");
  sp_mu->callback([&] {
    BranchSet e = branch_set_from_json(load_json_file(sp_set));
    MuQuadratureConfig cfg;
    cfg.prime_cutoff = sp_cutoff;
    Json out;
    MuPrimeResult num = mu_prime(e, cfg);
    Json lengths = Json::array();
    for (auto& [place, len] : num.lengths)
      lengths.push_back({{"place", place_to_json(place)}, {"length", rat_to_string(len)}});
    out["branch_lengths"] = lengths;
    out["mu_prime"] = {{"lo", num.value.lo}, {"hi", num.value.hi}, {"mid", num.value.mid()}};
    if (!sp_prime_only) {
      Enclosure m = mu(e, cfg);
      out["mu"] = {{"lo", m.lo}, {"hi", m.hi}, {"mid", m.mid()}, {"radius", m.radius()}};
    }
    MuTotalResult tot = mu_total(cfg);
    out["mu_prime_total"] = {{"mid", tot.value.mid()}, {"tail_radius", tot.value.radius()}};
    emit(out);
  });

  auto* sp_int = spectrum->add_subcommand("integrate", "integrate a built-in function");
  std::string sp_expr = "one";
  uint64_t si_cutoff = default_cutoff();
  int si_nodes = 256;
  sp_int->add_option("--expr", sp_expr,
                     "one | branch-t:<place> | branch-indicator:<place>");
  sp_int->add_option("--cutoff", si_cutoff, "prime cutoff");
  sp_int->add_option("--nodes", si_nodes, "quadrature nodes per branch");
  sp_int->callback([&] {
    MuQuadratureConfig cfg;
    cfg.prime_cutoff = si_cutoff;
    cfg.nodes_per_branch = si_nodes;
    std::function<double(const SpectrumPoint&)> h;
    if (sp_expr == "one") {
      h = [](const SpectrumPoint&) { return 1.0; };
    } else if (sp_expr.rfind("branch-t:", 0) == 0) {
      Place v = place_from_json(Json(sp_expr.substr(9)));
      h = [v](const SpectrumPoint& x) {
        return x.place == v ? to_double(x.t) : 0.0;
      };
    } else if (sp_expr.rfind("branch-indicator:", 0) == 0) {
      Place v = place_from_json(Json(sp_expr.substr(17)));
      h = [v](const SpectrumPoint& x) { return x.place == v ? 1.0 : 0.0; };
    } else {
      throw input_error("unknown integrand '" + sp_expr + "'");
    }
    IntegrateResult r = integrate_mu(h, cfg);
    emit(Json{{"value", r.value},
              {"tail_error", r.tail_error},
              {"covered_weight", r.total_weight}});
  });

  // ---- fiber ----
  auto* fiber = app.add_subcommand("fiber", "points of the fibers of (P^1_Z)^an");
  fiber->require_subcommand(1);

  auto* fb_semi = fiber->add_subcommand("seminorm", "seminorm of a polynomial in T");
  PointArgs fb_args;
  fb_args.add_options(fb_semi);
  std::string fb_poly;
  fb_semi->add_option("--poly", fb_poly, "integer polynomial in T")->required();
  fb_semi->callback([&] {
    FiberPoint pt = fb_args.build();
    Seminorm sn = poly_seminorm(pt, parse_univariate(fb_poly));
    Json out{{"point", fiber_point_to_json(pt)},
             {"value", sn.value()},
             {"log_value", sn.log_value}};
    if (sn.has_val)
      out["val"] = sn.val.is_inf() ? Json("inf") : Json(rat_to_string(sn.val.finite()));
    emit(out);
  });

  auto* fb_red = fiber->add_subcommand("reduce", "reduction to the model P^1_Z");
  PointArgs fr_args;
  fr_args.add_options(fb_red);
  fb_red->callback([&] {
    FiberPoint pt = fr_args.build();
    ReductionPoint r = reduction(pt);
    Json out{{"point", fiber_point_to_json(pt)}, {"reduction", r.str()}};
    emit(out);
  });

  auto* fb_skel = fiber->add_subcommand("skeleton", "convex hull tree of marked points");
  std::string fs_place = "x0", fs_t = "0", fs_marked;
  fb_skel->add_option("--place", fs_place, "prime or 'x0'");
  fb_skel->add_option("--t", fs_t, "branch parameter");
  fb_skel->add_option("--marked", fs_marked, "comma-separated rationals / 'inf'")->required();
  fb_skel->callback([&] {
    SpectrumPoint base = parse_base(fs_place, fs_t);
    std::vector<ProjRat> marked;
    std::stringstream ss(fs_marked);
    std::string tok;
    while (std::getline(ss, tok, ','))
      marked.push_back(tok == "inf" ? ProjRat::infinity()
                                    : ProjRat::from_rat(parse_rat(tok)));
    TreeSkeleton t = build_skeleton(base, marked);
    Json verts = Json::array(), edges = Json::array(), rays = Json::array();
    for (auto& v : t.vertices) verts.push_back(fiber_point_to_json(v));
    for (auto& e : t.edges)
      edges.push_back({{"from", e.from}, {"to", e.to}, {"length", rat_to_string(e.length)}});
    for (auto& r : t.rays)
      rays.push_back({{"from", r.from}, {"to", r.to.str()}});
    emit(Json{{"vertices", verts}, {"edges", edges}, {"rays", rays}});
  });

  // ---- metric ----
  auto* metric = app.add_subcommand("metric", "global tropical Fubini-Study metrics");
  metric->require_subcommand(1);

  auto* mt_eval = metric->add_subcommand("eval", "evaluate a Green's function");
  std::string me_metric, me_divisor;
  PointArgs me_args;
  me_args.add_options(mt_eval);
  mt_eval->add_option("--metric", me_metric, "metric JSON file")->required();
  mt_eval->add_option("--divisor", me_divisor, "reference divisor JSON file");
  mt_eval->callback([&] {
    FiberPoint pt = me_args.build();
    GlobalTropFSMetric phi = load_metric(me_metric);
    Json out{{"point", fiber_point_to_json(pt)}};
    if (me_divisor.empty()) {
      GreenValue v = metric_potential(phi, pt);
      out["potential"] = v.value;
      if (v.has_val) out["val_units"] = rat_to_string(v.val_units);
    } else {
      GreenFunction g{phi, qdivisor_from_json(load_json_file(me_divisor))};
      GreenValue v = green_eval(g, pt);
      out["green"] = v.on_divisor ? Json("-inf") : Json(v.value);
      out["on_divisor"] = v.on_divisor;
      if (v.has_val) out["val_units"] = rat_to_string(v.val_units);
    }
    emit(out);
  });

  auto* mt_check = metric->add_subcommand("check", "verify the common-zero condition");
  std::string mc_metric;
  mt_check->add_option("--metric", mc_metric, "metric JSON file")->required();
  mt_check->callback([&] {
    GlobalTropFSMetric phi = load_metric(mc_metric);
    std::vector<BinaryForm> sections;
    for (auto& t : phi.terms) sections.push_back(t.section);
    CommonZeroReport rep = check_no_common_zero(sections);
    Json out;
    out["status"] = rep.status == CommonZeroReport::Ok          ? "ok"
                    : rep.status == CommonZeroReport::BadGeneric ? "bad_generic"
                                                                 : "bad_primes";
    Json primes = Json::array();
    for (auto& p : rep.primes) primes.push_back(p.str());
    out["primes"] = primes;
    out["linear_factor"] = metric_linear_factors(phi).has_value();
    out["pure"] = phi.pure();
    emit(out);
  });

  auto* mt_pull = metric->add_subcommand("pullback", "q^-1 f* phi for f = (fx : fy)");
  std::string mp_metric, mp_fx, mp_fy, mp_out;
  mt_pull->add_option("--metric", mp_metric, "metric JSON file")->required();
  mt_pull->add_option("--fx", mp_fx, "first component form")->required();
  mt_pull->add_option("--fy", mp_fy, "second component form")->required();
  mt_pull->add_option("-o,--out", mp_out, "output file (default stdout)");
  mt_pull->callback([&] {
    GlobalTropFSMetric phi = load_metric(mp_metric);
    GlobalTropFSMetric pulled =
        pullback(phi, BinaryForm::parse(mp_fx), BinaryForm::parse(mp_fy));
    Json j = metric_to_json(pulled);
    if (mp_out.empty()) {
      emit(j);
    } else {
      std::ofstream f(mp_out);
      f << j.dump(2) << "\n";
    }
  });

  // ---- ma ----
  auto* ma = app.add_subcommand("ma", "Monge-Ampere measures");
  ma->require_subcommand(1);

  auto* ma_fib = ma->add_subcommand("fiber", "fiberwise measure");
  std::string mf_metric, mf_place, mf_t = "1", mf_format = "json";
  int mf_res = 512;
  ma_fib->add_option("--metric", mf_metric, "metric JSON file")->required();
  ma_fib->add_option("--place", mf_place, "prime, 'inf', or 'x0'")->required();
  ma_fib->add_option("--t", mf_t, "branch parameter");
  ma_fib->add_option("--resolution", mf_res, "Archimedean grid resolution");
  ma_fib->add_option("--format", mf_format, "json | csv (grids)");
  ma_fib->callback([&] {
    GlobalTropFSMetric phi = load_metric(mf_metric);
    MaConfig cfg;
    cfg.arch_resolution = mf_res;
    FiberMeasure m = ma_at(phi, parse_base(mf_place, mf_t), cfg);
    if (mf_format == "csv" && m.archimedean())
      std::cout << measure_grid_csv(m);
    else
      emit(measure_to_json(m));
  });

  auto* ma_mass = ma->add_subcommand("masscheck", "total masses over sample fibers");
  std::string mm_metric, mm_samples = "2:1/2,3:1/3,5:1/5,x0";
  int mm_res = 512;
  ma_mass->add_option("--metric", mm_metric, "metric JSON file")->required();
  ma_mass->add_option("--samples", mm_samples, "comma list place:t or x0/inf:eps");
  ma_mass->add_option("--resolution", mm_res, "Archimedean grid resolution");
  ma_mass->callback([&] {
    GlobalTropFSMetric phi = load_metric(mm_metric);
    std::vector<SpectrumPoint> sample;
    std::stringstream ss(mm_samples);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
      auto colon = tok.find(':');
      if (colon == std::string::npos)
        sample.push_back(parse_base(tok, "0"));
      else
        sample.push_back(parse_base(tok.substr(0, colon), tok.substr(colon + 1)));
    }
    MaConfig cfg;
    cfg.arch_resolution = mm_res;
    MassReport rep = total_mass_check(phi, sample, cfg);
    Json rows = Json::array();
    for (auto& e : rep.entries)
      rows.push_back({{"x", e.x.str()},
                      {"mass", e.mass},
                      {"exact", e.exact},
                      {"deviation", e.deviation}});
    emit(Json{{"entries", rows}, {"max_deviation", rep.max_deviation}});
  });

  auto* ma_nd = ma->add_subcommand("nondegenerate", "total mass over the trivial point");
  std::string mn_metric;
  ma_nd->add_option("--metric", mn_metric, "metric JSON file")->required();
  ma_nd->callback([&] {
    NondegeneracyReport rep = nondegeneracy_check(load_metric(mn_metric));
    emit(Json{{"nondegenerate", rep.nondegenerate},
              {"mass", rat_to_string(rep.witness.atom_total)},
              {"witness", measure_to_json(rep.witness)}});
  });

  auto* ma_glob = ma->add_subcommand("global", "global Monge-Ampere integral");
  std::string mg_metric, mg_f = "const:1", mg_nodes_csv;
  uint64_t mg_cutoff = default_cutoff();
  int mg_nodes = 256, mg_res = 512;
  ma_glob->add_option("--metric", mg_metric, "metric JSON file")->required();
  ma_glob->add_option("--f", mg_f, "const:<c> | green:FILE | boundary:FILE | boundary-cap:FILE");
  ma_glob->add_option("--cutoff", mg_cutoff, "prime cutoff");
  ma_glob->add_option("--nodes", mg_nodes, "nodes per branch");
  ma_glob->add_option("--resolution", mg_res, "Archimedean grid resolution");
  ma_glob->add_option("--per-node", mg_nodes_csv, "write per-node CSV to this file");
  ma_glob->callback([&] {
    GlobalTropFSMetric phi = load_metric(mg_metric);
    FiberTestFunction f = parse_test_function(mg_f);
    GlobalIntegralConfig cfg;
    cfg.mu.prime_cutoff = mg_cutoff;
    cfg.mu.nodes_per_branch = mg_nodes;
    cfg.arch_resolution = mg_res;
    GlobalIntegralResult r = global_ma_integrate(phi, f, cfg, !mg_nodes_csv.empty());
    if (!mg_nodes_csv.empty()) {
      std::ofstream out(mg_nodes_csv);
      out << "place,t,inner\n";
      for (auto& n : r.per_node)
        out << n.v.str() << "," << n.t << "," << n.inner << "\n";
    }
    emit(Json{{"value", r.value},
              {"mu_tail", r.mu_tail},
              {"quad_err", r.quad_err},
              {"arch_err", r.arch_err}});
  });

  // ---- adelic ----
  auto* adelic = app.add_subcommand("adelic", "model adelic divisors and norms");
  adelic->require_subcommand(1);

  auto* ad_norm = adelic->add_subcommand("norm", "boundary norm of a model divisor");
  std::string an_div, an_bound;
  ad_norm->add_option("--divisor", an_div, "model adelic divisor JSON file")->required();
  ad_norm->add_option("--boundary", an_bound, "boundary divisor JSON file")->required();
  ad_norm->callback([&] {
    ModelAdelicDivisor e = adelic_divisor_from_json(load_json_file(an_div));
    BoundaryDivisor d0 = boundary_divisor_from_json(load_json_file(an_bound));
    BoundaryNormResult n = boundary_norm(e, d0);
    Json out;
    out["norm"] = n.infinite ? Json("inf") : Json(rat_to_string(n.value));
    out["regime"] = n.regime;
    if (n.infinite) out["obstruction"] = n.obstruction;
    emit(out);
  });

  auto* ad_cauchy = adelic->add_subcommand("cauchy", "verify a Cauchy sequence");
  std::string ac_seq, ac_bound;
  double ac_rate = 0.75;
  int ac_from = 1;
  ad_cauchy->add_option("--seq", ac_seq, "JSON array of model adelic divisors")->required();
  ad_cauchy->add_option("--boundary", ac_bound, "boundary divisor JSON file")->required();
  ad_cauchy->add_option("--rate", ac_rate, "target decay rate");
  ad_cauchy->add_option("--rate-from", ac_from, "first index checked for the rate");
  ad_cauchy->callback([&] {
    Json arr = load_json_file(ac_seq);
    std::vector<ModelAdelicDivisor> seq;
    for (auto& j : arr) seq.push_back(adelic_divisor_from_json(j));
    BoundaryDivisor d0 = boundary_divisor_from_json(load_json_file(ac_bound));
    CauchyWitness w = verify_cauchy(seq, d0, ac_rate, ac_from);
    Json eps = Json::array();
    for (auto& e : w.epsilons) eps.push_back(rat_to_string(e));
    emit(Json{{"ok", w.ok},
              {"epsilons", eps},
              {"verified_through", w.verified_through},
              {"failure", w.failure}});
  });

  // ---- dynamics ----
  auto* dyn = app.add_subcommand("dynamics", "polarized dynamical systems on P^1");
  dyn->require_subcommand(1);

  auto* dy_iter = dyn->add_subcommand("iterate", "invariant metric iteration");
  std::string di_fx, di_fy;
  int di_steps = 6, di_cap = 512;
  std::string di_out;
  dy_iter->add_option("--fx", di_fx, "first component form")->required();
  dy_iter->add_option("--fy", di_fy, "second component form")->required();
  dy_iter->add_option("--steps", di_steps, "iterations");
  dy_iter->add_option("--cap", di_cap, "degree growth cap");
  dy_iter->add_option("-o,--out", di_out, "write the last metric to this file");
  dy_iter->callback([&] {
    IterationConfig cfg;
    cfg.degree_cap = di_cap;
    auto seq = invariant_metric_sequence(BinaryForm::parse(di_fx),
                                         BinaryForm::parse(di_fy), di_steps, cfg);
    auto pts = standard_sample_points();
    Json rows = Json::array();
    double prev = 0;
    for (size_t i = 0; i + 1 < seq.size(); ++i) {
      double sup = 0;
      for (auto& pt : pts)
        sup = std::max(sup, std::abs(metric_potential(seq[i + 1], pt).value -
                                     metric_potential(seq[i], pt).value));
      Json row{{"i", i}, {"sup_diff", sup}};
      if (i > 0 && prev > 0) row["ratio"] = sup / prev;
      rows.push_back(row);
      prev = sup;
    }
    if (!di_out.empty()) {
      std::ofstream f(di_out);
      f << metric_to_json(seq.back()).dump(2) << "\n";
    }
    emit(Json{{"steps", rows}, {"final_m", seq.back().m}});
  });

  auto* dy_res = dyn->add_subcommand("residual", "invariance defect of an iterate");
  std::string dr_fx, dr_fy;
  int dr_steps = 5, dr_cap = 512;
  dy_res->add_option("--fx", dr_fx, "first component form")->required();
  dy_res->add_option("--fy", dr_fy, "second component form")->required();
  dy_res->add_option("--steps", dr_steps, "iterate index");
  dy_res->add_option("--cap", dr_cap, "degree growth cap");
  dy_res->callback([&] {
    IterationConfig cfg;
    cfg.degree_cap = dr_cap;
    auto seq = invariant_metric_sequence(BinaryForm::parse(dr_fx),
                                         BinaryForm::parse(dr_fy), dr_steps, cfg);
    double r = invariance_residual(seq.back(), BinaryForm::parse(dr_fx),
                                   BinaryForm::parse(dr_fy), standard_sample_points());
    emit(Json{{"i", dr_steps}, {"residual", r}});
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 64;
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const unsupported_error& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 3;
  } catch (const input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
