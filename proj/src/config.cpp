// SPDX-License-Identifier: Apache-2.0
#include "conelab/config.hpp"

#include <chrono>
#include <fstream>
#include <numeric>

#include <json.hpp>

#include "conelab/arith.hpp"
#include "conelab/harness.hpp"

namespace conelab::config {

using nlohmann::json;
using namespace conelab;

namespace {

constexpr const char* kVersion = "0.1.0";

[[noreturn]] void bad(const std::string& what) { fail(errc::config_invalid, "config: " + what); }

i64 get_int(const json& j, const char* key, i64 def) {
  if (!j.contains(key)) return def;
  if (!j[key].is_number_integer()) bad(std::string(key) + " must be an integer");
  return j[key].get<i64>();
}

Vec3i get_vec3i(const json& j) {
  if (!j.is_array() || j.size() != 3) bad("expected an integer 3-vector");
  return {j[0].get<i64>(), j[1].get<i64>(), j[2].get<i64>()};
}

Vec3d get_vec3d(const json& j) {
  if (!j.is_array() || j.size() != 3) bad("expected a real 3-vector");
  return {j[0].get<double>(), j[1].get<double>(), j[2].get<double>()};
}

TernaryForm parse_form(const json& cfg) {
  if (!cfg.contains("form") || !cfg["form"].contains("coeffs"))
    bad("missing form.coeffs [a,b,c,d,e,f]");
  const auto& c = cfg["form"]["coeffs"];
  if (!c.is_array() || c.size() != 6) bad("form.coeffs must have 6 entries");
  std::array<i64, 6> coeffs;
  for (int i = 0; i < 6; ++i) coeffs[(size_t)i] = c[(size_t)i].get<i64>();
  return TernaryForm::from_coeffs(coeffs);
}

std::optional<localdens::CongruenceCondition> parse_condition(const TernaryForm& F,
                                                              const json& cfg) {
  if (!cfg.contains("condition")) return std::nullopt;
  const auto& c = cfg["condition"];
  i64 L = get_int(c, "L", 1);
  if (L < 1) bad("condition.L must be >= 1");
  Vec3i gamma{0, 0, 0};
  if (c.contains("residues")) {
    // per-prime-power residues, CRT combined
    i64 M = 1;
    Vec3i g{0, 0, 0};
    for (const auto& r : c["residues"]) {
      i64 m = get_int(r, "mod", 0);
      if (m < 2) bad("residues[].mod must be >= 2");
      if (std::gcd(m, M) != 1) bad("residue moduli must be pairwise coprime");
      Vec3i gm = get_vec3i(r["gamma"]);
      for (int i = 0; i < 3; ++i) g[i] = arith::crt_pair(g[i], M, mod_pos(gm[i], m), m);
      M *= m;
    }
    if (c.contains("L") && L != M) bad("condition.L disagrees with the residue moduli");
    L = M;
    gamma = g;
  } else if (c.contains("gamma")) {
    gamma = get_vec3i(c["gamma"]);
  } else if (L != 1) {
    bad("condition needs gamma or residues");
  }
  if (L == 1) return std::nullopt;
  return localdens::CongruenceCondition::make(F, L, gamma);
}

archimedean::WeightFunction parse_weight(const json& cfg) {
  if (!cfg.contains("weight")) bad("missing weight spec");
  const auto& w = cfg["weight"];
  std::string kind = w.value("kind", "radial");
  bool symmetric = w.value("symmetric", false);
  if (kind == "radial")
    return archimedean::make_radial_weight(
        w.contains("center") ? get_vec3d(w["center"]) : Vec3d{0, 0, 0},
        w.value("radius", 1.0), symmetric);
  if (kind == "box")
    return archimedean::make_box_weight(
        w.contains("center") ? get_vec3d(w["center"]) : Vec3d{0, 0, 0},
        w.contains("extents") ? get_vec3d(w["extents"]) : Vec3d{1, 1, 1}, symmetric);
  if (kind == "octant")
    return archimedean::make_octant_weight(
        w.contains("lo") ? get_vec3d(w["lo"]) : Vec3d{0, 0, 0},
        w.contains("hi") ? get_vec3d(w["hi"]) : Vec3d{1, 1, 1}, symmetric);
  bad("weight.kind must be radial, box or octant");
}

archimedean::QuadratureSpec parse_quadrature(const json& cfg, int threads, u64 seed) {
  auto spec = archimedean::QuadratureSpec::defaults();
  spec.threads = threads;
  spec.seed = seed;
  if (!cfg.contains("quadrature")) return spec;
  const auto& q = cfg["quadrature"];
  std::string m = q.value("method", "mc");
  if (m == "mc")
    spec.method = archimedean::QuadratureMethod::monte_carlo;
  else if (m == "grid")
    spec.method = archimedean::QuadratureMethod::grid;
  else if (m == "leray")
    spec.method = archimedean::QuadratureMethod::leray;
  else
    bad("quadrature.method must be mc, grid or leray");
  spec.samples = get_int(q, "samples", spec.samples);
  if (q.contains("epsilons")) {
    spec.epsilons.clear();
    for (const auto& e : q["epsilons"]) spec.epsilons.push_back(e.get<double>());
  }
  return spec;
}

expsums::TruncationPolicy parse_truncation(const json& cfg) {
  expsums::TruncationPolicy p;
  if (!cfg.contains("truncation")) return p;
  const auto& t = cfg["truncation"];
  p.u_max = get_int(t, "u_max", p.u_max);
  p.x_max = get_int(t, "x_max", p.x_max);
  if (t.contains("tail_report")) p.tail_report = t["tail_report"].get<bool>();
  if (p.u_max < 1 || p.x_max < 1) bad("truncation bounds must be >= 1");
  return p;
}

harness::Options parse_options(const json& cfg) {
  harness::Options o;
  o.threads = (int)get_int(cfg, "threads", hardware_threads());
  o.seed = (u64)get_int(cfg, "seed", 0x5EED);
  o.prime_cutoff = get_int(cfg, "prime_cutoff", 100);
  o.bootstrap = (int)get_int(cfg, "bootstrap", 200);
  o.tolerance = cfg.value("tolerance", 0.10);
  o.budget.max_ops = get_int(cfg, "budget", o.budget.max_ops);
  o.quad = parse_quadrature(cfg, o.threads, o.seed);
  return o;
}

std::vector<double> parse_b_grid(const json& cfg) {
  std::vector<double> grid;
  if (cfg.contains("b_grid"))
    for (const auto& b : cfg["b_grid"]) grid.push_back(b.get<double>());
  else if (cfg.contains("B"))
    grid.push_back(cfg["B"].get<double>());
  else
    bad("missing b_grid or B");
  for (size_t i = 0; i + 1 < grid.size(); ++i)
    if (grid[i] >= grid[i + 1]) bad("b_grid must be strictly increasing");
  if (grid.empty() || grid.front() < 1) bad("b_grid entries must be >= 1");
  return grid;
}

expsums::SumContext parse_sum_context(const TernaryForm& F, const json& cfg,
                                      const harness::Options& opts) {
  i64 L = 1;
  Vec3i lambda{0, 0, 0};
  if (auto cond = parse_condition(F, cfg)) {
    L = cond->L;
    lambda = cond->gamma;
  }
  if (cfg.contains("lambda")) lambda = get_vec3i(cfg["lambda"]);
  return expsums::SumContext::make(F, L, lambda, opts.budget);
}

json complex_json(cplx z) { return json{{"re", z.real()}, {"im", z.imag()}}; }

json series_json(const expsums::SeriesValue& v) {
  return json{{"value_re", v.value.real()},
              {"value_im", v.value.imag()},
              {"tail_bound", v.tail_bound},
              {"terms", v.terms}};
}

json rational_json(const Rational& r) {
  return json{{"exact", r.str()}, {"approx", r.to_double()}};
}

json fit_json(const harness::FitReport& r) {
  json j;
  j["b_grid"] = r.b_grid;
  j["counts"] = r.counts;
  j["model"] = r.model;
  j["coef_main"] = r.coef_main;
  j["coef_secondary"] = r.coef_secondary;
  j["se_main"] = r.se_main;
  j["se_secondary"] = r.se_secondary;
  j["coef_main_top_half"] = r.coef_main_top_half;
  j["se_main_top_half"] = r.se_main_top_half;
  j["predicted_constant"] = r.predicted_constant;
  j["predicted_error"] = r.predicted_error;
  j["relative_deviation"] = r.relative_deviation;
  j["g_estimate"] = r.g_estimate;
  j["g_se"] = r.g_se;
  j["resid_rel_full"] = r.resid_rel_full;
  j["resid_rel_top_half"] = r.resid_rel_top_half;
  j["hypothesis_warning"] = r.hypothesis_warning;
  j["verdict"] = r.verdict;
  return j;
}

json run_count(const json& cfg, bool primitive) {
  auto F = parse_form(cfg);
  auto opts = parse_options(cfg);
  enumerate::CountRequest req{F, parse_weight(cfg), parse_condition(F, cfg), 1.0, primitive,
                              opts.threads};
  auto grid = parse_b_grid(cfg);
  auto counts = enumerate::weighted_count_grid(req, grid);
  json out;
  out["b_grid"] = grid;
  out["counts"] = counts;
  out["primitive"] = primitive;
  if (cfg.value("mobius_inverted", false) && primitive) {
    std::vector<double> inv;
    for (double B : grid) {
      auto r2 = req;
      r2.B = B;
      inv.push_back(enumerate::mobius_inverted_count(r2));
    }
    out["mobius_inverted"] = inv;
  }
  if (cfg.contains("csv_path")) {
    // audit stream: every solution in the box of the largest B
    std::string path = cfg["csv_path"].get<std::string>();
    std::ofstream csv(path);
    if (!csv) bad("cannot open csv_path " + path);
    csv << "x1,x2,x3\n";
    Vec3d lo, hi;
    req.weight.support_box(lo, hi);
    enumerate::Box box;
    for (int i = 0; i < 3; ++i) {
      box.lo[i] = (i64)std::ceil(lo[i] * grid.back() - 1e-9);
      box.hi[i] = (i64)std::floor(hi[i] * grid.back() + 1e-9);
    }
    auto cond = req.condition;
    enumerate::solutions_in_box(F, box, [&](const Vec3i& x) {
      if (cond) {
        for (int i = 0; i < 3; ++i)
          if (mod_pos(x[i], cond->L) != cond->gamma[i]) return;
      }
      if (primitive) {
        i64 g = std::gcd(std::gcd(std::abs(x[0]), std::abs(x[1])), std::abs(x[2]));
        if (g != 1) return;
      }
      csv << x[0] << ',' << x[1] << ',' << x[2] << '\n';
    });
    out["csv_path"] = path;
  }
  return out;
}

json run_density(const json& cfg) {
  auto F = parse_form(cfg);
  auto opts = parse_options(cfg);
  i64 p = get_int(cfg, "p", 0);
  if (p < 2) bad("density needs a prime p");
  bool primitive = cfg.value("primitive", false);
  auto dv = localdens::local_density(F, p, parse_condition(F, cfg), primitive, opts.budget);
  json out;
  out["p"] = dv.p;
  out["k_used"] = dv.k_used;
  out["stabilized"] = dv.stabilized;
  out["value"] = rational_json(dv.value);
  out["primitive"] = primitive;
  return out;
}

json run_singular_series(const json& cfg) {
  auto F = parse_form(cfg);
  auto opts = parse_options(cfg);
  auto cond = parse_condition(F, cfg);
  auto c = cond ? *cond : localdens::CongruenceCondition::make(F, 1, {0, 0, 0});
  auto s = localdens::singular_series(F, c, opts.prime_cutoff,
                                      cfg.value("validate_good_primes", false), opts.budget);
  json out;
  out["value"] = s.value;
  out["exact_zero"] = s.exact_zero;
  out["tail_log"] = s.tail_log;
  json fs = json::array();
  for (auto& f : s.factors)
    fs.push_back({{"p", f.p},
                  {"sigma", rational_json(f.sigma)},
                  {"factor", rational_json(f.factor)},
                  {"stabilized", f.stabilized}});
  out["factors"] = fs;
  return out;
}

json run_singular_integral(const json& cfg) {
  auto F = parse_form(cfg);
  auto opts = parse_options(cfg);
  auto w = parse_weight(cfg);
  auto v = archimedean::singular_integral(F, w, opts.quad);
  json out;
  out["value"] = v.value;
  out["error"] = v.error;
  out["support_misses_cone"] = v.support_misses_cone;
  out["per_epsilon"] = v.per_epsilon;
  return out;
}

json run_expsum(const json& cfg) {
  auto F = parse_form(cfg);
  auto opts = parse_options(cfg);
  auto ctx = parse_sum_context(F, cfg, opts);
  if (!cfg.contains("expsum")) bad("missing expsum spec");
  const auto& e = cfg["expsum"];
  std::string kind = e.value("kind", "Sq");
  Vec3i c = e.contains("c") ? get_vec3i(e["c"]) : Vec3i{0, 0, 0};
  json out;
  out["kind"] = kind;
  if (kind == "Sq") {
    i64 q = get_int(e, "q", 1);
    auto v = expsums::sum_Sq(ctx, q, c);
    out["q"] = q;
    out["value_re"] = v.real();
    out["value_im"] = v.imag();
    out["terms"] = q * ctx.L * q * ctx.L * q * ctx.L;
  } else if (kind == "S1") {
    i64 q1 = get_int(e, "q1", 1), q2 = get_int(e, "q2", 1);
    auto v = expsums::sum_S1_closed(ctx, q1, q2, c);
    out["q1"] = q1;
    out["q2"] = q2;
    out["value_re"] = v.real();
    out["value_im"] = v.imag();
  } else if (kind == "S2") {
    i64 q2 = get_int(e, "q2", 1), x = get_int(e, "x", 1);
    auto v = expsums::sum_S2(ctx, q2, x, c);
    out["q2"] = q2;
    out["x"] = x;
    out["value_re"] = v.real();
    out["value_im"] = v.imag();
  } else if (kind == "salie") {
    i64 x = get_int(e, "x", 1);
    i64 fstar = e.contains("fstar") ? e["fstar"].get<i64>() : ctx.form.dual_eval(c);
    auto v = expsums::salie_T(x, fstar);
    out["x"] = x;
    out["fstar"] = fstar;
    out["value_re"] = v.real();
    out["value_im"] = v.imag();
  } else if (kind == "theta") {
    auto chis = arith::real_characters(ctx.L);
    size_t idx = (size_t)get_int(e, "chi_index", 0);
    if (idx >= chis.size()) bad("chi_index out of range");
    auto v = expsums::theta_chi(ctx, chis[idx], c, parse_truncation(cfg));
    out["chi_index"] = idx;
    out.update(series_json(v));
  } else if (kind == "partialF") {
    i64 X = get_int(e, "X", 100);
    auto v = expsums::partial_F(ctx, c, X, opts.threads);
    out["X"] = X;
    out["value_re"] = v.real();
    out["value_im"] = v.imag();
  } else if (kind == "S0") {
    i64 X = get_int(e, "X", 100);
    auto v = expsums::partial_sum_S0(ctx, X, opts.threads);
    out["X"] = X;
    out["sum_plain"] = v.sum_plain;
    out["sum_over_q3"] = v.sum_over_q3;
  } else {
    bad("expsum.kind must be one of Sq, S1, S2, salie, theta, partialF, S0");
  }
  return out;
}

json run_eta(const json& cfg) {
  auto F = parse_form(cfg);
  auto opts = parse_options(cfg);
  auto ctx = parse_sum_context(F, cfg, opts);
  if (!cfg.contains("c")) bad("eta needs a Poisson vector c");
  Vec3i c = get_vec3i(cfg["c"]);
  auto policy = parse_truncation(cfg);
  json out;
  out["c"] = {c[0], c[1], c[2]};
  out["fstar"] = ctx.form.dual_eval(c);
  json per = json::array();
  auto chis = arith::real_characters(ctx.L);
  for (size_t i = 0; i < chis.size(); ++i) {
    auto v = expsums::eta_coefficient(ctx, chis[i], c, policy);
    json e = series_json(v);
    e["chi_index"] = i;
    e["principal"] = chis[i].principal;
    per.push_back(e);
  }
  out["per_character"] = per;
  out["total"] = series_json(expsums::eta_lambda(ctx, c, policy));
  return out;
}

json run_fit(const json& cfg) {
  auto F = parse_form(cfg);
  auto opts = parse_options(cfg);
  auto w = parse_weight(cfg);
  auto cond = parse_condition(F, cfg);
  auto grid = parse_b_grid(cfg);
  std::string kind = cfg.value("fit_kind", "integral");
  harness::FitReport rep;
  if (kind == "integral")
    rep = harness::fit_integral_counts(F, w, cond, grid, opts);
  else if (kind == "primitive")
    rep = harness::fit_primitive_counts(F, w, cond, grid, opts);
  else
    bad("fit_kind must be integral or primitive");
  json out = fit_json(rep);
  out["fit_kind"] = kind;
  if (cfg.contains("csv_path")) {
    std::string path = cfg["csv_path"].get<std::string>();
    std::ofstream csv(path);
    if (!csv) bad("cannot open csv_path " + path);
    csv << "B,count,prediction\n";
    for (size_t i = 0; i < rep.b_grid.size(); ++i) {
      double B = rep.b_grid[i];
      double pred = kind == "integral"
                        ? rep.coef_main * B * std::log(B) + rep.coef_secondary * B
                        : rep.coef_main * B;
      csv << B << ',' << rep.counts[i] << ',' << pred << '\n';
    }
    out["csv_path"] = path;
  }
  return out;
}

json run_conic(const json& cfg) {
  auto F = parse_form(cfg);
  auto opts = parse_options(cfg);
  auto w = parse_weight(cfg);
  auto cond = parse_condition(F, cfg);
  i64 L = cond ? cond->L : 1;
  Vec3i gamma = cond ? cond->gamma : Vec3i{0, 0, 0};
  auto rep = harness::conic_count(F, w, L, gamma, parse_b_grid(cfg), opts);
  json out;
  out["fit"] = fit_json(rep.fit);
  out["per_gamma_g"] = rep.per_gamma_g;
  out["per_gamma_se"] = rep.per_gamma_se;
  out["g_sum"] = rep.g_sum;
  out["g_sum_se"] = rep.g_sum_se;
  return out;
}

json run_probe(const json& cfg) {
  auto F = parse_form(cfg);
  auto opts = parse_options(cfg);
  auto w = parse_weight(cfg);
  auto cond = parse_condition(F, cfg);
  if (!cond) bad("probe needs a congruence condition");
  auto rep = harness::obstruction_probe(F, w, *cond, parse_b_grid(cfg), opts);
  json out;
  out["b_grid"] = rep.b_grid;
  out["counts"] = rep.counts;
  out["main_constant"] = rep.main_constant;
  out["main_error"] = rep.main_error;
  out["g_estimate"] = rep.g_estimate;
  out["verdict"] = rep.verdict;
  return out;
}

json run_slope(const json& cfg) {
  auto F = parse_form(cfg);
  auto opts = parse_options(cfg);
  auto ctx = parse_sum_context(F, cfg, opts);
  if (!cfg.contains("c")) bad("slope needs a Poisson vector c");
  Vec3i c = get_vec3i(cfg["c"]);
  std::vector<i64> xg;
  if (cfg.contains("x_grid"))
    for (const auto& x : cfg["x_grid"]) xg.push_back(x.get<i64>());
  else
    xg = {250, 500, 750, 1000, 1250, 1500, 1750, 2000};
  auto rep = harness::slope_eta_check(ctx, c, xg, parse_truncation(cfg), opts);
  json out;
  out["c"] = {c[0], c[1], c[2]};
  out["x_grid"] = rep.x_grid;
  json ps = json::array();
  for (auto& z : rep.partial_sums) ps.push_back(complex_json(z));
  out["partial_sums"] = ps;
  out["slope"] = complex_json(rep.slope);
  out["slope_se"] = complex_json(rep.slope_se);
  out["eta"] = complex_json(rep.eta);
  out["eta_tail"] = rep.eta_tail;
  out["deviation"] = rep.deviation;
  out["threshold"] = rep.threshold;
  out["pass"] = rep.pass;
  return out;
}

json verify_battery(const json& cfg);

json dispatch(const std::string& command, const json& cfg) {
  if (command == "count") return run_count(cfg, false);
  if (command == "count-primitive") return run_count(cfg, true);
  if (command == "density") return run_density(cfg);
  if (command == "singular-series") return run_singular_series(cfg);
  if (command == "singular-integral") return run_singular_integral(cfg);
  if (command == "expsum") return run_expsum(cfg);
  if (command == "eta") return run_eta(cfg);
  if (command == "fit") return run_fit(cfg);
  if (command == "slope") return run_slope(cfg);
  if (command == "conic") return run_conic(cfg);
  if (command == "probe") return run_probe(cfg);
  if (command == "verify") return verify_battery(cfg);
  bad("unknown command: " + command);
}

// Small invariant battery runnable from the CLI; the full suites live in the
// test binaries.
json verify_battery(const json& cfg) {
  auto opts = parse_options(cfg);
  json checks = json::array();
  auto record = [&](const std::string& name, bool pass, const std::string& detail) {
    checks.push_back({{"name", name}, {"pass", pass}, {"detail", detail}});
  };

  auto pyth = TernaryForm::from_coeffs({1, 1, -1, 0, 0, 0});
  auto hyp = TernaryForm::from_coeffs({0, 0, -1, 1, 0, 0});

  {
    bool ok = true;
    for (const auto* Fp : {&pyth, &hyp}) {
      const auto& A = Fp->gram2();
      const auto& adj = Fp->adjugate();
      for (int i = 0; i < 3 && ok; ++i)
        for (int j = 0; j < 3 && ok; ++j) {
          i64 s = 0;
          for (int k = 0; k < 3; ++k) s += adj[i][k] * A[k][j];
          ok = s == (i == j ? Fp->det() : 0);
        }
    }
    record("adjugate_identity", ok, "adj(A)A = det(A) I on bundled forms");
  }
  {
    bool ok = true;
    for (i64 q = 1; q <= 199 && ok; q += 2) {
      KahanSum s;
      for (i64 a = 0; a < q; ++a) s.add(unit_phase(a * a, q));
      ok = std::abs(s.value() - arith::gauss_iota(q)) <= 1e-9 * std::sqrt((double)q);
    }
    record("gauss_closed_form", ok, "direct quadratic Gauss sums match the closed form, q <= 199");
  }
  {
    bool ok = true;
    auto ctxp = expsums::SumContext::make(pyth, 1, {0, 0, 0}, opts.budget);
    auto ctxh = expsums::SumContext::make(hyp, 3, {1, 1, 1}, opts.budget);
    Rng rng(opts.seed);
    for (const auto* ctx : {&ctxp, &ctxh}) {
      for (i64 q = 1; q <= 40 && ok; ++q) {
        auto [q1, q2] = arith::omega_split(q, ctx->omega);
        for (int t = 0; t < 2 && ok; ++t) {
          Vec3i c{rng.uniform_int(-4, 4), rng.uniform_int(-4, 4), rng.uniform_int(-4, 4)};
          cplx direct = expsums::sum_Sq(*ctx, q, c);
          cplx split = expsums::sum_S1_closed(*ctx, q1, q2, c) *
                       expsums::sum_S2_twisted(*ctx, q1, q2, c);
          ok = std::abs(direct - split) <= 1e-6 * std::max(1.0, std::abs(direct));
        }
      }
    }
    record("crt_split", ok, "S_q = S1 * S2 for q <= 40 on bundled contexts");
  }
  {
    bool ok = true;
    for (i64 p : {5, 7, 11, 13}) {
      auto rel = localdens::primitive_relation_check(pyth, p, opts.budget);
      ok = ok && rel.holds;
      auto rel2 = localdens::primitive_relation_check(hyp, p, opts.budget);
      ok = ok && rel2.holds;
    }
    record("primitive_density_relation", ok, "(1 - 1/p) sigma_p = sigma_p^o for p in {5,7,11,13}");
  }
  {
    auto w = archimedean::make_radial_weight({1.0, 0.0, 1.0}, 0.45, false);
    bool ok = true;
    for (const auto* Fp : {&pyth, &hyp}) {
      for (i64 L : {1, 3}) {
        Vec3i gamma = L == 1 ? Vec3i{0, 0, 0} : Vec3i{1, L == 3 ? 0 : 1, 1};
        if (Fp == &hyp && L == 3) gamma = {1, 1, 1};
        std::optional<localdens::CongruenceCondition> cond;
        if (L > 1) cond = localdens::CongruenceCondition::make(*Fp, L, gamma);
        enumerate::CountRequest req{*Fp, w, cond, 50.0, true, opts.threads};
        double prim = enumerate::weighted_count(req);
        double inv = enumerate::mobius_inverted_count(req);
        ok = ok && std::abs(prim - inv) <= 1e-9 * std::max(1.0, std::abs(prim));
      }
    }
    record("mobius_inversion", ok, "primitive count equals the inverted sum at B = 50");
  }
  {
    auto w = archimedean::make_octant_weight({0.05, 0.05, 0.05}, {1.05, 1.05, 1.05}, false);
    auto cond = localdens::CongruenceCondition::make(hyp, 6, {5, 5, 5});
    auto rep = harness::obstruction_probe(hyp, w, cond, {500, 1000, 1500, 2000}, opts);
    record("obstruction_probe", rep.verdict == "obstructed",
           "flagship congruence class stays empty while the main constant is positive");
  }

  bool all = std::all_of(checks.begin(), checks.end(),
                         [](const json& c) { return c["pass"].get<bool>(); });
  json out;
  out["checks"] = checks;
  out["all_pass"] = all;
  return out;
}

} // namespace

std::string run_command(const std::string& command, const std::string& config_json) {
  json cfg;
  if (config_json.empty()) {
    cfg = json::object();
  } else {
    cfg = json::parse(config_json, nullptr, false);
    if (cfg.is_discarded()) bad("malformed JSON");
  }
  if (cfg.contains("schema_version") && get_int(cfg, "schema_version", 1) != 1)
    bad("unsupported schema_version");

  auto t0 = std::chrono::steady_clock::now();
  json result = dispatch(command, cfg);
  auto t1 = std::chrono::steady_clock::now();

  json report;
  report["tool"] = "conelab";
  report["version"] = kVersion;
  report["schema_version"] = 1;
  report["command"] = command;
  report["config"] = cfg;
  report["threads_used"] = get_int(cfg, "threads", hardware_threads());
  report["result"] = result;
  report["timing"] = {{"seconds", std::chrono::duration<double>(t1 - t0).count()}};
  return report.dump(2);
}

const char* const* command_names(size_t* count) {
  static const char* names[] = {"count",   "count-primitive",  "density",
                                "singular-series", "singular-integral", "expsum",
                                "eta",     "fit",              "slope",
                                "conic",   "probe",            "verify"};
  if (count) *count = sizeof(names) / sizeof(names[0]);
  return names;
}

} // namespace conelab::config
