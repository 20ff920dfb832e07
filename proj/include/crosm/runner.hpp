#ifndef CROSM_RUNNER_HPP
#define CROSM_RUNNER_HPP

#include <fstream>
#include <random>
#include <sstream>

#include "crosm/config.hpp"
#include "crosm/serialize.hpp"
#include "crosm/table_checks.hpp"

namespace crosm {

// ---------------------------------------------------------------------------
// Task runner behind the CLI. Checks are collected in declaration order;
// exit code 0 means every collected check passed, 2 means some check
// failed (the report is still produced), and input errors surface as
// exceptions for the CLI to map to exit code 1.
// ---------------------------------------------------------------------------

struct RunResult {
  int exit_code = 0;
  json report;

  std::string render(OutFormat fmt) const;
};

namespace detail_run {

template <typename T>
struct Collector {
  json checks = json::array();
  bool all_pass = true;

  void add(const CheckReport<T>& r, const std::string& provenance = "") {
    push(r, provenance, true);
    all_pass = all_pass && r.pass;
  }

  /// Reported verdict that does not gate the exit code (a fail may be the
  /// classified outcome; a separate gating check asserts the agreement).
  void add_info(const CheckReport<T>& r, const std::string& provenance = "") {
    push(r, provenance, false);
  }

  /// Synthetic boolean check (e.g. "observed verdict matches the
  /// classification").
  void expect(const std::string& name, bool ok,
              const std::string& provenance = "",
              std::vector<std::string> witness = {}) {
    CheckReport<T> r;
    r.name = name;
    r.pass = ok;
    r.residual = ok ? T(0) : T(1);
    r.witness = std::move(witness);
    add(r, provenance);
  }

 private:
  void push(const CheckReport<T>& r, const std::string& provenance,
            bool gating) {
    json j = check_report_json(r);
    if (!provenance.empty()) j["provenance"] = provenance;
    j["gating"] = gating;
    checks.push_back(std::move(j));
  }
};

inline SpaceKind space_kind(const RunConfig& cfg) {
  if (cfg.space == "sphere") return SpaceKind::sphere(cfg.n);
  if (cfg.space == "rpn") return SpaceKind::real_projective(cfg.n);
  if (cfg.space == "cpn") return SpaceKind::complex_projective(cfg.n);
  throw input_error("space.kind: unknown space '" + cfg.space +
                    "' (sphere|rpn|cpn)");
}

template <typename T>
T param_scalar(const RunConfig& cfg, const std::string& key, const char* dflt) {
  return parse_scalar<T>(cfg.get(key, dflt), key);
}

template <typename T>
UnitCirclePoint<T> param_angle(const RunConfig& cfg, const std::string& base,
                               const char* dflt_cos, const char* dflt_sin,
                               double tol) {
  if (cfg.has("family." + base)) {
    // radians; exact mode cannot represent a generic angle
    if constexpr (scalar_traits<T>::exact)
      throw irrational_value("family." + base +
                             " given in radians needs float mode (use " +
                             base + "_cos / " + base + "_sin for exact runs)");
    else
      return circle_from_angle(
          parse_scalar<double>(cfg.get("family." + base), base));
  }
  const T c = param_scalar<T>(cfg, "family." + base + "_cos", dflt_cos);
  const T s = param_scalar<T>(cfg, "family." + base + "_sin", dflt_sin);
  return circle_point(c, s, tol);
}

// -------------------------------------------------------------------------
// Target construction for verify / cone: a family instance (or the induced
// Sasaki metric) plus the classification's expected verdicts.
// -------------------------------------------------------------------------

template <typename T>
struct Target {
  std::vector<FamilyInstance<T>> instances;
  std::string description;
  // engaged when the classification pins the verdict; an explicit metric
  // has no prediction and the raw checks gate the run directly
  std::optional<bool> expect_contact = true;
  std::optional<bool> expect_kcontact;
};

/// Explicit metric blocks from the [metric] section; xi names one of the
/// invariant directions and is normalized (exactly when possible).
template <typename T>
Target<T> build_metric_target(const RunConfig& cfg, ModelPtr<T> model,
                              double tol) {
  const auto& md = *model;
  auto block = [&](const char* key, const char* dflt) {
    return parse_scalar<T>(cfg.get(std::string("metric.") + key, dflt),
                           std::string("metric.") + key);
  };
  InvariantMetric<T> g = [&] {
    if (!md.kind.is_cpn())
      return metric_from_blocks(
          model,
          SphereBlocks<T>{block("a0", "1"), block("a_eps", "1"),
                          block("b_eps", "1")},
          tol);
    CpnBlocks<T> b{block("a0", "1"), block("a_eps", "1"), block("b_eps", "1")};
    b.a_half = block("a_half", "1");
    b.b_half = block("b_half", "1");
    b.a0e = block("a0e", "0");
    b.b0e = block("b0e", "0");
    b.c_eps = block("c_eps", "0");
    return metric_from_blocks(model, b, tol);
  }();

  const std::string dir = cfg.get("metric.xi", "X");
  Vec<T> xi = zero_vec<T>(md.mbar_dim());
  if (dir == "X")
    xi[md.i_x()] = T(1);
  else if (dir == "mu_eps")
    xi[md.i_mu_eps()] = T(1);
  else if (dir == "nu_eps")
    xi[md.i_nu_eps()] = T(1);
  else
    throw input_error("metric.xi: expected X, mu_eps or nu_eps");
  const T norm2 = g.g(xi, xi);
  const auto norm = scalar_sqrt(norm2);
  if (!norm)
    throw irrational_value(
        "metric.xi: the norm of the requested direction is irrational; "
        "rerun in float mode");
  xi = scale(T(1) / *norm, xi);

  Target<T> t;
  t.instances.push_back({std::move(g), std::move(xi), {}});
  t.description = "explicit metric blocks, xi along " + dir;
  t.expect_contact = std::nullopt;
  return t;
}

template <typename T>
Target<T> build_target(const RunConfig& cfg, ModelPtr<T> model, double tol) {
  const auto& md = *model;
  for (const auto& [key, value] : cfg.params)
    if (key.rfind("metric.", 0) == 0) {
      if (cfg.has("family.type"))
        throw input_error("config: give either [family] or [metric], not both");
      return build_metric_target(cfg, model, tol);
    }
  Target<T> t;
  const std::string type =
      cfg.get("family.type", md.kind.is_cpn() ? "AI" : "gc");
  const int sign = cfg.get("family.sign", "1") == "-1" ? -1 : 1;

  if (type == "sasaki" || type == "sasaki-scaled") {
    const T r = param_scalar<T>(cfg, "family.r", "1");
    if (!(r > T(0))) throw input_error("family.r must be positive");
    InvariantMetric<T> g = sasaki_induced_metric(model, r, tol);
    Vec<T> xi = zero_vec<T>(md.mbar_dim());
    if (type == "sasaki") {
      xi[md.i_x()] = T(sign);  // a0 = 1
      t.expect_contact = r == frac<T>(1, 2);
      t.expect_kcontact = false;
      t.description = "induced Sasaki metric, r=" + scalar_traits<T>::str(r);
    } else {
      g = scaled_metric(g, T(1) / (T(4) * r * r));
      xi[md.i_x()] = T(sign) * T(2) * r;  // a0 = 1/(4 r^2)
      t.expect_contact = true;
      t.expect_kcontact = !md.kind.is_cpn() && r == T(1);
      t.description =
          "scaled Sasaki metric (1/4r^2), r=" + scalar_traits<T>::str(r);
    }
    t.instances.push_back({std::move(g), std::move(xi), {}});
    return t;
  }

  if (!md.kind.is_cpn()) {
    if (type != "gc")
      throw input_error("family.type: sphere spaces support gc, sasaki, "
                        "sasaki-scaled");
    SphereFamilyParams<T> p;
    p.kappa = param_scalar<T>(cfg, "family.kappa", "1");
    p.q_eps = param_scalar<T>(cfg, "family.q_eps", "1");
    p.sign = sign;
    t.instances.push_back(sphere_contact_family(model, p, tol));
    t.expect_contact = true;
    t.expect_kcontact = p.q_eps == T(1);
    t.description = "sphere contact family";
    return t;
  }

  CpnFamilyParams<T> p;
  p.type = cpn_type_from_string(type);
  p.kappa = param_scalar<T>(cfg, "family.kappa", "1");
  p.q_eps = param_scalar<T>(cfg, "family.q_eps", "1");
  p.q_half = param_scalar<T>(cfg, "family.q_half", "1");
  p.alpha = param_scalar<T>(cfg, "family.alpha", "0");
  p.sign = sign;
  p.theta = param_angle<T>(cfg, "theta", "3/5", "4/5", tol);
  p.phi = param_angle<T>(cfg, "phi", "4/5", "3/5", tol);
  if (p.type == CpnType::BI) p.q_eps = param_scalar<T>(cfg, "family.q_eps",
                                                       "1");
  t.instances = cpn_family(model, p, tol);
  t.expect_contact = true;
  t.description = std::string("Type ") + to_string(p.type) + " family";
  if (p.alpha == T(0)) {
    // Orthogonal members: the catalog pins the K-contact verdict. B/C rows
    // fix q_eps themselves, so the condition only involves kappa / q_half.
    const bool orthogonal_row =
        p.type == CpnType::AI || p.type == CpnType::AII ||
        p.type == CpnType::AIII ||
        (p.type == CpnType::BI && p.q_eps == T(1)) ||
        (p.type == CpnType::BII && p.q_eps == T(2)) ||
        (p.type == CpnType::BIII && p.q_eps == T(1)) ||
        (p.type == CpnType::C && p.kappa == frac<T>(1, 2) &&
         p.q_eps == frac<T>(1, 2));
    if (orthogonal_row)
      t.expect_kcontact = table2_kcontact_condition(p.type, md.kind.n, p.kappa,
                                                    p.q_eps, p.q_half);
  } else if (p.type == CpnType::AI || p.type == CpnType::AII ||
             p.type == CpnType::AIII) {
    // K-contact Type A structures are orthogonal, so alpha != 0 rules the
    // Killing property out.
    t.expect_kcontact = false;
  }
  return t;
}

// -------------------------------------------------------------------------
// verify / cone
// -------------------------------------------------------------------------

template <typename T>
void dump_tensors(const RunConfig& cfg, const InvariantMetric<T>& g) {
  const std::string path = cfg.get("run.dump_tensors");
  if (path.empty()) return;
  const auto R4 = curvature(g);
  const auto ric = ricci(g);
  std::ofstream out(path, std::ios::binary);
  if (!out)
    throw input_error("run.dump_tensors: cannot open '" + path + "'");
  if (path.size() > 4 && path.substr(path.size() - 4) == ".csv") {
    out << curvature_csv(R4, g.md().mbar_labels);
    return;
  }
  json j;
  j["schema"] = 1;
  j["model"] = model_summary_json(g.md());
  j["gram"] = matrix_json(g.gram);
  j["curvature"] = curvature_json(R4, g.md().mbar_labels);
  j["ricci_operator"] = matrix_json(ric.Q);
  j["scalar_curvature"] = scalar_json(ric.scalar);
  out << j.dump(2) << "\n";
}

template <typename T>
void run_verify(const RunConfig& cfg, ModelPtr<T> model, Collector<T>& col,
                bool with_cone) {
  const double tol = cfg.tolerance;
  const Target<T> t = build_target(cfg, model, tol);
  if (!t.instances.empty()) dump_tensors(cfg, t.instances.front().metric);
  for (std::size_t idx = 0; idx < t.instances.size(); ++idx) {
    const auto& inst = t.instances[idx];
    const std::string tag =
        t.instances.size() > 1 ? "[" + std::to_string(idx + 1) + "] " : "";
    const auto s = build_structure(inst.metric, inst.xi, tol);
    auto contact = contact_check(s, tol);
    contact.name = tag + "contact";
    for (const auto& note : inst.notes) contact.caveats.push_back(note);
    if (t.expect_contact) {
      col.add_info(contact, t.description);
      col.expect(tag + "contact_matches_classification",
                 contact.pass == *t.expect_contact,
                 "classification verdict for these parameters");
    } else {
      col.add(contact, t.description);  // no prediction: the check gates
    }
    if (with_cone) {
      auto cone = cone_check(s, tol);
      cone.name = tag + "cone_almost_kaehler";
      col.add_info(cone, "metric cone at the slice r = 1");
      col.expect(tag + "cone_iff_contact", cone.pass == contact.pass,
                 "cone extension exists exactly for contact structures");
    }
    if (!contact.pass) continue;
    auto kc = kcontact_check(s, tol);
    kc.name = tag + "kcontact";
    col.add_info(kc);
    auto sas = sasakian_check(s, tol);
    sas.name = tag + "sasakian";
    col.add_info(sas);
    col.expect(tag + "kcontact_iff_sasakian", kc.pass == sas.pass,
               "K-contact and Sasakian coincide for these structures");
    if (t.expect_kcontact)
      col.expect(tag + "kcontact_matches_classification",
                 kc.pass == *t.expect_kcontact,
                 "classification verdict for these parameters");
  }
}

// -------------------------------------------------------------------------
// einstein
// -------------------------------------------------------------------------

template <typename T>
void run_einstein(const RunConfig& cfg, ModelPtr<T> model, Collector<T>& col,
                  json& extra) {
  const double tol = cfg.tolerance;
  const auto& md = *model;
  if (!md.kind.is_cpn()) {
    const T a0 = param_scalar<T>(cfg, "family.a0", "1");
    const auto g = einstein_solve_sphere(model, a0, tol);
    extra["einstein_metric"] = metric_blocks_json(g);
    auto e = einstein_check(g, tol);
    e.report.name = "einstein_solver_metric";
    col.add(e.report, "a_eps = b_eps = n a0 / (2(n-1))");
    extra["lambda"] = scalar_json(e.lambda);

    // The contact metric that is Einstein: kappa = (n-1)/n, q_eps = 1.
    const auto ce = contact_einstein_sphere(model, tol);
    const auto s = build_structure(ce.metric, ce.xi, tol);
    auto c = contact_check(s, tol);
    c.name = "contact_einstein_contact";
    col.add(c, "kappa = (n-1)/n member of the contact family");
    auto sas = sasakian_check(s, tol);
    sas.name = "contact_einstein_sasakian";
    col.add(sas);
    auto ee = einstein_check(ce.metric, tol);
    ee.report.name = "contact_einstein_einstein";
    col.add(ee.report);
    col.expect("contact_einstein_lambda",
               within_tolerance(T(ee.lambda - T(2 * (md.kind.n - 1))), tol),
               "Einstein constant 2(n-1) = dim(mbar) - 1",
               {scalar_traits<T>::str(ee.lambda)});
    return;
  }

  const auto data = three_sasakian_metric(model, tol);
  extra["einstein_metric"] = metric_blocks_json(data.metric);
  auto e = einstein_check(data.metric, tol);
  e.report.name = "sasakian_einstein_metric";
  col.add(e.report, "blocks (1/4, 1/4, 1/4, 1/8, 1/8)");
  extra["lambda"] = scalar_json(e.lambda);
  col.expect("lambda_is_2(2n-1)",
             within_tolerance(T(e.lambda - T(2 * (2 * md.kind.n - 1))), tol),
             "Sasakian-Einstein constant", {scalar_traits<T>::str(e.lambda)});
  auto ts = three_sasakian_check(data.metric, data.xi1, data.xi2, data.xi3,
                                 tol);
  col.add(ts, "frame (2X, 2 nu_eps, 2 mu_eps)");
}

// -------------------------------------------------------------------------
// isomorphism
// -------------------------------------------------------------------------

template <typename T>
void run_isomorphism(const RunConfig& cfg, ModelPtr<T> model,
                     Collector<T>& col) {
  const double tol = cfg.tolerance;
  const auto& md = *model;
  if (!md.kind.is_cpn())
    throw input_error("isomorphism task needs --space cpn");
  CpnFamilyParams<T> p;
  p.kappa = param_scalar<T>(cfg, "family.kappa", "1");
  p.q_eps = param_scalar<T>(cfg, "family.q_eps", "1");
  p.q_half = param_scalar<T>(cfg, "family.q_half", "1");
  p.type = CpnType::AI;
  const auto ai = cpn_family(model, p, tol).at(0);
  p.type = CpnType::AII;
  const auto aii = cpn_family(model, p, tol).at(0);
  const auto src = infinitesimal_model(build_structure(ai.metric, ai.xi, tol));
  const auto dst =
      infinitesimal_model(build_structure(aii.metric, aii.xi, tol));
  auto rep = model_isomorphism_check(type_a_isomorphism(md), src, dst, tol);
  rep.name = "AI_AII_isomorphism";
  col.add(rep, "explicit isometry L between Type AI and Type AII");

  if (md.kind.n >= 2) {
    p.type = CpnType::AIII;
    const auto a3 = cpn_family(model, p, tol).at(0);
    const auto dst3 =
        infinitesimal_model(build_structure(a3.metric, a3.xi, tol));
    std::size_t failing = 0;
    const auto candidates = a_keps_swap_candidates(md);
    for (const auto& L : candidates)
      if (!model_isomorphism_check(L, src, dst3, tol).pass) ++failing;
    col.expect("a_keps_swap_candidates_all_fail",
               failing == candidates.size(),
               std::to_string(candidates.size()) +
                   " block-structured candidates with L(a) = k_eps",
               {std::to_string(failing) + " failed"});
  }
}

// -------------------------------------------------------------------------
// catalog
// -------------------------------------------------------------------------

template <typename T>
void run_catalog(const RunConfig& cfg, ModelPtr<T> model, Collector<T>& col,
                 json& extra) {
  const double tol = cfg.tolerance;
  const auto& md = *model;
  if (!md.kind.is_cpn()) throw input_error("catalog task needs --space cpn");
  extra["table_csv"] = table2_csv();
  const T kappa = param_scalar<T>(cfg, "family.kappa", "1");
  const T q_eps = param_scalar<T>(cfg, "family.q_eps", "1");
  const T q_half = param_scalar<T>(cfg, "family.q_half", "1");
  const auto theta = param_angle<T>(cfg, "theta", "3/5", "4/5", tol);
  const auto phi = param_angle<T>(cfg, "phi", "4/5", "3/5", tol);
  for (const auto& row : table2_rows()) {
    const auto inst =
        table2_instance(model, row.type, kappa, q_eps, q_half, theta, phi, tol);
    const auto s = build_structure(inst.metric, inst.xi, tol);
    auto contact = contact_check(s, tol);
    contact.name = std::string(to_string(row.type)) + "_contact";
    col.add(contact, row.kcontact);
    const bool expect = table2_kcontact_condition(row.type, md.kind.n, kappa,
                                                  q_eps, q_half);
    const bool kc = contact.pass && kcontact_check(s, tol).pass;
    col.expect(std::string(to_string(row.type)) + "_kcontact_condition",
               kc == expect, std::string("condition: ") + row.kcontact);
  }
}

// -------------------------------------------------------------------------
// full suite
// -------------------------------------------------------------------------

template <typename T>
void suite_common(ModelPtr<T> model, Collector<T>& col, double tol) {
  const auto& md = *model;
  col.add(jacobi_check(md.alg(), tol), "exhaustive over basis triples");
  col.add(invariance_check(md.alg(), tol), "exhaustive over basis triples");
  const int me = md.kind.is_cpn() ? 1 : md.kind.n - 1;
  const int mh = md.kind.is_cpn() ? 2 * md.kind.n - 2 : 0;
  col.expect("multiplicities",
             static_cast<int>(md.m_eps.dim()) == me &&
                 static_cast<int>(md.k_eps.dim()) == me &&
                 static_cast<int>(md.m_half.dim()) == mh &&
                 static_cast<int>(md.k_half.dim()) == mh,
             "restricted-root multiplicities");
  for (const auto& part : verify_bracket_tables_detailed(md, tol))
    col.add(part);
  const auto inv = invariant_vector_space(md);
  const std::size_t expect_inv =
      md.kind.is_cpn() || md.kind.n == 2 ? 3 : 1;
  col.expect("invariant_vectors_dim", inv.dim() == expect_inv,
             "dimension of Inv(mbar)", {std::to_string(inv.dim())});
}

template <typename T>
void suite_sphere(const RunConfig& cfg, ModelPtr<T> model, Collector<T>& col) {
  const double tol = cfg.tolerance;
  const auto& md = *model;
  const int n = md.kind.n;
  suite_common(model, col, tol);

  // Closed-form curvature data against the direct pipeline on random
  // rational metrics (fixed seed, reproducible).
  {
    std::mt19937 rng(20240601);
    std::uniform_int_distribution<int> num(1, 9), den(1, 6);
    ResidualAccum<T> acc;
    for (int trial = 0; trial < 10; ++trial) {
      const BlockParams<T> p{frac<T>(num(rng), den(rng)),
                             frac<T>(num(rng), den(rng)),
                             frac<T>(num(rng), den(rng))};
      const auto g = metric_from_blocks(
          model, SphereBlocks<T>{p.a0, p.a_eps, p.b_eps}, tol);
      const auto R4 = curvature(g);
      const auto table = sphere_curvature_table(md, p);
      for (std::size_t i = 0; i < R4.N; ++i)
        for (std::size_t j = 0; j < R4.N; ++j)
          for (std::size_t k = 0; k < R4.N; ++k)
            for (std::size_t l = 0; l < R4.N; ++l) {
              const auto it = table.find({i, j, k, l});
              const T expect = it == table.end() ? T(0) : it->second;
              acc.update(T(R4.at(i, j, k, l) - expect),
                         {std::to_string(trial), md.mbar_labels[i],
                          md.mbar_labels[j], md.mbar_labels[k],
                          md.mbar_labels[l]});
            }
      const auto ric = ricci(g);
      const auto eig = sphere_ricci_eigenvalues(n, p);
      acc.update(T(ric.Q(md.i_x(), md.i_x()) - eig[0]), {"rho_0"});
      acc.update(T(ric.Q(md.i_mu_eps(1), md.i_mu_eps(1)) - eig[1]),
                 {"rho_eps"});
      acc.update(T(ric.Q(md.i_nu_eps(1), md.i_nu_eps(1)) - eig[2]),
                 {"varrho_eps"});
      acc.update(T(ric.scalar - sphere_scalar_curvature(n, p)), {"scalar"});
    }
    col.add(acc.finish("curvature_closed_form_agreement", tol),
            "direct pipeline vs closed-form tables, 10 random rational "
            "metrics, seed 20240601");
  }

  // Contact family grid: contact always; K-contact and Sasakian exactly on
  // q_eps = 1.
  {
    bool contact_all = true, kc_ok = true, sas_ok = true, cone_ok = true;
    std::vector<std::string> witness;
    for (const auto& kappa :
         {frac<T>(1), frac<T>(2), frac<T>(1, 2), frac<T>(3, 4)})
      for (const auto& q :
           {frac<T>(1), frac<T>(2), frac<T>(1, 2), frac<T>(1, 3), frac<T>(5)})
        for (int sign : {1, -1}) {
          if (sign < 0 && !(kappa == T(1))) continue;
          SphereFamilyParams<T> p;
          p.kappa = kappa;
          p.q_eps = q;
          p.sign = sign;
          const auto inst = sphere_contact_family(model, p, tol);
          const auto s = build_structure(inst.metric, inst.xi, tol);
          const bool c = contact_check(s, tol).pass;
          const bool cone = cone_check(s, tol).pass;
          contact_all = contact_all && c;
          cone_ok = cone_ok && (cone == c);
          const bool kc = c && kcontact_check(s, tol).pass;
          const bool sas = c && sasakian_check(s, tol).pass;
          const bool expect = q == T(1);
          if (kc != expect || sas != expect) {
            kc_ok = kc_ok && kc == expect;
            sas_ok = sas_ok && sas == expect;
            witness = {scalar_traits<T>::str(kappa), scalar_traits<T>::str(q)};
          }
        }
    col.expect("gc_contact_grid", contact_all,
               "24-point (kappa, q_eps, sign) grid");
    col.expect("gc_kcontact_iff_q1", kc_ok, "Killing exactly on q_eps = 1",
               witness);
    col.expect("gc_sasakian_iff_q1", sas_ok, "normality exactly on q_eps = 1",
               witness);
    col.expect("gc_cone_iff_contact", cone_ok,
               "cone extension equivalence over the grid");
  }

  // Induced Sasaki metric: contact exactly at r = 1/2; the rescaled metric
  // is contact for every r and K-contact (hence Sasakian) exactly at r = 1.
  {
    bool plain_ok = true, scaled_ok = true, kc_ok = true;
    for (const auto& r : {frac<T>(1, 4), frac<T>(1, 2), frac<T>(1), frac<T>(2)}) {
      Vec<T> xi = zero_vec<T>(md.mbar_dim());
      xi[md.i_x()] = T(1);
      const auto plain = build_structure(sasaki_induced_metric(model, r, tol),
                                         xi, tol);
      plain_ok =
          plain_ok && (contact_check(plain, tol).pass == (r == frac<T>(1, 2)));
      Vec<T> xis = zero_vec<T>(md.mbar_dim());
      xis[md.i_x()] = T(2) * r;
      const auto scaled = build_structure(
          scaled_metric(sasaki_induced_metric(model, r, tol),
                        T(1) / (T(4) * r * r)),
          xis, tol);
      const bool c = contact_check(scaled, tol).pass;
      scaled_ok = scaled_ok && c;
      const bool kc = c && kcontact_check(scaled, tol).pass;
      kc_ok = kc_ok && (kc == (r == T(1)));
      if (r == T(1)) kc_ok = kc_ok && sasakian_check(scaled, tol).pass;
    }
    col.expect("sasaki_contact_iff_r_half", plain_ok,
               "induced Sasaki metric over r in {1/4, 1/2, 1, 2}");
    col.expect("scaled_sasaki_contact_all_r", scaled_ok,
               "(1/4r^2) scaled Sasaki metric");
    col.expect("scaled_sasaki_kcontact_iff_r1", kc_ok,
               "Killing exactly at r = 1; Sasakian there");
  }

  // Einstein metric: solver output, uniqueness probes, and the unique
  // contact metric that is Einstein.
  {
    const auto g = einstein_solve_sphere(model, T(1), tol);
    auto e = einstein_check(g, tol);
    e.report.name = "einstein_solver_metric";
    col.add(e.report, "a_eps = b_eps = n a0/(2(n-1))");
    std::mt19937 rng(555);
    std::uniform_int_distribution<int> num(1, 9), den(1, 6);
    bool rejected = true;
    for (int trial = 0; trial < 20; ++trial) {
      const T a0 = frac<T>(num(rng), den(rng));
      T ae = frac<T>(num(rng), den(rng));
      T be = frac<T>(num(rng), den(rng));
      if (ae == be && ae == T(n) * a0 / T(2 * (n - 1)))
        ae += frac<T>(1, 7);
      const auto probe =
          metric_from_blocks(model, SphereBlocks<T>{a0, ae, be}, tol);
      rejected = rejected && !einstein_check(probe, tol).report.pass;
    }
    col.expect("einstein_uniqueness_probes", rejected,
               "20 random non-conforming metrics rejected, seed 555");
    const auto ce = contact_einstein_sphere(model, tol);
    const auto s = build_structure(ce.metric, ce.xi, tol);
    col.expect("contact_einstein",
               contact_check(s, tol).pass && sasakian_check(s, tol).pass &&
                   einstein_check(ce.metric, tol).report.pass &&
                   within_tolerance(
                       T(einstein_check(ce.metric, tol).lambda -
                         T(2 * (n - 1))),
                       tol),
               "kappa = (n-1)/n: contact + Sasakian + Einstein, lambda = "
               "2(n-1)");
  }

  // xi^S-sectional constants and the constant-curvature detection.
  {
    bool ok = true;
    const auto probe = [&](const SphereBlocks<T>& b, const T& expect) {
      const auto g = metric_from_blocks(model, b, tol);
      const auto R4 = curvature(g);
      const auto c = xi_sectional_constant(*g.blocks);
      if (!c || !within_tolerance(T(*c - expect), tol)) return false;
      Vec<T> x = unit_vec<T>(md.mbar_dim(), md.i_x());
      for (std::size_t j = 1; j < md.mbar_dim(); ++j)
        if (!within_tolerance(
                T(sectional(g, R4, x, unit_vec<T>(md.mbar_dim(), j)) - *c),
                tol))
          return false;
      return true;
    };
    ok = ok && probe({T(3), T(2), T(2)}, frac<T>(3, 16));
    ok = ok && probe({T(5), T(2), T(3)}, frac<T>(1, 5));
    ok = ok && !xi_sectional_constant(BlockParams<T>{T(1), T(2), T(3)});
    col.expect("xi_sectional_constant_branches", ok,
               "a_eps = b_eps and a0 = a_eps + b_eps branches");

    // constant sectional curvature only for n = 2 with proportional metric
    const auto g = metric_from_blocks(model, SphereBlocks<T>{T(2), T(2), T(2)},
                                      tol);
    const auto R4 = curvature(g);
    bool constant = true;
    for (std::size_t i = 0; i < md.mbar_dim() && constant; ++i)
      for (std::size_t j = i + 1; j < md.mbar_dim(); ++j)
        if (!within_tolerance(
                T(sectional(g, R4, unit_vec<T>(md.mbar_dim(), i),
                            unit_vec<T>(md.mbar_dim(), j)) -
                  frac<T>(1, 8)),
                tol)) {
          constant = false;
          break;
        }
    col.expect("constant_curvature_iff_n2", constant == (n == 2),
               "g = 2<.,.>: constant curvature 1/(4*2) only on T_r S^2");
  }
}

template <typename T>
void suite_cpn(const RunConfig& cfg, ModelPtr<T> model, Collector<T>& col) {
  const double tol = cfg.tolerance;
  const auto& md = *model;
  const int n = md.kind.n;
  suite_common(model, col, tol);

  const auto theta = circle_point(frac<T>(3, 5), frac<T>(4, 5));
  const auto phi = circle_point(frac<T>(4, 5), frac<T>(3, 5));

  // All seven families: contact on admissible grids (non-orthogonal Type A
  // members included), catalog rows characterized by their K-contact
  // conditions, Sasakian wherever K-contact, cone equivalence throughout.
  {
    bool contact_all = true, cone_ok = true;
    std::vector<std::string> witness;
    auto push = [&](const FamilyInstance<T>& inst, const char* label) {
      const auto s = build_structure(inst.metric, inst.xi, tol);
      const bool c = contact_check(s, tol).pass;
      const bool k = cone_check(s, tol).pass;
      if (!c || k != c) witness = {label};
      contact_all = contact_all && c;
      cone_ok = cone_ok && k == c;
    };
    for (const CpnType t : {CpnType::AI, CpnType::AII, CpnType::AIII})
      for (const auto& kappa : {frac<T>(1), frac<T>(1, 2)})
        for (const auto& q : {frac<T>(1), frac<T>(2)})
          for (const auto& al : {frac<T>(0), frac<T>(1), frac<T>(-1, 2)}) {
            CpnFamilyParams<T> p;
            p.type = t;
            p.kappa = kappa;
            p.q_eps = q;
            p.q_half = frac<T>(3, 2);
            p.alpha = al;
            for (const auto& inst : cpn_family(model, p, tol))
              push(inst, to_string(t));
          }
    {
      CpnFamilyParams<T> p;  // exact non-orthogonal BI point
      p.type = CpnType::BI;
      p.theta = theta;
      p.kappa = T(1);
      p.q_eps = frac<T>(9, 16);
      p.q_half = T(2);
      p.alpha = T(1);
      for (const auto& inst : cpn_family(model, p, tol)) push(inst, "BI");
    }
    for (const CpnType t : {CpnType::BI, CpnType::BII, CpnType::BIII,
                            CpnType::C})
      for (const auto& kappa : {frac<T>(1, 2), frac<T>(1), frac<T>(2)}) {
        const auto inst = table2_instance(model, t, kappa, T(1), T(1), theta,
                                          phi, tol);
        push(inst, to_string(t));
        if (t == CpnType::C) break;  // the C row has no free kappa
      }
    col.expect("cpn_families_contact_grid", contact_all,
               "Types AI..C including alpha != 0 members", witness);
    col.expect("cpn_cone_iff_contact", cone_ok,
               "cone extension equivalence over the family grid", witness);
  }

  {
    bool ok = true;
    std::vector<std::string> witness;
    for (const auto& row : table2_rows())
      for (const auto& kappa : {frac<T>(1, 2), frac<T>(1)})
        for (const auto& q : {frac<T>(1), frac<T>(2)})
          for (const auto& qh : {frac<T>(1), frac<T>(3)}) {
            const auto inst =
                table2_instance(model, row.type, kappa, q, qh, theta, phi, tol);
            const auto s = build_structure(inst.metric, inst.xi, tol);
            const bool c = contact_check(s, tol).pass;
            const bool kc = c && kcontact_check(s, tol).pass;
            const bool expect =
                table2_kcontact_condition(row.type, n, kappa, q, qh);
            bool good = c && kc == expect;
            if (kc) good = good && sasakian_check(s, tol).pass;
            if (!good)
              witness = {to_string(row.type), scalar_traits<T>::str(kappa),
                         scalar_traits<T>::str(q), scalar_traits<T>::str(qh)};
            ok = ok && good;
          }
    col.expect("table_kcontact_characterization", ok,
               "K-contact verdicts match the catalog conditions; K-contact "
               "members are Sasakian",
               witness);
  }

  // Induced Sasaki metric on CP^n: contact exactly at r = 1/2 (Type AI
  // instance). Once rescaled it is contact for every r; for n >= 2 the
  // eps/2 block (q_half = r/2 != 1) rules the Killing property out for all
  // r, while CP^1 carries the S^2 data and is K-contact exactly at r = 1.
  {
    bool plain_ok = true, scaled_ok = true;
    for (const auto& r : {frac<T>(1, 4), frac<T>(1, 2), frac<T>(1), frac<T>(2)}) {
      Vec<T> xi = zero_vec<T>(md.mbar_dim());
      xi[md.i_x()] = T(1);
      const auto plain =
          build_structure(sasaki_induced_metric(model, r, tol), xi, tol);
      plain_ok =
          plain_ok && (contact_check(plain, tol).pass == (r == frac<T>(1, 2)));
      Vec<T> xis = zero_vec<T>(md.mbar_dim());
      xis[md.i_x()] = T(2) * r;
      const auto scaled = build_structure(
          scaled_metric(sasaki_induced_metric(model, r, tol),
                        T(1) / (T(4) * r * r)),
          xis, tol);
      const bool expect_kc = n == 1 && r == T(1);
      scaled_ok = scaled_ok && contact_check(scaled, tol).pass &&
                  kcontact_check(scaled, tol).pass == expect_kc;
    }
    col.expect("sasaki_contact_iff_r_half", plain_ok,
               "induced Sasaki metric over r in {1/4, 1/2, 1, 2}");
    col.expect(n >= 2 ? "scaled_sasaki_never_kcontact"
                      : "scaled_sasaki_kcontact_iff_r1",
               scaled_ok, "(1/4r^2) scaled Sasaki metric on CP^n");
  }

  // 3-Sasakian structure and the Sasakian-Einstein uniqueness data.
  {
    const auto data = three_sasakian_metric(model, tol);
    col.add(three_sasakian_check(data.metric, data.xi1, data.xi2, data.xi3,
                                 tol),
            "metric (1/4,1/4,1/4,1/8,1/8), frame (2X, 2nu_eps, 2mu_eps)");
    auto e = einstein_check(data.metric, tol);
    e.report.name = "three_sasakian_einstein";
    col.add(e.report);
    col.expect("lambda_is_2(2n-1)",
               within_tolerance(T(e.lambda - T(2 * (2 * n - 1))), tol),
               "Einstein constant of the 3-Sasakian metric",
               {scalar_traits<T>::str(e.lambda)});
    bool off_ok = true;
    for (const CpnType t : {CpnType::AI, CpnType::AIII})
      for (const auto& kappa : {frac<T>(1), frac<T>(1, 4)}) {
        CpnFamilyParams<T> p;
        p.type = t;
        p.kappa = kappa;
        const auto inst = cpn_family(model, p, tol).at(0);
        const auto er = einstein_check(inst.metric, tol);
        off_ok = off_ok && !er.report.pass;
        // Ric(mu_eps, mu_eps) = n - kappa for g_1; Ric(X, X) for g_3
        const auto ric = ricci(inst.metric);
        const T val = t == CpnType::AI
                          ? ric.ric(md.i_mu_eps(), md.i_mu_eps())
                          : ric.ric(md.i_x(), md.i_x());
        off_ok = off_ok && within_tolerance(T(val - (T(n) - kappa)), tol);
      }
    col.expect("g1_g3_not_einstein_off_half", off_ok,
               "kappa != 1/2 members fail; Ric component equals n - kappa");
  }

  // Infinitesimal-model isomorphisms.
  {
    bool ok = true;
    for (const auto& kappa : {frac<T>(1), frac<T>(2)})
      for (const auto& q : {frac<T>(1), frac<T>(1, 2)}) {
        CpnFamilyParams<T> p;
        p.kappa = kappa;
        p.q_eps = q;
        p.q_half = frac<T>(3, 2);
        p.type = CpnType::AI;
        const auto ai = cpn_family(model, p, tol).at(0);
        p.type = CpnType::AII;
        const auto aii = cpn_family(model, p, tol).at(0);
        const auto src =
            infinitesimal_model(build_structure(ai.metric, ai.xi, tol));
        const auto dst =
            infinitesimal_model(build_structure(aii.metric, aii.xi, tol));
        ok = ok &&
             model_isomorphism_check(type_a_isomorphism(md), src, dst, tol)
                 .pass;
      }
    col.expect("AI_AII_isomorphism_grid", ok,
               "explicit L over a (kappa, q_eps) grid");
    if (n >= 2) {
      CpnFamilyParams<T> p;
      p.type = CpnType::AI;
      const auto g1 = cpn_family(model, p, tol).at(0);
      p.type = CpnType::AIII;
      const auto g3 = cpn_family(model, p, tol).at(0);
      const auto src =
          infinitesimal_model(build_structure(g1.metric, g1.xi, tol));
      const auto dst =
          infinitesimal_model(build_structure(g3.metric, g3.xi, tol));
      bool all_fail = true;
      for (const auto& L : a_keps_swap_candidates(md))
        all_fail = all_fail && !model_isomorphism_check(L, src, dst, tol).pass;
      col.expect("a_keps_swap_candidates_all_fail", all_fail,
                 "block-structured candidates with L(a) = k_eps");
    }
  }
}

// -------------------------------------------------------------------------

template <typename T>
RunResult run_typed(const RunConfig& cfg, std::vector<std::string> mode_notes) {
  const SpaceKind kind = space_kind(cfg);
  ModelPtr<T> model = build_model<T>(kind);
  Collector<T> col;
  json extra;

  switch (cfg.task) {
    case Task::verify:
      run_verify(cfg, model, col, /*with_cone=*/false);
      break;
    case Task::cone:
      run_verify(cfg, model, col, /*with_cone=*/true);
      break;
    case Task::einstein:
      run_einstein(cfg, model, col, extra);
      break;
    case Task::isomorphism:
      run_isomorphism(cfg, model, col);
      break;
    case Task::catalog:
      run_catalog(cfg, model, col, extra);
      break;
    case Task::full_suite:
      if (kind.is_cpn())
        suite_cpn(cfg, model, col);
      else
        suite_sphere(cfg, model, col);
      break;
  }

  RunResult res;
  res.report["schema"] = 1;
  res.report["tool"] = "crosm";
  res.report["task"] = to_string(cfg.task);
  res.report["mode"] = scalar_traits<T>::mode_name;
  if (!scalar_traits<T>::exact) res.report["tolerance"] = cfg.tolerance;
  res.report["mode_notes"] = mode_notes;
  res.report["model"] = model_summary_json(*model);
  res.report["checks"] = col.checks;
  if (!extra.is_null())
    for (auto& [k, v] : extra.items()) res.report[k] = v;
  res.report["all_pass"] = col.all_pass;
  res.exit_code = col.all_pass ? 0 : 2;
  return res;
}

}  // namespace detail_run

inline std::string RunResult::render(OutFormat fmt) const {
  if (fmt == OutFormat::json) return report.dump(2) + "\n";
  std::ostringstream out;
  if (fmt == OutFormat::csv) {
    out << "name,verdict,residual,witness,caveats\n";
    for (const auto& c : report.at("checks")) {
      std::string residual;
      if (c.at("residual").is_object())
        residual = c.at("residual").at("num").get<std::string>() + "/" +
                   c.at("residual").at("den").get<std::string>();
      else
        residual = c.at("residual").dump();
      auto join = [](const json& arr) {
        std::string s;
        for (const auto& x : arr)
          s += (s.empty() ? "" : "; ") + x.get<std::string>();
        return s;
      };
      out << c.at("name").get<std::string>() << ","
          << c.at("verdict").get<std::string>() << "," << residual << ",\""
          << join(c.at("witness")) << "\",\"" << join(c.at("caveats"))
          << "\"\n";
    }
    return out.str();
  }
  out << "crosm " << report.at("task").get<std::string>() << " "
      << report.at("model").at("space").get<std::string>()
      << " mode=" << report.at("mode").get<std::string>() << "\n";
  for (const auto& c : report.at("checks")) {
    std::string residual;
    if (c.at("residual").is_object())
      residual = c.at("residual").at("num").get<std::string>() + "/" +
                 c.at("residual").at("den").get<std::string>();
    else
      residual = c.at("residual").dump();
    const bool gating = !c.contains("gating") || c.at("gating").get<bool>();
    out << "["
        << (c.at("verdict") == "pass" ? "pass" : gating ? "FAIL" : "fail")
        << "] " << c.at("name").get<std::string>() << "  residual=" << residual;
    if (!c.at("witness").empty()) {
      out << "  witness=(";
      bool first = true;
      for (const auto& w : c.at("witness")) {
        out << (first ? "" : ", ") << w.get<std::string>();
        first = false;
      }
      out << ")";
    }
    out << "\n";
  }
  out << (report.at("all_pass").get<bool>() ? "result: PASS\n"
                                            : "result: FAIL\n");
  return out.str();
}

/// Runs the configured task. Exact mode falls back to float automatically
/// when a family instance has irrational coefficients (noted in the
/// report).
inline RunResult run(const RunConfig& cfg) {
  const std::string mode = cfg.resolved_mode();
  if (mode == "float")
    return detail_run::run_typed<double>(cfg, {});
  if (mode != "exact")
    throw input_error("run.mode: unknown mode '" + mode + "'");
  try {
    return detail_run::run_typed<Rational>(cfg, {});
  } catch (const irrational_value& e) {
    return detail_run::run_typed<double>(
        cfg, {std::string("float_mode_auto: ") + e.what()});
  }
}

/// Runs and writes the rendered report to cfg.out_path when set.
inline RunResult run_and_write(const RunConfig& cfg) {
  RunResult res = run(cfg);
  if (!cfg.out_path.empty()) {
    std::ofstream out(cfg.out_path, std::ios::binary);
    if (!out) throw input_error("run.out: cannot open '" + cfg.out_path + "'");
    out << res.render(cfg.format);
  }
  return res;
}

}  // namespace crosm

#endif
