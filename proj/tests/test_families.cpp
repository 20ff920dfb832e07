#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "crosm/families.hpp"

using namespace crosm;
using R = Rational;

namespace {

ModelPtr<R> sphere_model(int n) { return build_model<R>(SpaceKind::sphere(n)); }
ModelPtr<R> cpn_model(int n) {
  return build_model<R>(SpaceKind::complex_projective(n));
}

bool is_contact(const FamilyInstance<R>& inst) {
  return contact_check(build_structure(inst.metric, inst.xi)).pass;
}

}  // namespace

TEST_CASE("sphere family blocks and the Sasaki metric coincidence") {
  auto md = sphere_model(3);
  SphereFamilyParams<R> p;
  p.kappa = R(1);
  p.q_eps = R(1, 2);
  const auto inst = sphere_contact_family(md, p);
  REQUIRE(inst.metric.blocks->a0 == 1);
  REQUIRE(inst.metric.blocks->a_eps == 1);
  REQUIRE(inst.metric.blocks->b_eps == R(1, 4));
  // equals the induced Sasaki metric at r = 1/2
  REQUIRE(inst.metric.gram == sasaki_induced_metric(md, R(1, 2)).gram);
  REQUIRE(is_contact(inst));

  REQUIRE_THROWS_AS(
      sphere_contact_family(md, SphereFamilyParams<R>{R(-1), R(1)}),
      input_error);
}

TEST_CASE("Type AI frozen coefficients") {
  auto md = cpn_model(2);
  CpnFamilyParams<R> p;
  p.type = CpnType::AI;
  p.kappa = R(1);
  p.q_eps = R(1);
  p.q_half = R(1);
  p.alpha = R(1);
  const auto inst = cpn_family(md, p).at(0);
  const auto& b = *inst.metric.blocks;
  REQUIRE(b.a0 == 1);
  REQUIRE(b.a_eps == R(1, 2));
  REQUIRE(b.b_eps == R(5, 2));
  REQUIRE(b.c_eps == 1);
  REQUIRE(b.a0e == 0);
  REQUIRE(b.b0e == 0);
  REQUIRE(b.a_half == R(1, 4));
  REQUIRE(b.b_half == R(1, 4));
  REQUIRE(is_contact(inst));
}

TEST_CASE("Type AIII forces a_half = b_half = kappa/4") {
  auto md = cpn_model(3);
  CpnFamilyParams<R> p;
  p.type = CpnType::AIII;
  p.kappa = R(2, 3);
  p.q_eps = R(5);
  p.alpha = R(-2);
  const auto inst = cpn_family(md, p).at(0);
  REQUIRE(inst.metric.blocks->a_half == R(1, 6));
  REQUIRE(inst.metric.blocks->b_half == R(1, 6));
  REQUIRE(is_contact(inst));
}

TEST_CASE("A types pass contact on a grid with alpha != 0 and both signs") {
  for (int n : {1, 2}) {
    auto md = cpn_model(n);
    for (const CpnType t : {CpnType::AI, CpnType::AII, CpnType::AIII})
      for (const auto& k : {R(1), R(1, 2)})
        for (const auto& al : {R(0), R(1), R(-3, 2)})
          for (int sign : {1, -1}) {
            CpnFamilyParams<R> p;
            p.type = t;
            p.kappa = k;
            p.q_eps = R(2, 3);
            p.q_half = R(3);
            p.alpha = al;
            p.sign = sign;
            const auto inst = cpn_family(md, p).at(0);
            CAPTURE(n, to_string(t), k, al, sign);
            REQUIRE(is_contact(inst));
          }
  }
}

TEST_CASE("Type BI: exact rational instances pass contact") {
  auto md = cpn_model(2);
  // (cos, sin) = (3/5, 4/5): q_eps = 9/16 gives varrho = 3/5 exactly and
  // sqrt(q_eps) = 3/4.
  CpnFamilyParams<R> p;
  p.type = CpnType::BI;
  p.theta = circle_point(R(3, 5), R(4, 5));
  p.kappa = R(1);
  p.q_eps = R(9, 16);
  p.q_half = R(2);
  for (const auto& al : {R(0), R(1)}) {
    p.alpha = al;
    const auto inst = cpn_family(md, p).at(0);
    CAPTURE(al);
    REQUIRE(is_contact(inst));
  }
  // orthogonal specialization q_eps = 1, alpha = 0 reproduces the catalog row
  p.q_eps = R(1);
  p.alpha = R(0);
  p.kappa = R(1, 2);
  p.q_half = R(1);
  const auto inst = cpn_family(md, p).at(0);
  REQUIRE(inst.metric.blocks->orthogonal());
  REQUIRE(inst.metric.blocks->a0 == R(1, 4));
  REQUIRE(inst.metric.blocks->a_eps == R(1, 4));
  REQUIRE(inst.metric.blocks->b_eps == R(1, 4));
  REQUIRE(is_contact(inst));

  // irrational varrho in exact mode is flagged
  p.q_eps = R(2, 3);
  REQUIRE_THROWS_AS(cpn_family(md, p), irrational_value);

  // constraint q_eps < 1/sin^2
  p.q_eps = R(2);
  REQUIRE_THROWS_AS(cpn_family(md, p), input_error);
}

TEST_CASE("Types BII/BIII: exact orthogonal rows and float generic points") {
  auto md = cpn_model(2);
  {
    CpnFamilyParams<R> p;
    p.type = CpnType::BII;
    p.theta = circle_point(R(3, 5), R(4, 5));
    p.kappa = R(1, 2);
    p.q_eps = R(2);
    p.alpha = R(0);
    const auto inst = cpn_family(md, p).at(0);
    REQUIRE(inst.metric.blocks->orthogonal());
    REQUIRE(inst.metric.blocks->a0 == R(1, 4));
    REQUIRE(inst.metric.blocks->a_eps == R(1, 4));
    REQUIRE(inst.metric.blocks->b_eps == R(1, 4));
    REQUIRE(inst.metric.blocks->a_half == R(1, 8));
    REQUIRE(is_contact(inst));
  }
  {
    CpnFamilyParams<R> p;
    p.type = CpnType::BIII;
    p.theta = circle_point(R(5, 13), R(12, 13));
    p.kappa = R(2);
    p.q_eps = R(1);
    p.alpha = R(0);
    const auto inst = cpn_family(md, p).at(0);
    REQUIRE(inst.metric.blocks->orthogonal());
    REQUIRE(inst.metric.blocks->a0 == R(1, 4));
    REQUIRE(inst.metric.blocks->a_eps == R(4));
    REQUIRE(is_contact(inst));
  }
  // generic (non-orthogonal) points in float mode
  auto mdf = build_model<double>(SpaceKind::complex_projective(2));
  for (const CpnType t : {CpnType::BI, CpnType::BII, CpnType::BIII})
    for (double theta : {0.4, 2.2, 3.9})
      for (double alpha : {0.0, 0.7, -1.3}) {
        CpnFamilyParams<double> p;
        p.type = t;
        p.theta = circle_from_angle(theta);
        p.kappa = 0.8;
        p.q_eps = t == CpnType::BI ? 0.6 : 1.7;
        p.q_half = 1.3;
        p.alpha = alpha;
        const auto inst = cpn_family(mdf, p).at(0);
        const auto rep =
            contact_check(build_structure(inst.metric, inst.xi, 1e-9), 1e-9);
        CAPTURE(to_string(t), theta, alpha, rep.residual);
        REQUIRE(rep.pass);
      }
}

TEST_CASE("Type C: both roots pass contact; orthogonal case is the catalog row") {
  auto md = cpn_model(2);
  CpnFamilyParams<R> p;
  p.type = CpnType::C;
  p.kappa = R(1, 2);
  p.q_eps = R(1, 2);
  p.alpha = R(0);
  p.theta = circle_point(R(3, 5), R(4, 5));
  p.phi = circle_point(R(4, 5), R(3, 5));
  // On CP^2 the second root has an irrational a_half, so exact mode keeps
  // the orthogonal root delta = 2 and notes the skipped one.
  const auto insts = cpn_family(md, p);
  REQUIRE(insts.size() == 1);
  {
    const auto& inst = insts.front();
    REQUIRE(is_contact(inst));
    REQUIRE(inst.metric.blocks->orthogonal());
    REQUIRE(inst.metric.blocks->a0 == R(1, 4));
    REQUIRE(inst.metric.blocks->a_eps == R(1, 4));
    REQUIRE(inst.metric.blocks->b_eps == R(1, 4));
    REQUIRE(inst.metric.blocks->a_half == R(1, 8));
    REQUIRE(inst.metric.blocks->b_half == R(1, 8));
    REQUIRE(inst.notes.size() == 2);  // its delta and the skipped root
  }
  // On CP^1 there is no eps/2 block and both roots are exactly rational.
  auto md1 = cpn_model(1);
  const auto insts1 = cpn_family(md1, p);
  REQUIRE(insts1.size() == 2);
  bool found_orthogonal = false;
  for (const auto& inst : insts1) {
    REQUIRE(is_contact(inst));
    if (inst.metric.blocks->orthogonal()) {
      found_orthogonal = true;
      REQUIRE(inst.metric.blocks->a0 == R(1, 4));
      REQUIRE(inst.metric.blocks->a_eps == R(1, 4));
      REQUIRE(inst.metric.blocks->b_eps == R(1, 4));
    }
  }
  REQUIRE(found_orthogonal);

  // generic float instances, both roots
  auto mdf = build_model<double>(SpaceKind::complex_projective(2));
  for (double theta : {0.5, 2.8})
    for (double phi : {0.3, -0.9})
      for (double alpha : {0.0, 0.4}) {
        CpnFamilyParams<double> pf;
        pf.type = CpnType::C;
        pf.kappa = 1.1;
        pf.q_eps = 0.7;
        pf.alpha = alpha;
        pf.theta = circle_from_angle(theta);
        pf.phi = circle_from_angle(phi);
        const auto instances = cpn_family(mdf, pf);
        REQUIRE(instances.size() == 2);
        for (const auto& inst : instances) {
          const auto rep =
              contact_check(build_structure(inst.metric, inst.xi, 1e-8), 1e-8);
          CAPTURE(theta, phi, alpha, rep.residual);
          REQUIRE(rep.pass);
        }
      }

  // inadmissible parameters: discriminant below zero
  CpnFamilyParams<R> bad = p;
  bad.kappa = R(1, 100);
  bad.q_eps = R(4);
  REQUIRE_THROWS_AS(cpn_family(md, bad), input_error);
}

TEST_CASE("Type C admissibility boundary: double root, still contact") {
  // kappa^2 = varrho cos^2(theta) cos^2(phi) exactly: the quadratic has a
  // double root. With these rationals everything stays exact on CP^1.
  CpnFamilyParams<R> p;
  p.type = CpnType::C;
  p.theta = circle_point(R(3, 5), R(4, 5));
  p.phi = circle_point(R(4, 5), R(3, 5));
  p.q_eps = R(2, 5);
  p.kappa = R(48, 125);
  p.alpha = R(0);
  auto md1 = cpn_model(1);
  const auto insts = cpn_family(md1, p);
  REQUIRE(insts.size() == 1);  // double root
  REQUIRE(insts.front().notes.at(0) == "delta=25/6");
  REQUIRE(is_contact(insts.front()));

  // On CP^2 the eps/2 coefficient of this boundary point is irrational, so
  // exact mode refuses and float mode verifies it.
  auto md2 = cpn_model(2);
  REQUIRE_THROWS_AS(cpn_family(md2, p), irrational_value);
  auto mdf = build_model<double>(SpaceKind::complex_projective(2));
  CpnFamilyParams<double> pf;
  pf.type = CpnType::C;
  pf.theta = {0.6, 0.8};
  pf.phi = {0.8, 0.6};
  pf.q_eps = 0.4;
  pf.kappa = 48.0 / 125.0;
  const auto inst = cpn_family(mdf, pf).at(0);
  REQUIRE(contact_check(build_structure(inst.metric, inst.xi, 1e-8), 1e-8)
              .pass);
}

TEST_CASE("catalog rows: contact always, K-contact exactly per condition") {
  for (int n : {1, 2}) {
    auto md = cpn_model(n);
    const auto theta = circle_point(R(3, 5), R(4, 5));
    const auto phi = circle_point(R(4, 5), R(3, 5));
    for (const auto& row : table2_rows())
      for (const auto& kappa : {R(1, 2), R(1), R(2)})
        for (const auto& q_eps : {R(1), R(2)})
          for (const auto& q_half : {R(1), R(3, 2)}) {
            const auto inst =
                table2_instance(md, row.type, kappa, q_eps, q_half, theta, phi);
            const auto s = build_structure(inst.metric, inst.xi);
            CAPTURE(n, to_string(row.type), kappa, q_eps, q_half);
            REQUIRE(contact_check(s).pass);
            const bool expect =
                table2_kcontact_condition(row.type, n, kappa, q_eps, q_half);
            REQUIRE(kcontact_check(s).pass == expect);
            if (expect) REQUIRE(sasakian_check(s).pass);
          }
  }
}

TEST_CASE("Sasaki induced metric blocks") {
  auto md = sphere_model(3);
  REQUIRE(sasaki_induced_metric(md, R(1)).gram == Mat<R>::identity(5));
  auto cp = cpn_model(2);
  const auto g = sasaki_induced_metric(cp, R(2));
  REQUIRE(g.blocks->b_eps == 4);
  REQUIRE(g.blocks->b_half == 1);
  REQUIRE_THROWS_AS(sasaki_induced_metric(cp, R(0)), input_error);
}

TEST_CASE("Einstein solver on the sphere") {
  {
    auto md = sphere_model(2);
    const auto g = einstein_solve_sphere(md, R(1));
    REQUIRE(g.blocks->a_eps == 1);  // n/(2(n-1)) = 1 at n = 2
    REQUIRE(einstein_check(g).report.pass);
  }
  {
    auto md = sphere_model(4);
    const auto g = einstein_solve_sphere(md, R(1));
    REQUIRE(g.blocks->a_eps == R(2, 3));
    const auto e = einstein_check(g);
    REQUIRE(e.report.pass);
    REQUIRE(e.lambda == R(27, 8));
    // perturbing any block by 10% breaks Q = lambda I
    for (int which = 0; which < 3; ++which)
      for (const auto& f : {R(11, 10), R(9, 10)}) {
        SphereBlocks<R> b{g.blocks->a0, g.blocks->a_eps, g.blocks->b_eps};
        (which == 0 ? b.a0 : which == 1 ? b.a_eps : b.b_eps) *= f;
        REQUIRE_FALSE(
            einstein_check(metric_from_blocks(md, b)).report.pass);
      }
  }
}

TEST_CASE("contact-Einstein structure at kappa = (n-1)/n") {
  for (int n : {2, 3, 4}) {
    auto md = sphere_model(n);
    const auto inst = contact_einstein_sphere(md);
    REQUIRE(inst.metric.blocks->a0 == R(n - 1, n) * R(n - 1, n));
    const auto s = build_structure(inst.metric, inst.xi);
    REQUIRE(contact_check(s).pass);
    REQUIRE(sasakian_check(s).pass);
    const auto e = einstein_check(inst.metric);
    REQUIRE(e.report.pass);
    REQUIRE(e.lambda == R(2 * (n - 1)));
    REQUIRE(e.lambda == R(static_cast<long>(md->mbar_dim()) - 1));
  }
}

TEST_CASE("AI and AII structures are isomorphic via the explicit L") {
  for (int n : {2, 3}) {
    auto md = cpn_model(n);
    const Mat<R> L = type_a_isomorphism(*md);
    for (const auto& kappa : {R(1), R(1, 2)})
      for (const auto& q_eps : {R(1), R(3)})
        for (const auto& q_half : {R(1), R(1, 2)}) {
          CpnFamilyParams<R> p;
          p.kappa = kappa;
          p.q_eps = q_eps;
          p.q_half = q_half;
          p.type = CpnType::AI;
          const auto ai = cpn_family(md, p).at(0);
          p.type = CpnType::AII;
          const auto aii = cpn_family(md, p).at(0);
          const auto src =
              infinitesimal_model(build_structure(ai.metric, ai.xi));
          const auto dst =
              infinitesimal_model(build_structure(aii.metric, aii.xi));
          const auto rep = model_isomorphism_check(L, src, dst);
          CAPTURE(n, kappa, q_eps, q_half, rep.witness);
          REQUIRE(rep.pass);
          REQUIRE(rep.residual == 0);
          // identity on the same model passes trivially
          REQUIRE(model_isomorphism_check(
                      Mat<R>::identity(md->mbar_dim()), src, src)
                      .pass);
        }
  }
}

TEST_CASE("no block isometry can map the a block to the k_eps block") {
  for (int n : {2, 3}) {
    auto md = cpn_model(n);
    const R kappa(1);
    CpnFamilyParams<R> p;
    p.kappa = kappa;
    p.type = CpnType::AI;
    const auto g1 = cpn_family(md, p).at(0);
    p.type = CpnType::AIII;
    const auto g3 = cpn_family(md, p).at(0);
    const auto src = infinitesimal_model(build_structure(g1.metric, g1.xi));
    const auto dst = infinitesimal_model(build_structure(g3.metric, g3.xi));
    const auto candidates = a_keps_swap_candidates(*md);
    REQUIRE(candidates.size() == 256);
    for (std::size_t c = 0; c < candidates.size(); ++c) {
      const auto rep = model_isomorphism_check(candidates[c], src, dst);
      CAPTURE(n, c);
      REQUIRE_FALSE(rep.pass);
    }
  }
}
