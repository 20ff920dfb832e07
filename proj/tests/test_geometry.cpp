#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "crosm/geometry.hpp"

using namespace crosm;
using R = Rational;

namespace {

ModelPtr<R> sphere_model(int n) { return build_model<R>(SpaceKind::sphere(n)); }
ModelPtr<R> cpn_model(int n) {
  return build_model<R>(SpaceKind::complex_projective(n));
}

InvariantMetric<R> sphere_metric(ModelPtr<R> md, long a0n, long a0d, long aen,
                                 long aed, long ben, long bed) {
  return metric_from_blocks(
      md, SphereBlocks<R>{R(a0n, a0d), R(aen, aed), R(ben, bed)});
}

/// g_i^kappa of the Sasakian families on CP^n: i selects which block of
/// nbar carries kappa^2.
InvariantMetric<R> cpn_gi(ModelPtr<R> md, int i, const R& k) {
  CpnBlocks<R> b;
  const R k2 = k * k, kh = k / 2, kq = k / 4;
  b.a0 = i == 1 ? k2 : kh;
  b.a_eps = i == 2 ? k2 : kh;
  b.b_eps = i == 3 ? k2 : kh;
  if (md->kind.n >= 2) {
    b.a_half = kq;
    b.b_half = kq;
  }
  return metric_from_blocks(md, b);
}

}  // namespace

TEST_CASE("U vanishes for the naturally reductive sphere metric") {
  auto md = sphere_model(3);
  const auto g = sphere_metric(md, 1, 1, 1, 1, 1, 1);
  const auto u = u_map(g);
  for (const auto& row : u.table)
    for (const auto& v : row) REQUIRE(is_zero_vec(v));
}

TEST_CASE("frozen U value: sphere n=3, blocks (1,2,3)") {
  auto md = sphere_model(3);
  const auto g = sphere_metric(md, 1, 1, 2, 1, 3, 1);
  const auto u = u_map(g);
  // U(X, mu^1) = -(1/6) nu^1
  Vec<R> expect = zero_vec<R>(md->mbar_dim());
  expect[md->i_nu_eps(1)] = R(-1, 6);
  REQUIRE(u.table[md->i_x()][md->i_mu_eps(1)] == expect);
}

TEST_CASE("UCP closed form agrees with the defining relation on CP^n") {
  auto md = cpn_model(2);
  // u_map cross-checks the closed form internally for orthogonal blocks.
  for (const auto& r : {R(1), R(2), R(1, 2)}) {
    const auto g = metric_from_blocks(
        md, CpnBlocks<R>{R(1), R(1), r * r, R(1), r * r / 4});
    const auto u = u_map(g);
    // U(X, mu_eps) = (a0 - a_eps)/(2 b_eps) nu_eps = (1-1)/... = 0 here
    REQUIRE(is_zero_vec(u.table[md->i_x()][md->i_mu_eps()]));
  }
  const auto g =
      metric_from_blocks(md, CpnBlocks<R>{R(2), R(3), R(5), R(7), R(11)});
  const auto u = u_map(g);
  Vec<R> expect = zero_vec<R>(md->mbar_dim());
  expect[md->i_nu_eps()] = (R(2) - R(3)) / (R(2) * R(5));
  REQUIRE(u.table[md->i_x()][md->i_mu_eps()] == expect);
}

TEST_CASE("Levi-Civita: naturally reductive case is half the bracket") {
  auto md = sphere_model(4);
  const auto g = sphere_metric(md, 2, 1, 2, 1, 2, 1);
  const auto conn = levi_civita(g);
  for (std::size_t i = 0; i < md->mbar_dim(); ++i)
    for (std::size_t j = 0; j < md->mbar_dim(); ++j)
      REQUIRE(conn.at(i, j) == scale(R(1, 2), md->br_m[i][j]));
}

TEST_CASE("Levi-Civita tables of the CP^n Sasakian families") {
  auto md = cpn_model(2);
  for (const auto& k : {R(1), R(1, 2), R(3)}) {
    const auto g1 = cpn_gi(md, 1, k);
    const auto g3 = cpn_gi(md, 3, k);
    const auto a1 = levi_civita(g1);
    const auto a3 = levi_civita(g3);
    const auto unit = [&](std::size_t i, const R& c) {
      Vec<R> v = zero_vec<R>(md->mbar_dim());
      v[i] = c;
      return v;
    };
    // alpha_1(mu_eps, X) = kappa nu_eps
    REQUIRE(a1.at(md->i_mu_eps(), md->i_x()) == unit(md->i_nu_eps(), k));
    // alpha_1(X, mu_eps) = (kappa - 1) nu_eps
    REQUIRE(a1.at(md->i_x(), md->i_mu_eps()) ==
            unit(md->i_nu_eps(), k - 1));
    // alpha_1(mu_eps, nu_eps) = -X/2
    REQUIRE(a1.at(md->i_mu_eps(), md->i_nu_eps()) ==
            unit(md->i_x(), R(-1, 2)));
    // alpha_3(mu_eps, nu_eps) = -kappa X
    REQUIRE(a3.at(md->i_mu_eps(), md->i_nu_eps()) == unit(md->i_x(), -k));
    // alpha_3(X, mu_eps) = -nu_eps/2, alpha_3(nu_eps, X) = (kappa-1) mu_eps
    REQUIRE(a3.at(md->i_x(), md->i_mu_eps()) ==
            unit(md->i_nu_eps(), R(-1, 2)));
    REQUIRE(a3.at(md->i_nu_eps(), md->i_x()) ==
            unit(md->i_mu_eps(), k - 1));
    // alpha_1(X, mu^{j,a}) = (2 kappa - 1)/2 nu^{j,a}
    REQUIRE(a1.at(md->i_x(), md->i_mu_half(1, 0)) ==
            unit(md->i_nu_half(1, 0), (2 * k - 1) / 2));
    // alpha_i(mu^{j,0}, mu^{j,1}) = -nu_eps/4 for every family
    REQUIRE(a1.at(md->i_mu_half(1, 0), md->i_mu_half(1, 1)) ==
            unit(md->i_nu_eps(), R(-1, 4)));
    REQUIRE(a3.at(md->i_mu_half(1, 0), md->i_mu_half(1, 1)) ==
            unit(md->i_nu_eps(), R(-1, 4)));
  }
}

TEST_CASE("Killing criterion on the sphere contact family") {
  auto md = sphere_model(3);
  // (gc) blocks: (kappa^2, kappa/(2q), kappa q/2)
  const auto gc = [&](const R& k, const R& q) {
    return metric_from_blocks(
        md, SphereBlocks<R>{k * k, k / (2 * q), k * q / 2});
  };
  Vec<R> xi = zero_vec<R>(md->mbar_dim());
  xi[md->i_x()] = 1;
  REQUIRE(killing_check(gc(R(1), R(1)), xi).pass);

  const auto bad = killing_check(gc(R(1), R(2)), xi);
  REQUIRE_FALSE(bad.pass);
  REQUIRE(bad.residual > 0);
  REQUIRE_FALSE(bad.witness.empty());

  REQUIRE(killing_check(gc(R(1), R(2)), zero_vec<R>(md->mbar_dim())).pass);

  // non-invariant field is an input error
  Vec<R> not_inv = zero_vec<R>(md->mbar_dim());
  not_inv[md->i_mu_eps(1)] = 1;
  REQUIRE_THROWS_AS(killing_check(gc(R(1), R(1)), not_inv), input_error);
}

TEST_CASE("curvature: frozen values") {
  auto md = sphere_model(2);
  const auto g = sphere_metric(md, 1, 1, 1, 1, 1, 1);
  const auto R4 = curvature(g);
  // R(u,u,.,.) = 0
  REQUIRE(R4.at(0, 0, 1, 2) == 0);
  // R(X, mu, X, mu) = 1/4 on the round metric
  REQUIRE(R4.at(md->i_x(), md->i_mu_eps(1), md->i_x(), md->i_mu_eps(1)) ==
          R(1, 4));

  auto cp = cpn_model(2);
  for (const auto& k : {R(1), R(1, 2), R(2, 3)}) {
    const auto R1t = curvature(cpn_gi(cp, 1, k));
    const auto R3t = curvature(cpn_gi(cp, 3, k));
    // R_1(mu_eps, X, mu_eps, X) = kappa^3/2
    REQUIRE(R1t.at(cp->i_mu_eps(), cp->i_x(), cp->i_mu_eps(), cp->i_x()) ==
            k * k * k / 2);
    // R_1(mu_eps, nu_eps, mu_eps, nu_eps) = kappa(2-3kappa)/4
    REQUIRE(R1t.at(cp->i_mu_eps(), cp->i_nu_eps(), cp->i_mu_eps(),
                   cp->i_nu_eps()) == k * (2 - 3 * k) / 4);
    // R_3(X, mu_eps, X, mu_eps) = kappa(2-3kappa)/4
    REQUIRE(R3t.at(cp->i_x(), cp->i_mu_eps(), cp->i_x(), cp->i_mu_eps()) ==
            k * (2 - 3 * k) / 4);
    // R_1(mu_eps, mu^{j,a}, mu_eps, mu^{j,a}) = kappa/16
    REQUIRE(R1t.at(cp->i_mu_eps(), cp->i_mu_half(1, 0), cp->i_mu_eps(),
                   cp->i_mu_half(1, 0)) == k / 16);
    REQUIRE(R3t.at(cp->i_x(), cp->i_nu_half(1, 1), cp->i_x(),
                   cp->i_nu_half(1, 1)) == k / 16);
  }
}

TEST_CASE("curvature tensor symmetries on random rational metrics") {
  std::mt19937 rng(2024);
  std::uniform_int_distribution<int> num(1, 9), den(1, 5);
  for (int n : {2, 3}) {
    auto md = sphere_model(n);
    for (int t = 0; t < 5; ++t) {
      const auto g = sphere_metric(md, num(rng), den(rng), num(rng), den(rng),
                                   num(rng), den(rng));
      const auto R4 = curvature(g);  // antisymmetries + Bianchi verified inside
      const std::size_t N = md->mbar_dim();
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
          for (std::size_t k = 0; k < N; ++k)
            for (std::size_t l = 0; l < N; ++l)
              REQUIRE(R4.at(i, j, k, l) == R4.at(k, l, i, j));
    }
  }
}

TEST_CASE("closed-form sphere curvature equals the brute-force pipeline") {
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(1, 9), den(1, 5);
  for (int n : {2, 3, 4}) {
    auto md = sphere_model(n);
    for (int t = 0; t < 8; ++t) {
      const BlockParams<R> p{R(num(rng), den(rng)), R(num(rng), den(rng)),
                             R(num(rng), den(rng))};
      const auto g =
          metric_from_blocks(md, SphereBlocks<R>{p.a0, p.a_eps, p.b_eps});
      const auto R4 = curvature(g);
      const auto table = sphere_curvature_table(*md, p);
      const std::size_t N = md->mbar_dim();
      for (std::size_t i = 0; i < N; ++i)
        for (std::size_t j = 0; j < N; ++j)
          for (std::size_t k = 0; k < N; ++k)
            for (std::size_t l = 0; l < N; ++l) {
              const auto it = table.find({i, j, k, l});
              const R expect = it == table.end() ? R(0) : it->second;
              if (R4.at(i, j, k, l) != expect) {
                CAPTURE(n, i, j, k, l);
                REQUIRE(R4.at(i, j, k, l) == expect);
              }
            }
      // Ricci eigenvalues and scalar curvature
      const auto ric = ricci(g);
      const auto eig = sphere_ricci_eigenvalues(n, p);
      REQUIRE(ric.Q(md->i_x(), md->i_x()) == eig[0]);
      for (int j = 1; j <= n - 1; ++j) {
        REQUIRE(ric.Q(md->i_mu_eps(j), md->i_mu_eps(j)) == eig[1]);
        REQUIRE(ric.Q(md->i_nu_eps(j), md->i_nu_eps(j)) == eig[2]);
      }
      REQUIRE(ric.scalar == sphere_scalar_curvature(n, p));
    }
  }
}

TEST_CASE("frozen Ricci values") {
  auto md = sphere_model(2);
  const auto ric = ricci(sphere_metric(md, 1, 1, 1, 1, 1, 1));
  REQUIRE(ric.Q == R(1, 2) * Mat<R>::identity(3));
  REQUIRE(ric.scalar == R(3, 2));

  // Ric_1(mu_eps, mu_eps) = Ric_3(X, X) = n - kappa on CP^n
  for (int n : {1, 2}) {
    auto cp = cpn_model(n);
    for (const auto& k : {R(1), R(1, 3)}) {
      const auto r1 = ricci(cpn_gi(cp, 1, k));
      REQUIRE(r1.ric(cp->i_mu_eps(), cp->i_mu_eps()) == R(n) - k);
      const auto r3 = ricci(cpn_gi(cp, 3, k));
      REQUIRE(r3.ric(cp->i_x(), cp->i_x()) == R(n) - k);
    }
  }
}

TEST_CASE("sectional curvature") {
  auto md = sphere_model(2);
  const auto g = sphere_metric(md, 1, 1, 1, 1, 1, 1);
  const auto R4 = curvature(g);
  const std::size_t N = md->mbar_dim();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      REQUIRE(sectional(g, R4, unit_vec<R>(N, i), unit_vec<R>(N, j)) ==
              R(1, 4));
  // mixed plane
  Vec<R> u = unit_vec<R>(N, 0);
  Vec<R> v = add(unit_vec<R>(N, 1), scale(R(2), unit_vec<R>(N, 2)));
  REQUIRE(sectional(g, R4, u, v) == R(1, 4));
  REQUIRE_THROWS_AS(sectional(g, R4, u, scale(R(3), u)), input_error);
}

TEST_CASE("xi-sectional constant branches") {
  BlockParams<R> p{R(3), R(2), R(2)};
  REQUIRE(xi_sectional_constant(p) == R(3, 16));  // a0/(4 a_eps^2)
  p = BlockParams<R>{R(5), R(2), R(3)};
  REQUIRE(xi_sectional_constant(p) == R(1, 5));  // 1/(a_eps+b_eps)
  p = BlockParams<R>{R(1), R(2), R(3)};
  REQUIRE_FALSE(xi_sectional_constant(p).has_value());

  // the branch value matches the actual sectional curvatures K(X, u)
  auto md = sphere_model(3);
  const auto g = sphere_metric(md, 3, 1, 2, 1, 2, 1);
  const auto R4 = curvature(g);
  const std::size_t N = md->mbar_dim();
  for (std::size_t j = 1; j < N; ++j)
    REQUIRE(sectional(g, R4, unit_vec<R>(N, md->i_x()), unit_vec<R>(N, j)) ==
            R(3, 16));
}

TEST_CASE("exterior derivative of an invariant 1-form, both routes") {
  auto md = cpn_model(2);
  const auto g =
      metric_from_blocks(md, CpnBlocks<R>{R(1), R(1), R(1), R(1), R(1)});
  const auto conn = levi_civita(g);
  // eta = <k1 X + k2 mu + k3 nu, .> in trace-form coordinates
  const R k1(2), k2(-3), k3(5);
  Vec<R> eta = zero_vec<R>(md->mbar_dim());
  eta[md->i_x()] = k1;
  eta[md->i_mu_eps()] = k2;
  eta[md->i_nu_eps()] = k3;
  const Mat<R> d = d_of_1form(g, conn, eta);  // asserts both routes agree
  REQUIRE(d(md->i_x(), md->i_mu_eps()) == k3 / 2);
  REQUIRE(d(md->i_x(), md->i_nu_eps()) == -k2 / 2);
  REQUIRE(d(md->i_mu_eps(), md->i_nu_eps()) == k1 / 2);
  REQUIRE(d(md->i_mu_half(1, 0), md->i_mu_half(1, 1)) == k3 / 4);
  REQUIRE(d(md->i_mu_half(1, 0), md->i_nu_half(1, 0)) == k1 / 4);
  REQUIRE(d(md->i_mu_half(1, 0), md->i_nu_half(1, 1)) == -k2 / 4);
  for (std::size_t i = 0; i < md->mbar_dim(); ++i) REQUIRE(d(i, i) == 0);
}
