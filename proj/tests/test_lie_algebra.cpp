#include <catch2/catch_amalgamated.hpp>

#include <algorithm>
#include <random>

#include "crosm/lie_algebra.hpp"
#include "crosm/structure_constants.hpp"

using namespace crosm;
using R = Rational;

TEST_CASE("so(4): frozen bracket values") {
  const auto A = build_so_algebra<R>(4);
  const auto& alg = A.data;
  REQUIRE(alg.dim == 6);

  // [B0_13, B0_23] = -B0_12
  REQUIRE(alg.bracket(A.b0(1, 3), A.b0(2, 3)) == scale(R(-1), A.b0(1, 2)));
  // antisymmetry: [x,x] = 0
  const Vec<R> x = add(A.b0(1, 2), scale(R(3), A.b0(2, 4)));
  REQUIRE(is_zero_vec(alg.bracket(x, x)));
  // ad(0) is the zero matrix
  REQUIRE(A.data.ad(zero_vec<R>(6)) == Mat<R>(6, 6));
}

TEST_CASE("so(4): ad(X)^2 = -I on span{B0_13, B0_14}") {
  const auto A = build_so_algebra<R>(4);
  const Mat<R> ad = A.data.ad(A.b0(1, 2));
  const Mat<R> ad2 = ad * ad;
  for (const auto& v : {A.b0(1, 3), A.b0(1, 4)})
    REQUIRE(ad2 * v == scale(R(-1), v));
}

TEST_CASE("su(3): frozen bracket values") {
  const auto A = build_su_algebra<R>(3);
  const auto& alg = A.data;
  REQUIRE(alg.dim == 8);

  // [A_12, B0_13] = B1_13
  REQUIRE(alg.bracket(A.a_vec(1, 2), A.b_vec(0, 1, 3)) == A.b_vec(1, 1, 3));
  // [B0_12, B1_12] = 2 A_12
  REQUIRE(alg.bracket(A.b_vec(0, 1, 2), A.b_vec(1, 1, 2)) ==
          scale(R(2), A.a_vec(1, 2)));
  // ad(X)^2 with X = B0_12/2 acts as -1/4 on B^a_13
  const Mat<R> ad = alg.ad(scale(R(1, 2), A.b_vec(0, 1, 2)));
  const Mat<R> ad2 = ad * ad;
  for (int a = 0; a <= 1; ++a) {
    const Vec<R> v = scale(R(1, 2), A.b_vec(a, 1, 3));
    REQUIRE(ad2 * v == scale(R(-1, 4), v));
  }
}

TEST_CASE("jacobi and invariance hold exactly for so(4) and su(3)") {
  const auto so4 = build_so_algebra<R>(4);
  REQUIRE(jacobi_check(so4.data).pass);
  REQUIRE(invariance_check(so4.data).pass);
  const auto su3 = build_su_algebra<R>(3);
  REQUIRE(jacobi_check(su3.data).pass);
  REQUIRE(invariance_check(su3.data).pass);
}

TEST_CASE("a corrupted table is caught by the checks") {
  auto alg = build_so_algebra<R>(4).data;
  alg.structure[{0, 1}].push_back({5, R(1, 3)});
  const auto jc = jacobi_check(alg);
  const auto ic = invariance_check(alg);
  REQUIRE((!jc.pass || !ic.pass));
}

TEST_CASE("eigenspace dimensions match the multiplicity table") {
  const auto so5 = build_so_algebra<R>(5);  // S^4 data
  Subspace<R> m{so5.data.dim, {}};
  for (int k = 2; k <= 5; ++k) m.basis.push_back(so5.b0(1, k));
  const auto eig =
      eigenspace_of_ad_squared(so5.data, so5.b0(1, 2), R(-1), m);
  REQUIRE(eig.dim() == 3);  // n - 1 for the sphere

  const auto su4 = build_su_algebra<R>(4);  // CP^3 data
  Subspace<R> msu{su4.data.dim, {}};
  for (int a = 0; a <= 1; ++a)
    for (int k = 2; k <= 4; ++k) msu.basis.push_back(su4.b_vec(a, 1, k));
  const Vec<R> X = scale(R(1, 2), su4.b_vec(0, 1, 2));
  REQUIRE(eigenspace_of_ad_squared(su4.data, X, R(-1, 4), msu).dim() == 4);
  // lambda = 0 on span{x} recovers span{x}
  Subspace<R> ax{su4.data.dim, {X}};
  const auto z = eigenspace_of_ad_squared(su4.data, X, R(0), ax);
  REQUIRE(z.dim() == 1);
  REQUIRE(in_span(z.basis, X, su4.data.dim));
}

TEST_CASE("eigenspace dimension is stable under domain basis permutation") {
  const auto so5 = build_so_algebra<R>(5);
  std::vector<Vec<R>> mb;
  for (int k = 2; k <= 5; ++k) mb.push_back(so5.b0(1, k));
  std::mt19937 rng(3);
  for (int t = 0; t < 5; ++t) {
    std::shuffle(mb.begin(), mb.end(), rng);
    Subspace<R> m{so5.data.dim, mb};
    REQUIRE(eigenspace_of_ad_squared(so5.data, so5.b0(1, 2), R(-1), m).dim() ==
            3);
  }
}

TEST_CASE("orthogonal complement and projection") {
  const auto so4 = build_so_algebra<R>(4);
  Subspace<R> k{so4.data.dim, {}};
  for (int j = 2; j <= 4; ++j)
    for (int l = j + 1; l <= 4; ++l) k.basis.push_back(so4.b0(j, l));
  const auto m = orthogonal_complement(so4.data, k, span_of_algebra(so4.data));
  REQUIRE(m.dim() == 3);
  for (const auto& v : m.basis)
    for (const auto& w : k.basis) REQUIRE(so4.data.inner(v, w) == 0);

  // project is idempotent and the residual is orthogonal to the subspace
  std::mt19937 rng(7);
  std::uniform_int_distribution<int> num(-5, 5);
  Vec<R> v(so4.data.dim);
  for (auto& c : v) c = R(num(rng));
  const Vec<R> p = project(so4.data, v, k);
  REQUIRE(project(so4.data, p, k) == p);
  for (const auto& w : k.basis) REQUIRE(so4.data.inner(sub(v, p), w) == 0);
}

TEST_CASE("float instantiation of the same kernels") {
  const auto so4 = build_so_algebra<double>(4);
  REQUIRE(jacobi_check(so4.data, 1e-9).pass);
  REQUIRE(invariance_check(so4.data, 1e-9).pass);
  const Mat<double> ad = so4.data.ad(so4.b0(1, 2));
  const Vec<double> got = (ad * ad) * so4.b0(1, 3);
  REQUIRE(std::abs(got[so4.index_b0(1, 3)] + 1.0) < 1e-12);
}
