#ifndef CROSM_TABLE_CHECKS_HPP
#define CROSM_TABLE_CHECKS_HPP

#include <string>
#include <vector>

#include "crosm/models.hpp"

namespace crosm {

// ---------------------------------------------------------------------------
// verify_bracket_tables: replays every bracket identity the construction
// rests on, against the structure constants, with exact residuals:
//   - the mu/nu pairing relations,
//   - the explicit multiplication tables on mbar (so and su cases),
//   - the projection identities of the eps/2 blocks,
//   - the subspace inclusions of the root decomposition,
//   - the action of h on the basis (CP^n) and [h, nbar] = 0,
//   - the fact that the h-projections of mbar brackets span h.
// ---------------------------------------------------------------------------

namespace detail {

template <typename T>
void check_eq(ResidualAccum<T>& acc, const LieAlgebraData<T>& alg,
              const Vec<T>& got, const Vec<T>& expect, std::string what) {
  const Vec<T> diff = sub(got, expect);
  for (std::size_t l = 0; l < diff.size(); ++l)
    acc.update(diff[l], {what, alg.basis_labels[l]});
}

/// Residual of membership of v in the span of a list of subspaces.
template <typename T>
void check_member(ResidualAccum<T>& acc, const LieAlgebraData<T>& alg,
                  const Vec<T>& v, const std::vector<const Subspace<T>*>& spans,
                  std::string what) {
  std::vector<Vec<T>> joint;
  for (const auto* s : spans)
    joint.insert(joint.end(), s->basis.begin(), s->basis.end());
  Vec<T> rem = v;
  if (!joint.empty())
    rem = sub(v, project(alg, v, Subspace<T>{alg.dim, joint}));
  for (std::size_t l = 0; l < rem.size(); ++l)
    acc.update(rem[l], {what, alg.basis_labels[l]});
}

template <typename T>
CheckReport<T> pairing_relations(const RankOneModel<T>& md, double tol) {
  const auto& alg = md.alg();
  ResidualAccum<T> acc;
  for (std::size_t j = 0; j < md.mu_eps.size(); ++j) {
    check_eq(acc, alg, alg.bracket(md.X, md.mu_eps[j]),
             scale(T(-1), md.nu_eps[j]), "[X,mu_eps]");
    check_eq(acc, alg, alg.bracket(md.X, md.nu_eps[j]), md.mu_eps[j],
             "[X,nu_eps]");
  }
  for (std::size_t p = 0; p < md.mu_half.size(); ++p) {
    check_eq(acc, alg, alg.bracket(md.X, md.mu_half[p]),
             scale(frac<T>(-1, 2), md.nu_half[p]), "[X,mu_half]");
    check_eq(acc, alg, alg.bracket(md.X, md.nu_half[p]),
             scale(frac<T>(1, 2), md.mu_half[p]), "[X,nu_half]");
  }
  return acc.finish("pairing_relations", tol);
}

template <typename T>
CheckReport<T> bracket_table_sphere(const RankOneModel<T>& md, double tol) {
  const auto& alg = md.alg();
  const auto& A = *md.so;
  ResidualAccum<T> acc;
  const int ne = md.kind.n - 1;
  for (int j = 1; j <= ne; ++j)
    for (int k = 1; k <= ne; ++k) {
      const Vec<T> mm = alg.bracket(md.mu_eps[j - 1], md.mu_eps[k - 1]);
      const Vec<T> nn = alg.bracket(md.nu_eps[j - 1], md.nu_eps[k - 1]);
      check_eq(acc, alg, mm, scale(T(-1), A.b0(2 + j, 2 + k)),
               "[mu_j,mu_k]=-B0");
      check_eq(acc, alg, nn, scale(T(-1), A.b0(2 + j, 2 + k)),
               "[nu_j,nu_k]=-B0");
      const Vec<T> mn = alg.bracket(md.mu_eps[j - 1], md.nu_eps[k - 1]);
      check_eq(acc, alg, mn, scale(j == k ? T(-1) : T(0), md.X),
               "[mu_j,nu_k]=-d_jk X");
    }
  return acc.finish("bracket_table", tol);
}

template <typename T>
CheckReport<T> bracket_table_cpn(const RankOneModel<T>& md, double tol) {
  const auto& alg = md.alg();
  const auto& A = *md.su;
  const int n = md.kind.n;
  ResidualAccum<T> acc;
  const T half = frac<T>(1, 2);
  const Vec<T>& mu = md.mu_eps[0];
  const Vec<T>& nu = md.nu_eps[0];
  auto muh = [&](int j, int a) -> const Vec<T>& {
    return md.mu_half[2 * (j - 1) + a];
  };
  auto nuh = [&](int j, int a) -> const Vec<T>& {
    return md.nu_half[2 * (j - 1) + a];
  };

  check_eq(acc, alg, alg.bracket(md.X, mu), scale(T(-1), nu), "[X,mu_eps]");
  check_eq(acc, alg, alg.bracket(md.X, nu), mu, "[X,nu_eps]");
  check_eq(acc, alg, alg.bracket(mu, nu), scale(T(-1), md.X),
           "[mu_eps,nu_eps]");

  for (int j = 1; j <= n - 1; ++j) {
    for (int a = 0; a <= 1; ++a) {
      const T sgn = a == 0 ? half : -half;  // (-1)^a / 2
      check_eq(acc, alg, alg.bracket(md.X, muh(j, a)),
               scale(frac<T>(-1, 2), nuh(j, a)), "[X,mu_half]");
      check_eq(acc, alg, alg.bracket(md.X, nuh(j, a)),
               scale(frac<T>(1, 2), muh(j, a)), "[X,nu_half]");
      check_eq(acc, alg, alg.bracket(mu, muh(j, a)), scale(sgn, nuh(j, 1 - a)),
               "[mu_eps,mu_half]");
      check_eq(acc, alg, alg.bracket(nu, nuh(j, a)), scale(sgn, nuh(j, 1 - a)),
               "[nu_eps,nu_half]");
      check_eq(acc, alg, alg.bracket(mu, nuh(j, a)), scale(sgn, muh(j, 1 - a)),
               "[mu_eps,nu_half]");
      check_eq(acc, alg, alg.bracket(nu, muh(j, a)),
               scale(-sgn, muh(j, 1 - a)), "[nu_eps,mu_half]");
      check_eq(acc, alg, alg.bracket(muh(j, a), nuh(j, a)),
               scale(frac<T>(-1, 2), md.X), "[mu_half,nu_half] same (j,a)");
    }
    check_eq(acc, alg, alg.bracket(muh(j, 0), nuh(j, 1)), scale(half, mu),
             "[mu_half0,nu_half1]");
    check_eq(acc, alg, alg.bracket(muh(j, 1), nuh(j, 0)), scale(-half, mu),
             "[mu_half1,nu_half0]");

    // [mu^{j,0}, mu^{j,1}] = -1/2 nu_eps + 1/2 (1/2 (A_12 + 2 A_23) + A_{3,j+2})
    Vec<T> hpart = scale(frac<T>(1, 4),
                         add(A.a_vec(1, 2), scale(T(2), A.a_vec(2, 3))));
    axpy(hpart, half, A.a_vec(3, j + 2));
    check_eq(acc, alg, alg.bracket(muh(j, 0), muh(j, 1)),
             add(scale(frac<T>(-1, 2), nu), hpart), "[mu_half0,mu_half1]");
    check_eq(acc, alg, alg.bracket(nuh(j, 0), nuh(j, 1)),
             add(scale(frac<T>(1, 2), nu), hpart), "[nu_half0,nu_half1]");

    for (int k = 1; k <= n - 1; ++k) {
      if (k == j) continue;
      for (int a = 0; a <= 1; ++a)
        for (int b = 0; b <= 1; ++b) {
          const int ab = (a + b) % 2;
          const Vec<T> expect =
              scale(frac<T>(-1, 4), A.b_vec(ab, j + 2, k + 2));
          if (a == b || a == 0) {
            check_eq(acc, alg, alg.bracket(muh(j, a), muh(k, b)), expect,
                     "[mu_half_j,mu_half_k]");
            check_eq(acc, alg, alg.bracket(nuh(j, a), nuh(k, b)), expect,
                     "[nu_half_j,nu_half_k]");
          }
          check_eq(acc, alg, alg.bracket(muh(j, a), nuh(k, b)),
                   zero_vec<T>(alg.dim), "[mu_half_j,nu_half_k] j!=k");
        }
    }
  }
  return acc.finish("bracket_table", tol);
}

template <typename T>
CheckReport<T> pbrack_identities(const RankOneModel<T>& md, double tol) {
  const auto& alg = md.alg();
  ResidualAccum<T> acc;
  const std::size_t ne = md.mu_eps.size();
  const std::size_t nh = md.mu_half.size();

  for (std::size_t j = 0; j < ne; ++j)
    for (std::size_t k = 0; k < ne; ++k) {
      check_eq(acc, alg, alg.bracket(md.mu_eps[j], md.mu_eps[k]),
               alg.bracket(md.nu_eps[j], md.nu_eps[k]), "[mu,mu]=[nu,nu]");
      const Vec<T> expect = scale(j == k ? T(-1) : T(0), md.X);
      check_eq(acc, alg, alg.bracket(md.mu_eps[j], md.nu_eps[k]), expect,
               "[mu_j,nu_k]");
      check_eq(acc, alg, alg.bracket(md.nu_eps[j], md.mu_eps[k]),
               scale(T(-1), expect), "[nu_j,mu_k]");
    }
  for (std::size_t j = 0; j < ne; ++j)
    for (std::size_t p = 0; p < nh; ++p) {
      check_eq(acc, alg, alg.bracket(md.mu_eps[j], md.mu_half[p]),
               alg.bracket(md.nu_eps[j], md.nu_half[p]),
               "[mu_eps,mu_half]=[nu_eps,nu_half]");
      check_eq(acc, alg, alg.bracket(md.nu_eps[j], md.mu_half[p]),
               scale(T(-1), alg.bracket(md.mu_eps[j], md.nu_half[p])),
               "[nu_eps,mu_half]=-[mu_eps,nu_half]");
    }
  for (std::size_t p = 0; p < nh; ++p)
    for (std::size_t q = 0; q < nh; ++q) {
      const Vec<T> mm = alg.bracket(md.mu_half[p], md.mu_half[q]);
      const Vec<T> nn = alg.bracket(md.nu_half[p], md.nu_half[q]);
      const Vec<T> mn = alg.bracket(md.mu_half[p], md.nu_half[q]);
      const Vec<T> nm = alg.bracket(md.nu_half[p], md.mu_half[q]);
      const Vec<T> keps_mm = project(alg, mm, md.k_eps);
      const Vec<T> keps_nn = project(alg, nn, md.k_eps);
      check_eq(acc, alg, keps_mm, scale(T(-1), keps_nn),
               "[mu,mu]_keps=-[nu,nu]_keps");
      check_eq(acc, alg, keps_mm, scale(frac<T>(1, 2), sub(mm, nn)),
               "[mu,mu]_keps=(1/2)([mu,mu]-[nu,nu])");
      const Vec<T> meps_mn = project(alg, mn, md.m_eps);
      const Vec<T> meps_nm = project(alg, nm, md.m_eps);
      check_eq(acc, alg, meps_mn, meps_nm, "[mu,nu]_meps=[nu,mu]_meps");
      check_eq(acc, alg, meps_mn, scale(frac<T>(1, 2), add(mn, nm)),
               "[mu,nu]_meps=(1/2)([mu,nu]+[nu,mu])");
      check_eq(acc, alg, project(alg, mn, md.a),
               scale(p == q ? frac<T>(-1, 2) : T(0), md.X), "[mu,nu]_a");
    }
  return acc.finish("pbrack", tol);
}

template <typename T>
CheckReport<T> brack1_inclusions(const RankOneModel<T>& md, double tol) {
  const auto& alg = md.alg();
  ResidualAccum<T> acc;
  using Spans = std::vector<const Subspace<T>*>;
  struct Incl {
    const Subspace<T>* lhs1;
    const Subspace<T>* lhs2;
    Spans target;
    const char* what;
  };
  const std::vector<Incl> incls = {
      {&md.h, &md.m_eps, {&md.m_eps}, "[h,m_eps] in m_eps"},
      {&md.h, &md.m_half, {&md.m_half}, "[h,m_half] in m_half"},
      {&md.h, &md.k_eps, {&md.k_eps}, "[h,k_eps] in k_eps"},
      {&md.h, &md.k_half, {&md.k_half}, "[h,k_half] in k_half"},
      {&md.a, &md.m_eps, {&md.k_eps}, "[a,m_eps] in k_eps"},
      {&md.a, &md.m_half, {&md.k_half}, "[a,m_half] in k_half"},
      {&md.a, &md.k_eps, {&md.m_eps}, "[a,k_eps] in m_eps"},
      {&md.a, &md.k_half, {&md.m_half}, "[a,k_half] in m_half"},
      {&md.m_eps, &md.m_eps, {&md.h}, "[m_eps,m_eps] in h"},
      {&md.m_eps, &md.m_half, {&md.k_half}, "[m_eps,m_half] in k_half"},
      {&md.m_eps, &md.k_eps, {&md.a}, "[m_eps,k_eps] in a"},
      {&md.m_eps, &md.k_half, {&md.m_half}, "[m_eps,k_half] in m_half"},
      {&md.m_half, &md.m_half, {&md.h, &md.k_eps}, "[m_half,m_half] in h+k_eps"},
      {&md.m_half, &md.k_eps, {&md.m_half}, "[m_half,k_eps] in m_half"},
      {&md.m_half, &md.k_half, {&md.a, &md.m_eps}, "[m_half,k_half] in a+m_eps"},
      {&md.k_eps, &md.k_eps, {&md.h}, "[k_eps,k_eps] in h"},
      {&md.k_eps, &md.k_half, {&md.k_half}, "[k_eps,k_half] in k_half"},
      {&md.k_half, &md.k_half, {&md.h, &md.k_eps}, "[k_half,k_half] in h+k_eps"},
  };
  for (const auto& inc : incls)
    for (const auto& u : inc.lhs1->basis)
      for (const auto& v : inc.lhs2->basis)
        check_member(acc, alg, alg.bracket(u, v), inc.target, inc.what);
  return acc.finish("brack1_inclusions", tol);
}

/// CP^n only: [h, nbar] = 0 and the explicit ad_h action on the eps/2 bases.
template <typename T>
CheckReport<T> hbrackets_identities(const RankOneModel<T>& md, double tol) {
  const auto& alg = md.alg();
  const auto& A = *md.su;
  const int n = md.kind.n;
  ResidualAccum<T> acc;
  auto muh = [&](int j, int a) -> const Vec<T>& {
    return md.mu_half[2 * (j - 1) + a];
  };
  auto nuh = [&](int j, int a) -> const Vec<T>& {
    return md.nu_half[2 * (j - 1) + a];
  };

  for (const auto& w : md.h.basis)
    for (const auto& v : md.nbar.basis)
      check_eq(acc, alg, alg.bracket(w, v), zero_vec<T>(alg.dim),
               "[h,nbar]=0");

  if (n >= 2) {
    const Vec<T> gen = add(A.a_vec(1, 2), scale(T(2), A.a_vec(2, 3)));
    for (int j = 1; j <= n - 1; ++j)
      for (int a = 0; a <= 1; ++a) {
        const T sgn = a == 0 ? T(1) : T(-1);
        Vec<T> expect = scale(sgn, muh(j, 1 - a));
        if (j == 1) axpy(expect, sgn * T(2), muh(1, 1 - a));
        check_eq(acc, alg, alg.bracket(gen, muh(j, a)), expect,
                 "[A12+2A23,mu_half]");
        Vec<T> expect_nu = scale(sgn, nuh(j, 1 - a));
        if (j == 1) axpy(expect_nu, sgn * T(2), nuh(1, 1 - a));
        check_eq(acc, alg, alg.bracket(gen, nuh(j, a)), expect_nu,
                 "[A12+2A23,nu_half]");

        for (int i = 3; i <= n; ++i) {
          Vec<T> em = zero_vec<T>(alg.dim);
          Vec<T> en = zero_vec<T>(alg.dim);
          if (i == j + 1) {
            axpy(em, sgn, muh(i - 1, 1 - a));
            axpy(en, sgn, nuh(i - 1, 1 - a));
          }
          if (i == j + 2) {
            axpy(em, -sgn, muh(i - 2, 1 - a));
            axpy(en, -sgn, nuh(i - 2, 1 - a));
          }
          check_eq(acc, alg, alg.bracket(A.a_vec(i, i + 1), muh(j, a)), em,
                   "[A_i,mu_half]");
          check_eq(acc, alg, alg.bracket(A.a_vec(i, i + 1), nuh(j, a)), en,
                   "[A_i,nu_half]");
        }

        for (int p = 3; p <= n + 1; ++p)
          for (int q = p + 1; q <= n + 1; ++q)
            for (int ha = 0; ha <= 1; ++ha) {
              // The superscript on both delta terms is a+b mod 2.
              const T lead = (ha * (a + 1)) % 2 ? T(-1) : T(1);
              const int ab = (ha + a) % 2;
              Vec<T> em = zero_vec<T>(alg.dim);
              Vec<T> en = zero_vec<T>(alg.dim);
              if (q == j + 2) {
                axpy(em, lead, muh(p - 2, ab));
                axpy(en, lead, nuh(p - 2, ab));
              }
              if (p == j + 2) {
                const T s2 = (ha + 1) % 2 ? T(-1) : T(1);
                axpy(em, lead * s2, muh(q - 2, ab));
                axpy(en, lead * s2, nuh(q - 2, ab));
              }
              check_eq(acc, alg, alg.bracket(A.b_vec(ha, p, q), muh(j, a)),
                       em, "[B_pq,mu_half]");
              check_eq(acc, alg, alg.bracket(A.b_vec(ha, p, q), nuh(j, a)),
                       en, "[B_pq,nu_half]");
            }
      }
  }
  return acc.finish("hbrackets", tol);
}

/// h is spanned by the h-projections of mbar brackets.
template <typename T>
CheckReport<T> h_generated(const RankOneModel<T>& md, double tol) {
  const auto& alg = md.alg();
  std::vector<Vec<T>> hparts;
  for (std::size_t i = 0; i < md.N; ++i)
    for (std::size_t j = i + 1; j < md.N; ++j)
      if (!is_zero_vec(md.br_h[i][j])) hparts.push_back(md.br_h[i][j]);
  const std::size_t r =
      hparts.empty() ? 0 : rank(from_columns(hparts, alg.dim));
  CheckReport<T> rep;
  rep.name = "h_generated_by_mbar_brackets";
  rep.pass = r == md.h.dim();
  const long gap = static_cast<long>(md.h.dim()) - static_cast<long>(r);
  rep.residual = T(gap < 0 ? -gap : gap);
  if (!rep.pass) rep.witness = {"rank " + std::to_string(r)};
  (void)tol;
  return rep;
}

}  // namespace detail

template <typename T>
std::vector<CheckReport<T>> verify_bracket_tables_detailed(
    const RankOneModel<T>& md, double tol = 1e-9) {
  std::vector<CheckReport<T>> parts;
  parts.push_back(detail::pairing_relations(md, tol));
  if (md.kind.is_cpn())
    parts.push_back(detail::bracket_table_cpn(md, tol));
  else
    parts.push_back(detail::bracket_table_sphere(md, tol));
  parts.push_back(detail::pbrack_identities(md, tol));
  parts.push_back(detail::brack1_inclusions(md, tol));
  if (md.kind.is_cpn()) parts.push_back(detail::hbrackets_identities(md, tol));
  parts.push_back(detail::h_generated(md, tol));
  for (auto& p : parts)
    for (const auto& c : md.caveats) p.caveats.push_back(c);
  return parts;
}

template <typename T>
CheckReport<T> verify_bracket_tables(const RankOneModel<T>& md,
                                     double tol = 1e-9) {
  return combine_reports<T>("bracket_tables",
                            verify_bracket_tables_detailed(md, tol));
}

}  // namespace crosm

#endif
