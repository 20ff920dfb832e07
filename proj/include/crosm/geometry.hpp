#ifndef CROSM_GEOMETRY_HPP
#define CROSM_GEOMETRY_HPP

#include <array>
#include <map>
#include <optional>

#include "crosm/metric.hpp"
#include "crosm/report.hpp"

namespace crosm {

// ---------------------------------------------------------------------------
// Riemannian data of an invariant metric at the origin, entirely in mbar
// coordinates. Curvature follows the sign convention
//     R(U,V) = nabla_{[U,V]} - [nabla_U, nabla_V],
// under which the round sphere has positive sectional curvature
// K(u,v) = R4(u,v,u,v) / (|u|^2 |v|^2 - g(u,v)^2).
// ---------------------------------------------------------------------------

/// Symmetric bilinear map U with 2 g(U(u,v),w) = g([w,u]_m,v) + g([w,v]_m,u).
template <typename T>
struct UMap {
  std::vector<std::vector<Vec<T>>> table;  // [i][j] -> mbar coords

  Vec<T> apply(const Vec<T>& x, const Vec<T>& y) const {
    const std::size_t n = table.size();
    Vec<T> out(n, T(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == T(0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (y[j] == T(0)) continue;
        axpy(out, x[i] * y[j], table[i][j]);
      }
    }
    return out;
  }
};

/// Bilinear map alpha(u,v) = nabla_u v^tau of the Levi-Civita connection.
template <typename T>
struct ConnectionMap {
  std::vector<std::vector<Vec<T>>> table;

  Vec<T> apply(const Vec<T>& x, const Vec<T>& y) const {
    const std::size_t n = table.size();
    Vec<T> out(n, T(0));
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == T(0)) continue;
      for (std::size_t j = 0; j < n; ++j) {
        if (y[j] == T(0)) continue;
        axpy(out, x[i] * y[j], table[i][j]);
      }
    }
    return out;
  }

  /// Vector result for basis arguments.
  const Vec<T>& at(std::size_t i, std::size_t j) const { return table[i][j]; }
};

template <typename T>
struct CurvatureTensor {
  static constexpr const char* convention =
      "R(U,V) = nabla_[U,V] - [nabla_U, nabla_V]";
  std::size_t N = 0;
  std::vector<T> r4;  // covariant R(u,v,w,z) = g(R(u,v)w, z)

  const T& at(std::size_t i, std::size_t j, std::size_t k,
              std::size_t l) const {
    return r4[((i * N + j) * N + k) * N + l];
  }
  T& at(std::size_t i, std::size_t j, std::size_t k, std::size_t l) {
    return r4[((i * N + j) * N + k) * N + l];
  }
};

template <typename T>
struct RicciData {
  Mat<T> ric;  // Ric(b_i, b_j)
  Mat<T> Q;    // Ricci operator, Ric(u,v) = g(Qu, v)
  T scalar{0};
};

// ---------------------------------------------------------------------------
// U and the Levi-Civita connection
// ---------------------------------------------------------------------------

namespace detail {

/// Closed-form U table for orthogonal sphere metrics; nullopt entries of
/// the returned table mean zero. Used as a cross-check oracle.
template <typename T>
std::vector<std::vector<Vec<T>>> u_closed_form(const RankOneModel<T>& md,
                                               const BlockParams<T>& p) {
  const std::size_t N = md.mbar_dim();
  std::vector<std::vector<Vec<T>>> t(N, std::vector<Vec<T>>(N, zero_vec<T>(N)));
  auto set_sym = [&](std::size_t i, std::size_t j, const Vec<T>& v) {
    t[i][j] = v;
    t[j][i] = v;
  };
  auto unit = [&](std::size_t i, const T& c) {
    Vec<T> v(N, T(0));
    v[i] = c;
    return v;
  };
  if (!md.kind.is_cpn()) {
    for (int j = 1; j <= md.multiplicity_eps(); ++j) {
      set_sym(md.i_x(), md.i_mu_eps(j),
              unit(md.i_nu_eps(j), (p.a0 - p.a_eps) / (T(2) * p.b_eps)));
      set_sym(md.i_x(), md.i_nu_eps(j),
              unit(md.i_mu_eps(j), (p.b_eps - p.a0) / (T(2) * p.a_eps)));
      set_sym(md.i_mu_eps(j), md.i_nu_eps(j),
              unit(md.i_x(), (p.a_eps - p.b_eps) / (T(2) * p.a0)));
    }
    return t;
  }
  set_sym(md.i_x(), md.i_mu_eps(),
          unit(md.i_nu_eps(), (p.a0 - p.a_eps) / (T(2) * p.b_eps)));
  set_sym(md.i_x(), md.i_nu_eps(),
          unit(md.i_mu_eps(), (p.b_eps - p.a0) / (T(2) * p.a_eps)));
  set_sym(md.i_mu_eps(), md.i_nu_eps(),
          unit(md.i_x(), (p.a_eps - p.b_eps) / (T(2) * p.a0)));
  for (int j = 1; j <= md.kind.n - 1; ++j)
    for (int a = 0; a <= 1; ++a) {
      const T sgn = a == 0 ? T(1) : T(-1);
      set_sym(md.i_x(), md.i_mu_half(j, a),
              unit(md.i_nu_half(j, a), (p.a0 - p.a_half) / (T(4) * p.b_half)));
      set_sym(md.i_x(), md.i_nu_half(j, a),
              unit(md.i_mu_half(j, a), (p.b_half - p.a0) / (T(4) * p.a_half)));
      set_sym(md.i_mu_eps(), md.i_mu_half(j, a),
              unit(md.i_nu_half(j, 1 - a),
                   sgn * (p.a_half - p.a_eps) / (T(4) * p.b_half)));
      set_sym(md.i_mu_eps(), md.i_nu_half(j, a),
              unit(md.i_mu_half(j, 1 - a),
                   sgn * (p.b_half - p.a_eps) / (T(4) * p.a_half)));
      set_sym(md.i_nu_eps(), md.i_mu_half(j, a),
              unit(md.i_mu_half(j, 1 - a),
                   sgn * (p.b_eps - p.a_half) / (T(4) * p.a_half)));
      set_sym(md.i_nu_eps(), md.i_nu_half(j, a),
              unit(md.i_nu_half(j, 1 - a),
                   sgn * (p.b_half - p.b_eps) / (T(4) * p.b_half)));
      // U(mu^{j,a}, nu^{j,a}) = (a_half - b_half)/(4 a0) X
      set_sym(md.i_mu_half(j, a), md.i_nu_half(j, a),
              unit(md.i_x(), (p.a_half - p.b_half) / (T(4) * p.a0)));
    }
  for (int j = 1; j <= md.kind.n - 1; ++j) {
    set_sym(md.i_mu_half(j, 0), md.i_nu_half(j, 1),
            unit(md.i_mu_eps(), -(p.a_half - p.b_half) / (T(4) * p.a_eps)));
    set_sym(md.i_mu_half(j, 1), md.i_nu_half(j, 0),
            unit(md.i_mu_eps(), (p.a_half - p.b_half) / (T(4) * p.a_eps)));
  }
  return t;
}

}  // namespace detail

/// Solves the defining relation of U on every basis pair. When orthogonal
/// block parameters are available the closed-form table serves as an
/// eagerly verified oracle; a mismatch would be a convention bug.
template <typename T>
UMap<T> u_map(const InvariantMetric<T>& g) {
  const auto& md = g.md();
  const std::size_t N = md.mbar_dim();
  UMap<T> u;
  u.table.assign(N, std::vector<Vec<T>>(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i; j < N; ++j) {
      Vec<T> rhs(N, T(0));
      for (std::size_t w = 0; w < N; ++w) {
        const T val = dot(md.br_m[w][i], g.gram.col(j)) +
                      dot(md.br_m[w][j], g.gram.col(i));
        rhs[w] = val / T(2);
      }
      Vec<T> uij = g.gram_inv * rhs;
      u.table[i][j] = uij;
      u.table[j][i] = std::move(uij);
    }

  if (g.blocks && g.blocks->orthogonal()) {
    const auto oracle = detail::u_closed_form(md, *g.blocks);
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        for (std::size_t k = 0; k < N; ++k)
          if (!within_tolerance(T(u.table[i][j][k] - oracle[i][j][k]), 1e-9))
            throw internal_error("u_map: closed-form table disagrees at (" +
                                 md.mbar_labels[i] + ", " + md.mbar_labels[j] +
                                 ")");
  }
  return u;
}

/// alpha(u,v) = [u,v]_m / 2 + U(u,v); the metric-connection property
/// g(alpha(u,v),w) + g(v, alpha(u,w)) = 0 is verified on all basis triples.
template <typename T>
ConnectionMap<T> levi_civita(const InvariantMetric<T>& g) {
  const auto& md = g.md();
  const std::size_t N = md.mbar_dim();
  const UMap<T> u = u_map(g);
  ConnectionMap<T> conn;
  conn.table.assign(N, std::vector<Vec<T>>(N));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      Vec<T> a = scale(frac<T>(1, 2), md.br_m[i][j]);
      axpy(a, T(1), u.table[i][j]);
      conn.table[i][j] = std::move(a);
    }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t w = 0; w < N; ++w) {
        const T lhs = dot(conn.table[i][j], g.gram.col(w)) +
                      dot(conn.table[i][w], g.gram.col(j));
        if (!within_tolerance(lhs, 1e-9))
          throw internal_error("levi_civita: not a metric connection");
      }
  return conn;
}

// ---------------------------------------------------------------------------
// Killing criterion for invariant fields: U(u,v) must be g-orthogonal to
// the field's value at the origin for all basis pairs.
// ---------------------------------------------------------------------------

template <typename T>
CheckReport<T> killing_check(const InvariantMetric<T>& g, const Vec<T>& v,
                             double tol = 1e-9) {
  const auto& md = g.md();
  if (!is_invariant_vector(md, v))
    throw input_error("killing_check: field is not Ad(h)-invariant");
  const UMap<T> u = u_map(g);
  const Vec<T> gv = g.lower(v);
  ResidualAccum<T> acc;
  for (std::size_t i = 0; i < md.mbar_dim(); ++i)
    for (std::size_t j = i; j < md.mbar_dim(); ++j)
      acc.update(dot(u.table[i][j], gv),
                 {md.mbar_labels[i], md.mbar_labels[j]});
  return acc.finish("killing", tol);
}

// ---------------------------------------------------------------------------
// Curvature, Ricci, sectional
// ---------------------------------------------------------------------------

template <typename T>
CurvatureTensor<T> curvature(const InvariantMetric<T>& g) {
  const auto& md = g.md();
  const std::size_t N = md.mbar_dim();
  const ConnectionMap<T> conn = levi_civita(g);

  // R(b_i, b_j) b_k = [[b_i,b_j]_h, b_k] + alpha([b_i,b_j]_m, b_k)
  //                   + alpha(b_j, alpha(b_i, b_k)) - alpha(b_i, alpha(b_j, b_k))
  std::vector<Vec<T>> rvec(N * N * N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      const Mat<T>& adh = md.ad_h[i][j];
      for (std::size_t k = 0; k < N; ++k) {
        Vec<T> r = adh.col(k);
        axpy(r, T(1), conn.apply(md.br_m[i][j], unit_vec<T>(N, k)));
        axpy(r, T(1), conn.apply(unit_vec<T>(N, j), conn.at(i, k)));
        axpy(r, T(-1), conn.apply(unit_vec<T>(N, i), conn.at(j, k)));
        rvec[(i * N + j) * N + k] = r;
        rvec[(j * N + i) * N + k] = scale(T(-1), r);
      }
    }
  for (std::size_t k = 0; k < N; ++k) {
    Vec<T> z = zero_vec<T>(N);
    for (std::size_t i = 0; i < N; ++i) rvec[(i * N + i) * N + k] = z;
  }

  // First Bianchi identity at the vector level.
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      for (std::size_t k = j + 1; k < N; ++k) {
        Vec<T> s = rvec[(i * N + j) * N + k];
        axpy(s, T(1), rvec[(j * N + k) * N + i]);
        axpy(s, T(1), rvec[(k * N + i) * N + j]);
        for (const auto& c : s)
          if (!within_tolerance(c, 1e-9))
            throw internal_error("curvature: first Bianchi identity fails");
      }

  CurvatureTensor<T> R;
  R.N = N;
  R.r4.assign(N * N * N * N, T(0));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      for (std::size_t k = 0; k < N; ++k) {
        const Vec<T> low = g.lower(rvec[(i * N + j) * N + k]);
        for (std::size_t l = 0; l < N; ++l) {
          R.at(i, j, k, l) = low[l];
          R.at(j, i, k, l) = -low[l];
        }
      }

  // Antisymmetry in the last two slots comes from metric compatibility;
  // verify it rather than assume it.
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = k; l < N; ++l)
          if (!within_tolerance(T(R.at(i, j, k, l) + R.at(i, j, l, k)), 1e-9))
            throw internal_error("curvature: antisymmetry in (3,4) fails");
  return R;
}

template <typename T>
T curvature_value(const CurvatureTensor<T>& R, const Vec<T>& u, const Vec<T>& v,
                  const Vec<T>& w, const Vec<T>& z) {
  T s(0);
  const std::size_t N = R.N;
  for (std::size_t i = 0; i < N; ++i) {
    if (u[i] == T(0)) continue;
    for (std::size_t j = 0; j < N; ++j) {
      if (v[j] == T(0)) continue;
      const T uv = u[i] * v[j];
      for (std::size_t k = 0; k < N; ++k) {
        if (w[k] == T(0)) continue;
        const T uvw = uv * w[k];
        for (std::size_t l = 0; l < N; ++l) {
          if (z[l] == T(0)) continue;
          s += uvw * z[l] * R.at(i, j, k, l);
        }
      }
    }
  }
  return s;
}

/// Ricci via inverse-Gram contraction: Ric(u,v) = G^{kl} R4(u, b_k, v, b_l).
template <typename T>
RicciData<T> ricci(const InvariantMetric<T>& g) {
  const CurvatureTensor<T> R = curvature(g);
  const std::size_t N = R.N;
  RicciData<T> out;
  out.ric = Mat<T>(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i; j < N; ++j) {
      T s(0);
      for (std::size_t k = 0; k < N; ++k)
        for (std::size_t l = 0; l < N; ++l) {
          if (g.gram_inv(k, l) == T(0)) continue;
          s += g.gram_inv(k, l) * R.at(i, k, j, l);
        }
      out.ric(i, j) = s;
      out.ric(j, i) = s;
    }
  out.Q = g.gram_inv * out.ric;
  for (std::size_t i = 0; i < N; ++i) out.scalar += out.Q(i, i);
  return out;
}

/// Sectional curvature of the plane spanned by u, v.
template <typename T>
T sectional(const InvariantMetric<T>& g, const CurvatureTensor<T>& R,
            const Vec<T>& u, const Vec<T>& v) {
  const T den = g.g(u, u) * g.g(v, v) - g.g(u, v) * g.g(u, v);
  if (!usable_pivot(den))
    throw input_error("sectional: u and v are linearly dependent");
  return curvature_value(R, u, v, u, v) / den;
}

// ---------------------------------------------------------------------------
// Closed-form curvature data for the sphere family (so models):
// the nonzero components, Ricci eigenvalues and scalar curvature of the
// orthogonal metric (a0, a_eps, b_eps).
// ---------------------------------------------------------------------------

template <typename T>
using ComponentTable = std::map<std::array<std::size_t, 4>, T>;

namespace detail {

template <typename T>
void put_with_symmetries(ComponentTable<T>& table, std::size_t i,
                         std::size_t j, std::size_t k, std::size_t l,
                         const T& value) {
  const std::array<std::array<std::size_t, 4>, 8> images = {{
      {i, j, k, l},
      {j, i, k, l},
      {i, j, l, k},
      {j, i, l, k},
      {k, l, i, j},
      {l, k, i, j},
      {k, l, j, i},
      {l, k, j, i},
  }};
  const std::array<T, 8> signs = {value,  -value, -value, value,
                                  value,  -value, -value, value};
  for (std::size_t s = 0; s < 8; ++s) {
    auto it = table.find(images[s]);
    if (it != table.end()) {
      if (it->second != signs[s])
        throw internal_error("closed-form curvature table is inconsistent");
    } else {
      table[images[s]] = signs[s];
    }
  }
}

}  // namespace detail

/// All nonzero components of the sphere curvature tensor in closed form,
/// keyed by mbar indices. Components absent from the table are zero.
template <typename T>
ComponentTable<T> sphere_curvature_table(const RankOneModel<T>& md,
                                         const BlockParams<T>& p) {
  if (md.kind.is_cpn())
    throw input_error("sphere_curvature_table needs a sphere model");
  const T a0 = p.a0, ae = p.a_eps, be = p.b_eps;
  const int ne = md.multiplicity_eps();
  ComponentTable<T> t;
  const T e1 = (T(2) * be * (a0 + ae - be) + (a0 - ae) * (a0 - ae) - be * be) /
               (T(4) * be);
  const T e2 = (T(2) * ae * (a0 - ae + be) + (a0 - be) * (a0 - be) - ae * ae) /
               (T(4) * ae);
  const T e5 = (T(4) * a0 * be - (a0 - ae + be) * (a0 - ae + be)) / (T(4) * a0);
  const T gap = a0 * a0 - (ae - be) * (ae - be);
  for (int j = 1; j <= ne; ++j) {
    detail::put_with_symmetries(t, md.i_x(), md.i_mu_eps(j), md.i_x(),
                                md.i_mu_eps(j), e1);
    detail::put_with_symmetries(t, md.i_x(), md.i_nu_eps(j), md.i_x(),
                                md.i_nu_eps(j), e2);
    for (int k = 1; k <= ne; ++k) {
      if (k == j) continue;
      detail::put_with_symmetries(t, md.i_mu_eps(j), md.i_mu_eps(k),
                                  md.i_mu_eps(j), md.i_mu_eps(k), ae);
      detail::put_with_symmetries(t, md.i_nu_eps(j), md.i_nu_eps(k),
                                  md.i_nu_eps(j), md.i_nu_eps(k), be);
      detail::put_with_symmetries(t, md.i_mu_eps(j), md.i_mu_eps(k),
                                  md.i_nu_eps(j), md.i_nu_eps(k), e5);
      detail::put_with_symmetries(t, md.i_mu_eps(j), md.i_nu_eps(k),
                                  md.i_mu_eps(k), md.i_nu_eps(j),
                                  -gap / (T(4) * a0));
      // R(mu^j, nu^j, mu^k, nu^k), k != j
      detail::put_with_symmetries(
          t, md.i_mu_eps(j), md.i_nu_eps(j), md.i_mu_eps(k), md.i_nu_eps(k),
          -(T(2) * a0 * (a0 - ae - be)) / (T(4) * a0));
    }
    detail::put_with_symmetries(
        t, md.i_mu_eps(j), md.i_nu_eps(j), md.i_mu_eps(j), md.i_nu_eps(j),
        -(T(2) * a0 * (a0 - ae - be) + gap) / (T(4) * a0));
  }
  return t;
}

/// Single closed-form component; anything not in the table is zero.
template <typename T>
T sphere_curvature_closed_form(const RankOneModel<T>& md,
                               const BlockParams<T>& p,
                               std::array<std::size_t, 4> idx) {
  const auto table = sphere_curvature_table(md, p);
  const auto it = table.find(idx);
  return it == table.end() ? T(0) : it->second;
}

/// Ricci eigenvalues (rho_0 on a, rho_eps on m_eps, varrho_eps on k_eps).
template <typename T>
std::array<T, 3> sphere_ricci_eigenvalues(int n, const BlockParams<T>& p) {
  const T a0 = p.a0, ae = p.a_eps, be = p.b_eps;
  const T nn = T(n - 1);
  const T den = T(2) * a0 * ae * be;
  return {nn * (a0 * a0 - (ae - be) * (ae - be)) / den,
          (T(2) * nn * a0 * be + ae * ae - be * be - a0 * a0) / den,
          (T(2) * nn * a0 * ae - ae * ae + be * be - a0 * a0) / den};
}

template <typename T>
T sphere_scalar_curvature(int n, const BlockParams<T>& p) {
  const T a0 = p.a0, ae = p.a_eps, be = p.b_eps;
  return T(n - 1) *
         (T(2) * T(n - 1) * a0 * (ae + be) - (ae - be) * (ae - be) - a0 * a0) /
         (T(2) * a0 * ae * be);
}

/// Constant xi^S-sectional curvature when it exists: a0 / (4 a_eps^2) when
/// a_eps = b_eps, 1 / (a_eps + b_eps) when a0 = a_eps + b_eps.
template <typename T>
std::optional<T> xi_sectional_constant(const BlockParams<T>& p) {
  if (p.a_eps == p.b_eps) return p.a0 / (T(4) * p.a_eps * p.a_eps);
  if (p.a0 == p.a_eps + p.b_eps) return T(1) / (p.a_eps + p.b_eps);
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// Covariant and exterior derivatives of invariant tensors
// ---------------------------------------------------------------------------

/// Operator u -> nabla_u xi = alpha(u, xi) for an invariant field xi.
template <typename T>
Mat<T> nabla_vector(const ConnectionMap<T>& conn, const Vec<T>& xi) {
  const std::size_t N = conn.table.size();
  Mat<T> out(N, N);
  for (std::size_t i = 0; i < N; ++i)
    out.set_col(i, conn.apply(unit_vec<T>(N, i), xi));
  return out;
}

/// Matrices of (nabla_{b_i} phi) v = alpha(b_i, phi v) - phi alpha(b_i, v).
template <typename T>
std::vector<Mat<T>> nabla_endomorphism(const ConnectionMap<T>& conn,
                                       const Mat<T>& phi) {
  const std::size_t N = conn.table.size();
  std::vector<Mat<T>> out;
  out.reserve(N);
  for (std::size_t i = 0; i < N; ++i) {
    Mat<T> m(N, N);
    const Vec<T> bi = unit_vec<T>(N, i);
    for (std::size_t v = 0; v < N; ++v) {
      Vec<T> col = conn.apply(bi, phi.col(v));
      axpy(col, T(-1), phi * conn.at(i, v));
      m.set_col(v, col);
    }
    out.push_back(std::move(m));
  }
  return out;
}

/// d of an invariant 1-form eta (a covector on mbar), computed two ways:
///   2 d_eta(u,v) = (nabla_u eta) v - (nabla_v eta) u,
///   d_eta(u,v)   = -eta([u,v]_m) / 2.
/// The two must agree identically; a mismatch is a hard error.
template <typename T>
Mat<T> d_of_1form(const InvariantMetric<T>& g, const ConnectionMap<T>& conn,
                  const Vec<T>& eta, double tol = 1e-9) {
  const auto& md = g.md();
  const std::size_t N = md.mbar_dim();
  const Vec<T> xi = g.raise(eta);
  const Mat<T> nxi = nabla_vector(conn, xi);
  Mat<T> d(N, N);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      // (nabla_u eta) v = g(v, nabla_u xi)
      const T a = dot(nxi.col(i), g.gram.col(j));  // (nabla_{b_i} eta) b_j
      const T b = dot(nxi.col(j), g.gram.col(i));
      d(i, j) = (a - b) / T(2);
    }
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const T via_bracket = -dot(eta, md.br_m[i][j]) / T(2);
      if (!within_tolerance(T(d(i, j) - via_bracket), tol))
        throw internal_error(
            "d_of_1form: covariant and bracket computations disagree at (" +
            md.mbar_labels[i] + ", " + md.mbar_labels[j] + ")");
    }
  return d;
}

/// Trilinear values of d of the invariant 2-form Phi(u,v) = g(u, phi v):
/// 3 dPhi(u,v,w) = sum over cyclic permutations of (nabla_u Phi)(v,w).
template <typename T>
std::vector<T> d_of_2form(const InvariantMetric<T>& g,
                          const ConnectionMap<T>& conn, const Mat<T>& phi) {
  const std::size_t N = conn.table.size();
  const std::vector<Mat<T>> nphi = nabla_endomorphism(conn, phi);
  // (nabla_{b_i} Phi)(v, w) = g(v, (nabla_{b_i} phi) w)
  std::vector<Mat<T>> np_form;
  np_form.reserve(N);
  for (std::size_t i = 0; i < N; ++i) np_form.push_back(g.gram * nphi[i]);
  std::vector<T> d(N * N * N, T(0));
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < N; ++k)
        d[(i * N + j) * N + k] = (np_form[i](j, k) + np_form[j](k, i) +
                                  np_form[k](i, j)) /
                                 T(3);
  return d;
}

}  // namespace crosm

#endif
