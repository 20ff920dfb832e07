#ifndef CROSM_METRIC_HPP
#define CROSM_METRIC_HPP

#include <optional>
#include <string>

#include "crosm/models.hpp"

namespace crosm {

// ---------------------------------------------------------------------------
// Invariant metrics on G/H. Orthogonal metrics are given by positive block
// coefficients (a0, a_eps, b_eps, a_half, b_half); on CP^n the nbar block
// (X, mu_eps, nu_eps) may additionally carry the cross terms a0e, b0e,
// c_eps. All other off-diagonal blocks vanish by Ad(H)-invariance.
// ---------------------------------------------------------------------------

template <typename T>
struct BlockParams {
  T a0{0}, a_eps{0}, b_eps{0};
  T a_half{0}, b_half{0};
  T a0e{0}, b0e{0}, c_eps{0};  // nbar cross terms, CP^n only

  bool orthogonal() const { return a0e == T(0) && b0e == T(0) && c_eps == T(0); }
};

template <typename T>
struct SphereBlocks {
  T a0, a_eps, b_eps;
};

template <typename T>
struct CpnBlocks {
  T a0, a_eps, b_eps;
  T a_half{0}, b_half{0};
  T a0e{0}, b0e{0}, c_eps{0};
};

template <typename T>
struct InvariantMetric {
  ModelPtr<T> model;
  Mat<T> gram;
  Mat<T> gram_inv;
  std::optional<BlockParams<T>> blocks;

  const RankOneModel<T>& md() const { return *model; }
  std::size_t dim() const { return gram.rows(); }

  T g(const Vec<T>& u, const Vec<T>& v) const { return dot(u, gram, v); }
  Vec<T> lower(const Vec<T>& u) const { return gram * u; }   // covector of u
  Vec<T> raise(const Vec<T>& eta) const { return gram_inv * eta; }
};

// ---------------------------------------------------------------------------
// Constructors
// ---------------------------------------------------------------------------

/// Metric from an explicit Gram matrix on the mbar basis. Checks symmetry,
/// positive definiteness (exact leading minors / float Cholesky) and
/// Ad(h)-invariance, and rejects off-diagonal entries outside the nbar
/// block.
template <typename T>
InvariantMetric<T> metric_from_gram(ModelPtr<T> model, Mat<T> gram,
                                    double tol = 1e-9) {
  const auto& md = *model;
  const std::size_t N = md.mbar_dim();
  if (gram.rows() != N || gram.cols() != N)
    throw input_error("metric: Gram matrix has the wrong size");
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j)
      if (!within_tolerance(T(gram(i, j) - gram(j, i)), tol))
        throw input_error("metric: Gram matrix is not symmetric");

  // Block pattern: everything off-diagonal vanishes except the nbar block
  // (and that one only on CP^n).
  const std::size_t nbar_dim = md.nbar.dim();
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = i + 1; j < N; ++j) {
      const bool in_nbar = md.kind.is_cpn() && i < nbar_dim && j < nbar_dim;
      if (!in_nbar && !within_tolerance(gram(i, j), tol))
        throw input_error("metric: off-diagonal entry outside the nbar block ("
                          + md.mbar_labels[i] + ", " + md.mbar_labels[j] + ")");
    }

  if (const std::size_t k = spd_failure(gram))
    throw input_error("metric: not positive definite (leading minor " +
                      std::to_string(k) + ")");

  // Ad(h)-invariance: ad(w)^T G + G ad(w) = 0 for every h basis vector.
  for (const auto& w : md.h.basis) {
    const Mat<T> adw = md.ad_on_mbar(w);
    const Mat<T> lhs = transpose(adw) * gram + gram * adw;
    if (!within_tolerance(max_abs(lhs), tol))
      throw input_error("metric: Gram matrix is not Ad(h)-invariant");
  }

  InvariantMetric<T> g;
  g.model = std::move(model);
  g.gram_inv = inverse(gram);
  g.gram = std::move(gram);
  return g;
}

template <typename T>
InvariantMetric<T> metric_from_blocks(ModelPtr<T> model,
                                      const SphereBlocks<T>& b,
                                      double tol = 1e-9) {
  const auto& md = *model;
  if (md.kind.is_cpn())
    throw input_error("sphere blocks passed for a CP^n model");
  if (!(b.a0 > T(0) && b.a_eps > T(0) && b.b_eps > T(0)))
    throw input_error("metric blocks must be positive");
  const std::size_t N = md.mbar_dim();
  Mat<T> gram(N, N);
  gram(md.i_x(), md.i_x()) = b.a0;
  for (int j = 1; j <= md.multiplicity_eps(); ++j) {
    gram(md.i_mu_eps(j), md.i_mu_eps(j)) = b.a_eps;
    gram(md.i_nu_eps(j), md.i_nu_eps(j)) = b.b_eps;
  }
  auto g = metric_from_gram(std::move(model), std::move(gram), tol);
  BlockParams<T> p;
  p.a0 = b.a0;
  p.a_eps = b.a_eps;
  p.b_eps = b.b_eps;
  g.blocks = p;
  return g;
}

template <typename T>
InvariantMetric<T> metric_from_blocks(ModelPtr<T> model, const CpnBlocks<T>& b,
                                      double tol = 1e-9) {
  const auto& md = *model;
  if (!md.kind.is_cpn())
    throw input_error("CP^n blocks passed for a sphere model");
  if (!(b.a0 > T(0) && b.a_eps > T(0) && b.b_eps > T(0)))
    throw input_error("metric blocks must be positive");
  if (md.multiplicity_half() > 0 && !(b.a_half > T(0) && b.b_half > T(0)))
    throw input_error("metric blocks must be positive");
  const std::size_t N = md.mbar_dim();
  Mat<T> gram(N, N);
  gram(md.i_x(), md.i_x()) = b.a0;
  gram(md.i_mu_eps(), md.i_mu_eps()) = b.a_eps;
  gram(md.i_nu_eps(), md.i_nu_eps()) = b.b_eps;
  gram(md.i_x(), md.i_mu_eps()) = gram(md.i_mu_eps(), md.i_x()) = b.a0e;
  gram(md.i_x(), md.i_nu_eps()) = gram(md.i_nu_eps(), md.i_x()) = b.b0e;
  gram(md.i_mu_eps(), md.i_nu_eps()) = gram(md.i_nu_eps(), md.i_mu_eps()) =
      b.c_eps;
  for (int j = 1; j <= md.kind.n - 1; ++j)
    for (int a = 0; a <= 1; ++a) {
      gram(md.i_mu_half(j, a), md.i_mu_half(j, a)) = b.a_half;
      gram(md.i_nu_half(j, a), md.i_nu_half(j, a)) = b.b_half;
    }
  auto g = metric_from_gram(std::move(model), std::move(gram), tol);
  BlockParams<T> p;
  p.a0 = b.a0;
  p.a_eps = b.a_eps;
  p.b_eps = b.b_eps;
  p.a_half = b.a_half;
  p.b_half = b.b_half;
  p.a0e = b.a0e;
  p.b0e = b.b0e;
  p.c_eps = b.c_eps;
  g.blocks = p;
  return g;
}

/// Induced metric of the Sasaki metric on the radius-r tangent sphere
/// bundle: blocks (1, 1, r^2) for S^n / RP^n and (1, 1, r^2, 1, r^2/4)
/// for CP^n.
template <typename T>
InvariantMetric<T> sasaki_induced_metric(ModelPtr<T> model, const T& r,
                                         double tol = 1e-9) {
  if (!(r > T(0))) throw input_error("sasaki_induced_metric: r must be > 0");
  const T r2 = r * r;
  if (model->kind.is_cpn()) {
    CpnBlocks<T> b{T(1), T(1), r2};
    b.a_half = T(1);
    b.b_half = r2 / T(4);
    return metric_from_blocks(std::move(model), b, tol);
  }
  return metric_from_blocks(std::move(model), SphereBlocks<T>{T(1), T(1), r2},
                            tol);
}

/// The metric c * g (c > 0).
template <typename T>
InvariantMetric<T> scaled_metric(const InvariantMetric<T>& g, const T& c) {
  if (!(c > T(0))) throw input_error("scaled_metric: factor must be > 0");
  InvariantMetric<T> out;
  out.model = g.model;
  out.gram = c * g.gram;
  out.gram_inv = (T(1) / c) * g.gram_inv;
  if (g.blocks) {
    BlockParams<T> p = *g.blocks;
    p.a0 = c * p.a0;
    p.a_eps = c * p.a_eps;
    p.b_eps = c * p.b_eps;
    p.a_half = c * p.a_half;
    p.b_half = c * p.b_half;
    p.a0e = c * p.a0e;
    p.b0e = c * p.b0e;
    p.c_eps = c * p.c_eps;
    out.blocks = p;
  }
  return out;
}

}  // namespace crosm

#endif
