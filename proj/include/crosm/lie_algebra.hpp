#ifndef CROSM_LIE_ALGEBRA_HPP
#define CROSM_LIE_ALGEBRA_HPP

#include <map>
#include <string>
#include <utility>
#include <vector>

#include "crosm/linalg.hpp"
#include "crosm/report.hpp"

namespace crosm {

// ---------------------------------------------------------------------------
// LieAlgebraData: a compact Lie algebra given by labeled basis, sparse
// structure constants and an invariant inner product.
//
// Structure constants are stored only for i < j; the i > j entry is derived
// by antisymmetry, so the table cannot become inconsistent.
// ---------------------------------------------------------------------------

template <typename T>
struct LieAlgebraData {
  std::size_t dim = 0;
  std::vector<std::string> basis_labels;
  /// (i,j) with i<j  ->  list of (k, c) with [e_i, e_j] = sum_k c e_k
  std::map<std::pair<std::size_t, std::size_t>,
           std::vector<std::pair<std::size_t, T>>>
      structure;
  /// Gram matrix of the Ad-invariant inner product on the basis.
  Mat<T> form;

  const std::vector<std::pair<std::size_t, T>>* table_entry(
      std::size_t i, std::size_t j) const {
    auto it = structure.find({i, j});
    return it == structure.end() ? nullptr : &it->second;
  }

  /// [e_i, e_j] as a dense coefficient vector.
  Vec<T> bracket_basis(std::size_t i, std::size_t j) const {
    Vec<T> out(dim, T(0));
    if (i == j) return out;
    const bool flip = i > j;
    if (flip) std::swap(i, j);
    if (const auto* e = table_entry(i, j))
      for (const auto& [k, c] : *e) out[k] += flip ? -c : c;
    return out;
  }

  /// [x, y] for arbitrary coefficient vectors.
  Vec<T> bracket(const Vec<T>& x, const Vec<T>& y) const {
    if (x.size() != dim || y.size() != dim)
      throw input_error("bracket: coefficient vector has the wrong dimension");
    Vec<T> out(dim, T(0));
    for (const auto& [ij, terms] : structure) {
      const auto [i, j] = ij;
      const T coeff = x[i] * y[j] - x[j] * y[i];
      if (coeff == T(0)) continue;
      for (const auto& [k, c] : terms) out[k] += coeff * c;
    }
    return out;
  }

  /// Matrix of ad(x): y -> [x, y] in the fixed basis.
  Mat<T> ad(const Vec<T>& x) const {
    if (x.size() != dim)
      throw input_error("ad: coefficient vector has the wrong dimension");
    Mat<T> m(dim, dim);
    for (std::size_t j = 0; j < dim; ++j) {
      Vec<T> col(dim, T(0));
      for (std::size_t i = 0; i < dim; ++i) {
        if (x[i] == T(0) || i == j) continue;
        const Vec<T> br = bracket_basis(i, j);
        axpy(col, x[i], br);
      }
      m.set_col(j, col);
    }
    return m;
  }

  T inner(const Vec<T>& x, const Vec<T>& y) const { return dot(x, form, y); }
};

// ---------------------------------------------------------------------------
// Subspace: a list of linearly independent coefficient vectors in a fixed
// ambient algebra. Pure value type; operations take the algebra explicitly.
// ---------------------------------------------------------------------------

template <typename T>
struct Subspace {
  std::size_t ambient_dim = 0;
  std::vector<Vec<T>> basis;

  std::size_t dim() const { return basis.size(); }
  Mat<T> basis_matrix() const { return from_columns(basis, ambient_dim); }
};

template <typename T>
Subspace<T> make_subspace(std::size_t ambient_dim, std::vector<Vec<T>> basis) {
  Subspace<T> s{ambient_dim, std::move(basis)};
  if (!s.basis.empty() && rank(s.basis_matrix()) != s.basis.size())
    throw input_error("subspace basis is linearly dependent");
  return s;
}

template <typename T>
Subspace<T> span_of_algebra(const LieAlgebraData<T>& alg) {
  std::vector<Vec<T>> basis;
  for (std::size_t i = 0; i < alg.dim; ++i)
    basis.push_back(unit_vec<T>(alg.dim, i));
  return Subspace<T>{alg.dim, std::move(basis)};
}

// ---------------------------------------------------------------------------
// Operations
// ---------------------------------------------------------------------------

/// Kernel of (ad(x)^2 - lambda) restricted to the domain, as a subspace of
/// the ambient algebra. The domain must be ad(x)^2-invariant, which holds
/// for every use in this library; the kernel is computed in domain
/// coordinates by exact elimination (lowest index pivot first).
template <typename T>
Subspace<T> eigenspace_of_ad_squared(const LieAlgebraData<T>& alg,
                                     const Vec<T>& x, const T& lambda,
                                     const Subspace<T>& domain) {
  const Mat<T> adx = alg.ad(x);
  const Mat<T> ad2 = adx * adx;
  const Mat<T> b = domain.basis_matrix();
  Mat<T> sys = ad2 * b;
  for (std::size_t i = 0; i < sys.rows(); ++i)
    for (std::size_t j = 0; j < sys.cols(); ++j) sys(i, j) -= lambda * b(i, j);
  std::vector<Vec<T>> coeff = kernel_basis(std::move(sys));
  std::vector<Vec<T>> vectors;
  vectors.reserve(coeff.size());
  for (const auto& c : coeff) vectors.push_back(b * c);
  return Subspace<T>{alg.dim, std::move(vectors)};
}

/// Joint kernel of ad(w) on the domain over all w in the given subspace.
template <typename T>
Subspace<T> joint_centralizer(const LieAlgebraData<T>& alg,
                              const Subspace<T>& of, const Subspace<T>& domain) {
  const Mat<T> b = domain.basis_matrix();
  Mat<T> sys(alg.dim * of.dim(), domain.dim());
  for (std::size_t w = 0; w < of.dim(); ++w) {
    const Mat<T> block = alg.ad(of.basis[w]) * b;
    for (std::size_t i = 0; i < alg.dim; ++i)
      for (std::size_t j = 0; j < domain.dim(); ++j)
        sys(w * alg.dim + i, j) = block(i, j);
  }
  std::vector<Vec<T>> coeff = kernel_basis(std::move(sys));
  std::vector<Vec<T>> vectors;
  for (const auto& c : coeff) vectors.push_back(b * c);
  return Subspace<T>{alg.dim, std::move(vectors)};
}

/// Orthogonal complement of s inside `within` with respect to the algebra's
/// invariant form.
template <typename T>
Subspace<T> orthogonal_complement(const LieAlgebraData<T>& alg,
                                  const Subspace<T>& s,
                                  const Subspace<T>& within) {
  if (spd_failure(alg.form) != 0)
    throw input_error("orthogonal_complement: degenerate Gram matrix");
  Mat<T> sys(s.dim(), within.dim());
  for (std::size_t i = 0; i < s.dim(); ++i)
    for (std::size_t j = 0; j < within.dim(); ++j)
      sys(i, j) = alg.inner(s.basis[i], within.basis[j]);
  std::vector<Vec<T>> coeff = kernel_basis(std::move(sys));
  std::vector<Vec<T>> vectors;
  const Mat<T> b = within.basis_matrix();
  for (const auto& c : coeff) vectors.push_back(b * c);
  return Subspace<T>{alg.dim, std::move(vectors)};
}

/// Orthogonal projection of v onto s.
template <typename T>
Vec<T> project(const LieAlgebraData<T>& alg, const Vec<T>& v,
               const Subspace<T>& s) {
  if (s.dim() == 0) return zero_vec<T>(alg.dim);
  Mat<T> gram(s.dim(), s.dim());
  Vec<T> rhs(s.dim(), T(0));
  for (std::size_t i = 0; i < s.dim(); ++i) {
    rhs[i] = alg.inner(s.basis[i], v);
    for (std::size_t j = 0; j < s.dim(); ++j)
      gram(i, j) = alg.inner(s.basis[i], s.basis[j]);
  }
  const auto c = solve(std::move(gram), std::move(rhs));
  if (!c) throw input_error("project: degenerate Gram matrix on subspace");
  return s.basis_matrix() * *c;
}

// ---------------------------------------------------------------------------
// Validity checks
// ---------------------------------------------------------------------------

/// Jacobi identity over every basis triple.
template <typename T>
CheckReport<T> jacobi_check(const LieAlgebraData<T>& alg, double tol = 1e-9) {
  ResidualAccum<T> acc;
  for (std::size_t i = 0; i < alg.dim; ++i)
    for (std::size_t j = i + 1; j < alg.dim; ++j) {
      const Vec<T> bij = alg.bracket_basis(i, j);
      for (std::size_t k = j + 1; k < alg.dim; ++k) {
        Vec<T> s = alg.bracket(bij, unit_vec<T>(alg.dim, k));
        axpy(s, T(1),
             alg.bracket(alg.bracket_basis(j, k), unit_vec<T>(alg.dim, i)));
        axpy(s, T(1),
             alg.bracket(alg.bracket_basis(k, i), unit_vec<T>(alg.dim, j)));
        for (std::size_t l = 0; l < alg.dim; ++l)
          acc.update(s[l], {alg.basis_labels[i], alg.basis_labels[j],
                            alg.basis_labels[k]});
      }
    }
  return acc.finish("jacobi", tol);
}

/// ad-invariance of the form: <[x,y],z> + <y,[x,z]> = 0 over basis triples.
template <typename T>
CheckReport<T> invariance_check(const LieAlgebraData<T>& alg,
                                double tol = 1e-9) {
  ResidualAccum<T> acc;
  std::vector<Vec<T>> form_rows;
  for (std::size_t i = 0; i < alg.dim; ++i) form_rows.push_back(alg.form.row(i));
  for (std::size_t x = 0; x < alg.dim; ++x)
    for (std::size_t y = 0; y < alg.dim; ++y) {
      const Vec<T> bxy = alg.bracket_basis(x, y);
      for (std::size_t z = y; z < alg.dim; ++z) {
        const T lhs = dot(bxy, form_rows[z]) +
                      dot(alg.bracket_basis(x, z), form_rows[y]);
        acc.update(lhs, {alg.basis_labels[x], alg.basis_labels[y],
                         alg.basis_labels[z]});
      }
    }
  return acc.finish("ad_invariance", tol);
}

}  // namespace crosm

#endif
