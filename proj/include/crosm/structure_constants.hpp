#ifndef CROSM_STRUCTURE_CONSTANTS_HPP
#define CROSM_STRUCTURE_CONSTANTS_HPP

#include <array>
#include <map>
#include <string>
#include <vector>

#include "crosm/lie_algebra.hpp"

namespace crosm {

// ---------------------------------------------------------------------------
// so(m) on the basis B0_jk = E_jk - E_kj (1 <= j < k <= m), with the trace
// form <A,B> = -1/2 tr(AB), which makes the basis orthonormal.
//
// su(m) on the basis A_i = i(E_ii - E_{i+1,i+1}) (1 <= i < m) together with
// B0_jk = E_jk - E_kj and B1_jk = i(E_jk + E_kj) (1 <= j < k <= m), with the
// trace form <U,V> = -2 tr(UV). Both algebras are built purely from the
// bracket table of these symbols; no complex matrix arithmetic is involved,
// so every structure constant is a (small) exact rational.
// ---------------------------------------------------------------------------

namespace detail {

/// Accumulator for bracket results over the symbols B^a_pq and the formal
/// diagonals D_p = i E_pp. Diagonals only show up in intermediate terms of
/// su brackets and are expanded into the A basis at the end.
template <typename T>
struct SymbolCombo {
  // key: (parity a, p, q) with p < q
  std::map<std::array<int, 3>, T> b_terms;
  std::vector<T> diag;  // coefficient of D_p at index p-1

  explicit SymbolCombo(int m) : diag(m, T(0)) {}

  /// Adds c * B^a_pq, normalizing index order and absorbing diagonals:
  /// B0_pp = 0, B1_pp = 2 D_p, B0_qp = -B0_pq, B1_qp = B1_pq.
  void add_b(int a, int p, int q, const T& c) {
    if (c == T(0)) return;
    if (p == q) {
      if (a == 1) diag[p - 1] += T(2) * c;
      return;
    }
    T coeff = c;
    if (p > q) {
      std::swap(p, q);
      if (a == 0) coeff = -coeff;
    }
    b_terms[{a, p, q}] += coeff;
  }
};

/// [B^a_rs, B^b_tu] for a <= b; the a > b case goes through antisymmetry.
template <typename T>
void bracket_bb(SymbolCombo<T>& out, int a, int r, int s, int b, int t, int u,
                const T& c) {
  if (a > b) {
    bracket_bb(out, b, t, u, a, r, s, -c);
    return;
  }
  const int ab = (a + b) % 2;
  const T one(1);
  if (r == t) out.add_b(ab, s, u, -c);
  if (r == u) out.add_b(ab, s, t, (b % 2 ? -one : one) * c);
  if (s == t) out.add_b(ab, r, u, (a % 2 ? -one : one) * c);
  if (s == u) out.add_b(ab, r, t, ((a + b + 1) % 2 ? -one : one) * c);
}

/// [D_p, B^a_kl] with k < l.
template <typename T>
void bracket_db(SymbolCombo<T>& out, int p, int a, int k, int l, const T& c) {
  if (a == 0) {
    if (p == k) out.add_b(1, p, l, c);
    if (p == l) out.add_b(1, p, k, -c);
  } else {
    if (p == k) out.add_b(0, p, l, -c);
    if (p == l) out.add_b(0, p, k, -c);
  }
}

}  // namespace detail

// ---------------------------------------------------------------------------
// so(m)
// ---------------------------------------------------------------------------

template <typename T>
struct SoAlgebra {
  int m = 0;
  LieAlgebraData<T> data;

  std::size_t index_b0(int j, int k) const {  // 1-based, j < k
    return static_cast<std::size_t>((j - 1) * m - j * (j + 1) / 2 + k - 1);
  }

  /// Basis vector of B0_jk for arbitrary index order (0 when j == k).
  Vec<T> b0(int j, int k) const {
    Vec<T> v(data.dim, T(0));
    if (j == k) return v;
    if (j < k)
      v[index_b0(j, k)] = T(1);
    else
      v[index_b0(k, j)] = T(-1);
    return v;
  }
};

template <typename T>
SoAlgebra<T> build_so_algebra(int m) {
  if (m < 2) throw input_error("so(m) needs m >= 2");
  SoAlgebra<T> alg;
  alg.m = m;
  auto& d = alg.data;
  d.dim = static_cast<std::size_t>(m * (m - 1) / 2);
  std::vector<std::array<int, 2>> pairs;
  for (int j = 1; j <= m; ++j)
    for (int k = j + 1; k <= m; ++k) {
      pairs.push_back({j, k});
      d.basis_labels.push_back("B0_" + std::to_string(j) + "_" +
                               std::to_string(k));
    }

  for (std::size_t i = 0; i < d.dim; ++i)
    for (std::size_t j = i + 1; j < d.dim; ++j) {
      detail::SymbolCombo<T> combo(m);
      detail::bracket_bb(combo, 0, pairs[i][0], pairs[i][1], 0, pairs[j][0],
                         pairs[j][1], T(1));
      std::vector<std::pair<std::size_t, T>> entry;
      for (const auto& [sym, c] : combo.b_terms) {
        if (c == T(0)) continue;
        entry.emplace_back(alg.index_b0(sym[1], sym[2]), c);
      }
      if (!entry.empty()) d.structure[{i, j}] = std::move(entry);
    }

  d.form = Mat<T>::identity(d.dim);  // <A,B> = -1/2 tr(AB)
  return alg;
}

// ---------------------------------------------------------------------------
// su(m)
// ---------------------------------------------------------------------------

template <typename T>
struct SuAlgebra {
  int m = 0;
  LieAlgebraData<T> data;

  std::size_t index_a(int i) const {  // A_{i,i+1}, 1 <= i < m
    return static_cast<std::size_t>(i - 1);
  }
  std::size_t index_b(int a, int j, int k) const {  // j < k
    const std::size_t npairs = static_cast<std::size_t>(m * (m - 1) / 2);
    const std::size_t pair =
        static_cast<std::size_t>((j - 1) * m - j * (j + 1) / 2 + k - 1);
    return static_cast<std::size_t>(m - 1) + a * npairs + pair;
  }

  /// A_jk = i(E_jj - E_kk) expanded in the A_{i,i+1} basis (0 when j == k).
  Vec<T> a_vec(int j, int k) const {
    Vec<T> v(data.dim, T(0));
    if (j == k) return v;
    const T sign = j < k ? T(1) : T(-1);
    const int lo = std::min(j, k), hi = std::max(j, k);
    for (int i = lo; i < hi; ++i) v[index_a(i)] += sign;
    return v;
  }

  Vec<T> b_vec(int a, int j, int k) const {
    Vec<T> v(data.dim, T(0));
    if (j == k) return v;
    if (j < k)
      v[index_b(a, j, k)] = T(1);
    else
      v[index_b(a, k, j)] = a == 0 ? T(-1) : T(1);
    return v;
  }
};

template <typename T>
SuAlgebra<T> build_su_algebra(int m) {
  if (m < 2) throw input_error("su(m) needs m >= 2");
  SuAlgebra<T> alg;
  alg.m = m;
  auto& d = alg.data;
  const std::size_t npairs = static_cast<std::size_t>(m * (m - 1) / 2);
  d.dim = static_cast<std::size_t>(m - 1) + 2 * npairs;

  // Basis enumeration: A_{i,i+1}, then B0 pairs, then B1 pairs, lex order.
  struct Sym {
    int kind;  // 0 = A_{i,i+1}, 1 = B^a_jk
    int a, j, k;
  };
  std::vector<Sym> syms;
  for (int i = 1; i < m; ++i) {
    syms.push_back({0, 0, i, i + 1});
    d.basis_labels.push_back("A_" + std::to_string(i) + "_" +
                             std::to_string(i + 1));
  }
  for (int a = 0; a <= 1; ++a)
    for (int j = 1; j <= m; ++j)
      for (int k = j + 1; k <= m; ++k) {
        syms.push_back({1, a, j, k});
        d.basis_labels.push_back("B" + std::to_string(a) + "_" +
                                 std::to_string(j) + "_" + std::to_string(k));
      }

  auto bracket_syms = [&](const Sym& x, const Sym& y) {
    detail::SymbolCombo<T> combo(m);
    if (x.kind == 0 && y.kind == 0) return combo;
    if (x.kind == 0 && y.kind == 1) {
      // A_{j,j+1} = D_j - D_{j+1}
      detail::bracket_db(combo, x.j, y.a, y.j, y.k, T(1));
      detail::bracket_db(combo, x.j + 1, y.a, y.j, y.k, T(-1));
    } else if (x.kind == 1 && y.kind == 0) {
      detail::bracket_db(combo, y.j, x.a, x.j, x.k, T(-1));
      detail::bracket_db(combo, y.j + 1, x.a, x.j, x.k, T(1));
    } else {
      detail::bracket_bb(combo, x.a, x.j, x.k, y.a, y.j, y.k, T(1));
    }
    return combo;
  };

  for (std::size_t i = 0; i < d.dim; ++i)
    for (std::size_t j = i + 1; j < d.dim; ++j) {
      detail::SymbolCombo<T> combo = bracket_syms(syms[i], syms[j]);
      Vec<T> out(d.dim, T(0));
      for (const auto& [sym, c] : combo.b_terms) {
        if (c == T(0)) continue;
        out[alg.index_b(sym[0], sym[1], sym[2])] += c;
      }
      // Expand the traceless diagonal part into the A basis via partial
      // sums: sum_p c_p D_p = sum_i (c_1 + ... + c_i) A_{i,i+1}.
      T total(0);
      for (const auto& c : combo.diag) total += c;
      if (total != T(0))
        throw internal_error("su bracket produced a non-traceless diagonal");
      T partial(0);
      for (int p = 1; p < m; ++p) {
        partial += combo.diag[p - 1];
        out[alg.index_a(p)] += partial;
      }
      std::vector<std::pair<std::size_t, T>> entry;
      for (std::size_t k = 0; k < d.dim; ++k)
        if (out[k] != T(0)) entry.emplace_back(k, out[k]);
      if (!entry.empty()) d.structure[{i, j}] = std::move(entry);
    }

  // Gram matrix of <U,V> = -2 tr(UV): the A chain is tridiagonal
  // (4 on the diagonal, -2 between neighbours), each B^a_jk has norm 4,
  // and all other products vanish.
  d.form = Mat<T>(d.dim, d.dim);
  for (int i = 1; i < m; ++i) {
    d.form(alg.index_a(i), alg.index_a(i)) = T(4);
    if (i + 1 < m) {
      d.form(alg.index_a(i), alg.index_a(i + 1)) = T(-2);
      d.form(alg.index_a(i + 1), alg.index_a(i)) = T(-2);
    }
  }
  for (std::size_t b = static_cast<std::size_t>(m - 1); b < d.dim; ++b)
    d.form(b, b) = T(4);
  return alg;
}

}  // namespace crosm

#endif
