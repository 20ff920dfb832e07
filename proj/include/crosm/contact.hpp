#ifndef CROSM_CONTACT_HPP
#define CROSM_CONTACT_HPP

#include "crosm/geometry.hpp"

namespace crosm {

// ---------------------------------------------------------------------------
// Almost contact structures (phi, xi, eta) on an invariant metric, and the
// decision procedures for contact / K-contact / Sasakian / 3-Sasakian /
// Einstein / cone-almost-Kaehler.
//
// build_structure derives phi from the unit invariant field xi by solving
// g(u, phi v) = d_eta(u, v); the contact condition d_eta = Phi then holds by
// construction, and contact_check decides the remaining axioms
// phi^2 = -I + eta (x) xi and g(phi u, phi v) = g(u,v) - eta(u) eta(v).
// ---------------------------------------------------------------------------

template <typename T>
struct AlmostContactStructure {
  InvariantMetric<T> metric;
  Vec<T> xi;    // mbar coordinates, unit for the metric
  Vec<T> eta;   // covector g(xi, .)
  Mat<T> phi;   // endomorphism on mbar
  Mat<T> Phi;   // fundamental 2-form Phi(u,v) = g(u, phi v)
  ConnectionMap<T> conn;
  Mat<T> d_eta;
  bool phi_from_d_eta = true;

  const RankOneModel<T>& md() const { return metric.md(); }
  std::size_t dim() const { return metric.dim(); }
};

template <typename T>
AlmostContactStructure<T> build_structure(const InvariantMetric<T>& g,
                                          const Vec<T>& xi,
                                          double tol = 1e-9) {
  if (!is_invariant_vector(g.md(), xi))
    throw input_error("build_structure: xi is not Ad(h)-invariant");
  if (!within_tolerance(T(g.g(xi, xi) - T(1)), tol))
    throw input_error("build_structure: characteristic field not unit");
  AlmostContactStructure<T> s;
  s.metric = g;
  s.xi = xi;
  s.eta = g.lower(xi);
  s.conn = levi_civita(g);
  s.d_eta = d_of_1form(g, s.conn, s.eta, tol);
  s.phi = g.gram_inv * s.d_eta;
  s.Phi = s.d_eta;
  s.phi_from_d_eta = true;
  return s;
}

/// Structure with a caller-supplied phi (used to probe cone extensions of
/// almost contact structures whose fundamental form is not d_eta).
template <typename T>
AlmostContactStructure<T> structure_with_phi(const InvariantMetric<T>& g,
                                             const Vec<T>& xi,
                                             const Mat<T>& phi,
                                             double tol = 1e-9) {
  if (!within_tolerance(T(g.g(xi, xi) - T(1)), tol))
    throw input_error("structure_with_phi: characteristic field not unit");
  AlmostContactStructure<T> s;
  s.metric = g;
  s.xi = xi;
  s.eta = g.lower(xi);
  s.conn = levi_civita(g);
  s.d_eta = d_of_1form(g, s.conn, s.eta, tol);
  s.phi = phi;
  s.Phi = g.gram * phi;
  s.phi_from_d_eta = false;
  return s;
}

// ---------------------------------------------------------------------------
// Contact and K-contact
// ---------------------------------------------------------------------------

template <typename T>
CheckReport<T> contact_check(const AlmostContactStructure<T>& s,
                             double tol = 1e-9) {
  const std::size_t N = s.dim();
  const auto& labels = s.md().mbar_labels;
  ResidualAccum<T> acc;
  // phi^2 = -I + eta (x) xi
  const Mat<T> phi2 = s.phi * s.phi;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const T expect = s.xi[i] * s.eta[j] - (i == j ? T(1) : T(0));
      acc.update(T(phi2(i, j) - expect), {"phi^2", labels[i], labels[j]});
    }
  // g(phi u, phi v) = g(u, v) - eta(u) eta(v)
  const Mat<T> comp = transpose(s.phi) * s.metric.gram * s.phi;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const T expect = s.metric.gram(i, j) - s.eta[i] * s.eta[j];
      acc.update(T(comp(i, j) - expect),
                 {"compatibility", labels[i], labels[j]});
    }
  // d_eta = Phi holds by construction when phi came from d_eta; otherwise
  // it is part of the verdict.
  if (!s.phi_from_d_eta) {
    for (std::size_t i = 0; i < N; ++i)
      for (std::size_t j = 0; j < N; ++j)
        acc.update(T(s.Phi(i, j) - s.d_eta(i, j)),
                   {"Phi-d_eta", labels[i], labels[j]});
  }
  auto rep = acc.finish("contact", tol, s.md().caveats);
  return rep;
}

namespace detail {

template <typename T>
void require_contact(const AlmostContactStructure<T>& s, double tol,
                     const char* who) {
  if (!contact_check(s, tol).pass)
    throw input_error(std::string(who) +
                      ": contact_check must pass before this check");
}

}  // namespace detail

/// K-contact: xi is Killing; additionally asserts nabla_u xi = -phi u,
/// which must follow for contact structures with Killing xi.
template <typename T>
CheckReport<T> kcontact_check(const AlmostContactStructure<T>& s,
                              double tol = 1e-9) {
  detail::require_contact(s, tol, "kcontact_check");
  CheckReport<T> killing = killing_check(s.metric, s.xi, tol);
  if (killing.pass) {
    const Mat<T> nxi = nabla_vector(s.conn, s.xi);
    const Mat<T> sum = nxi + s.phi;
    if (!within_tolerance(max_abs(sum), tol))
      throw internal_error(
          "kcontact_check: Killing xi but nabla xi != -phi (convention bug)");
  }
  killing.name = "kcontact";
  for (const auto& c : s.md().caveats) killing.caveats.push_back(c);
  return killing;
}

// ---------------------------------------------------------------------------
// Normality (Sasakian)
// ---------------------------------------------------------------------------

/// Nijenhuis-type obstruction on invariant fields:
/// N(u,v) = -[u,v]_m + [phi u, phi v]_m - phi[phi u, v]_m - phi[u, phi v]_m.
template <typename T>
std::vector<Vec<T>> nijenhuis(const AlmostContactStructure<T>& s) {
  const auto& md = s.md();
  const std::size_t N = s.dim();
  std::vector<Vec<T>> out(N * N, zero_vec<T>(N));
  for (std::size_t i = 0; i < N; ++i) {
    const Vec<T> pi = s.phi.col(i);
    for (std::size_t j = 0; j < N; ++j) {
      const Vec<T> pj = s.phi.col(j);
      Vec<T> v = scale(T(-1), md.br_m[i][j]);
      axpy(v, T(1), md.bracket_mbar(pi, pj));
      axpy(v, T(-1), s.phi * md.bracket_mbar(pi, unit_vec<T>(N, j)));
      axpy(v, T(-1), s.phi * md.bracket_mbar(unit_vec<T>(N, i), pj));
      out[i * N + j] = std::move(v);
    }
  }
  return out;
}

/// Sasakian: N vanishes. The characterization
/// (nabla_u phi) v = g(u,v) xi - eta(v) u is evaluated independently and
/// the two verdicts must agree.
template <typename T>
CheckReport<T> sasakian_check(const AlmostContactStructure<T>& s,
                              double tol = 1e-9) {
  detail::require_contact(s, tol, "sasakian_check");
  const auto& md = s.md();
  const std::size_t N = s.dim();
  const auto& labels = md.mbar_labels;

  ResidualAccum<T> n_acc;
  const auto nij = nijenhuis(s);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < N; ++k)
        n_acc.update(nij[i * N + j][k], {"N", labels[i], labels[j]});

  ResidualAccum<T> c_acc;
  const auto nphi = nabla_endomorphism(s.conn, s.phi);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      // (nabla_{b_i} phi) b_j - (g(b_i,b_j) xi - eta(b_j) b_i)
      Vec<T> lhs = nphi[i].col(j);
      axpy(lhs, -s.metric.gram(i, j), s.xi);
      lhs[i] += s.eta[j];
      for (std::size_t k = 0; k < N; ++k)
        c_acc.update(lhs[k], {"nabla_phi", labels[i], labels[j]});
    }

  CheckReport<T> n_rep = n_acc.finish("sasakian", tol, md.caveats);
  CheckReport<T> c_rep = c_acc.finish("sasakian_nabla_phi", tol);
  if (n_rep.pass != c_rep.pass)
    throw internal_error(
        "sasakian_check: Nijenhuis test and nabla-phi characterization "
        "disagree");
  if (c_rep.residual > n_rep.residual) {
    n_rep.residual = c_rep.residual;
    n_rep.witness = c_rep.witness;
  }
  return n_rep;
}

// ---------------------------------------------------------------------------
// 3-Sasakian
// ---------------------------------------------------------------------------

template <typename T>
CheckReport<T> three_sasakian_check(const InvariantMetric<T>& g,
                                    const Vec<T>& xi1, const Vec<T>& xi2,
                                    const Vec<T>& xi3, double tol = 1e-9) {
  const auto& md = g.md();
  const std::array<const Vec<T>*, 3> xs = {&xi1, &xi2, &xi3};
  ResidualAccum<T> acc;
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      acc.update(T(g.g(*xs[i], *xs[j]) - (i == j ? T(1) : T(0))),
                 {"orthonormality", std::to_string(i + 1),
                  std::to_string(j + 1)});
  // [xi_i, xi_j]_m = 2 eps_ijk xi_k
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      const int k = 3 - i - j;
      Vec<T> br = md.bracket_mbar(*xs[i], *xs[j]);
      if (i != j) {
        const T sign = (j - i + 3) % 3 == 1 ? T(2) : T(-2);
        axpy(br, -sign, *xs[k]);
      }
      for (std::size_t l = 0; l < br.size(); ++l)
        acc.update(br[l], {"su2_relations", std::to_string(i + 1),
                           std::to_string(j + 1)});
    }
  std::vector<CheckReport<T>> parts;
  parts.push_back(acc.finish("three_sasakian_frame", tol));
  for (int i = 0; i < 3; ++i) {
    const auto s = build_structure(g, *xs[i], tol);
    auto c = contact_check(s, tol);
    c.name = "contact_xi" + std::to_string(i + 1);
    parts.push_back(c);
    if (c.pass) {
      auto sas = sasakian_check(s, tol);
      sas.name = "sasakian_xi" + std::to_string(i + 1);
      parts.push_back(sas);
    }
  }
  auto rep = combine_reports<T>("three_sasakian", parts);
  for (const auto& c : md.caveats) rep.caveats.push_back(c);
  return rep;
}

// ---------------------------------------------------------------------------
// Einstein
// ---------------------------------------------------------------------------

template <typename T>
struct EinsteinReport {
  CheckReport<T> report;
  T lambda{0};  // Q(0,0); meaningful as the Einstein constant when pass
};

template <typename T>
EinsteinReport<T> einstein_check(const InvariantMetric<T>& g,
                                 double tol = 1e-9) {
  const RicciData<T> ric = ricci(g);
  const std::size_t N = g.dim();
  const auto& labels = g.md().mbar_labels;
  const T lambda = ric.Q(0, 0);
  ResidualAccum<T> acc;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      acc.update(T(ric.Q(i, j) - (i == j ? lambda : T(0))),
                 {"Q", labels[i], labels[j]});
  EinsteinReport<T> out;
  out.report = acc.finish("einstein", tol, g.md().caveats);
  out.lambda = lambda;
  return out;
}

// ---------------------------------------------------------------------------
// Cone check: at the slice r = 1 of the metric cone, the almost complex
// structure J(u, t d/dr) = (phi u - t xi, eta(u) d/dr) must satisfy
// J^2 = -I and be compatible with g + dr^2, and dF = 0 factors into
// Phi = d_eta and dPhi = 0 componentwise.
// ---------------------------------------------------------------------------

template <typename T>
CheckReport<T> cone_check(const AlmostContactStructure<T>& s,
                          double tol = 1e-9) {
  const std::size_t N = s.dim();
  const auto& labels = s.md().mbar_labels;

  // J on mbar + R d/dr.
  Mat<T> J(N + 1, N + 1);
  for (std::size_t i = 0; i < N; ++i) {
    for (std::size_t j = 0; j < N; ++j) J(i, j) = s.phi(i, j);
    J(i, N) = -s.xi[i];
    J(N, i) = s.eta[i];
  }
  Mat<T> gbar(N + 1, N + 1);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) gbar(i, j) = s.metric.gram(i, j);
  gbar(N, N) = T(1);

  auto label = [&](std::size_t i) {
    return i == N ? std::string("d/dr") : labels[i];
  };
  ResidualAccum<T> acc_j2, acc_comp, acc_deta, acc_dphi;
  const Mat<T> j2 = J * J;
  for (std::size_t i = 0; i <= N; ++i)
    for (std::size_t j = 0; j <= N; ++j)
      acc_j2.update(T(j2(i, j) + (i == j ? T(1) : T(0))),
                    {label(i), label(j)});
  const Mat<T> comp = transpose(J) * gbar * J - gbar;
  for (std::size_t i = 0; i <= N; ++i)
    for (std::size_t j = 0; j <= N; ++j)
      acc_comp.update(comp(i, j), {label(i), label(j)});

  // dF = 2r dr /\ (Phi - d_eta) + r^2 dPhi at r = 1: both parts must vanish
  // componentwise.
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      acc_deta.update(T(s.Phi(i, j) - s.d_eta(i, j)), {labels[i], labels[j]});
  const auto dphi = d_of_2form(s.metric, s.conn, s.phi);
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      for (std::size_t k = 0; k < N; ++k)
        acc_dphi.update(dphi[(i * N + j) * N + k],
                        {labels[i], labels[j], labels[k]});

  const std::vector<CheckReport<T>> parts = {
      acc_j2.finish("J^2+I", tol), acc_comp.finish("J_compatibility", tol),
      acc_deta.finish("Phi-d_eta", tol), acc_dphi.finish("dPhi", tol)};
  auto rep = combine_reports<T>("cone_almost_kaehler", parts);
  for (const auto& c : s.md().caveats) rep.caveats.push_back(c);
  return rep;
}

}  // namespace crosm

#endif
