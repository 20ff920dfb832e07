#ifndef CROSM_FAMILIES_HPP
#define CROSM_FAMILIES_HPP

#include <functional>

#include "crosm/contact.hpp"

namespace crosm {

// ---------------------------------------------------------------------------
// Constructors for every metric family of the classification, the Einstein
// solver, the orthogonal catalog, and the infinitesimal-model isomorphism
// checker.
// ---------------------------------------------------------------------------

/// A point (cos, sin) on the unit circle. Exact mode wants rational points
/// (Pythagorean fractions); float mode can come from an angle.
template <typename T>
struct UnitCirclePoint {
  T c{1}, s{0};
};

template <typename T>
UnitCirclePoint<T> circle_point(const T& c, const T& s, double tol = 1e-9) {
  if (!within_tolerance(T(c * c + s * s - T(1)), tol))
    throw input_error("circle_point: c^2 + s^2 != 1");
  return {c, s};
}

inline UnitCirclePoint<double> circle_from_angle(double radians) {
  return {std::cos(radians), std::sin(radians)};
}

/// A few exact rational points on the unit circle with both coordinates
/// nonzero, for exact-mode angle grids.
template <typename T>
std::vector<UnitCirclePoint<T>> rational_circle_points() {
  auto p = [](long long a, long long b, long long c) {
    return UnitCirclePoint<T>{frac<T>(a, c), frac<T>(b, c)};
  };
  return {p(3, 4, 5),   p(4, 3, 5),    p(-3, 4, 5),  p(3, -4, 5),
          p(-4, -3, 5), p(5, 12, 13),  p(12, 5, 13), p(-5, -12, 13),
          p(8, 15, 17), p(20, 21, 29), p(7, 24, 25), p(-20, 21, 29)};
}

template <typename T>
struct FamilyInstance {
  InvariantMetric<T> metric;
  Vec<T> xi;  // mbar coordinates, unit
  std::vector<std::string> notes;
};

namespace detail {

template <typename T>
T family_sqrt(const T& x, const char* what) {
  if (x < T(0)) throw input_error(std::string(what) + ": negative radicand");
  const auto r = scalar_sqrt(x);
  if (!r)
    throw irrational_value(std::string(what) +
                           " is irrational for these parameters; rerun in "
                           "float mode");
  return *r;
}

template <typename T>
void require_unit(const InvariantMetric<T>& g, const Vec<T>& xi,
                  const char* who, double tol) {
  if (!within_tolerance(T(g.g(xi, xi) - T(1)), tol))
    throw internal_error(std::string(who) +
                         ": constructed field is not unit (formula bug)");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Sphere family: the contact metrics with xi = +-X/kappa,
//   g = kappa^2 <.,.>_a + kappa/(2 q_eps) <.,.>_m_eps
//     + kappa q_eps/2 <.,.>_k_eps   (+ the eps/2 blocks when present).
// ---------------------------------------------------------------------------

template <typename T>
struct SphereFamilyParams {
  T kappa{1};
  T q_eps{1};
  T q_half{1};  // unused when m_half = 0
  int sign = +1;
};

template <typename T>
FamilyInstance<T> sphere_contact_family(ModelPtr<T> model,
                                        const SphereFamilyParams<T>& p,
                                        double tol = 1e-9) {
  if (!(p.kappa > T(0) && p.q_eps > T(0)))
    throw input_error("sphere_contact_family: parameters must be positive");
  if (model->kind.is_cpn())
    throw input_error("sphere_contact_family needs a sphere model");
  SphereBlocks<T> b{p.kappa * p.kappa, p.kappa / (T(2) * p.q_eps),
                    p.kappa * p.q_eps / T(2)};
  auto g = metric_from_blocks(std::move(model), b, tol);
  Vec<T> xi = zero_vec<T>(g.dim());
  xi[g.md().i_x()] = T(p.sign) / p.kappa;
  detail::require_unit(g, xi, "sphere_contact_family", tol);
  return {std::move(g), std::move(xi), {}};
}

// ---------------------------------------------------------------------------
// CP^n families (Types AI..C)
// ---------------------------------------------------------------------------

enum class CpnType { AI, AII, AIII, BI, BII, BIII, C };

inline const char* to_string(CpnType t) {
  switch (t) {
    case CpnType::AI: return "AI";
    case CpnType::AII: return "AII";
    case CpnType::AIII: return "AIII";
    case CpnType::BI: return "BI";
    case CpnType::BII: return "BII";
    case CpnType::BIII: return "BIII";
    case CpnType::C: return "C";
  }
  return "?";
}

inline CpnType cpn_type_from_string(const std::string& s) {
  for (CpnType t : {CpnType::AI, CpnType::AII, CpnType::AIII, CpnType::BI,
                    CpnType::BII, CpnType::BIII, CpnType::C})
    if (s == to_string(t)) return t;
  throw input_error("unknown CP^n family type: " + s);
}

template <typename T>
struct CpnFamilyParams {
  CpnType type = CpnType::AI;
  T kappa{1};
  T q_eps{1};
  T q_half{1};
  T alpha{0};
  UnitCirclePoint<T> theta;  // B and C types
  UnitCirclePoint<T> phi;    // C type only
  int sign = +1;             // A types only
};

namespace detail {

template <typename T>
void check_b_angle(const UnitCirclePoint<T>& t) {
  if (t.c == T(0) || t.s == T(0))
    throw input_error(
        "B/C types need theta with cos(theta) != 0 and sin(theta) != 0");
}

template <typename T>
FamilyInstance<T> make_instance(ModelPtr<T> model, const CpnBlocks<T>& blocks,
                                Vec<T> xi_coords, const char* who, double tol,
                                std::vector<std::string> notes = {}) {
  auto g = metric_from_blocks(std::move(model), blocks, tol);
  detail::require_unit(g, xi_coords, who, tol);
  return {std::move(g), std::move(xi_coords), std::move(notes)};
}

}  // namespace detail

/// Builds the contact pair(s) of the requested type. Every type yields one
/// instance except Type C, which yields one instance per positive root of
/// its quadratic (two in the generic admissible case).
template <typename T>
std::vector<FamilyInstance<T>> cpn_family(ModelPtr<T> model,
                                          const CpnFamilyParams<T>& p,
                                          double tol = 1e-9) {
  if (!model->kind.is_cpn()) throw input_error("cpn_family needs a CP^n model");
  const auto& md = *model;
  const int n = md.kind.n;
  const T k = p.kappa, qe = p.q_eps, qh = p.q_half, al = p.alpha;
  if (!(k > T(0) && qe > T(0)))
    throw input_error("cpn_family: kappa and q_eps must be positive");
  const bool has_half = n >= 2;
  if (has_half && (p.type == CpnType::AI || p.type == CpnType::AII ||
                   p.type == CpnType::BI) &&
      !(qh > T(0)))
    throw input_error("cpn_family: q_half must be positive");
  const T sgn = T(p.sign >= 0 ? 1 : -1);

  CpnBlocks<T> b{};
  Vec<T> xi = zero_vec<T>(md.mbar_dim());
  std::vector<FamilyInstance<T>> out;

  switch (p.type) {
    case CpnType::AI: {
      b = {k * k, k / (T(2) * qe), qe / (T(2) * k) * (T(4) * al * al + k * k)};
      b.c_eps = al;
      if (has_half) {
        b.a_half = k / (T(4) * qh);
        b.b_half = k * qh / T(4);
      }
      xi[md.i_x()] = sgn / k;
      out.push_back(detail::make_instance(std::move(model), b, std::move(xi),
                                          "cpn_family AI", tol));
      return out;
    }
    case CpnType::AII: {
      b = {k / (T(2) * qe), k * k, qe / (T(2) * k) * (T(4) * al * al + k * k)};
      b.b0e = al;
      if (has_half) {
        b.a_half = k / (T(4) * qh);
        b.b_half = k * qh / T(4);
      }
      xi[md.i_mu_eps()] = sgn / k;
      out.push_back(detail::make_instance(std::move(model), b, std::move(xi),
                                          "cpn_family AII", tol));
      return out;
    }
    case CpnType::AIII: {
      b = {k / (T(2) * qe), qe / (T(2) * k) * (T(4) * al * al + k * k), k * k};
      b.a0e = al;
      if (has_half) b.a_half = b.b_half = k / T(4);
      xi[md.i_nu_eps()] = sgn / k;
      out.push_back(detail::make_instance(std::move(model), b, std::move(xi),
                                          "cpn_family AIII", tol));
      return out;
    }
    case CpnType::BI: {
      detail::check_b_angle(p.theta);
      const T c = p.theta.c, s = p.theta.s;
      const T rho2 = qe * (T(1) - qe * s * s);
      if (!(rho2 > T(0)))
        throw input_error("Type BI needs q_eps in ]0, 1/sin^2(theta)[");
      const T rho = detail::family_sqrt(rho2, "Type BI varrho");
      const T sqe = detail::family_sqrt(qe, "Type BI sqrt(q_eps)");
      const T eps_c = c > T(0) ? T(1) : T(-1);
      const T c2 = c * c, s2 = s * s;
      b.a0 = k * k * rho2 / c2;
      b.a_eps = k * k * (c2 + (T(1) - qe) * (T(1) - qe) * s2) / c2;
      b.b_eps = qe * qe * (k * k * k * k * al * al * rho2 + s2 * c2) /
                (T(4) * rho2 * s2);
      b.a0e = -eps_c * k * k * rho * (T(1) - qe) * s / c2;
      b.b0e = eps_c * al * k * k * k * qe * rho / (T(2) * c);
      b.c_eps = -al * k * k * k * rho2 / (T(2) * s * c);
      if (has_half) {
        b.a_half = k * sqe / (T(4) * qh);
        b.b_half = k * sqe * qh / T(4);
      }
      xi[md.i_x()] = eps_c * rho / (qe * k);
      xi[md.i_mu_eps()] = s / k;
      out.push_back(detail::make_instance(std::move(model), b, std::move(xi),
                                          "cpn_family BI", tol));
      return out;
    }
    case CpnType::BII: {
      detail::check_b_angle(p.theta);
      const T c = p.theta.c, s = p.theta.s;
      const T tan = s / c;
      const T rho = qe * qe * c * c + T(4) * (al * al * k * k + T(1)) * s * s;
      b.a0 = T(4) * k * k * qe * qe / (rho * rho);
      b.a_eps = (rho * rho + T(16) * al * al * qe * qe * k * k * k * k * tan *
                                 tan) /
                (qe * qe * rho * rho);
      b.b_eps = k * k * (T(1) + (T(4) - rho) * (T(4) - rho) / (rho * rho) *
                                    tan * tan +
                         al * al / (qe * qe));
      b.a0e = T(8) * al * k * k * k * qe * tan / (rho * rho);
      b.b0e = T(2) * k * k * qe * (T(4) - rho) * tan / (rho * rho);
      b.c_eps = k * al / (qe * qe * rho * rho) *
                (T(4) * k * k * qe * qe * (T(4) - rho) * tan * tan - rho * rho);
      if (has_half) {
        const T sr = detail::family_sqrt(rho, "Type BII sqrt(varrho)");
        b.a_half = b.b_half = k * sr / (T(2) * rho);
      }
      xi[md.i_x()] = qe * c / (T(2) * k);
      xi[md.i_mu_eps()] = al * s;
      xi[md.i_nu_eps()] = s / k;
      out.push_back(detail::make_instance(std::move(model), b, std::move(xi),
                                          "cpn_family BII", tol));
      return out;
    }
    case CpnType::BIII: {
      detail::check_b_angle(p.theta);
      const T c = p.theta.c, s = p.theta.s;
      const T tan = s / c;
      const T rho = c * c + qe * qe * s * s;
      const T one_m_q2 = T(1) - qe * qe;
      b.a0 = qe * qe / T(4);
      b.a_eps = k * k * qe * qe / (rho * rho) *
                (T(1) + al * al * rho * rho * tan * tan);
      b.b_eps = k * k / (rho * rho) *
                (rho * rho * al * al +
                 (rho * rho + one_m_q2 * one_m_q2 * s * s * c * c));
      b.a0e = -al * k * qe * qe / T(2) * tan;
      b.b0e = al * k * qe / T(2);
      b.c_eps = -qe * k * k / (rho * rho) *
                (al * al * rho * rho * tan + one_m_q2 * s * c);
      if (has_half) {
        const T sr = detail::family_sqrt(rho, "Type BIII sqrt(varrho)");
        b.a_half = b.b_half = k * qe * sr / (T(4) * rho);
      }
      xi[md.i_mu_eps()] = c / (k * qe);
      xi[md.i_nu_eps()] = s / k;
      out.push_back(detail::make_instance(std::move(model), b, std::move(xi),
                                          "cpn_family BIII", tol));
      return out;
    }
    case CpnType::C: {
      detail::check_b_angle(p.theta);
      if (p.phi.s == T(0) || !(p.phi.c > T(0)))
        throw input_error(
            "Type C needs phi in ]-pi/2, pi/2[ with sin(phi) != 0");
      const T l1 = p.theta.c * p.phi.c;
      const T l2 = p.theta.s * p.phi.c;
      const T l3 = p.phi.s;
      const T varrho = p.phi.c * p.phi.c * (p.theta.s - qe * al * p.theta.c) *
                           (p.theta.s - qe * al * p.theta.c) +
                       T(4) * qe * qe * l3 * l3;
      // delta solves (qe l1)^2 d^2 - 2 kappa qe d + varrho = 0; admissible
      // parameters make the discriminant nonnegative.
      T disc = qe * qe * (k * k - l1 * l1 * varrho);
      if constexpr (!scalar_traits<T>::exact) {
        // boundary points compute to tiny negatives in float mode
        if (disc < 0 && disc > -1e-12) disc = 0;
      }
      if (disc < T(0))
        throw input_error(
            "Type C: no real root (needs varrho cos^2 theta cos^2 phi <= "
            "kappa^2)");
      const T sq = detail::family_sqrt(disc, "Type C root discriminant");
      std::vector<T> roots;
      const T a_coef = qe * qe * l1 * l1;
      roots.push_back((k * qe - sq) / a_coef);
      if (sq != T(0)) roots.push_back((k * qe + sq) / a_coef);
      auto build_root = [&](const T& delta) {
        if (!(delta > T(0)))
          throw input_error("Type C: root is not positive");
        const T two_kqe = T(2) * k * qe;  // kappa^2 beta, beta = 2 q_eps/kappa
        const T cot = p.phi.c / p.phi.s;
        const T g1 = cot / two_kqe *
                     ((T(1) - two_kqe * delta) * p.theta.s -
                      qe * al * p.theta.c);
        const T g2 = cot / (two_kqe * qe) *
                     (qe * al * p.theta.s +
                      (two_kqe * delta - qe * qe * (al * al + delta * delta)) *
                          p.theta.c);
        CpnBlocks<T> cb{};
        cb.a0 = qe * qe;
        cb.a_eps = (T(1) + al * al * qe * qe) / (delta * delta);
        cb.b_eps = k * k / (delta * delta) *
                   (g1 * g1 + qe * qe * g2 * g2 + delta * delta);
        cb.a0e = -al * qe * qe / delta;
        cb.b0e = k * qe * qe * g2 / delta;
        cb.c_eps = -k / (delta * delta) * (g1 + al * qe * qe * g2);
        if (has_half) {
          // a_half^2 = kappa q_eps / (8 delta) via the defining quadratic
          cb.a_half = cb.b_half =
              detail::family_sqrt(k * qe / (T(8) * delta), "Type C a_half");
        }
        Vec<T> xic = zero_vec<T>(md.mbar_dim());
        const T a31 = (al * g1 - g2) / delta;
        xic[md.i_x()] = l1 / qe + al * l2 + a31 * l3;
        xic[md.i_mu_eps()] = delta * l2 + g1 * l3;
        xic[md.i_nu_eps()] = l3 / k;
        std::vector<std::string> notes = {
            std::string("delta=") + scalar_traits<T>::str(delta)};
        return detail::make_instance(model, cb, std::move(xic), "cpn_family C",
                                     tol, std::move(notes));
      };
      std::vector<std::string> skipped;
      for (const T& delta : roots) {
        if constexpr (scalar_traits<T>::exact) {
          // A root with irrational coefficients is skipped in exact mode;
          // it is still reported, and float mode can build it.
          try {
            out.push_back(build_root(delta));
          } catch (const irrational_value&) {
            skipped.push_back("delta=" + scalar_traits<T>::str(delta) +
                              " skipped in exact mode (irrational "
                              "coefficients)");
          }
        } else {
          out.push_back(build_root(delta));
        }
      }
      if (out.empty())
        throw irrational_value(
            "Type C: all roots have irrational coefficients for these "
            "parameters; rerun in float mode");
      for (auto& inst : out)
        inst.notes.insert(inst.notes.end(), skipped.begin(), skipped.end());
      return out;
    }
  }
  throw input_error("cpn_family: unknown type");
}

// ---------------------------------------------------------------------------
// Orthogonal catalog (the seven rows of the classification table) with the
// K-contact conditions as predicates.
// ---------------------------------------------------------------------------

struct Table2Row {
  CpnType type;
  const char* xi;
  const char* a0;
  const char* a_eps;
  const char* b_eps;
  const char* a_half;
  const char* b_half;
  const char* kcontact;
};

inline const std::vector<Table2Row>& table2_rows() {
  static const std::vector<Table2Row> rows = {
      {CpnType::AI, "+-X/kappa", "kappa^2", "kappa/(2 q_eps)",
       "kappa q_eps/2", "kappa/(4 q_half)", "kappa q_half/4",
       "q_eps = q_half = 1"},
      {CpnType::AII, "+-mu_eps/kappa", "kappa/(2 q_eps)", "kappa^2",
       "kappa q_eps/2", "kappa/(4 q_half)", "kappa q_half/4",
       "q_eps = q_half = 1"},
      {CpnType::AIII, "+-nu_eps/kappa", "kappa/(2 q_eps)", "kappa q_eps/2",
       "kappa^2", "kappa/4", "kappa/4", "q_eps = 1"},
      {CpnType::BI, "(cos(theta) X + sin(theta) mu_eps)/kappa", "kappa^2",
       "kappa^2", "1/4", "kappa/(4 q_half)", "kappa q_half/4",
       "kappa = 1/2, q_half = 1"},
      {CpnType::BII, "(cos(theta) X + sin(theta) nu_eps)/kappa", "kappa^2",
       "1/4", "kappa^2", "kappa/4", "kappa/4", "kappa = 1/2"},
      {CpnType::BIII, "(cos(theta) mu_eps + sin(theta) nu_eps)/kappa", "1/4",
       "kappa^2", "kappa^2", "kappa/4", "kappa/4", "kappa = 1/2"},
      {CpnType::C,
       "2(cos(theta)cos(phi) X + sin(theta)cos(phi) mu_eps + sin(phi) nu_eps)",
       "1/4", "1/4", "1/4", "1/8", "1/8", "always"},
  };
  return rows;
}

/// Orthogonal instance of a catalog row. B/C rows pin the parameters the
/// orthogonality conditions force (q_eps = 1, 2, 1 for BI, BII, BIII;
/// kappa = q_eps = 1/2 for C, which keeps the root delta = 2).
template <typename T>
FamilyInstance<T> table2_instance(ModelPtr<T> model, CpnType type, const T& kappa,
                                  const T& q_eps, const T& q_half,
                                  const UnitCirclePoint<T>& theta,
                                  const UnitCirclePoint<T>& phi,
                                  double tol = 1e-9) {
  CpnFamilyParams<T> p;
  p.type = type;
  p.kappa = kappa;
  p.q_eps = q_eps;
  p.q_half = q_half;
  p.alpha = T(0);
  p.theta = theta;
  p.phi = phi;
  switch (type) {
    case CpnType::BI: p.q_eps = T(1); break;
    case CpnType::BII: p.q_eps = T(2); break;
    case CpnType::BIII: p.q_eps = T(1); break;
    case CpnType::C:
      p.kappa = frac<T>(1, 2);
      p.q_eps = frac<T>(1, 2);
      break;
    default: break;
  }
  auto instances = cpn_family(std::move(model), p, tol);
  for (auto& inst : instances)
    if (inst.metric.blocks && inst.metric.blocks->orthogonal()) return inst;
  throw internal_error("table2_instance: no orthogonal instance produced");
}

/// The K-contact condition of a catalog row, as a predicate on the grid
/// parameters. q_half is vacuous on CP^1 (no eps/2 block).
template <typename T>
bool table2_kcontact_condition(CpnType type, int n, const T& kappa,
                               const T& q_eps, const T& q_half) {
  const bool half_ok = n == 1 || q_half == T(1);
  switch (type) {
    case CpnType::AI:
    case CpnType::AII: return q_eps == T(1) && half_ok;
    case CpnType::AIII: return q_eps == T(1);
    case CpnType::BI: return kappa == frac<T>(1, 2) && half_ok;
    case CpnType::BII:
    case CpnType::BIII: return kappa == frac<T>(1, 2);
    case CpnType::C: return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Einstein metrics
// ---------------------------------------------------------------------------

/// The invariant Einstein metric on T_r S^n / T_r RP^n with a-block a0:
/// a_eps = b_eps = n a0 / (2(n-1)).
template <typename T>
InvariantMetric<T> einstein_solve_sphere(ModelPtr<T> model, const T& a0,
                                         double tol = 1e-9) {
  if (model->kind.is_cpn())
    throw input_error("einstein_solve_sphere needs a sphere model");
  if (!(a0 > T(0))) throw input_error("einstein_solve_sphere: a0 must be > 0");
  const int n = model->kind.n;
  const T ae = T(n) * a0 / (T(2) * T(n - 1));
  return metric_from_blocks(std::move(model), SphereBlocks<T>{a0, ae, ae}, tol);
}

/// The sphere contact-Einstein structure: kappa = (n-1)/n, q_eps = 1.
template <typename T>
FamilyInstance<T> contact_einstein_sphere(ModelPtr<T> model, double tol = 1e-9) {
  SphereFamilyParams<T> p;
  p.kappa = frac<T>(model->kind.n - 1, model->kind.n);
  p.q_eps = T(1);
  return sphere_contact_family(std::move(model), p, tol);
}

template <typename T>
struct ThreeSasakianData {
  InvariantMetric<T> metric;
  Vec<T> xi1, xi2, xi3;
};

/// The orthogonal 3-Sasakian metric (1/4, 1/4, 1/4, 1/8, 1/8) on T_r CP^n
/// with the frame (2X, 2 nu_eps, 2 mu_eps).
template <typename T>
ThreeSasakianData<T> three_sasakian_metric(ModelPtr<T> model,
                                           double tol = 1e-9) {
  if (!model->kind.is_cpn())
    throw input_error("three_sasakian_metric needs a CP^n model");
  const auto& md = *model;
  CpnBlocks<T> b{frac<T>(1, 4), frac<T>(1, 4), frac<T>(1, 4)};
  if (md.kind.n >= 2) {
    b.a_half = frac<T>(1, 8);
    b.b_half = frac<T>(1, 8);
  }
  ThreeSasakianData<T> out{metric_from_blocks(std::move(model), b, tol),
                           zero_vec<T>(md.mbar_dim()),
                           zero_vec<T>(md.mbar_dim()),
                           zero_vec<T>(md.mbar_dim())};
  out.xi1[md.i_x()] = T(2);
  out.xi2[md.i_nu_eps()] = T(2);
  out.xi3[md.i_mu_eps()] = T(2);
  return out;
}

/// The unique orthogonal Sasakian-Einstein metric on T_r CP^n (the
/// 3-Sasakian one).
template <typename T>
InvariantMetric<T> sasakian_einstein_cpn(ModelPtr<T> model, double tol = 1e-9) {
  return three_sasakian_metric(std::move(model), tol).metric;
}

// ---------------------------------------------------------------------------
// Infinitesimal models and isomorphism checking
// ---------------------------------------------------------------------------

/// Origin-level data of a homogeneous almost contact metric manifold:
/// torsion -[.,.]_m, curvature ad([.,.]_h), metric, xi and phi on mbar.
template <typename T>
struct InfinitesimalModel {
  std::size_t N = 0;
  std::vector<std::string> labels;
  Mat<T> gram;
  std::vector<std::vector<Vec<T>>> torsion;    // -br_m
  std::vector<std::vector<Mat<T>>> curvature;  // ad_h
  Vec<T> xi;
  Mat<T> phi;

  Vec<T> torsion_of(const Vec<T>& u, const Vec<T>& v) const {
    Vec<T> out(N, T(0));
    for (std::size_t i = 0; i < N; ++i) {
      if (u[i] == T(0)) continue;
      for (std::size_t j = 0; j < N; ++j) {
        if (v[j] == T(0)) continue;
        axpy(out, u[i] * v[j], torsion[i][j]);
      }
    }
    return out;
  }

  Mat<T> curvature_of(const Vec<T>& u, const Vec<T>& v) const {
    Mat<T> out(N, N);
    for (std::size_t i = 0; i < N; ++i) {
      if (u[i] == T(0)) continue;
      for (std::size_t j = 0; j < N; ++j) {
        const T c = u[i] * v[j];
        if (c == T(0)) continue;
        for (std::size_t r = 0; r < N; ++r)
          for (std::size_t s = 0; s < N; ++s)
            out(r, s) += c * curvature[i][j](r, s);
      }
    }
    return out;
  }
};

template <typename T>
InfinitesimalModel<T> infinitesimal_model(const AlmostContactStructure<T>& s) {
  const auto& md = s.md();
  InfinitesimalModel<T> im;
  im.N = md.mbar_dim();
  im.labels = md.mbar_labels;
  im.gram = s.metric.gram;
  im.torsion.assign(im.N, std::vector<Vec<T>>(im.N));
  for (std::size_t i = 0; i < im.N; ++i)
    for (std::size_t j = 0; j < im.N; ++j)
      im.torsion[i][j] = scale(T(-1), md.br_m[i][j]);
  im.curvature = md.ad_h;
  im.xi = s.xi;
  im.phi = s.phi;
  return im;
}

/// Checks that L is an isomorphism of infinitesimal models respecting the
/// almost contact structures: linear isometry, bracket equivariance,
/// curvature equivariance, L xi_src = xi_dst and L phi_src = phi_dst L.
template <typename T>
CheckReport<T> model_isomorphism_check(const Mat<T>& L,
                                       const InfinitesimalModel<T>& src,
                                       const InfinitesimalModel<T>& dst,
                                       double tol = 1e-9) {
  const std::size_t N = src.N;
  ResidualAccum<T> acc;
  const Mat<T> iso = transpose(L) * dst.gram * L - src.gram;
  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j)
      acc.update(iso(i, j), {"isometry", src.labels[i], src.labels[j]});

  for (std::size_t i = 0; i < N; ++i)
    for (std::size_t j = 0; j < N; ++j) {
      const Vec<T> li = L.col(i), lj = L.col(j);
      // (i) L T_src(u,v) = T_dst(Lu, Lv)
      const Vec<T> lhs = L * src.torsion[i][j];
      const Vec<T> rhs = dst.torsion_of(li, lj);
      for (std::size_t r = 0; r < N; ++r)
        acc.update(T(lhs[r] - rhs[r]),
                   {"torsion", src.labels[i], src.labels[j]});
      // (ii) L R_src(u,v) = R_dst(Lu, Lv) L
      const Mat<T> lhs2 = L * src.curvature[i][j];
      const Mat<T> rhs2 = dst.curvature_of(li, lj) * L;
      for (std::size_t r = 0; r < N; ++r)
        for (std::size_t c = 0; c < N; ++c)
          acc.update(T(lhs2(r, c) - rhs2(r, c)),
                     {"curvature", src.labels[i], src.labels[j]});
    }

  // (iii)
  const Vec<T> lxi = L * src.xi;
  for (std::size_t r = 0; r < N; ++r)
    acc.update(T(lxi[r] - dst.xi[r]), {"xi"});
  const Mat<T> comm = L * src.phi - dst.phi * L;
  for (std::size_t r = 0; r < N; ++r)
    for (std::size_t c = 0; c < N; ++c)
      acc.update(comm(r, c), {"phi", src.labels[r], src.labels[c]});

  return acc.finish("model_isomorphism", tol);
}

/// The explicit isometry between the Type AI and Type AII structures of the
/// same (kappa, q_eps, q_half):
///   L X = mu_eps, L mu_eps = -X, L nu_eps = nu_eps,
///   L mu^{j,a} = (-1)^a mu^{j,a+1}, L nu^{j,a} = nu^{j,a}.
template <typename T>
Mat<T> type_a_isomorphism(const RankOneModel<T>& md) {
  if (!md.kind.is_cpn())
    throw input_error("type_a_isomorphism needs a CP^n model");
  const std::size_t N = md.mbar_dim();
  Mat<T> L(N, N);
  L(md.i_mu_eps(), md.i_x()) = T(1);
  L(md.i_x(), md.i_mu_eps()) = T(-1);
  L(md.i_nu_eps(), md.i_nu_eps()) = T(1);
  for (int j = 1; j <= md.kind.n - 1; ++j)
    for (int a = 0; a <= 1; ++a) {
      L(md.i_mu_half(j, 1 - a), md.i_mu_half(j, a)) = a == 0 ? T(1) : T(-1);
      L(md.i_nu_half(j, a), md.i_nu_half(j, a)) = T(1);
    }
  return L;
}

/// Block-structured candidate isometries mapping the a block to the k_eps
/// block (between the Type AI and Type AIII structures of equal kappa).
/// Every candidate must violate the isomorphism conditions for n >= 2.
template <typename T>
std::vector<Mat<T>> a_keps_swap_candidates(const RankOneModel<T>& md) {
  if (!md.kind.is_cpn() || md.kind.n < 2)
    throw input_error("a_keps_swap_candidates needs a CP^n model with n >= 2");
  const std::size_t N = md.mbar_dim();
  std::vector<Mat<T>> out;
  for (int perm = 0; perm < 2; ++perm)
    for (int s1 = -1; s1 <= 1; s1 += 2)
      for (int s2 = -1; s2 <= 1; s2 += 2)
        for (int s3 = -1; s3 <= 1; s3 += 2)
          for (int swap_half = 0; swap_half < 2; ++swap_half)
            for (int twist = 0; twist < 2; ++twist)
              for (int h1 = -1; h1 <= 1; h1 += 2)
                for (int h2 = -1; h2 <= 1; h2 += 2) {
                  Mat<T> L(N, N);
                  L(md.i_nu_eps(), md.i_x()) = T(s1);  // L a = k_eps
                  if (perm == 0) {
                    L(md.i_x(), md.i_mu_eps()) = T(s2);      // m_eps -> a
                    L(md.i_mu_eps(), md.i_nu_eps()) = T(s3); // k_eps -> m_eps
                  } else {
                    L(md.i_mu_eps(), md.i_mu_eps()) = T(s2);
                    L(md.i_x(), md.i_nu_eps()) = T(s3);
                  }
                  for (int j = 1; j <= md.kind.n - 1; ++j)
                    for (int a = 0; a <= 1; ++a) {
                      const int ta = twist ? 1 - a : a;
                      const T tsgn =
                          twist ? (a == 0 ? T(1) : T(-1)) : T(1);
                      if (swap_half == 0) {
                        L(md.i_mu_half(j, ta), md.i_mu_half(j, a)) =
                            T(h1) * tsgn;
                        L(md.i_nu_half(j, ta), md.i_nu_half(j, a)) =
                            T(h2) * tsgn;
                      } else {
                        L(md.i_nu_half(j, ta), md.i_mu_half(j, a)) =
                            T(h1) * tsgn;
                        L(md.i_mu_half(j, ta), md.i_nu_half(j, a)) =
                            T(h2) * tsgn;
                      }
                    }
                  out.push_back(std::move(L));
                }
  return out;
}

}  // namespace crosm

#endif
