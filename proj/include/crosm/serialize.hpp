#ifndef CROSM_SERIALIZE_HPP
#define CROSM_SERIALIZE_HPP

#include <json.hpp>

#include "crosm/contact.hpp"
#include "crosm/families.hpp"

namespace crosm {

using json = nlohmann::json;  // std::map-backed: keys serialize sorted

// ---------------------------------------------------------------------------
// Scalars serialize canonically: exact values as {"num","den"} strings,
// floats as numbers.
// ---------------------------------------------------------------------------

inline json scalar_json(const Rational& x) {
  return json{{"num", numerator(x).str()}, {"den", denominator(x).str()}};
}
inline json scalar_json(double x) { return json(x); }

template <typename T>
json check_report_json(const CheckReport<T>& r) {
  json j;
  j["name"] = r.name;
  j["verdict"] = r.verdict();
  j["residual"] = scalar_json(r.residual);
  j["witness"] = r.witness;
  j["caveats"] = r.caveats;
  return j;
}

template <typename T>
json matrix_json(const Mat<T>& m) {
  json rows = json::array();
  for (std::size_t i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.cols(); ++j)
      row.push_back(scalar_json(m(i, j)));
    rows.push_back(row);
  }
  return rows;
}

// ---------------------------------------------------------------------------
// Model summary (versioned document)
// ---------------------------------------------------------------------------

template <typename T>
json model_summary_json(const RankOneModel<T>& md) {
  json j;
  j["schema"] = 1;
  j["space"] = md.kind.name();
  j["n"] = md.kind.n;
  j["dim_g"] = md.alg().dim;
  j["dim_mbar"] = md.mbar_dim();
  j["dim_h"] = md.h.dim();
  j["multiplicity_eps"] = md.multiplicity_eps();
  j["multiplicity_half"] = md.multiplicity_half();
  j["mbar_labels"] = md.mbar_labels;
  j["caveats"] = md.caveats;
  return j;
}

template <typename T>
json metric_blocks_json(const InvariantMetric<T>& g) {
  json j;
  if (g.blocks) {
    const auto& b = *g.blocks;
    j["a0"] = scalar_json(b.a0);
    j["a_eps"] = scalar_json(b.a_eps);
    j["b_eps"] = scalar_json(b.b_eps);
    if (g.md().multiplicity_half() > 0) {
      j["a_half"] = scalar_json(b.a_half);
      j["b_half"] = scalar_json(b.b_half);
    }
    if (g.md().kind.is_cpn()) {
      j["a0e"] = scalar_json(b.a0e);
      j["b0e"] = scalar_json(b.b0e);
      j["c_eps"] = scalar_json(b.c_eps);
    }
  } else {
    j["gram"] = matrix_json(g.gram);
  }
  return j;
}

template <typename T>
json vector_json(const Vec<T>& v) {
  json a = json::array();
  for (const auto& x : v) a.push_back(scalar_json(x));
  return a;
}

// ---------------------------------------------------------------------------
// Tensor export: JSON nested arrays and CSV (flattened index, value).
// ---------------------------------------------------------------------------

template <typename T>
json curvature_json(const CurvatureTensor<T>& R,
                    const std::vector<std::string>& labels) {
  json j;
  j["convention"] = CurvatureTensor<T>::convention;
  j["labels"] = labels;
  json a = json::array();
  for (std::size_t i = 0; i < R.N; ++i) {
    json bi = json::array();
    for (std::size_t jj = 0; jj < R.N; ++jj) {
      json bj = json::array();
      for (std::size_t k = 0; k < R.N; ++k) {
        json bk = json::array();
        for (std::size_t l = 0; l < R.N; ++l)
          bk.push_back(scalar_json(R.at(i, jj, k, l)));
        bj.push_back(bk);
      }
      bi.push_back(bj);
    }
    a.push_back(bi);
  }
  j["R4"] = a;
  return j;
}

template <typename T>
std::string scalar_csv(const T& x) {
  return scalar_traits<T>::str(x);
}

template <typename T>
std::string curvature_csv(const CurvatureTensor<T>& R,
                          const std::vector<std::string>& labels) {
  std::string out = "i,j,k,l,value\n";
  for (std::size_t i = 0; i < R.N; ++i)
    for (std::size_t j = 0; j < R.N; ++j)
      for (std::size_t k = 0; k < R.N; ++k)
        for (std::size_t l = 0; l < R.N; ++l) {
          const T& v = R.at(i, j, k, l);
          if (v == T(0)) continue;
          out += labels[i] + "," + labels[j] + "," + labels[k] + "," +
                 labels[l] + "," + scalar_csv(v) + "\n";
        }
  return out;
}

/// The orthogonal catalog as CSV, mirroring the table's column order.
inline std::string table2_csv() {
  std::string out = "type,xi,a0,a_eps,b_eps,a_half,b_half,kcontact\n";
  for (const auto& row : table2_rows()) {
    out += std::string(to_string(row.type)) + ",\"" + row.xi + "\"," + row.a0 +
           "," + row.a_eps + "," + row.b_eps + "," + row.a_half + "," +
           row.b_half + ",\"" + row.kcontact + "\"\n";
  }
  return out;
}

template <typename T>
std::string checks_csv(const std::vector<CheckReport<T>>& checks) {
  std::string out = "name,verdict,residual,witness,caveats\n";
  auto join = [](const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
      s += (i ? "; " : "") + v[i];
    return s;
  };
  for (const auto& c : checks)
    out += c.name + "," + c.verdict() + "," + scalar_csv(c.residual) + ",\"" +
           join(c.witness) + "\",\"" + join(c.caveats) + "\"\n";
  return out;
}

}  // namespace crosm

#endif
