#ifndef CROSM_REPORT_HPP
#define CROSM_REPORT_HPP

#include <string>
#include <utility>
#include <vector>

#include "crosm/scalar.hpp"

namespace crosm {

/// Outcome of a named verification: verdict, the largest absolute residual
/// encountered, and the witness (basis labels / indices) where it occurred.
/// In exact mode pass means residual == 0; in float mode residual <= tol.
template <typename T>
struct CheckReport {
  std::string name;
  bool pass = true;
  T residual = T(0);
  std::vector<std::string> witness;
  std::vector<std::string> caveats;

  std::string verdict() const { return pass ? "pass" : "fail"; }
};

/// Accumulates residuals across the equations of one check and keeps the
/// worst offender as witness.
template <typename T>
class ResidualAccum {
 public:
  void update(const T& deviation, std::vector<std::string> witness) {
    const T a = abs_value(deviation);
    if (a > worst_) {
      worst_ = a;
      witness_ = std::move(witness);
    }
  }

  const T& worst() const { return worst_; }

  CheckReport<T> finish(std::string name, double tol,
                        std::vector<std::string> caveats = {}) const {
    CheckReport<T> r;
    r.name = std::move(name);
    r.residual = worst_;
    r.pass = within_tolerance(worst_, tol);
    r.witness = witness_;
    r.caveats = std::move(caveats);
    return r;
  }

 private:
  T worst_ = T(0);
  std::vector<std::string> witness_;
};

/// Merges detailed sub-reports into one verdict; witness names the first
/// failing part (or the worst residual when all pass).
template <typename T>
CheckReport<T> combine_reports(std::string name,
                               const std::vector<CheckReport<T>>& parts) {
  CheckReport<T> r;
  r.name = std::move(name);
  for (const auto& p : parts) {
    if (!p.pass && r.pass) {
      r.pass = false;
      r.residual = p.residual;
      r.witness = {p.name};
      if (!p.witness.empty())
        r.witness.insert(r.witness.end(), p.witness.begin(), p.witness.end());
    } else if (r.pass && p.residual > r.residual) {
      r.residual = p.residual;
      r.witness = {p.name};
    }
    for (const auto& c : p.caveats) r.caveats.push_back(c);
  }
  return r;
}

}  // namespace crosm

#endif
