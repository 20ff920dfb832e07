// Prints the multiplication table of su(3) on the A/B basis together with
// the restricted-root data of the CP^2 model built on top of it.

#include <iostream>

#include "crosm/models.hpp"

using namespace crosm;
using R = Rational;

int main() {
  const auto su3 = build_su_algebra<R>(3);
  const auto& alg = su3.data;
  std::cout << "su(3): dim " << alg.dim << ", basis";
  for (const auto& l : alg.basis_labels) std::cout << " " << l;
  std::cout << "\n\nnonzero brackets [e_i, e_j], i < j:\n";
  for (const auto& [ij, terms] : alg.structure) {
    std::cout << "  [" << alg.basis_labels[ij.first] << ", "
              << alg.basis_labels[ij.second] << "] =";
    bool first = true;
    for (const auto& [k, c] : terms) {
      std::cout << (first ? " " : " + ") << scalar_traits<R>::str(c) << "*"
                << alg.basis_labels[k];
      first = false;
    }
    std::cout << "\n";
  }

  std::cout << "\nvalidity: jacobi " << jacobi_check(alg).verdict()
            << ", ad-invariance " << invariance_check(alg).verdict() << "\n";

  const auto md = build_model<R>(SpaceKind::complex_projective(2));
  std::cout << "\nCP^2 model: dim mbar = " << md->mbar_dim()
            << ", dim h = " << md->h.dim()
            << ", multiplicities (m_eps, m_half) = ("
            << md->multiplicity_eps() << ", " << md->multiplicity_half()
            << ")\nmbar basis:";
  for (const auto& l : md->mbar_labels) std::cout << " " << l;
  std::cout << "\n";
  return 0;
}
