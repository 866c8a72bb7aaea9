#pragma once

#include <utility>

#include "dicke/types.hpp"

namespace dicke {

/// Collective-spin sector S = N/2 on the |S, M>_z basis, M ascending.
struct SpinSector {
  int n_spins = 0;
  int dim = 0;
  SparseMat sz, sp, sm, sx, sy;

  double spin() const { return 0.5 * n_spins; }
  double m_value(int idx) const { return -spin() + idx; }

  static SpinSector build(int n_spins);
};

/// Truncated boson mode on |n>, n = 0..n_max.
struct FockSpace {
  int n_max = 0;
  int dim = 0;
  SparseMat a, adag, number;

  static FockSpace build(int n_max);
};

/// Tensor product basis, boson-major: k = n * spin.dim + m_idx.
class ProductSpace {
 public:
  ProductSpace(SpinSector spin, FockSpace fock)
      : spin_(std::move(spin)), fock_(std::move(fock)) {}

  const SpinSector& spin() const { return spin_; }
  const FockSpace& fock() const { return fock_; }
  int dim() const { return spin_.dim * fock_.dim; }

  int flat_index(int n, int m_idx) const { return n * spin_.dim + m_idx; }
  std::pair<int, int> labels(int k) const {
    return {k / spin_.dim, k % spin_.dim};
  }

  SparseMat embed_spin(const SparseMat& op) const;
  SparseMat embed_boson(const SparseMat& op) const;

 private:
  SpinSector spin_;
  FockSpace fock_;
};

/// Normalized eigenvector of S_x with eigenvalue m_x, phase fixed so the first
/// nonzero amplitude is real positive.
Vec spin_x_eigenstate(const SpinSector& spin, double m_x);

/// Displaced Fock state D(alpha)|n> on the truncated space. Throws
/// TruncationError if the truncated tail weight exceeds 1e-8.
Vec displaced_fock_state(const FockSpace& fock, Complex alpha, int n);

/// Product state with the documented boson-major ordering.
Vec tensor_product(const ProductSpace& space, const Vec& boson,
                   const Vec& spin_part);

/// Rotate the global phase so the first amplitude above threshold is real
/// positive.
void fix_global_phase(Vec& v, double threshold = 1e-12);

}  // namespace dicke
