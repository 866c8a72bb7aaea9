#pragma once

#include <vector>

#include "dicke/model.hpp"
#include "dicke/types.hpp"

namespace dicke {

struct EigenOptions {
  int dense_threshold = 2000;  // dense diagonalization below this dimension
  double tol = 1e-9;           // relative residual for iterative eigenpairs
  int max_basis = 450;         // Lanczos basis size per restart
  int max_restarts = 12;
  double cluster_tol = 1e-8;   // relative spacing defining a degenerate cluster
};

struct SpectrumResult {
  RealVec eigenvalues;      // ascending
  DenseMat eigenvectors;    // columns
  std::vector<int> parities;  // +1 / -1 (0 if unresolved)
  double scale = 0.0;       // spectral scale used for tolerances
};

namespace detail {
/// Lowest k eigenpairs of a sparse Hermitian matrix by restarted Lanczos with
/// full reorthogonalization and deflation of locked pairs.
void lanczos_lowest(const SparseMat& h, int k, const EigenOptions& opt,
                    RealVec& values, DenseMat& vectors);
}  // namespace detail

/// Lowest k eigenpairs with parity labels; degenerate clusters are
/// re-diagonalized in the parity basis.
SpectrumResult lowest_eigenpairs(const SparseMat& h, const SparseMat& parity,
                                 int k, const EigenOptions& opt = {});

struct GapResult {
  double ground_energy = 0.0;
  int ground_parity = 0;
  double gap = 0.0;          // to the lowest excited state of the same parity
  double order_param = 0.0;  // ground-state <(a+a^dag) S_z>
};

/// Parity-resolved gap at transverse field b, with automatic escalation of
/// the eigenpair count until a same-parity excited state is found.
GapResult parity_gap_full(const DickeConfig& cfg, double b,
                          const EigenOptions& opt = {});
double parity_gap(const DickeConfig& cfg, double b,
                  const EigenOptions& opt = {});

struct GapPoint {
  int n_spins = 0;
  double b = 0.0;
  double gap = 0.0;
  double order_param = 0.0;
};

std::vector<GapPoint> scan_gap_vs_n_and_b(const DickeConfig& base,
                                          const std::vector<int>& n_list,
                                          const std::vector<double>& b_grid,
                                          const EigenOptions& opt = {});

struct DetuningPoint {
  double delta = 0.0;      // rad/ms (signed)
  double gap_at_bc = 0.0;  // rad/ms
};

/// Gap at B = b_c as a function of detuning, with g0 = sqrt(b_c |delta|) so
/// the critical field stays fixed.
std::vector<DetuningPoint> scan_gap_vs_detuning(
    double b_c, const std::vector<double>& delta_list, int n_spins,
    const EigenOptions& opt = {});

}  // namespace dicke
