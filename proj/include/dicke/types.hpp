#pragma once

#include <complex>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace dicke {

using Complex = std::complex<double>;
using SparseMat = Eigen::SparseMatrix<Complex>;
using DenseMat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using RealVec = Eigen::VectorXd;

inline constexpr double kPi = 3.141592653589793238462643383279502884;

/// Raised when a boson state (or an evolving state) carries weight beyond the
/// Fock truncation above the configured tolerance.
struct TruncationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

/// Raised when an iterative solver exhausts its budget.
struct ConvergenceError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Unit conventions: frequencies are stored internally as angular frequencies
// in rad/ms; configuration files quote ordinary frequencies in kHz (the
// f/(2*pi) style) and times in ms. Rates (dephasing) are quoted in 1/s.
inline double khz_to_angular(double f_khz) { return 2.0 * kPi * f_khz; }
inline double angular_to_khz(double w) { return w / (2.0 * kPi); }
inline double per_s_to_per_ms(double rate_per_s) { return 1e-3 * rate_per_s; }

}  // namespace dicke
