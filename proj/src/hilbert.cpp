#include "dicke/hilbert.hpp"

#include <cmath>
#include <vector>

namespace dicke {

namespace {

SparseMat from_triplets(int rows, int cols,
                        std::vector<Eigen::Triplet<Complex>>& t) {
  SparseMat m(rows, cols);
  m.setFromTriplets(t.begin(), t.end());
  m.makeCompressed();
  return m;
}

}  // namespace

SpinSector SpinSector::build(int n_spins) {
  if (n_spins < 1) {
    throw std::invalid_argument("SpinSector: ion count must be >= 1");
  }
  SpinSector s;
  s.n_spins = n_spins;
  s.dim = n_spins + 1;
  const double S = 0.5 * n_spins;

  std::vector<Eigen::Triplet<Complex>> tz, tp;
  for (int i = 0; i < s.dim; ++i) {
    const double M = -S + i;
    tz.emplace_back(i, i, Complex(M, 0.0));
    if (i + 1 < s.dim) {
      // <M+1| S_+ |M> = sqrt(S(S+1) - M(M+1))
      const double c = std::sqrt(S * (S + 1.0) - M * (M + 1.0));
      tp.emplace_back(i + 1, i, Complex(c, 0.0));
    }
  }
  s.sz = from_triplets(s.dim, s.dim, tz);
  s.sp = from_triplets(s.dim, s.dim, tp);
  s.sm = SparseMat(s.sp.adjoint());
  s.sx = 0.5 * (s.sp + s.sm);
  s.sy = Complex(0.0, -0.5) * (s.sp - s.sm);
  s.sx.makeCompressed();
  s.sy.makeCompressed();
  s.sm.makeCompressed();
  return s;
}

FockSpace FockSpace::build(int n_max) {
  if (n_max < 1) {
    throw std::invalid_argument("FockSpace: n_max must be >= 1");
  }
  FockSpace f;
  f.n_max = n_max;
  f.dim = n_max + 1;
  std::vector<Eigen::Triplet<Complex>> ta, tn;
  for (int n = 0; n < f.dim; ++n) {
    tn.emplace_back(n, n, Complex(n, 0.0));
    if (n >= 1) {
      // a|n> = sqrt(n) |n-1>
      ta.emplace_back(n - 1, n, Complex(std::sqrt(double(n)), 0.0));
    }
  }
  f.a = from_triplets(f.dim, f.dim, ta);
  f.adag = SparseMat(f.a.adjoint());
  f.number = from_triplets(f.dim, f.dim, tn);
  f.adag.makeCompressed();
  return f;
}

SparseMat ProductSpace::embed_spin(const SparseMat& op) const {
  if (op.rows() != spin_.dim || op.cols() != spin_.dim) {
    throw std::invalid_argument("embed_spin: dimension mismatch");
  }
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(size_t(op.nonZeros()) * fock_.dim);
  for (int n = 0; n < fock_.dim; ++n) {
    const int off = n * spin_.dim;
    for (int k = 0; k < op.outerSize(); ++k) {
      for (SparseMat::InnerIterator it(op, k); it; ++it) {
        t.emplace_back(off + int(it.row()), off + int(it.col()), it.value());
      }
    }
  }
  return from_triplets(dim(), dim(), t);
}

SparseMat ProductSpace::embed_boson(const SparseMat& op) const {
  if (op.rows() != fock_.dim || op.cols() != fock_.dim) {
    throw std::invalid_argument("embed_boson: dimension mismatch");
  }
  std::vector<Eigen::Triplet<Complex>> t;
  t.reserve(size_t(op.nonZeros()) * spin_.dim);
  for (int k = 0; k < op.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(op, k); it; ++it) {
      for (int m = 0; m < spin_.dim; ++m) {
        t.emplace_back(int(it.row()) * spin_.dim + m,
                       int(it.col()) * spin_.dim + m, it.value());
      }
    }
  }
  return from_triplets(dim(), dim(), t);
}

void fix_global_phase(Vec& v, double threshold) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double a = std::abs(v[i]);
    if (a > threshold) {
      v *= std::conj(v[i]) / a;
      return;
    }
  }
}

Vec spin_x_eigenstate(const SpinSector& spin, double m_x) {
  const double S = spin.spin();
  const double idx_real = m_x + S;
  const int idx = int(std::lround(idx_real));
  if (idx < 0 || idx >= spin.dim || std::abs(idx_real - idx) > 1e-9) {
    throw std::invalid_argument("spin_x_eigenstate: m_x out of range");
  }
  DenseMat sx(spin.sx);
  Eigen::SelfAdjointEigenSolver<DenseMat> es(sx);
  if (std::abs(es.eigenvalues()[idx] - m_x) > 1e-9) {
    throw ConvergenceError("spin_x_eigenstate: eigenvalue mismatch");
  }
  Vec v = es.eigenvectors().col(idx);
  v.normalize();
  fix_global_phase(v);
  return v;
}

Vec displaced_fock_state(const FockSpace& fock, Complex alpha, int n) {
  if (n < 0 || n > fock.n_max) {
    throw std::invalid_argument("displaced_fock_state: n outside truncation");
  }
  // Work in a padded space so leakage past n_max is measurable.
  const double am = std::abs(alpha);
  const int pad = std::max(24, int(std::ceil(6.0 * am)) +
                                   int(std::ceil(2.0 * am * std::sqrt(n + 1.0))) + 8);
  const int pdim = fock.dim + pad;
  // alpha a^dag - alpha^* a = i K with K Hermitian.
  DenseMat K = DenseMat::Zero(pdim, pdim);
  for (int j = 0; j + 1 < pdim; ++j) {
    const Complex val = Complex(0.0, -1.0) * alpha * std::sqrt(j + 1.0);
    K(j + 1, j) = val;
    K(j, j + 1) = std::conj(val);
  }
  Eigen::SelfAdjointEigenSolver<DenseMat> es(K);
  Vec phases(pdim);
  for (int j = 0; j < pdim; ++j) {
    phases[j] = std::exp(Complex(0.0, es.eigenvalues()[j]));
  }
  // v = U exp(i Lambda) U^dag e_n
  Vec un = es.eigenvectors().row(n).adjoint();  // U^dag e_n
  Vec v = es.eigenvectors() * (phases.array() * un.array()).matrix();
  double leak = 0.0;
  for (int j = fock.dim; j < pdim; ++j) leak += std::norm(v[j]);
  if (leak > 1e-8) {
    throw TruncationError(
        "displaced_fock_state: truncated weight " + std::to_string(leak) +
        " exceeds 1e-8; increase n_max");
  }
  Vec out = v.head(fock.dim);
  out.normalize();
  return out;
}

Vec tensor_product(const ProductSpace& space, const Vec& boson,
                   const Vec& spin_part) {
  if (boson.size() != space.fock().dim || spin_part.size() != space.spin().dim) {
    throw std::invalid_argument("tensor_product: dimension mismatch");
  }
  Vec v(space.dim());
  for (int n = 0; n < space.fock().dim; ++n) {
    for (int m = 0; m < space.spin().dim; ++m) {
      v[space.flat_index(n, m)] = boson[n] * spin_part[m];
    }
  }
  return v;
}

}  // namespace dicke
