#include "dicke/spectrum.hpp"

#include <algorithm>
#include <cmath>

namespace dicke {

namespace {

double inf_norm(const SparseMat& h) {
  RealVec rowsum = RealVec::Zero(h.rows());
  for (int k = 0; k < h.outerSize(); ++k) {
    for (SparseMat::InnerIterator it(h, k); it; ++it) {
      rowsum[it.row()] += std::abs(it.value());
    }
  }
  return rowsum.maxCoeff();
}

// Deterministic pseudo-random start vector (no global RNG state).
Vec start_vector(Eigen::Index dim, unsigned seed) {
  Vec v(dim);
  uint64_t s = 0x9e3779b97f4a7c15ull ^ (uint64_t(seed) * 0xbf58476d1ce4e5b9ull);
  for (Eigen::Index i = 0; i < dim; ++i) {
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    const double re = double(s >> 11) / double(1ull << 53) - 0.5;
    s ^= s << 13;
    s ^= s >> 7;
    s ^= s << 17;
    const double im = double(s >> 11) / double(1ull << 53) - 0.5;
    v[i] = Complex(re, im);
  }
  v.normalize();
  return v;
}

void orthogonalize(Vec& w, const std::vector<Vec>& against) {
  for (const Vec& q : against) w -= q.dot(w) * q;
}

void fix_global_phase_col(DenseMat& m, int c) {
  Vec v = m.col(c);
  fix_global_phase(v);
  m.col(c) = v;
}

}  // namespace

namespace detail {

void lanczos_lowest(const SparseMat& h, int k, const EigenOptions& opt,
                    RealVec& values, DenseMat& vectors) {
  const Eigen::Index dim = h.rows();
  const double scale = std::max(inf_norm(h), 1e-30);
  const double res_tol = opt.tol * scale;

  std::vector<Vec> locked;
  std::vector<double> locked_vals;

  for (int restart = 0; restart < opt.max_restarts && int(locked.size()) < k;
       ++restart) {
    Vec v = start_vector(dim, unsigned(restart));
    orthogonalize(v, locked);
    if (v.norm() < 1e-8) continue;
    v.normalize();

    std::vector<Vec> basis{v};
    std::vector<double> alpha, beta;
    const int mmax = std::min<Eigen::Index>(opt.max_basis, dim);
    bool breakdown = false;

    auto ritz_converged = [&](int want) -> bool {
      const int m = int(alpha.size());
      if (m < want) return false;
      Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
      for (int i = 0; i < m; ++i) {
        tri(i, i) = alpha[i];
        if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
      }
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
      const double last_beta = beta.empty() ? 0.0 : beta.back();
      for (int i = 0; i < want; ++i) {
        if (last_beta * std::abs(es.eigenvectors()(m - 1, i)) > res_tol) {
          return false;
        }
      }
      return true;
    };

    for (int j = 0; j < mmax; ++j) {
      Vec w = h * basis[j];
      orthogonalize(w, locked);
      if (j > 0) w -= beta[j - 1] * basis[j - 1];
      const double a = std::real(basis[j].dot(w));
      w -= a * basis[j];
      alpha.push_back(a);
      for (int i = 0; i <= j; ++i) w -= basis[i].dot(w) * basis[i];
      const double b = w.norm();
      if (b < 1e-12 * scale) {
        breakdown = true;
        break;
      }
      const int want = k - int(locked.size());
      if ((j + 1) % 10 == 0 && ritz_converged(want)) break;
      if (j + 1 < mmax) {
        beta.push_back(b);
        basis.push_back(w / b);
      }
    }

    // Extract Ritz pairs and lock the converged ones.
    const int m = int(alpha.size());
    if (m == 0) continue;
    Eigen::MatrixXd tri = Eigen::MatrixXd::Zero(m, m);
    for (int i = 0; i < m; ++i) {
      tri(i, i) = alpha[i];
      if (i + 1 < m) tri(i, i + 1) = tri(i + 1, i) = beta[i];
    }
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(tri);
    const int want = k - int(locked.size());
    for (int i = 0; i < m && int(locked.size()) < k; ++i) {
      Vec ritz = Vec::Zero(dim);
      for (int j = 0; j < int(basis.size()) && j < m; ++j) {
        ritz += es.eigenvectors()(j, i) * basis[j];
      }
      orthogonalize(ritz, locked);
      const double nn = ritz.norm();
      if (nn < 1e-8) continue;
      ritz /= nn;
      const double lam = std::real(ritz.dot(h * ritz));
      const double res = (h * ritz - lam * ritz).norm();
      if (res > res_tol && !(breakdown && res < 1e2 * res_tol)) {
        // Lowest pairs converge first; once one fails, later ones will too.
        if (i >= want) break;
        continue;
      }
      locked.push_back(std::move(ritz));
      locked_vals.push_back(lam);
    }
  }

  if (int(locked.size()) < k) {
    throw ConvergenceError("lanczos_lowest: failed to converge " +
                           std::to_string(k) + " eigenpairs");
  }

  std::vector<int> order(locked.size());
  for (size_t i = 0; i < order.size(); ++i) order[i] = int(i);
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    return locked_vals[a] < locked_vals[b];
  });
  values.resize(k);
  vectors.resize(dim, k);
  for (int i = 0; i < k; ++i) {
    values[i] = locked_vals[order[i]];
    vectors.col(i) = locked[order[i]];
  }
}

}  // namespace detail

SpectrumResult lowest_eigenpairs(const SparseMat& h, const SparseMat& parity,
                                 int k, const EigenOptions& opt) {
  if (k < 2) throw std::invalid_argument("lowest_eigenpairs: k must be >= 2");
  if (k > h.rows()) k = int(h.rows());
  SpectrumResult res;
  res.scale = std::max(inf_norm(h), 1e-30);

  if (h.rows() < opt.dense_threshold) {
    DenseMat hd(h);
    Eigen::SelfAdjointEigenSolver<DenseMat> es(hd);
    res.eigenvalues = es.eigenvalues().head(k);
    res.eigenvectors = es.eigenvectors().leftCols(k);
  } else {
    detail::lanczos_lowest(h, k, opt, res.eigenvalues, res.eigenvectors);
  }

  // Resolve parity; re-diagonalize Pi inside degenerate clusters.
  res.parities.assign(k, 0);
  const double ctol = opt.cluster_tol * res.scale;
  int i = 0;
  while (i < k) {
    int j = i + 1;
    while (j < k && res.eigenvalues[j] - res.eigenvalues[j - 1] < ctol) ++j;
    const int sz = j - i;
    if (sz > 1) {
      DenseMat sub = res.eigenvectors.middleCols(i, sz);
      DenseMat g = sub.adjoint() * (parity * sub);
      Eigen::SelfAdjointEigenSolver<DenseMat> es(0.5 * (g + g.adjoint()));
      res.eigenvectors.middleCols(i, sz) = sub * es.eigenvectors();
      for (int c = 0; c < sz; ++c) {
        res.parities[i + c] = es.eigenvalues()[c] > 0.0 ? 1 : -1;
      }
    } else {
      const Vec v = res.eigenvectors.col(i);
      const double p = std::real(v.dot(parity * v));
      if (std::abs(p) > 0.99) res.parities[i] = p > 0.0 ? 1 : -1;
    }
    i = j;
  }
  for (int c = 0; c < k; ++c) fix_global_phase_col(res.eigenvectors, c);
  return res;
}

GapResult parity_gap_full(const DickeConfig& cfg, double b,
                          const EigenOptions& opt) {
  cfg.validate();
  const int n_max =
      cfg.n_max_override > 0 ? cfg.n_max_override : default_n_max(cfg);
  ProductSpace space(SpinSector::build(cfg.n_spins), FockSpace::build(n_max));
  const DickePieces pieces = dicke_pieces(space, cfg);
  const SparseMat parity = parity_operator(space);
  SparseMat order_op =
      space.embed_boson(space.fock().a + space.fock().adag) *
      space.embed_spin(space.spin().sz);
  const SparseMat h = pieces.at(b);

  for (int k = 6; k <= 48; k *= 2) {
    const SpectrumResult res = lowest_eigenpairs(h, parity, k, opt);
    const double ctol = opt.cluster_tol * res.scale;
    GapResult out;
    out.ground_energy = res.eigenvalues[0];
    out.ground_parity = res.parities[0];
    if (out.ground_parity == 0) continue;  // unresolved; escalate
    // Order parameter: inside a degenerate ground cluster report the
    // symmetry-broken extremal value, otherwise the direct expectation.
    int csz = 1;
    while (csz < int(res.eigenvalues.size()) &&
           res.eigenvalues[csz] - res.eigenvalues[csz - 1] < ctol) {
      ++csz;
    }
    if (csz > 1) {
      DenseMat sub = res.eigenvectors.leftCols(csz);
      DenseMat g = sub.adjoint() * (order_op * sub);
      Eigen::SelfAdjointEigenSolver<DenseMat> es(0.5 * (g + g.adjoint()));
      double best = 0.0;
      for (int c = 0; c < csz; ++c) {
        if (std::abs(es.eigenvalues()[c]) > std::abs(best)) {
          best = es.eigenvalues()[c];
        }
      }
      out.order_param = best;
    } else {
      const Vec v = res.eigenvectors.col(0);
      out.order_param = std::real(v.dot(order_op * v));
    }
    for (int j = 1; j < int(res.eigenvalues.size()); ++j) {
      if (res.parities[j] == out.ground_parity &&
          res.eigenvalues[j] - res.eigenvalues[0] > ctol) {
        out.gap = res.eigenvalues[j] - res.eigenvalues[0];
        return out;
      }
    }
  }
  throw ConvergenceError(
      "parity_gap: no same-parity excited state among the computed pairs");
}

double parity_gap(const DickeConfig& cfg, double b, const EigenOptions& opt) {
  return parity_gap_full(cfg, b, opt).gap;
}

std::vector<GapPoint> scan_gap_vs_n_and_b(const DickeConfig& base,
                                          const std::vector<int>& n_list,
                                          const std::vector<double>& b_grid,
                                          const EigenOptions& opt) {
  std::vector<GapPoint> out;
  for (int n : n_list) {
    DickeConfig cfg = base;
    cfg.n_spins = n;
    cfg.nbar = 0.0;
    for (double b : b_grid) {
      const GapResult g = parity_gap_full(cfg, b, opt);
      out.push_back({n, b, g.gap, g.order_param});
    }
  }
  return out;
}

std::vector<DetuningPoint> scan_gap_vs_detuning(
    double b_c, const std::vector<double>& delta_list, int n_spins,
    const EigenOptions& opt) {
  std::vector<DetuningPoint> out;
  for (double delta : delta_list) {
    if (delta >= 0.0) {
      throw std::invalid_argument("scan_gap_vs_detuning: delta must be < 0");
    }
    DickeConfig cfg;
    cfg.n_spins = n_spins;
    cfg.delta = delta;
    cfg.g0 = std::sqrt(b_c * std::abs(delta));
    cfg.nbar = 0.0;
    out.push_back({delta, parity_gap_full(cfg, b_c, opt).gap});
  }
  return out;
}

}  // namespace dicke
