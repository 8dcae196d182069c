#pragma once

// Test-side reference computations and seeded generators.  Everything here is
// written from the definitions with explicit index loops so that it shares no
// code path with the library routines it checks.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace oracle {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using Rng = std::mt19937_64;

inline int index(int a, int b, int c, int n) { return a * 2 * n + b * n + c; }

/// Transposes the qubit indices named by `a` and `b` (flags) entrywise.
inline CMatrix partial_transpose(const CMatrix& m, int n, bool ta, bool tb) {
  CMatrix out(m.rows(), m.cols());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < n; ++c)
        for (int a2 = 0; a2 < 2; ++a2)
          for (int b2 = 0; b2 < 2; ++b2)
            for (int c2 = 0; c2 < n; ++c2) {
              const int ra = ta ? a2 : a, ca = ta ? a : a2;
              const int rb = tb ? b2 : b, cb = tb ? b : b2;
              out(index(ra, rb, c, n), index(ca, cb, c2, n)) = m(index(a, b, c, n), index(a2, b2, c2, n));
            }
  return out;
}

/// op 0..3 = rho, rho^tA, rho^tB, rho^tAB.
inline CMatrix op(const CMatrix& m, int n, int which) {
  return which == 0 ? m : partial_transpose(m, n, which == 1 || which == 3, which == 2 || which == 3);
}

inline Eigen::VectorXd eigenvalues(const CMatrix& m) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  return Eigen::SelfAdjointEigenSolver<CMatrix>(h, Eigen::EigenvaluesOnly).eigenvalues();
}

inline double min_eigenvalue(const CMatrix& m) { return eigenvalues(m).minCoeff(); }

/// Rank from the Hermitian spectrum with an absolute cutoff.
inline int hermitian_rank(const CMatrix& m, double cut = 1e-9) {
  const Eigen::VectorXd ev = eigenvalues(m);
  return static_cast<int>((ev.array().abs() > cut).count());
}

/// Kernel projector from the Hermitian spectrum.
inline CMatrix kernel_projector(const CMatrix& m, double cut = 1e-9) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  CMatrix p = CMatrix::Zero(m.rows(), m.cols());
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    if (std::abs(es.eigenvalues()(i)) <= cut) p += es.eigenvectors().col(i) * es.eigenvectors().col(i).adjoint();
  return p;
}

inline CVector product(const CVector& e, const CVector& f, const CVector& g) {
  const int n = static_cast<int>(g.size());
  CVector v(4 * n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < n; ++c) v(index(a, b, c, n)) = e(a) * f(b) * g(c);
  return v;
}

inline CVector unit(int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  CVector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v.normalized();
}

struct Factors {
  CVector e, f, g;
  CVector full() const { return product(e, f, g); }
};

inline Factors random_factors(int n, Rng& rng) {
  Factors x;
  x.e = unit(2, rng);
  x.f = unit(2, rng);
  x.g = unit(n, rng);
  return x;
}

struct Mixture {
  std::vector<double> weights;
  std::vector<Factors> vectors;
  CMatrix rho;
};

/// Weights uniform in [0.2, 1], normalised.
inline Mixture random_mixture(int n, int terms, Rng& rng) {
  std::uniform_real_distribution<double> w(0.2, 1.0);
  Mixture m;
  m.rho = CMatrix::Zero(4 * n, 4 * n);
  double total = 0.0;
  for (int i = 0; i < terms; ++i) {
    m.vectors.push_back(random_factors(n, rng));
    m.weights.push_back(w(rng));
    total += m.weights.back();
  }
  for (int i = 0; i < terms; ++i) {
    m.weights[static_cast<std::size_t>(i)] /= total;
    const CVector v = m.vectors[static_cast<std::size_t>(i)].full();
    m.rho += m.weights[static_cast<std::size_t>(i)] * v * v.adjoint();
  }
  return m;
}

/// |<e|e'>|^2 |<f|f'>|^2 |<g|g'>|^2 for unit factors.
inline double fidelity(const CVector& e1, const CVector& f1, const CVector& g1, const CVector& e2, const CVector& f2,
                       const CVector& g2) {
  return std::norm(e1.dot(e2)) * std::norm(f1.dot(f2)) * std::norm(g1.dot(g2));
}

/// Partial conjugate of a product vector for op 0..3.
inline CVector conjugated(const Factors& x, int which) {
  const CVector e = (which == 1 || which == 3) ? CVector(x.e.conjugate()) : x.e;
  const CVector f = (which == 2 || which == 3) ? CVector(x.f.conjugate()) : x.f;
  return product(e, f, x.g);
}

/// Largest kernel component of the four partial conjugates.
inline double membership(const CMatrix& rho, int n, const Factors& x) {
  double worst = 0.0;
  for (int which = 0; which < 4; ++which) {
    const CMatrix p = kernel_projector(op(rho, n, which));
    worst = std::max(worst, (p * conjugated(x, which)).norm());
  }
  return worst;
}

/// The matrix A(alpha, beta) for chart 0 built directly from kernel
/// projectors: its N columns are the images of |e,f,c> partial conjugates.
/// sigma_min(A) = 0 exactly when some |g> puts all four conjugates in range.
inline double sigma_min_A(const std::array<CMatrix, 4>& kernels, int n, const CVector& e, const CVector& f) {
  std::vector<CMatrix> blocks;
  Eigen::Index rows = 0;
  for (int which = 0; which < 4; ++which) {
    const CVector ee = (which == 1 || which == 3) ? CVector(e.conjugate()) : e;
    const CVector ff = (which == 2 || which == 3) ? CVector(f.conjugate()) : f;
    CMatrix cols(4 * n, n);
    for (int c = 0; c < n; ++c) {
      CVector g = CVector::Zero(n);
      g(c) = 1.0;
      cols.col(c) = product(ee, ff, g);
    }
    blocks.push_back(kernels[static_cast<std::size_t>(which)].adjoint() * cols);
    rows += blocks.back().rows();
  }
  CMatrix a(rows, n);
  Eigen::Index r = 0;
  for (const auto& b : blocks) {
    a.middleRows(r, b.rows()) = b;
    r += b.rows();
  }
  if (rows < n) return 0.0;
  return Eigen::JacobiSVD<CMatrix>(a).singularValues()(n - 1);
}

/// Orthonormal kernel basis from the Hermitian spectrum.
inline CMatrix kernel_basis(const CMatrix& m, double cut = 1e-9) {
  const CMatrix h = 0.5 * (m + m.adjoint());
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  std::vector<Eigen::Index> keep;
  for (Eigen::Index i = 0; i < h.rows(); ++i)
    if (std::abs(es.eigenvalues()(i)) <= cut) keep.push_back(i);
  CMatrix k(h.rows(), static_cast<Eigen::Index>(keep.size()));
  for (std::size_t i = 0; i < keep.size(); ++i) k.col(static_cast<Eigen::Index>(i)) = es.eigenvectors().col(keep[i]);
  return k;
}

/// Three-qubit Hermitian operator with prescribed kernel vectors for rho,
/// rho^tA and rho^tAB (one each) and full range otherwise: the linear
/// constraints are solved over a real basis of Hermitian 8 x 8 matrices.  The
/// result has kernel counts (1, 1, 0, 1) and is generally not PSD.
inline CMatrix marginal_instance(Rng& rng) {
  const int d = 8;
  const CVector k0 = unit(d, rng), k1 = unit(d, rng), k3 = unit(d, rng);
  std::vector<CMatrix> basis;
  for (int i = 0; i < d; ++i) {
    CMatrix m = CMatrix::Zero(d, d);
    m(i, i) = 1.0;
    basis.push_back(m);
  }
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j) {
      CMatrix re = CMatrix::Zero(d, d), im = CMatrix::Zero(d, d);
      re(i, j) = re(j, i) = 1.0;
      im(i, j) = Complex(0, 1);
      im(j, i) = Complex(0, -1);
      basis.push_back(re);
      basis.push_back(im);
    }
  const int nb = static_cast<int>(basis.size());
  Eigen::MatrixXd sys(6 * d, nb);
  for (int t = 0; t < nb; ++t) {
    const CMatrix& h = basis[static_cast<std::size_t>(t)];
    const CVector c0 = h * k0;
    const CVector c1 = partial_transpose(h, 2, true, false) * k1;
    const CVector c3 = partial_transpose(h, 2, true, true) * k3;
    for (int i = 0; i < d; ++i) {
      sys(i, t) = c0(i).real();
      sys(d + i, t) = c0(i).imag();
      sys(2 * d + i, t) = c1(i).real();
      sys(3 * d + i, t) = c1(i).imag();
      sys(4 * d + i, t) = c3(i).real();
      sys(5 * d + i, t) = c3(i).imag();
    }
  }
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(sys, Eigen::ComputeFullV);
  std::normal_distribution<double> normal;
  Eigen::VectorXd x = Eigen::VectorXd::Zero(nb);
  for (int j = nb - 16; j < nb; ++j) x += normal(rng) * svd.matrixV().col(j);
  CMatrix h = CMatrix::Zero(d, d);
  for (int t = 0; t < nb; ++t) h += x(t) * basis[static_cast<std::size_t>(t)];
  return h / h.trace();
}

/// Smallest p in [0, 1] at which the two-qubit Werner mixture
/// p |singlet><singlet| + (1 - p) 1/4 gets a negative partial transpose,
/// by bisection on the explicit spectrum.
inline double werner_threshold() {
  auto min_pt = [](double p) {
    CMatrix s = CMatrix::Zero(4, 4);
    CVector singlet = CVector::Zero(4);
    singlet(1) = 1.0 / std::sqrt(2.0);
    singlet(2) = -1.0 / std::sqrt(2.0);
    s = p * singlet * singlet.adjoint() + (1 - p) * CMatrix::Identity(4, 4) / 4.0;
    CMatrix t(4, 4);
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b)
        for (int a2 = 0; a2 < 2; ++a2)
          for (int b2 = 0; b2 < 2; ++b2) t(a2 * 2 + b, a * 2 + b2) = s(a * 2 + b, a2 * 2 + b2);
    return min_eigenvalue(t);
  };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (min_pt(mid) < 0 ? hi : lo) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace oracle
