#include "trisep/matcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace trisep {

namespace {

// Row of the contraction map that removes `party`, i.e. P with
// local_project(rho) = P rho P^dagger.
CMatrix contraction(Dims dims, Party party, const CVector& vec) {
  const int n = dims.n;
  const int d = dims.dim();
  CMatrix p;
  switch (party) {
    case Party::A:
      p = CMatrix::Zero(2 * n, d);
      for (int a = 0; a < 2; ++a)
        for (int r = 0; r < 2 * n; ++r) p(r, a * 2 * n + r) = std::conj(vec(a));
      break;
    case Party::B:
      p = CMatrix::Zero(2 * n, d);
      for (int a = 0; a < 2; ++a)
        for (int b = 0; b < 2; ++b)
          for (int c = 0; c < n; ++c) p(a * n + c, a * 2 * n + b * n + c) = std::conj(vec(b));
      break;
    case Party::C:
      p = CMatrix::Zero(4, d);
      for (int ab = 0; ab < 4; ++ab)
        for (int c = 0; c < n; ++c) p(ab, ab * n + c) = std::conj(vec(c));
      break;
    case Party::AB:
      p = CMatrix::Zero(n, d);
      for (int ab = 0; ab < 4; ++ab)
        for (int c = 0; c < n; ++c) p(c, ab * n + c) = std::conj(vec(ab));
      break;
  }
  return p;
}

int party_dim(Dims dims, Party party) {
  switch (party) {
    case Party::A:
    case Party::B:
      return 2;
    case Party::C:
      return dims.n;
    case Party::AB:
      return 4;
  }
  return 0;
}

double scale_of(const CMatrix& m) { return std::max(1.0, m.norm()); }

}  // namespace

void Tolerance::validate() const {
  if (!(rank_rel > 0) || !(psd_abs > 0) || !(residual > 0))
    throw Error("tolerances must be strictly positive");
}

const char* to_string(Transpose t) {
  switch (t) {
    case Transpose::A:
      return "A";
    case Transpose::B:
      return "B";
    case Transpose::AB:
      return "AB";
  }
  return "?";
}

const char* to_string(Party p) {
  switch (p) {
    case Party::A:
      return "A";
    case Party::B:
      return "B";
    case Party::C:
      return "C";
    case Party::AB:
      return "AB";
  }
  return "?";
}

void require_shape(const CMatrix& m, Dims dims) {
  if (dims.n < 1) throw DimensionError("Charlie dimension must be >= 1");
  if (m.rows() != dims.dim() || m.cols() != dims.dim())
    throw DimensionError("expected a " + std::to_string(dims.dim()) + "x" + std::to_string(dims.dim()) +
                         " matrix, got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
}

void require_finite(const CMatrix& m) {
  if (!m.allFinite()) throw Error("matrix has non-finite entries");
}

CMatrix partial_transpose(const CMatrix& m, Dims dims, Transpose parties) {
  require_shape(m, dims);
  const int n = dims.n;
  const bool ta = parties == Transpose::A || parties == Transpose::AB;
  const bool tb = parties == Transpose::B || parties == Transpose::AB;
  CMatrix out(m.rows(), m.cols());
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int a2 = 0; a2 < 2; ++a2)
        for (int b2 = 0; b2 < 2; ++b2) {
          const int ra = ta ? a2 : a, ca = ta ? a : a2;
          const int rb = tb ? b2 : b, cb = tb ? b : b2;
          out.block((a * 2 + b) * n, (a2 * 2 + b2) * n, n, n) = m.block((ra * 2 + rb) * n, (ca * 2 + cb) * n, n, n);
        }
  return out;
}

int numerical_rank(const CMatrix& m, const Tolerance& tol) {
  if (m.size() == 0) return 0;
  Eigen::JacobiSVD<CMatrix> svd(m);
  const auto& s = svd.singularValues();
  const double cutoff = tol.rank_rel * s(0) * std::max(m.rows(), m.cols());
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i)
    if (s(i) > cutoff) ++r;
  return r;
}

CMatrix kernel_basis(const CMatrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) throw DimensionError("kernel_basis expects a square matrix");
  const Eigen::Index d = m.cols();
  if (d == 0) return CMatrix(0, 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
  const int r = numerical_rank(m, tol);
  return svd.matrixV().rightCols(d - r);
}

CMatrix range_basis(const CMatrix& m, const Tolerance& tol) {
  if (m.size() == 0) return CMatrix(m.rows(), 0);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullU);
  const int r = numerical_rank(m, tol);
  return svd.matrixU().leftCols(r);
}

double hermiticity_defect(const CMatrix& m) { return (m - m.adjoint()).norm(); }

CMatrix hermitize(const CMatrix& m, const Tolerance& tol) {
  if (m.rows() != m.cols()) throw DimensionError("Hermitian matrix must be square");
  const double defect = hermiticity_defect(m);
  if (defect > tol.residual * scale_of(m))
    throw HermiticityError("matrix is not Hermitian (defect " + std::to_string(defect) + ")");
  return (m + m.adjoint()) * 0.5;
}

Eigen::VectorXd hermitian_eigenvalues(const CMatrix& m, const Tolerance& tol) {
  if (m.size() == 0) return Eigen::VectorXd(0);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m, tol), Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

double min_eigenvalue(const CMatrix& m, const Tolerance& tol) {
  const auto ev = hermitian_eigenvalues(m, tol);
  return ev.size() ? ev(0) : 0.0;
}

bool is_psd(const CMatrix& m, const Tolerance& tol) {
  const auto ev = hermitian_eigenvalues(m, tol);
  if (ev.size() == 0) return true;
  const double top = std::max(std::abs(ev(0)), std::abs(ev(ev.size() - 1)));
  return ev(0) >= -tol.psd_abs * (1.0 + top);
}

CMatrix pseudo_inverse_hermitian(const CMatrix& m, const Tolerance& tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitize(m, tol));
  const auto& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  const double cutoff = tol.rank_rel * top * m.rows();
  Eigen::VectorXd inv = Eigen::VectorXd::Zero(ev.size());
  for (Eigen::Index i = 0; i < ev.size(); ++i)
    if (std::abs(ev(i)) > cutoff) inv(i) = 1.0 / ev(i);
  return es.eigenvectors() * inv.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix psd_sqrt(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((m + m.adjoint()) * 0.5);
  const Eigen::VectorXd s = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix psd_inverse_sqrt(const CMatrix& m, const Tolerance& tol) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((m + m.adjoint()) * 0.5);
  const auto& ev = es.eigenvalues();
  const double top = ev.cwiseAbs().maxCoeff();
  if (!(ev(0) > tol.rank_rel * top * m.rows()))
    throw RankMismatch("psd_inverse_sqrt: matrix is numerically singular");
  const Eigen::VectorXd s = ev.cwiseSqrt().cwiseInverse();
  return es.eigenvectors() * s.asDiagonal() * es.eigenvectors().adjoint();
}

CMatrix local_project(const CMatrix& rho, Dims dims, Party party, const CVector& vec) {
  require_shape(rho, dims);
  if (vec.size() != party_dim(dims, party))
    throw DimensionError(std::string("projection vector has wrong dimension for party ") + to_string(party));
  const CMatrix p = contraction(dims, party, vec);
  return p * rho * p.adjoint();
}

CMatrix reduced_state(const CMatrix& rho, Dims dims, Party keep) {
  require_shape(rho, dims);
  const int n = dims.n;
  auto idx = [n](int a, int b, int c) { return a * 2 * n + b * n + c; };
  switch (keep) {
    case Party::A:
    case Party::B: {
      CMatrix r = CMatrix::Zero(2, 2);
      for (int x = 0; x < 2; ++x)
        for (int y = 0; y < 2; ++y)
          for (int o = 0; o < 2; ++o)
            for (int c = 0; c < n; ++c)
              r(x, y) += keep == Party::A ? rho(idx(x, o, c), idx(y, o, c)) : rho(idx(o, x, c), idx(o, y, c));
      return r;
    }
    case Party::C: {
      CMatrix r = CMatrix::Zero(n, n);
      for (int ab = 0; ab < 4; ++ab) r += rho.block(ab * n, ab * n, n, n);
      return r;
    }
    case Party::AB: {
      CMatrix r(4, 4);
      for (int i = 0; i < 4; ++i)
        for (int j = 0; j < 4; ++j) r(i, j) = rho.block(i * n, j * n, n, n).trace();
      return r;
    }
  }
  return {};
}

double commutator_norm(const CMatrix& x, const CMatrix& y) { return (x * y - y * x).norm(); }

SimultaneousEigen simultaneous_diagonalize(std::span<const CMatrix> ops, const Tolerance& tol,
                                           std::uint64_t seed) {
  if (ops.empty()) throw Error("simultaneous_diagonalize needs at least one operator");
  const Eigen::Index d = ops[0].rows();
  double worst = 0.0;
  for (std::size_t i = 0; i < ops.size(); ++i) {
    if (ops[i].rows() != d || ops[i].cols() != d) throw DimensionError("operators must share one square shape");
    const double s = scale_of(ops[i]);
    const double normality = commutator_norm(ops[i], ops[i].adjoint()) / (s * s);
    if (normality > tol.residual) throw CommutatorError("operator " + std::to_string(i) + " is not normal");
    worst = std::max(worst, normality);
    for (std::size_t j = i + 1; j < ops.size(); ++j) {
      const double c = commutator_norm(ops[i], ops[j]) / (s * scale_of(ops[j]));
      if (c > tol.residual)
        throw CommutatorError("operators " + std::to_string(i) + " and " + std::to_string(j) + " do not commute");
      worst = std::max(worst, c);
    }
  }

  const double leak_tol = std::max(tol.residual, 100.0 * worst);
  Rng rng(seed);
  std::normal_distribution<double> normal;
  SimultaneousEigen best;
  double best_leak = std::numeric_limits<double>::infinity();
  for (int attempt = 0; attempt < 8; ++attempt) {
    CMatrix h = CMatrix::Zero(d, d);
    for (const auto& m : ops) {
      const CMatrix herm = (m + m.adjoint()) * 0.5;
      const CMatrix anti = (m - m.adjoint()) * Complex(0.0, -0.5);
      h += normal(rng) * herm + normal(rng) * anti;
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) * 0.5);
    const CMatrix& v = es.eigenvectors();
    double leak = 0.0;
    CMatrix values(d, static_cast<Eigen::Index>(ops.size()));
    for (std::size_t i = 0; i < ops.size(); ++i) {
      CMatrix t = v.adjoint() * ops[i] * v;
      values.col(static_cast<Eigen::Index>(i)) = t.diagonal();
      t.diagonal().setZero();
      leak = std::max(leak, t.norm() / scale_of(ops[i]));
    }
    if (leak < best_leak) {
      best_leak = leak;
      best = {v, values};
    }
    if (leak <= leak_tol) return best;
  }
  throw NumericalBreakdown("simultaneous_diagonalize: no combination split the common eigenspaces");
}

CVector kron(const CVector& a, const CVector& b) {
  CVector out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

CMatrix kron(const CMatrix& a, const CMatrix& b) {
  CMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i)
    for (Eigen::Index j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

CVector product_vector(const CVector& e, const CVector& f, const CVector& g) { return kron(kron(e, f), g); }

CVector random_unit_vector(int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  CVector v(dim);
  for (int i = 0; i < dim; ++i) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(i) = Complex(re, im);
  }
  return v / v.norm();
}

CMatrix random_unitary(int dim, Rng& rng) {
  std::normal_distribution<double> normal;
  CMatrix z(dim, dim);
  for (int j = 0; j < dim; ++j)
    for (int i = 0; i < dim; ++i) {
      const double re = normal(rng);
      const double im = normal(rng);
      z(i, j) = Complex(re, im);
    }
  Eigen::HouseholderQR<CMatrix> qr(z);
  CMatrix q = qr.householderQ();
  const CMatrix r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (int i = 0; i < dim; ++i) {
    const double mag = std::abs(r(i, i));
    if (mag > 0) q.col(i) *= r(i, i) / mag;
  }
  return q;
}

SchmidtSplit schmidt_split(const CVector& v, int rows, int cols) {
  if (v.size() != rows * cols) throw DimensionError("schmidt_split: size mismatch");
  CMatrix m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = v(i * cols + j);
  Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  return {svd.singularValues(), svd.matrixU().col(0), svd.matrixV().col(0).conjugate()};
}

}  // namespace trisep
