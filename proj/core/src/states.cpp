#include "trisep/states.hpp"

#include <cmath>
#include <numbers>

namespace trisep {

const char* operator_name(int op) {
  switch (op) {
    case 0:
      return "rho";
    case 1:
      return "rho^tA";
    case 2:
      return "rho^tB";
    case 3:
      return "rho^tAB";
    default:
      return "?";
  }
}

TripartiteState::TripartiteState(const CMatrix& rho, Dims dims, const Tolerance& tol)
    : TripartiteState(rho, dims, tol, true) {}

TripartiteState TripartiteState::unnormalized(const CMatrix& rho, Dims dims, const Tolerance& tol) {
  return TripartiteState(rho, dims, tol, false);
}

TripartiteState::TripartiteState(const CMatrix& rho, Dims dims, const Tolerance& tol, bool require_unit_trace)
    : dims_(dims), tol_(tol) {
  tol_.validate();
  require_shape(rho, dims);
  require_finite(rho);
  ops_[0] = hermitize(rho, tol);
  const double tr = ops_[0].trace().real();
  if (require_unit_trace && std::abs(tr - 1.0) > 1e-10)
    throw Error("density matrix trace is " + std::to_string(tr) + ", expected 1");
  if (!require_unit_trace && tr < -tol.psd_abs) throw Error("density matrix has negative trace");
  if (!is_psd(ops_[0], tol)) throw Error("density matrix is not positive semidefinite");
  ops_[1] = partial_transpose(ops_[0], dims, Transpose::A);
  ops_[2] = partial_transpose(ops_[0], dims, Transpose::B);
  ops_[3] = partial_transpose(ops_[0], dims, Transpose::AB);
  for (int i = 0; i < 4; ++i) ranks_.r[static_cast<std::size_t>(i)] = numerical_rank(ops_[static_cast<std::size_t>(i)], tol);
}

const CMatrix& TripartiteState::transposed(Transpose t) const {
  switch (t) {
    case Transpose::A:
      return ops_[1];
    case Transpose::B:
      return ops_[2];
    case Transpose::AB:
      return ops_[3];
  }
  return ops_[0];
}

bool TripartiteState::is_ppt() const {
  for (int i = 1; i < 4; ++i)
    if (!is_psd(ops_[static_cast<std::size_t>(i)], tol_)) return false;
  return true;
}

double TripartiteState::min_eigenvalue_of(int index) const { return min_eigenvalue(op(index), tol_); }

ProductVector ProductVector::from_factors(const CVector& e, const CVector& f, const CVector& g) {
  if (e.size() != 2 || f.size() != 2 || g.size() < 1) throw DimensionError("product vector factors must be (2, 2, N)");
  const double ne = e.norm(), nf = f.norm(), ng = g.norm();
  if (!(ne > 0) || !(nf > 0) || !(ng > 0)) throw Error("product vector factor has zero norm");
  ProductVector v;
  v.e = e / ne;
  v.f = f / nf;
  v.g = g / ng;
  int chart = 0;
  if (std::abs(v.e(0)) <= std::abs(v.e(1))) {
    v.alpha = v.e(0) / v.e(1);
  } else {
    chart |= 1;
    v.alpha = v.e(1) / v.e(0);
  }
  if (std::abs(v.f(0)) <= std::abs(v.f(1))) {
    v.beta = v.f(0) / v.f(1);
  } else {
    chart |= 2;
    v.beta = v.f(1) / v.f(0);
  }
  v.chart = chart;
  return v;
}

ProductVector ProductVector::from_chart(int chart, Complex alpha, Complex beta, const CVector& g) {
  CVector e(2), f(2);
  if (chart & 1)
    e << 1.0, alpha;
  else
    e << alpha, 1.0;
  if (chart & 2)
    f << 1.0, beta;
  else
    f << beta, 1.0;
  ProductVector v;
  v.e = e / e.norm();
  v.f = f / f.norm();
  v.g = g / g.norm();
  v.chart = chart;
  v.alpha = alpha;
  v.beta = beta;
  return v;
}

CVector ProductVector::full() const { return product_vector(e, f, g); }

CMatrix ProductVector::projector() const {
  const CVector v = full();
  return v * v.adjoint();
}

CVector ProductVector::conjugated_for(int op) const {
  const CVector ee = (op == 1 || op == 3) ? CVector(e.conjugate()) : e;
  const CVector ff = (op == 2 || op == 3) ? CVector(f.conjugate()) : f;
  return product_vector(ee, ff, g);
}

double product_fidelity(const ProductVector& a, const ProductVector& b) {
  return std::norm(a.e.dot(b.e)) * std::norm(a.f.dot(b.f)) * std::norm(a.g.dot(b.g));
}

CMatrix Decomposition::reconstruct(Dims dims) const {
  CMatrix out = CMatrix::Zero(dims.dim(), dims.dim());
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const CVector v = vectors[i].full();
    if (v.size() != dims.dim()) throw DimensionError("decomposition vector does not match dims");
    out += weights[i] * v * v.adjoint();
  }
  return out;
}

double Decomposition::residual(const CMatrix& rho, Dims dims) const { return (rho - reconstruct(dims)).norm(); }

void Decomposition::append(const Decomposition& other) {
  weights.insert(weights.end(), other.weights.begin(), other.weights.end());
  vectors.insert(vectors.end(), other.vectors.begin(), other.vectors.end());
}

ProductVector random_product_vector(Dims dims, Rng& rng) {
  const CVector e = random_unit_vector(2, rng);
  const CVector f = random_unit_vector(2, rng);
  const CVector g = random_unit_vector(dims.n, rng);
  return ProductVector::from_factors(e, f, g);
}

TripartiteState from_ensemble(const std::vector<double>& weights, const std::vector<ProductVector>& vectors,
                              Dims dims, const Tolerance& tol) {
  if (weights.size() != vectors.size()) throw DimensionError("weights and vectors differ in length");
  if (weights.empty()) throw Error("ensemble is empty");
  double total = 0.0;
  for (double w : weights) {
    if (!(w > 0) || !std::isfinite(w)) throw Error("ensemble weights must be positive");
    total += w;
  }
  Decomposition dec{weights, vectors};
  for (auto& w : dec.weights) w /= total;
  return TripartiteState(dec.reconstruct(dims), dims, tol);
}

Ensemble random_ensemble(Dims dims, int terms, Rng& rng) {
  if (terms < 1) throw Error("ensemble needs at least one term");
  std::uniform_real_distribution<double> unif(0.2, 1.0);
  Ensemble ens;
  double total = 0.0;
  for (int i = 0; i < terms; ++i) {
    ens.vectors.push_back(random_product_vector(dims, rng));
    ens.weights.push_back(unif(rng));
    total += ens.weights.back();
  }
  for (auto& w : ens.weights) w /= total;
  return ens;
}

CMatrix canonical_matrix(const CMatrix& b, const CMatrix& c, const CMatrix& d) {
  const Eigen::Index n = b.rows();
  if (b.cols() != n || c.rows() != n || c.cols() != n || d.rows() != n || d.cols() != n)
    throw DimensionError("B, C, D must be square of equal size");
  CMatrix x(n, 4 * n);
  x << c * b, c, b, CMatrix::Identity(n, n);
  const CMatrix filter = kron(CMatrix(CMatrix::Identity(4, 4)), psd_sqrt(d));
  CMatrix rho = filter * x.adjoint() * x * filter;
  return rho / rho.trace().real();
}

CanonicalParameters random_canonical_parameters(int n, std::uint64_t seed) {
  if (n < 1) throw DimensionError("N must be >= 1");
  Rng rng(seed);
  std::normal_distribution<double> normal;
  std::uniform_real_distribution<double> unif(0.5, 2.0);
  const CMatrix u = random_unitary(n, rng);
  CVector eb(n), ec(n);
  Eigen::VectorXd ed(n);
  for (int i = 0; i < n; ++i) {
    const double br = normal(rng), bi = normal(rng);
    const double cr = normal(rng), ci = normal(rng);
    eb(i) = Complex(br, bi);
    ec(i) = Complex(cr, ci);
    ed(i) = unif(rng);
  }
  CanonicalParameters p;
  p.b = u * eb.asDiagonal() * u.adjoint();
  p.c = u * ec.asDiagonal() * u.adjoint();
  p.d = ed.cast<Complex>().asDiagonal();
  return p;
}

TripartiteState random_canonical_state(int n, std::uint64_t seed, const Tolerance& tol) {
  const auto p = random_canonical_parameters(n, seed);
  return TripartiteState(canonical_matrix(p.b, p.c, p.d), Dims{n}, tol);
}

std::vector<ProductVector> shifts_upb_vectors() {
  const double s = 1.0 / std::numbers::sqrt2;
  CVector zero(2), one(2), plus(2), minus(2);
  zero << 1.0, 0.0;
  one << 0.0, 1.0;
  plus << s, s;
  minus << s, -s;
  return {ProductVector::from_factors(zero, one, plus), ProductVector::from_factors(one, plus, zero),
          ProductVector::from_factors(plus, zero, one), ProductVector::from_factors(minus, minus, minus)};
}

TripartiteState shifts_upb_state(const Tolerance& tol) {
  CMatrix rho = CMatrix::Identity(8, 8);
  for (const auto& v : shifts_upb_vectors()) rho -= v.projector();
  return TripartiteState(rho / 4.0, Dims{2}, tol);
}

TripartiteState werner_state(double p, int n, const Tolerance& tol) {
  if (!(p >= 0.0 && p <= 1.0)) throw Error("Werner parameter must lie in [0, 1]");
  if (n < 1) throw DimensionError("N must be >= 1");
  CVector singlet = CVector::Zero(4);
  singlet(1) = 1.0 / std::numbers::sqrt2;
  singlet(2) = -1.0 / std::numbers::sqrt2;
  const CMatrix ab = p * singlet * singlet.adjoint() + (1.0 - p) * CMatrix::Identity(4, 4) / 4.0;
  CMatrix anc = CMatrix::Zero(n, n);
  anc(0, 0) = 1.0;
  return TripartiteState(kron(ab, anc), Dims{n}, tol);
}

}  // namespace trisep
