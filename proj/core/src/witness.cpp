#include "trisep/witness.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace trisep {

namespace {

CMatrix kernel_projector(const CMatrix& m, const Tolerance& tol) {
  const CMatrix k = kernel_basis(m, tol);
  return k * k.adjoint();
}

CVector lowest_eigenvector(const CMatrix& m) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(CMatrix(0.5 * (m + m.adjoint())));
  return es.eigenvectors().col(0);
}

// <u| M |u> on the first factor of M acting on C^d1 (x) C^d2.
CMatrix contract_first(const CMatrix& m, int d1, int d2, const CVector& u) {
  CMatrix out = CMatrix::Zero(d2, d2);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j) out += std::conj(u(i)) * u(j) * m.block(i * d2, j * d2, d2, d2);
  return out;
}

// <w| M |w> on the second factor.
CMatrix contract_second(const CMatrix& m, int d1, int d2, const CVector& w) {
  CMatrix out(d1, d1);
  for (int i = 0; i < d1; ++i)
    for (int j = 0; j < d1; ++j) out(i, j) = w.dot(m.block(i * d2, j * d2, d2, d2) * w);
  return out;
}

// Alternating minimisation; each step is exact in one factor, so the value never increases.
ProductVector descend(const CMatrix& op, Dims dims, ProductVector v, int sweeps, double* value) {
  const int n = dims.n;
  double last = product_expectation(op, dims, v);
  for (int s = 0; s < sweeps; ++s) {
    v.e = lowest_eigenvector(contract_second(op, 2, 2 * n, kron(v.f, v.g)));
    const CMatrix pe = contract_first(op, 2, 2 * n, v.e);
    v.f = lowest_eigenvector(contract_second(pe, 2, n, v.g));
    v.g = lowest_eigenvector(contract_first(pe, 2, n, v.f));
    const double now = product_expectation(op, dims, v);
    const bool done = last - now <= 1e-15 * (1.0 + std::abs(now));
    last = now;
    if (done) break;
  }
  *value = last;
  return v;
}

}  // namespace

double product_expectation(const CMatrix& op, Dims dims, const ProductVector& v) {
  const CVector x = product_vector(v.e, v.f, v.g);
  if (x.size() != dims.dim()) throw DimensionError("product vector does not match dims");
  return x.dot(op * x).real();
}

EpsilonResult epsilon_inf(const CMatrix& op, Dims dims, const EpsilonOptions& opts) {
  require_shape(op, dims);
  EpsilonResult out;
  out.multistart_value = std::numeric_limits<double>::infinity();
  Rng rng(opts.seed);
  for (int s = 0; s < opts.starts; ++s) {
    double value = 0.0;
    const ProductVector v = descend(op, dims, random_product_vector(dims, rng), opts.max_sweeps, &value);
    if (value < out.multistart_value) out.multistart_value = value, out.argmin = v;
  }
  out.value = out.multistart_value;
  if (opts.grid_check && dims.n == 2 && opts.grid_step > 0) {
    double best = std::numeric_limits<double>::infinity();
    ProductVector best_v;
    const int steps = static_cast<int>(std::floor(1.0 / opts.grid_step + 1e-9));
    std::vector<CVector> qubits;
    for (int chart = 0; chart < 2; ++chart)
      for (int i = -steps; i <= steps; ++i)
        for (int j = -steps; j <= steps; ++j) {
          const Complex z(i * opts.grid_step, j * opts.grid_step);
          if (std::abs(z) > 1.0 + 1e-12) continue;
          CVector q(2);
          if (chart)
            q << 1.0, z;
          else
            q << z, 1.0;
          qubits.push_back(q.normalized());
        }
    for (const CVector& e : qubits) {
      const CMatrix pe = contract_first(op, 2, 4, e);
      for (const CVector& f : qubits) {
        // <f| pe |f> is 2 x 2 Hermitian: smallest eigenvalue in closed form.
        Complex m00 = 0.0, m01 = 0.0, m11 = 0.0;
        for (int i = 0; i < 2; ++i)
          for (int j = 0; j < 2; ++j) {
            const Complex c = std::conj(f(i)) * f(j);
            m00 += c * pe(2 * i, 2 * j);
            m01 += c * pe(2 * i, 2 * j + 1);
            m11 += c * pe(2 * i + 1, 2 * j + 1);
          }
        const double a = m00.real(), d = m11.real();
        const double lo = 0.5 * (a + d) - std::sqrt(0.25 * (a - d) * (a - d) + std::norm(m01));
        if (lo < best) {
          best = lo;
          best_v.e = e;
          best_v.f = f;
        }
      }
    }
    best_v.g = lowest_eigenvector(contract_first(contract_first(op, 2, 4, best_v.e), 2, 2, best_v.f));
    double refined = 0.0;
    const ProductVector v = descend(op, dims, best_v, opts.max_sweeps, &refined);
    out.grid_value = std::min(best, refined);
    if (refined < out.value) out.value = refined, out.argmin = v;
  }
  if (out.value > -opts.clamp && out.value < opts.clamp) out.value = std::max(out.value, 0.0);
  out.argmin = ProductVector::from_factors(out.argmin.e, out.argmin.f, out.argmin.g);
  return out;
}

CMatrix Witness::operator_sum() const {
  return p + partial_transpose(q, dims, Transpose::A) + partial_transpose(r, dims, Transpose::B) +
         partial_transpose(s, dims, Transpose::AB);
}

CMatrix assemble_witness(const CMatrix& p, const CMatrix& q, const CMatrix& r, const CMatrix& s, double epsilon,
                         Dims dims) {
  for (const CMatrix* m : {&p, &q, &r, &s}) require_shape(*m, dims);
  return p + partial_transpose(q, dims, Transpose::A) + partial_transpose(r, dims, Transpose::B) +
         partial_transpose(s, dims, Transpose::AB) - epsilon * CMatrix::Identity(dims.dim(), dims.dim());
}

Witness build_witness(const TripartiteState& delta, const EpsilonOptions& eps, const SolveOptions& search) {
  if (!delta.is_ppt()) throw NotEdge("state is not PPT");
  const ProductSearchResult v = find_product_vectors(delta, search);
  if (!v.vectors.empty() || v.continuum)
    throw NotEdge("V[delta] is not empty (" + std::to_string(v.vectors.size()) + " product vectors)");
  Witness w;
  w.dims = delta.dims();
  const Tolerance& tol = delta.tolerance();
  w.p = kernel_projector(delta.op(0), tol);
  w.q = kernel_projector(delta.op(1), tol);
  w.r = kernel_projector(delta.op(2), tol);
  w.s = kernel_projector(delta.op(3), tol);
  const EpsilonResult e = epsilon_inf(w.operator_sum(), w.dims, eps);
  if (!(e.value > 0)) throw NotEdge("the operator sum vanishes on a product vector");
  w.epsilon = e.value;
  w.w = assemble_witness(w.p, w.q, w.r, w.s, w.epsilon, w.dims);
  return w;
}

}  // namespace trisep
