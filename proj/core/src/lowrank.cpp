#include "trisep/lowrank.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <string>

#include "trisep/two_qubit.hpp"

namespace trisep {

namespace {

constexpr int kBasisAttempts = 64;
// Accept a corner block at once when its condition ratio is at least this.
constexpr double kGoodConditioning = 1e-2;
constexpr double kRangeTolerance = 1e-6;
constexpr int kKernelResamples = 16;

CMatrix block(const CMatrix& m, int n, int row, int col) { return m.block(row * n, col * n, n, n); }

double condition_ratio(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es((h + h.adjoint()) * 0.5, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double top = ev(ev.size() - 1);
  return top > 0 ? ev(0) / top : 0.0;
}

CVector orthogonal_qubit(const CVector& e) {
  CVector out(2);
  out << -std::conj(e(1)), std::conj(e(0));
  return out;
}

CMatrix bipartite_partial_transpose(const CMatrix& rho, int m) {
  CMatrix out(2 * m, 2 * m);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out.block(a * m, b * m, m, m) = rho.block(b * m, a * m, m, m);
  return out;
}

struct KernelCandidate {
  ProductVector vector;
  bool isolated = true;
  double residual = 0.0;
};

double kernel_residual(const CMatrix& rho, const ProductVector& v) { return (rho * v.full()).norm(); }

// Product vectors |e,f,g> with <f,g| rho_e |f,g> = 0 for the given e.
std::vector<KernelCandidate> kernel_vectors_for(const CMatrix& rho, const CVector& e, const Tolerance& tol,
                                                bool& degenerate) {
  degenerate = false;
  const CMatrix rho_e = local_project(rho, Dims{2}, Party::A, e);
  const CMatrix range = range_basis(rho_e, tol);
  std::vector<KernelCandidate> out;
  CVector f0(2), f1(2);
  f0 << 1.0, 0.0;
  f1 << 0.0, 1.0;
  const auto push = [&](const CVector& f, const CVector& g, bool isolated) {
    ProductVector v = ProductVector::from_factors(e, f, g);
    out.push_back({v, isolated, kernel_residual(rho, v)});
  };
  if (range.cols() > 2) return out;
  if (range.cols() == 0) {
    push(f0, f0, false);
    degenerate = true;
    return out;
  }
  // Row i of M(f): g -> <r_i| f (x) g>, split as M0 + alpha M1 for f = |0> + alpha|1>.
  CMatrix m0(range.cols(), 2), m1(range.cols(), 2);
  for (Eigen::Index i = 0; i < range.cols(); ++i)
    for (int c = 0; c < 2; ++c) {
      m0(i, c) = std::conj(range(c, i));
      m1(i, c) = std::conj(range(2 + c, i));
    }
  const auto null_vector = [](const CMatrix& m) -> CVector {
    Eigen::JacobiSVD<CMatrix> svd(m, Eigen::ComputeFullV);
    return svd.matrixV().col(1);
  };
  if (range.cols() == 1) {
    push(f0, null_vector(m0), false);
    degenerate = true;
    return out;
  }
  const Complex qa = m1.determinant();
  const Complex qc = m0.determinant();
  const Complex qb = (m0 + m1).determinant() - qa - qc;
  const double scale = std::max(m0.squaredNorm(), m1.squaredNorm());
  const double eps = 1e-12 * scale;
  if (std::abs(qa) <= eps && std::abs(qb) <= eps && std::abs(qc) <= eps) {
    degenerate = true;
    push(f0, null_vector(m0), false);
    return out;
  }
  std::vector<std::optional<Complex>> alphas;
  if (std::abs(qa) > eps) {
    const Complex disc = std::sqrt(qb * qb - 4.0 * qa * qc);
    const Complex q = -0.5 * (qb + (std::real(std::conj(qb) * disc) >= 0 ? disc : -disc));
    alphas.emplace_back(q / qa);
    if (std::abs(q) > 0) alphas.emplace_back(qc / q);
    else alphas.emplace_back(Complex(0.0));
  } else {
    alphas.emplace_back(std::nullopt);
    if (std::abs(qb) > eps) alphas.emplace_back(-qc / qb);
  }
  for (const auto& alpha : alphas) {
    if (!alpha) {
      push(f1, null_vector(m1), true);
    } else {
      CVector f(2);
      f << 1.0, *alpha;
      push(f, null_vector(m0 + *alpha * m1), true);
    }
  }
  return out;
}

std::vector<KernelCandidate> kernel_candidates(const TripartiteState& state, std::uint64_t seed) {
  const auto& tol = state.tolerance();
  std::vector<CVector> choices;
  try {
    const auto terms = bipartite_rank_n_decompose(state.rho(), 4, tol, seed);
    if (static_cast<int>(terms.size()) == state.rank())
      for (auto it = terms.rbegin(); it != terms.rend(); ++it) choices.push_back(orthogonal_qubit(it->e));
  } catch (const Error&) {
  }
  Rng rng(seed);
  for (int i = 0; i < kKernelResamples; ++i) choices.push_back(random_unit_vector(2, rng));

  std::vector<KernelCandidate> isolated;
  std::vector<KernelCandidate> continuum;
  for (const auto& e : choices) {
    bool degenerate = false;
    for (auto& c : kernel_vectors_for(state.rho(), e, tol, degenerate))
      (c.isolated ? isolated : continuum).push_back(std::move(c));
  }
  isolated.insert(isolated.end(), continuum.begin(), continuum.end());
  return isolated;
}

void require_three_qubit_rank(const TripartiteState& state, int rank) {
  if (state.dims().n != 2) throw DimensionError("three-qubit procedure needs dims (2,2,2)");
  if (state.rank() != rank)
    throw RankMismatch("expected rank " + std::to_string(rank) + ", got " + std::to_string(state.rank()));
  if (!state.is_ppt()) throw NotPPT("state is not PPT with respect to every partition");
}

// rho |e_hat, f, g> = |e_hat>|psi_BC> for a kernel vector |e, f, g>; returns the
// normalised product vector |e_hat, psi_BC> or nullopt when unusable.
std::optional<CVector> range_product_from_kernel(const CMatrix& rho, const ProductVector& k) {
  const CVector ehat = orthogonal_qubit(k.e);
  const CVector w = rho * product_vector(ehat, k.f, k.g);
  const double scale = std::max(1e-300, rho.norm());
  if (w.norm() <= 1e-8 * scale) return std::nullopt;
  const CVector along_e = w.reshaped(4, 2) * k.e.conjugate();
  if (along_e.norm() > 1e-6 * w.norm()) return std::nullopt;
  return CVector(w / w.norm());
}

}  // namespace

CMatrix CanonicalForm::reconstruct() const {
  const int n = dims.n;
  CMatrix x(n, 4 * n);
  x << c * b, c, b, CMatrix::Identity(n, n);
  const CMatrix l = kron(kron(CMatrix(unitary_a.adjoint()), CMatrix(unitary_b.adjoint())), psd_sqrt(d));
  return l * x.adjoint() * x * l.adjoint();
}

CanonicalForm extract_canonical(const TripartiteState& state, std::uint64_t seed) {
  const auto& tol = state.tolerance();
  const int n = state.dims().n;
  if (!state.is_ppt()) throw NotPPT("state is not PPT with respect to every partition");
  if (state.rank() != n)
    throw RankMismatch("canonical form needs rank " + std::to_string(n) + ", got " + std::to_string(state.rank()));

  Rng rng(seed);
  const CMatrix eye2 = CMatrix::Identity(2, 2);
  const CMatrix eyen = CMatrix::Identity(n, n);
  std::optional<CanonicalForm> best;
  double best_ratio = 0.0;
  int attempts = 0;
  for (int k = 0; k <= kBasisAttempts; ++k) {
    ++attempts;
    const CMatrix ua = k == 0 ? eye2 : random_unitary(2, rng);
    const CMatrix ub = k == 0 ? eye2 : random_unitary(2, rng);
    const CMatrix local = kron(kron(ua, ub), eyen);
    const CMatrix rotated = local * state.rho() * local.adjoint();
    const CMatrix corner = block(rotated, n, 3, 3);
    if (numerical_rank(corner, tol) != n) continue;
    const double ratio = condition_ratio(corner);
    if (ratio > best_ratio) {
      best_ratio = ratio;
      CanonicalForm f;
      f.dims = state.dims();
      f.unitary_a = ua;
      f.unitary_b = ub;
      f.d = (corner + corner.adjoint()) * 0.5;
      f.filter = psd_inverse_sqrt(f.d, tol);
      const CMatrix filt = kron(CMatrix(CMatrix::Identity(4, 4)), f.filter);
      const CMatrix filtered = filt * rotated * filt;
      f.b = block(filtered, n, 3, 2);
      f.c = block(filtered, n, 3, 1);
      CMatrix x(n, 4 * n);
      x << f.c * f.b, f.c, f.b, eyen;
      f.delta_residual = (filtered - x.adjoint() * x).norm();
      best = f;
    }
    if (best_ratio >= kGoodConditioning) break;
  }
  if (!best) throw BasisSearchExhausted("no local basis gave a full-rank |11> corner block");
  best->basis_attempts = attempts;

  CanonicalForm& f = *best;
  f.commutator_residual = std::max({commutator_norm(f.b, f.b.adjoint()), commutator_norm(f.c, f.c.adjoint()),
                                    commutator_norm(f.b, f.c), commutator_norm(f.b, f.c.adjoint())});
  const double scale = std::max({1.0, f.b.squaredNorm(), f.c.squaredNorm()});
  if (f.commutator_residual > tol.residual * scale)
    throw CommutatorError("extracted B, C are not commuting normal operators (residual " +
                          std::to_string(f.commutator_residual) + ")");
  if (f.delta_residual > tol.residual * scale)
    throw CommutatorError("state does not have the canonical form (residual " + std::to_string(f.delta_residual) +
                          ")");
  return f;
}

Decomposition decompose_canonical(const CanonicalForm& form, const Tolerance& tol) {
  const CMatrix ops[] = {form.b, form.c};
  const SimultaneousEigen se = simultaneous_diagonalize(ops, tol);
  const CMatrix sqrt_d = psd_sqrt(form.d);
  Decomposition out;
  for (Eigen::Index k = 0; k < se.basis.cols(); ++k) {
    CVector a(2), b(2);
    a << std::conj(se.eigenvalues(k, 1)), 1.0;
    b << std::conj(se.eigenvalues(k, 0)), 1.0;
    const CVector e = form.unitary_a.adjoint() * a;
    const CVector f = form.unitary_b.adjoint() * b;
    const CVector g = sqrt_d * se.basis.col(k);
    out.weights.push_back(e.squaredNorm() * f.squaredNorm() * g.squaredNorm());
    out.vectors.push_back(ProductVector::from_factors(e, f, g));
  }
  return out;
}

Decomposition decompose_rank_n(const TripartiteState& state, std::uint64_t seed) {
  return decompose_canonical(extract_canonical(state, seed), state.tolerance());
}

CharlieSupport compress_charlie(const CMatrix& rho, Dims dims, const Tolerance& tol) {
  require_shape(rho, dims);
  const CMatrix reduced = reduced_state(rho, dims, Party::C);
  CharlieSupport s;
  if (numerical_rank(reduced, tol) == dims.n) {
    s.isometry = CMatrix::Identity(dims.n, dims.n);
    s.compressed = rho;
    s.dims = dims;
    return s;
  }
  s.isometry = range_basis(reduced, tol);
  s.dims = Dims{static_cast<int>(s.isometry.cols())};
  if (s.dims.n == 0) throw Error("state is zero");
  const CMatrix v = kron(CMatrix(CMatrix::Identity(4, 4)), s.isometry);
  s.compressed = v.adjoint() * rho * v;
  return s;
}

Decomposition lift_charlie(const Decomposition& d, const CMatrix& isometry) {
  Decomposition out = d;
  for (auto& v : out.vectors) v = ProductVector::from_factors(v.e, v.f, isometry * v.g);
  return out;
}

std::vector<BipartiteTerm> bipartite_rank_n_decompose(const CMatrix& rho_in, int m, const Tolerance& tol,
                                                      std::uint64_t seed) {
  if (m < 1 || rho_in.rows() != 2 * m || rho_in.cols() != 2 * m)
    throw DimensionError("bipartite decomposition expects a (2M) x (2M) matrix");
  const CMatrix rho = hermitize(rho_in, tol);
  if (!is_psd(rho, tol)) throw Error("matrix is not positive semidefinite");
  if (!is_psd(bipartite_partial_transpose(rho, m), tol)) throw NotPPT("state is not PPT across the 2 x M cut");

  const CMatrix reduced = rho.block(0, 0, m, m) + rho.block(m, m, m, m);
  CMatrix iso;
  if (numerical_rank(reduced, tol) == m)
    iso = CMatrix::Identity(m, m);
  else
    iso = range_basis(reduced, tol);
  const int mc = static_cast<int>(iso.cols());
  if (mc == 0) return {};
  const CMatrix lift = kron(CMatrix(CMatrix::Identity(2, 2)), iso);
  const CMatrix rc = lift.adjoint() * rho * lift;
  const int r = numerical_rank(rc, tol);

  std::vector<BipartiteTerm> out;
  if (r == mc) {
    Rng rng(seed);
    const CMatrix eyem = CMatrix::Identity(mc, mc);
    double best_ratio = 0.0;
    CMatrix best_u, best_corner, best_rotated;
    for (int k = 0; k <= kBasisAttempts; ++k) {
      const CMatrix u = k == 0 ? CMatrix(CMatrix::Identity(2, 2)) : random_unitary(2, rng);
      const CMatrix local = kron(u, eyem);
      const CMatrix rotated = local * rc * local.adjoint();
      const CMatrix corner = rotated.block(mc, mc, mc, mc);
      if (numerical_rank(corner, tol) != mc) continue;
      const double ratio = condition_ratio(corner);
      if (ratio > best_ratio) {
        best_ratio = ratio;
        best_u = u;
        best_corner = (corner + corner.adjoint()) * 0.5;
        best_rotated = rotated;
      }
      if (best_ratio >= kGoodConditioning) break;
    }
    if (best_ratio <= 0.0) throw BasisSearchExhausted("no qubit basis gave a full-rank corner block");
    const CMatrix filter = psd_inverse_sqrt(best_corner, tol);
    const CMatrix filt = kron(CMatrix(CMatrix::Identity(2, 2)), filter);
    const CMatrix filtered = filt * best_rotated * filt;
    const CMatrix bm = filtered.block(mc, 0, mc, mc);
    CMatrix x(mc, 2 * mc);
    x << bm, eyem;
    const double scale = std::max(1.0, bm.squaredNorm());
    if ((filtered - x.adjoint() * x).norm() > tol.residual * scale)
      throw RankMismatch("state does not have the 2 x M canonical form");
    const CMatrix ops[] = {bm};
    const SimultaneousEigen se = simultaneous_diagonalize(ops, tol, seed);
    const CMatrix sqrt_corner = psd_sqrt(best_corner);
    for (Eigen::Index k = 0; k < se.basis.cols(); ++k) {
      CVector a(2);
      a << std::conj(se.eigenvalues(k, 0)), 1.0;
      const CVector e = best_u.adjoint() * a;
      const CVector b = iso * (sqrt_corner * se.basis.col(k));
      out.push_back({e.squaredNorm() * b.squaredNorm(), e / e.norm(), b / b.norm()});
    }
    return out;
  }
  if (mc == 2 && r > 2) {
    for (const auto& t : two_qubit_decomposition(rc, tol)) {
      const CVector b = iso * t.f;
      out.push_back({t.weight * b.squaredNorm(), t.e, b / b.norm()});
    }
    return out;
  }
  throw RankMismatch("rank " + std::to_string(r) + " does not match the support dimension " + std::to_string(mc));
}

KernelProductVector kernel_product_vector(const TripartiteState& state, std::uint64_t seed) {
  if (state.dims().n != 2) throw DimensionError("kernel product vector search needs dims (2,2,2)");
  if (state.rank() != 2 && state.rank() != 3) throw RankMismatch("kernel product vector search needs rank 2 or 3");
  const auto candidates = kernel_candidates(state, seed);
  if (candidates.empty()) throw NumericalBreakdown("no kernel product vector found");
  const auto best = std::min_element(candidates.begin(), candidates.end(), [](const auto& a, const auto& b) {
    if (a.isolated != b.isolated) return a.isolated;
    return a.residual < b.residual;
  });
  return {best->vector, best->isolated, best->residual};
}

double subtraction_weight(const CMatrix& m, const CVector& v, const Tolerance& tol) {
  const CMatrix kernel = kernel_basis(hermitize(m, tol), tol);
  if (kernel.cols() > 0 && (kernel.adjoint() * v).norm() > kRangeTolerance * v.norm()) return 0.0;
  const double q = std::real(v.dot(pseudo_inverse_hermitian(m, tol) * v));
  return q > 0 ? 1.0 / q : 0.0;
}

Subtraction subtract_product(const TripartiteState& state, const CVector& v_in, Partition partition) {
  const auto& tol = state.tolerance();
  if (v_in.size() != state.dims().dim()) throw DimensionError("subtracted vector has wrong dimension");
  const double norm = v_in.norm();
  if (!(norm > 0)) throw RangeMembershipError("cannot subtract the zero vector");
  const CVector v = v_in / norm;

  std::vector<std::pair<int, CVector>> checks{{0, v}};
  if (partition == Partition::All) {
    const ProductVector pv = factor_product(v, state.dims(), 1e-6);
    for (int op = 1; op < 4; ++op) checks.emplace_back(op, pv.conjugated_for(op));
  }
  double lambda = std::numeric_limits<double>::infinity();
  for (const auto& [op, vec] : checks) {
    const double w = subtraction_weight(state.op(op), vec, tol);
    if (!(w > 0))
      throw RangeMembershipError(std::string("vector is not in the range of ") + operator_name(op));
    lambda = std::min(lambda, w);
  }
  Subtraction s;
  s.lambda = lambda;
  s.remainder = state.rho() - lambda * v * v.adjoint();
  s.remainder = (s.remainder + s.remainder.adjoint()) * 0.5;
  s.psd[0] = is_psd(s.remainder, tol);
  for (int op = 1; op < 4; ++op)
    s.psd[static_cast<std::size_t>(op)] =
        is_psd(partial_transpose(s.remainder, state.dims(), kAllTransposes[op - 1]), tol);
  return s;
}

ProductVector factor_product(const CVector& v, Dims dims, double threshold) {
  if (v.size() != dims.dim()) throw DimensionError("vector does not match dims");
  const SchmidtSplit outer = schmidt_split(v, 2, 2 * dims.n);
  if (outer.coefficients.size() > 1 && outer.coefficients(1) > threshold * outer.coefficients(0))
    throw FactorNotProduct("vector is entangled across A|BC (Schmidt ratio " +
                           std::to_string(outer.coefficients(1) / outer.coefficients(0)) + ")");
  const SchmidtSplit inner = schmidt_split(outer.right, 2, dims.n);
  if (inner.coefficients.size() > 1 && inner.coefficients(1) > threshold * inner.coefficients(0))
    throw FactorNotProduct("vector is entangled across B|C (Schmidt ratio " +
                           std::to_string(inner.coefficients(1) / inner.coefficients(0)) + ")");
  return ProductVector::from_factors(outer.left, inner.left, inner.right);
}

Decomposition decompose_rank2_3qubit(const TripartiteState& state, std::uint64_t seed) {
  require_three_qubit_rank(state, 2);
  const auto& tol = state.tolerance();
  std::string last_error = "no usable kernel product vector";
  for (const auto& cand : kernel_candidates(state, seed)) {
    if (cand.residual > 1e-8 * std::max(1.0, state.rho().norm())) continue;
    const auto v = range_product_from_kernel(state.rho(), cand.vector);
    if (!v) continue;
    try {
      const ProductVector first = factor_product(*v, state.dims());
      const Subtraction sub = subtract_product(state, *v, Partition::A_BC);
      Eigen::SelfAdjointEigenSolver<CMatrix> es(sub.remainder);
      const double mu = es.eigenvalues()(7);
      if (!(mu > 0)) continue;
      const ProductVector second = factor_product(es.eigenvectors().col(7), state.dims());
      Decomposition d{{sub.lambda, mu}, {first, second}};
      if (d.residual(state.rho(), state.dims()) > tol.residual * std::max(1.0, state.trace())) continue;
      return d;
    } catch (const FactorNotProduct& ex) {
      last_error = ex.what();
    } catch (const RangeMembershipError& ex) {
      last_error = ex.what();
    }
  }
  throw FactorNotProduct("rank-2 decomposition failed: " + last_error);
}

Decomposition decompose_rank3_3qubit(const TripartiteState& state, std::uint64_t seed) {
  require_three_qubit_rank(state, 3);
  const auto& tol = state.tolerance();
  std::string last_error = "no usable kernel product vector";
  for (const auto& cand : kernel_candidates(state, seed)) {
    if (cand.residual > 1e-8 * std::max(1.0, state.rho().norm())) continue;
    const auto v = range_product_from_kernel(state.rho(), cand.vector);
    if (!v) continue;
    try {
      const ProductVector first = factor_product(*v, state.dims());
      const Subtraction sub = subtract_product(state, *v, Partition::A_BC);
      const TripartiteState rest = TripartiteState::unnormalized(sub.remainder, state.dims(), tol);
      if (rest.rank() != 2) continue;
      Decomposition d = decompose_rank2_3qubit(rest, seed);
      d.weights.insert(d.weights.begin(), sub.lambda);
      d.vectors.insert(d.vectors.begin(), first);
      if (d.residual(state.rho(), state.dims()) > tol.residual * std::max(1.0, state.trace())) continue;
      return d;
    } catch (const Error& ex) {
      last_error = ex.what();
    }
  }
  throw FactorNotProduct("rank-3 decomposition failed: " + last_error);
}

}  // namespace trisep
