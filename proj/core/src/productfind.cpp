#include "trisep/productfind.hpp"

#include <algorithm>
#include <numbers>

namespace trisep {

namespace {

Complex unit_root(int k, int n) { return std::polar(1.0, 2.0 * std::numbers::pi * k / n); }

// F(a, j) = w^{-aj} / n, the inverse of the Vandermonde matrix on the n-th roots of unity.
CMatrix inverse_dft(int n) {
  CMatrix f(n, n);
  for (int a = 0; a < n; ++a)
    for (int j = 0; j < n; ++j) f(a, j) = unit_root(-((a * j) % n), n) / static_cast<double>(n);
  return f;
}

bool uses_alpha(int op) { return op == 0 || op == 2; }
bool uses_beta(int op) { return op == 0 || op == 1; }

CVector qubit(int chart_bit, Complex x) {
  CVector v(2);
  if (chart_bit)
    v << 1.0, x;
  else
    v << x, 1.0;
  return v;
}

}  // namespace

CVector KernelData::component(int op, int i, int ab) const {
  return bases[static_cast<std::size_t>(op)].col(i).segment(ab * dims.n, dims.n);
}

KernelData assemble_constraints(const TripartiteState& state) {
  KernelData kd;
  kd.dims = state.dims();
  for (int op = 0; op < 4; ++op)
    kd.bases[static_cast<std::size_t>(op)] = kernel_basis(state.op(op), state.tolerance());
  return kd;
}

KernelData assemble_constraints(const CMatrix& rho, Dims dims, const Tolerance& tol) {
  require_shape(rho, dims);
  const CMatrix h = hermitize(rho, tol);
  KernelData kd;
  kd.dims = dims;
  kd.bases[0] = kernel_basis(h, tol);
  for (int op = 1; op < 4; ++op)
    kd.bases[static_cast<std::size_t>(op)] = kernel_basis(partial_transpose(h, dims, kAllTransposes[op - 1]), tol);
  return kd;
}

std::vector<ConstraintRow> constraint_rows(const KernelData& kd) {
  std::vector<ConstraintRow> rows;
  for (int op = 0; op < 4; ++op)
    for (int i = 0; i < kd.count(op); ++i) rows.push_back({op, kd.bases[static_cast<std::size_t>(op)].col(i)});
  return rows;
}

CVector evaluate_row(const ConstraintRow& row, Dims dims, int chart, Complex alpha, Complex beta, Complex a2,
                     Complex b2) {
  const CVector e = qubit(chart & 1, uses_alpha(row.op) ? alpha : a2);
  const CVector f = qubit(chart & 2, uses_beta(row.op) ? beta : b2);
  const int n = dims.n;
  CVector out = CVector::Zero(n);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b) out += e(a) * f(b) * row.kernel.segment((2 * a + b) * n, n).conjugate();
  return out;
}

CMatrix evaluate_A(const KernelData& kd, int chart, Complex alpha, Complex beta, Complex a2, Complex b2) {
  const auto rows = constraint_rows(kd);
  CMatrix a(static_cast<Eigen::Index>(rows.size()), kd.dims.n);
  for (std::size_t i = 0; i < rows.size(); ++i)
    a.row(static_cast<Eigen::Index>(i)) = evaluate_row(rows[i], kd.dims, chart, alpha, beta, a2, b2).transpose();
  return a;
}

CMatrix evaluate_A(const KernelData& kd, Complex alpha, Complex beta, int chart) {
  return evaluate_A(kd, chart, alpha, beta, std::conj(alpha), std::conj(beta));
}

CMatrix MinorEquation::at(Complex beta, Complex b2) const {
  CMatrix out(deg_alpha + 1, deg_a2 + 1);
  for (int i = 0; i <= deg_alpha; ++i)
    for (int j = 0; j <= deg_a2; ++j) out(i, j) = coefficient(i, j)(beta, b2);
  return out;
}

Complex MinorEquation::operator()(Complex alpha, Complex beta, Complex a2, Complex b2) const {
  const CMatrix c = at(beta, b2);
  Complex acc = 0.0;
  Complex ai = 1.0;
  for (int i = 0; i <= deg_alpha; ++i, ai *= alpha) {
    Complex aj = 1.0;
    for (int j = 0; j <= deg_a2; ++j, aj *= a2) acc += c(i, j) * ai * aj;
  }
  return acc;
}

int MinorEquation::deg_beta() const { return coefficients.empty() ? 0 : coefficients.front().deg_x(); }
int MinorEquation::deg_b2() const { return coefficients.empty() ? 0 : coefficients.front().deg_y(); }

MinorEquation MinorEquation::conj_swap() const {
  MinorEquation out;
  out.deg_alpha = deg_a2;
  out.deg_a2 = deg_alpha;
  out.rows = rows;
  out.conjugated = !conjugated;
  out.coefficients.resize(coefficients.size());
  for (int i = 0; i <= out.deg_alpha; ++i)
    for (int j = 0; j <= out.deg_a2; ++j)
      out.coefficients[static_cast<std::size_t>(i * (out.deg_a2 + 1) + j)] = coefficient(j, i).conj_swap();
  return out;
}

MinorEquation minor_equation(const std::vector<ConstraintRow>& rows, const std::vector<int>& chosen, Dims dims,
                             int chart) {
  if (static_cast<int>(chosen.size()) != dims.n) throw DimensionError("a minor needs exactly N rows");
  int da = 0, dbeta = 0, da2 = 0, db2 = 0;
  for (int idx : chosen) {
    const int op = rows.at(static_cast<std::size_t>(idx)).op;
    (uses_alpha(op) ? da : da2) += 1;
    (uses_beta(op) ? dbeta : db2) += 1;
  }
  const int na = da + 1, na2 = da2 + 1, nb = dbeta + 1, nb2 = db2 + 1;
  const CMatrix fa = inverse_dft(na), fa2 = inverse_dft(na2), fb = inverse_dft(nb), fb2 = inverse_dft(nb2);

  // coeff_ab[j][k] = coefficients in (alpha, a2) at grid point (beta_j, b2_k).
  std::vector<CMatrix> grid(static_cast<std::size_t>(nb * nb2));
  CMatrix m(dims.n, dims.n);
  for (int j = 0; j < nb; ++j)
    for (int k = 0; k < nb2; ++k) {
      const Complex beta = unit_root(j, nb), b2 = unit_root(k, nb2);
      CMatrix values(na, na2);
      for (int p = 0; p < na; ++p)
        for (int q = 0; q < na2; ++q) {
          const Complex alpha = unit_root(p, na), a2 = unit_root(q, na2);
          for (int r = 0; r < dims.n; ++r)
            m.row(r) = evaluate_row(rows[static_cast<std::size_t>(chosen[static_cast<std::size_t>(r)])], dims, chart,
                                    alpha, beta, a2, b2)
                           .transpose();
          values(p, q) = m.determinant();
        }
      grid[static_cast<std::size_t>(j * nb2 + k)] = fa * values * fa2.transpose();
    }

  MinorEquation eq;
  eq.deg_alpha = da;
  eq.deg_a2 = da2;
  eq.rows = chosen;
  eq.coefficients.reserve(static_cast<std::size_t>(na * na2));
  for (int p = 0; p < na; ++p)
    for (int q = 0; q < na2; ++q) {
      CMatrix values(nb, nb2);
      for (int j = 0; j < nb; ++j)
        for (int k = 0; k < nb2; ++k) values(j, k) = grid[static_cast<std::size_t>(j * nb2 + k)](p, q);
      eq.coefficients.emplace_back(fb * values * fb2.transpose());
    }
  return eq;
}

int MinorSystem::independent_count() const {
  return static_cast<int>(std::count_if(equations.begin(), equations.end(), [](const auto& e) { return !e.conjugated; }));
}

MinorSystem build_minor_system(const KernelData& kd, int chart, std::uint64_t seed) {
  const int n = kd.dims.n;
  const int k_tot = kd.total();
  if (k_tot <= n)
    throw ThresholdNotMet("k_tot = " + std::to_string(k_tot) + " does not exceed N = " + std::to_string(n) +
                          ": the minors impose no constraint");
  MinorSystem ms;
  ms.kernels = kd;
  ms.rows = constraint_rows(kd);
  ms.chart = chart;

  Rng rng(seed);
  std::normal_distribution<double> normal;
  const double ar = normal(rng), ai = normal(rng), br = normal(rng), bi = normal(rng);
  const Complex alpha(ar, ai), beta(br, bi);
  const CMatrix a = evaluate_A(kd, chart, alpha, beta, std::conj(alpha), std::conj(beta));
  Eigen::ColPivHouseholderQR<CMatrix> qr(a.transpose());
  const auto& perm = qr.colsPermutation().indices();
  std::vector<bool> is_base(static_cast<std::size_t>(k_tot), false);
  for (int i = 0; i < n - 1; ++i) {
    ms.base_rows.push_back(perm(i));
    is_base[static_cast<std::size_t>(perm(i))] = true;
  }
  for (int j = 0; j < k_tot; ++j) {
    if (is_base[static_cast<std::size_t>(j)]) continue;
    std::vector<int> chosen = ms.base_rows;
    chosen.push_back(j);
    ms.equations.push_back(minor_equation(ms.rows, chosen, kd.dims, chart));
  }
  const int independent = static_cast<int>(ms.equations.size());
  for (int i = 0; i < independent; ++i) {
    MinorEquation c = ms.equations[static_cast<std::size_t>(i)].conj_swap();
    c.conjugate_of = i;
    ms.equations.push_back(std::move(c));
  }
  return ms;
}

double membership_residual(const KernelData& kd, const ProductVector& v) {
  double worst = 0.0;
  for (int op = 0; op < 4; ++op) {
    if (kd.count(op) == 0) continue;
    const CVector w = v.conjugated_for(op);
    worst = std::max(worst, (kd.bases[static_cast<std::size_t>(op)].adjoint() * w).norm());
  }
  return worst;
}

}  // namespace trisep
