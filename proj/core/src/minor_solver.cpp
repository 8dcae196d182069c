#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "trisep/productfind.hpp"

namespace trisep {

namespace {

constexpr double kIdenticallyZero = 1e-12;
constexpr double kConjugateFilter = 1e-6;

bool uses_alpha(int op) { return op == 0 || op == 2; }
bool uses_beta(int op) { return op == 0 || op == 1; }

int swap_chart(int chart) { return ((chart & 1) << 1) | ((chart & 2) >> 1); }

Complex random_complex(Rng& rng) {
  std::normal_distribution<double> normal;
  const double re = normal(rng);
  const double im = normal(rng);
  return {re, im};
}

// ---------------------------------------------------------------- rows

struct RowEval {
  CMatrix a, dx, dy;
};

RowEval eval_rows(const std::vector<ConstraintRow>& rows, Dims dims, int chart, Complex alpha, Complex beta) {
  const int n = dims.n;
  const auto m = static_cast<Eigen::Index>(rows.size());
  RowEval out{CMatrix::Zero(m, n), CMatrix::Zero(m, n), CMatrix::Zero(m, n)};
  for (Eigen::Index r = 0; r < m; ++r) {
    const auto& row = rows[static_cast<std::size_t>(r)];
    const Complex x = uses_alpha(row.op) ? alpha : std::conj(alpha);
    const Complex y = uses_beta(row.op) ? beta : std::conj(beta);
    Complex e[2], de[2], f[2], df[2];
    if (chart & 1) {
      e[0] = 1.0, e[1] = x, de[0] = 0.0, de[1] = 1.0;
    } else {
      e[0] = x, e[1] = 1.0, de[0] = 1.0, de[1] = 0.0;
    }
    if (chart & 2) {
      f[0] = 1.0, f[1] = y, df[0] = 0.0, df[1] = 1.0;
    } else {
      f[0] = y, f[1] = 1.0, df[0] = 1.0, df[1] = 0.0;
    }
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) {
        const auto k = row.kernel.segment((2 * a + b) * n, n).conjugate().transpose();
        out.a.row(r) += e[a] * f[b] * k;
        out.dx.row(r) += de[a] * f[b] * k;
        out.dy.row(r) += e[a] * df[b] * k;
      }
  }
  return out;
}

// Unit vector in the numerical kernel of `a`; `hint` picks the member when the kernel is larger than one.
CVector null_vector(const CMatrix& a, const CVector& hint) {
  const auto n = hint.size();
  if (a.rows() == 0) return hint.normalized();
  Eigen::JacobiSVD<CMatrix> svd(a, Eigen::ComputeFullV);
  const CMatrix& v = svd.matrixV();
  const auto r = std::min<Eigen::Index>(a.rows(), n);
  if (r == n) return v.col(n - 1);
  const CMatrix k = v.rightCols(n - r);
  CVector g = k * (k.adjoint() * hint);
  if (g.norm() < 1e-12) return v.col(n - 1);
  return g.normalized();
}

struct Polished {
  Complex alpha, beta;
  CVector g;
  double cost = 0.0;
};

// Levenberg-Marquardt on A(alpha, beta, conj alpha, conj beta) g = 0 with <g0|g> = 1.
Polished polish(const std::vector<ConstraintRow>& rows, Dims dims, int chart, Complex alpha, Complex beta,
                const CVector& g_hint, int iterations = 100) {
  const int n = dims.n;
  const auto m = static_cast<Eigen::Index>(rows.size());
  Polished p{alpha, beta, null_vector(eval_rows(rows, dims, chart, alpha, beta).a, g_hint), 0.0};
  if (m == 0) return p;
  const CVector g0 = p.g;
  const int unknowns = 4 + 2 * n;

  auto residual = [&](Complex a, Complex b, const CVector& g, RowEval* keep) {
    RowEval ev = eval_rows(rows, dims, chart, a, b);
    CVector r(m + 1);
    r.head(m) = ev.a * g;
    r(m) = g0.dot(g) - 1.0;
    if (keep) *keep = std::move(ev);
    return r;
  };
  auto realify = [](const CVector& c) {
    Eigen::VectorXd v(2 * c.size());
    v << c.real(), c.imag();
    return v;
  };

  RowEval ev;
  CVector r = residual(p.alpha, p.beta, p.g, &ev);
  double cost = r.squaredNorm();
  double mu = -1.0;
  const Complex i1(0.0, 1.0);
  for (int it = 0; it < iterations && cost > 1e-30; ++it) {
    CMatrix jc = CMatrix::Zero(m + 1, unknowns);
    const CVector dxg = ev.dx * p.g, dyg = ev.dy * p.g;
    for (Eigen::Index row = 0; row < m; ++row) {
      const int op = rows[static_cast<std::size_t>(row)].op;
      const double sa = uses_alpha(op) ? 1.0 : -1.0;
      const double sb = uses_beta(op) ? 1.0 : -1.0;
      jc(row, 0) = dxg(row);
      jc(row, 1) = sa * i1 * dxg(row);
      jc(row, 2) = dyg(row);
      jc(row, 3) = sb * i1 * dyg(row);
    }
    jc.block(0, 4, m, n) = ev.a;
    jc.block(0, 4 + n, m, n) = i1 * ev.a;
    jc.block(m, 4, 1, n) = g0.adjoint();
    jc.block(m, 4 + n, 1, n) = i1 * g0.adjoint();
    Eigen::MatrixXd j(2 * (m + 1), unknowns);
    j << jc.real(), jc.imag();
    const Eigen::VectorXd rr = realify(r);
    const Eigen::MatrixXd jtj = j.transpose() * j;
    const Eigen::VectorXd jtr = j.transpose() * rr;
    if (mu < 0) mu = 1e-6 * std::max(1e-300, jtj.diagonal().maxCoeff());
    bool accepted = false;
    for (int tries = 0; tries < 20; ++tries) {
      Eigen::MatrixXd lhs = jtj;
      lhs.diagonal().array() += mu;
      const Eigen::VectorXd step = -lhs.ldlt().solve(jtr);
      const Complex na = p.alpha + Complex(step(0), step(1));
      const Complex nb = p.beta + Complex(step(2), step(3));
      CVector ng = p.g;
      for (int c = 0; c < n; ++c) ng(c) += Complex(step(4 + c), step(4 + n + c));
      RowEval nev;
      const CVector nr = residual(na, nb, ng, &nev);
      const double ncost = nr.squaredNorm();
      if (std::isfinite(ncost) && ncost < cost) {
        const double size = step.norm();
        p.alpha = na, p.beta = nb, p.g = ng, r = nr, ev = std::move(nev);
        cost = ncost;
        mu = std::max(mu / 3.0, 1e-300);
        accepted = true;
        if (size < 1e-15 * (1.0 + std::abs(p.alpha) + std::abs(p.beta))) it = iterations;
        break;
      }
      mu *= 4.0;
    }
    if (!accepted) break;
  }
  p.g = null_vector(eval_rows(rows, dims, chart, p.alpha, p.beta).a, p.g);
  p.cost = cost;
  return p;
}

// ---------------------------------------------------------------- plans

// Row-type counts of the minor behind one equation; `conj` marks its conj-swap.
struct EqChoice {
  std::array<int, 4> counts{};
  bool conj = false;

  int deg_alpha() const { return conj ? counts[1] + counts[3] : counts[0] + counts[2]; }
  int deg_a2() const { return conj ? counts[0] + counts[2] : counts[1] + counts[3]; }
  int deg_beta() const { return conj ? counts[2] + counts[3] : counts[0] + counts[1]; }
  int deg_b2() const { return conj ? counts[0] + counts[1] : counts[2] + counts[3]; }
};

enum class Kind { AlphaPure, Bilinear };

struct Plan {
  Kind kind = Kind::AlphaPure;
  bool swapped = false;
  std::vector<EqChoice> eqs;
  int x = 0, y = 0;  // degree pair of the eliminated bivariate polynomial
  int degree = 0;    // predicted degree of the univariate eliminant
};

bool independent(const std::vector<EqChoice>& eqs, const std::array<int, 4>& k, int n) {
  for (bool side : {false, true}) {
    int used = 0;
    std::array<bool, 4> types{};
    for (const auto& e : eqs) {
      if (e.conj != side) continue;
      ++used;
      for (int t = 0; t < 4; ++t) types[static_cast<std::size_t>(t)] |= e.counts[static_cast<std::size_t>(t)] > 0;
    }
    if (used == 0) continue;
    int available = 1 - n;
    for (int t = 0; t < 4; ++t)
      if (types[static_cast<std::size_t>(t)]) available += k[static_cast<std::size_t>(t)];
    if (available < used) return false;
  }
  return true;
}

// Minors with exactly `na` rows of types {0,2} and `n - na` of types {1,3}.
std::vector<EqChoice> choices_with(const std::array<int, 4>& k, int n, int na) {
  std::vector<EqChoice> out;
  const int nb = n - na;
  for (int n0 = 0; n0 <= na; ++n0) {
    const int n2 = na - n0;
    if (n0 > k[0] || n2 > k[2]) continue;
    for (int n1 = 0; n1 <= nb; ++n1) {
      const int n3 = nb - n1;
      if (n1 > k[1] || n3 > k[3]) continue;
      EqChoice s;
      s.counts = {n0, n1, n2, n3};
      out.push_back(s);
      s.conj = true;
      out.push_back(s);
    }
  }
  return out;
}

int eliminant_degree(int x, int y) { return y == 0 ? x : x * x + y * y; }

std::optional<Plan> alpha_pure_plan(const std::array<int, 4>& k, int n) {
  std::vector<EqChoice> choices;
  for (const auto& s : choices_with(k, n, n))
    if (!s.conj) choices.push_back(s);
  for (const auto& s : choices_with(k, n, 0))
    if (s.conj) choices.push_back(s);
  std::optional<Plan> best;
  for (std::size_t i = 0; i < choices.size(); ++i)
    for (std::size_t j = i; j < choices.size(); ++j) {
      std::vector<EqChoice> pair{choices[i], choices[j]};
      if (!independent(pair, k, n)) continue;
      Plan p;
      p.eqs = pair;
      p.x = n * (pair[0].deg_beta() + pair[1].deg_beta());
      p.y = n * (pair[0].deg_b2() + pair[1].deg_b2());
      if (p.x == 0) continue;
      p.degree = eliminant_degree(p.x, p.y);
      if (!best || p.degree < best->degree) best = p;
    }
  return best;
}

std::optional<Plan> bilinear_plan(const std::array<int, 4>& k, int n) {
  if (n != 2) return std::nullopt;
  const auto choices = choices_with(k, n, 1);
  std::optional<Plan> best;
  const auto count = choices.size();
  for (std::size_t a = 0; a < count; ++a)
    for (std::size_t b = 0; b < count; ++b)
      for (std::size_t c = b; c < count; ++c) {
        std::vector<EqChoice> triple{choices[a], choices[b], choices[c]};
        if (!independent(triple, k, n)) continue;
        Plan p;
        p.kind = Kind::Bilinear;
        p.eqs = triple;
        p.x = 5 * triple[0].deg_beta() + 2 * triple[1].deg_beta() + 2 * triple[2].deg_beta();
        p.y = 5 * triple[0].deg_b2() + 2 * triple[1].deg_b2() + 2 * triple[2].deg_b2();
        if (p.x == 0) continue;
        p.degree = eliminant_degree(p.x, p.y);
        if (!best || p.degree < best->degree) best = p;
      }
  return best;
}

// ---------------------------------------------------------------- equations

MinorEquation realise(const EqChoice& choice, const KernelData& kd, int chart, Rng& rng) {
  std::vector<ConstraintRow> rows;
  for (int t = 0; t < 4; ++t) {
    const int want = choice.counts[static_cast<std::size_t>(t)];
    const CMatrix& basis = kd.bases[static_cast<std::size_t>(t)];
    for (int i = 0; i < want; ++i) {
      if (want == basis.cols()) {
        rows.push_back({t, basis.col(i)});
        continue;
      }
      CVector c(basis.cols());
      for (Eigen::Index j = 0; j < c.size(); ++j) c(j) = random_complex(rng);
      rows.push_back({t, (basis * c).normalized()});
    }
  }
  std::vector<int> chosen(rows.size());
  for (std::size_t i = 0; i < chosen.size(); ++i) chosen[i] = static_cast<int>(i);
  MinorEquation eq = minor_equation(rows, chosen, kd.dims, chart);
  return choice.conj ? eq.conj_swap() : eq;
}

CVector alpha_coefficients(const MinorEquation& e, Complex beta, Complex b2) { return e.at(beta, b2).col(0); }

struct ResultantValue {
  Complex value;
  double normalised;
};

// The value carries sigma_min / sigma_max of the Sylvester matrix: a resultant
// that vanishes identically keeps this ratio at roundoff level everywhere.
ResultantValue resultant(const CVector& p, const CVector& q) {
  const CMatrix s = sylvester_matrix(p, q);
  if (s.size() == 0) return {1.0, 1.0};
  const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(s).singularValues();
  const double ratio = sv(0) > 0 ? sv(sv.size() - 1) / sv(0) : 0.0;
  return {s.partialPivLu().determinant(), ratio};
}

struct Bivariate {
  BiPolynomial h;
  bool vanishes = false;
};

template <class F>
Bivariate interpolate_checked(F&& f, int x, int y) {
  double worst = 0.0;
  BiPolynomial h = BiPolynomial::interpolate(
      [&](Complex a, Complex b) {
        const ResultantValue v = f(a, b);
        worst = std::max(worst, v.normalised);
        return v.value;
      },
      x, y);
  const double top = h.max_abs_coefficient();
  if (top > 0) h = BiPolynomial(h.coefficients() / top);
  return {h, !(worst > kIdenticallyZero)};
}

struct Eliminant {
  std::vector<Complex> roots;  ///< finite beta with a common b2 root of H and H*
  bool vanishes = false;
};

// Ascending b2 coefficients of the beta^j row of h, padded to `len`.
CVector b2_row(const BiPolynomial& h, int j, int len) {
  CVector out = CVector::Zero(len);
  if (j <= h.deg_x()) out.head(h.deg_y() + 1) = h.coefficients().row(j).transpose();
  return out;
}

// Beta values at which H(beta, .) and H*(beta, .) share a root: the
// eigenvalues of the Sylvester matrix polynomial S(beta) = sum_j beta^j S_j,
// found from a block companion matrix after the shift beta = sigma + 1/mu,
// which keeps the leading coefficient S(sigma) well conditioned.
Eliminant eliminate_b2(const BiPolynomial& h, const BiPolynomial& hs, int x, int y, Rng& rng) {
  if (y == 0) return {polynomial_roots(h.coefficients().col(0)), false};
  const int deg = std::max(h.deg_x(), hs.deg_x());
  std::vector<CMatrix> s;
  for (int j = 0; j <= deg; ++j) s.push_back(sylvester_matrix(b2_row(h, j, h.deg_y() + 1), b2_row(hs, j, hs.deg_y() + 1)));
  const Eigen::Index m = s.front().rows();
  auto at = [&](Complex beta) {
    CMatrix acc = s.back();
    for (int j = deg - 1; j >= 0; --j) acc = acc * beta + s[static_cast<std::size_t>(j)];
    return acc;
  };

  double worst = 0.0;
  for (int k = 0; k <= x; ++k) {
    const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(at(std::polar(1.0, 2.0 * std::numbers::pi * k / (x + 1))))
                                   .singularValues();
    worst = std::max(worst, sv(0) > 0 ? sv(m - 1) / sv(0) : 0.0);
  }
  if (!(worst > kIdenticallyZero)) return {{}, true};

  // Taylor shift: S(sigma + nu) = sum_i nu^i T_i.
  std::uniform_real_distribution<double> phase(0.0, 2.0 * std::numbers::pi);
  const Complex sigma = std::polar(0.5, phase(rng));
  std::vector<CMatrix> t(static_cast<std::size_t>(deg + 1), CMatrix::Zero(m, m));
  for (int j = 0; j <= deg; ++j) {
    double binom = 1.0;
    for (int i = 0; i <= j; ++i) {
      t[static_cast<std::size_t>(i)] += binom * std::pow(sigma, j - i) * s[static_cast<std::size_t>(j)];
      binom = binom * (j - i) / (i + 1);
    }
  }
  // mu^deg S(sigma + 1/mu) = sum_i mu^(deg - i) T_i, monic after T_0^{-1}.
  const Eigen::PartialPivLU<CMatrix> lu(t[0]);
  CMatrix comp = CMatrix::Zero(m * deg, m * deg);
  for (int i = 1; i <= deg; ++i) comp.block(0, (i - 1) * m, m, m) = -lu.solve(t[static_cast<std::size_t>(i)]);
  if (deg > 1) comp.block(m, 0, m * (deg - 1), m * (deg - 1)).setIdentity();
  Eigen::ComplexEigenSolver<CMatrix> es(comp, false);
  const double cut = 1e-10 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
  Eliminant out;
  for (Eigen::Index i = 0; i < es.eigenvalues().size(); ++i) {
    const Complex mu = es.eigenvalues()(i);
    if (std::abs(mu) > cut) out.roots.push_back(sigma + 1.0 / mu);
  }
  return out;
}

// Newton on (H, H*) = 0 in the independent pair (beta, b2).
std::pair<Complex, Complex> newton_pair(const BiPolynomial& h, const BiPolynomial& hs, Complex beta, Complex b2) {
  for (int it = 0; it < 50; ++it) {
    const Complex f1 = h(beta, b2), f2 = hs(beta, b2);
    Eigen::Matrix2cd j;
    j << h.dx(beta, b2), h.dy(beta, b2), hs.dx(beta, b2), hs.dy(beta, b2);
    const Eigen::Vector2cd step = j.fullPivLu().solve(Eigen::Vector2cd(-f1, -f2));
    if (!step.allFinite()) break;
    beta += step(0);
    b2 += step(1);
    if (step.norm() < 1e-15 * (1.0 + std::abs(beta))) break;
  }
  return {beta, b2};
}

// Roots of p that are (approximately) also roots of q.
std::vector<Complex> common_roots(const CVector& p, const CVector& q, double rel) {
  const auto rp = polynomial_roots(p);
  if (q.norm() <= 1e-10 * p.norm()) return rp;
  const auto rq = polynomial_roots(q);
  std::vector<Complex> out;
  for (Complex a : rp)
    if (std::any_of(rq.begin(), rq.end(), [&](Complex b) { return std::abs(a - b) <= rel * (1.0 + std::abs(a)); }))
      out.push_back(a);
  return out;
}

// (alpha, beta) candidates from one plan, or nullopt when an eliminant vanishes identically.
struct PlanOutcome {
  std::vector<std::pair<Complex, Complex>> candidates;
  int candidate_count = 0;
  int discarded_nonconjugate = 0;
};

std::optional<PlanOutcome> run_plan(const Plan& plan, const KernelData& kd, int chart, Rng& rng,
                                    const SolveOptions& opts) {
  std::vector<MinorEquation> eqs;
  for (const auto& s : plan.eqs) eqs.push_back(realise(s, kd, chart, rng));

  Bivariate bv;
  if (plan.kind == Kind::AlphaPure) {
    bv = interpolate_checked(
        [&](Complex b, Complex b2) { return resultant(alpha_coefficients(eqs[0], b, b2), alpha_coefficients(eqs[1], b, b2)); },
        plan.x, plan.y);
  } else {
    auto h_value = [&](Complex b, Complex b2) {
      std::array<Complex, 3> p, q, r, s;
      double scale = 1.0;
      for (int i = 0; i < 3; ++i) {
        const CMatrix c = eqs[static_cast<std::size_t>(i)].at(b, b2);
        p[static_cast<std::size_t>(i)] = c(1, 1), q[static_cast<std::size_t>(i)] = c(1, 0);
        r[static_cast<std::size_t>(i)] = c(0, 1), s[static_cast<std::size_t>(i)] = c(0, 0);
        scale = std::max(scale, c.norm());
      }
      const Complex u1 = p[1] * q[0] - p[0] * q[1], v1 = p[1] * r[0] - p[0] * r[1], w1 = p[1] * s[0] - p[0] * s[1];
      const Complex u2 = p[2] * q[0] - p[0] * q[2], v2 = p[2] * r[0] - p[0] * r[2], w2 = p[2] * s[0] - p[0] * s[2];
      const Complex det = u1 * v2 - u2 * v1;
      const Complex na = w2 * v1 - w1 * v2;
      const Complex nb = u2 * w1 - u1 * w2;
      const Complex value = p[0] * na * nb + q[0] * na * det + r[0] * nb * det + s[0] * det * det;
      return ResultantValue{value, std::abs(value) / std::pow(scale, 9.0)};
    };
    bv = interpolate_checked(h_value, plan.x, plan.y);
  }
  if (bv.vanishes) return std::nullopt;
  const BiPolynomial hs = bv.h.conj_swap();
  PlanOutcome out;
  const Eliminant el = eliminate_b2(bv.h, hs, plan.x, plan.y, rng);
  if (el.vanishes) return std::nullopt;
  const std::vector<Complex>& betas = el.roots;
  out.candidate_count = static_cast<int>(betas.size());
  const double reach = opts.chart_radius * 1.5 + 0.5;
  for (Complex beta0 : betas) {
    if (!std::isfinite(beta0.real()) || !std::isfinite(beta0.imag()) || std::abs(beta0) > reach) continue;
    Complex beta = beta0;
    if (plan.y > 0) {
      const auto [nb, nb2] = newton_pair(bv.h, hs, beta0, std::conj(beta0));
      if (std::abs(nb2 - std::conj(nb)) > kConjugateFilter * (1.0 + std::abs(nb))) {
        ++out.discarded_nonconjugate;
        continue;
      }
      beta = nb;
    }
    const Complex b2 = std::conj(beta);
    if (plan.kind == Kind::AlphaPure) {
      for (Complex a : common_roots(alpha_coefficients(eqs[0], beta, b2), alpha_coefficients(eqs[1], beta, b2), 1e-3))
        out.candidates.emplace_back(a, beta);
    } else {
      std::array<CMatrix, 3> c;
      for (int i = 0; i < 3; ++i) c[static_cast<std::size_t>(i)] = eqs[static_cast<std::size_t>(i)].at(beta, b2);
      // Least-squares solve of the three bilinear equations for (alpha*conj(alpha), alpha, conj(alpha)).
      Eigen::Matrix3cd m;
      Eigen::Vector3cd rhs;
      for (int i = 0; i < 3; ++i) {
        const auto& ci = c[static_cast<std::size_t>(i)];
        m(i, 0) = ci(1, 1), m(i, 1) = ci(1, 0), m(i, 2) = ci(0, 1);
        rhs(i) = -ci(0, 0);
      }
      const Eigen::Vector3cd sol = m.completeOrthogonalDecomposition().solve(rhs);
      if (sol.allFinite()) out.candidates.emplace_back(sol(1), beta);
      for (Complex a : polynomial_roots(CVector(c[0].col(0) + c[0].col(1) * std::conj(sol(1)))))
        out.candidates.emplace_back(a, beta);
    }
  }
  return out;
}

KernelData swap_parties(const KernelData& kd) {
  KernelData out;
  out.dims = kd.dims;
  const int n = kd.dims.n;
  const std::array<int, 4> from = {0, 2, 1, 3};
  for (int op = 0; op < 4; ++op) {
    const CMatrix& src = kd.bases[static_cast<std::size_t>(from[static_cast<std::size_t>(op)])];
    CMatrix dst(src.rows(), src.cols());
    for (int a = 0; a < 2; ++a)
      for (int b = 0; b < 2; ++b) dst.middleRows((2 * b + a) * n, n) = src.middleRows((2 * a + b) * n, n);
    out.bases[static_cast<std::size_t>(op)] = dst;
  }
  return out;
}

std::array<int, 4> kernel_counts(const KernelData& kd) {
  return {kd.count(0), kd.count(1), kd.count(2), kd.count(3)};
}

bool duplicate(const std::vector<ChartSolution>& sols, Complex a, Complex b, double tol) {
  return std::any_of(sols.begin(), sols.end(), [&](const ChartSolution& s) {
    return std::abs(s.alpha - a) <= tol * (1.0 + std::abs(a)) && std::abs(s.beta - b) <= tol * (1.0 + std::abs(b));
  });
}

bool kernel_is_line(const CMatrix& a) {
  const auto n = a.cols();
  if (n < 2) return true;
  if (a.rows() < n - 1) return false;
  const Eigen::VectorXd sv = Eigen::JacobiSVD<CMatrix>(a).singularValues();
  return sv(n - 2) > 1e-7 * std::max(sv(0), 1e-300);
}

}  // namespace

MinorSolveResult solve_minor_system(const MinorSystem& ms, const SolveOptions& opts) {
  const KernelData& kd = ms.kernels;
  const Dims dims = kd.dims;
  const int n = dims.n;
  const auto rows = constraint_rows(kd);
  MinorSolveResult result;
  Rng rng(opts.seed ^ (0x9e3779b97f4a7c15ULL * static_cast<std::uint64_t>(ms.chart + 1)));

  const KernelData swapped = swap_parties(kd);
  std::vector<Plan> plans;
  if (auto p = alpha_pure_plan(kernel_counts(kd), n)) plans.push_back(*p);
  if (auto p = alpha_pure_plan(kernel_counts(swapped), n)) {
    p->swapped = true;
    plans.push_back(*p);
  }
  if (auto p = bilinear_plan(kernel_counts(kd), n)) plans.push_back(*p);
  if (auto p = bilinear_plan(kernel_counts(swapped), n)) {
    p->swapped = true;
    plans.push_back(*p);
  }
  std::stable_sort(plans.begin(), plans.end(), [](const Plan& a, const Plan& b) { return a.degree < b.degree; });

  auto accept = [&](Complex alpha, Complex beta, const CVector& hint) {
    const Polished p = polish(rows, dims, ms.chart, alpha, beta, hint);
    if (!std::isfinite(std::abs(p.alpha)) || !std::isfinite(std::abs(p.beta))) return;
    if (std::abs(p.alpha) > opts.chart_radius || std::abs(p.beta) > opts.chart_radius) return;
    const ProductVector v = ProductVector::from_chart(ms.chart, p.alpha, p.beta, p.g);
    const double res = membership_residual(kd, v);
    if (!(res <= opts.membership_tol)) return;
    if (duplicate(result.solutions, p.alpha, p.beta, opts.dedupe_tol)) return;
    if (!kernel_is_line(eval_rows(rows, dims, ms.chart, p.alpha, p.beta).a)) result.continuum = true;
    result.solutions.push_back({p.alpha, p.beta, p.g, res});
  };

  CVector hint = CVector::Ones(n).normalized();
  bool solved = false;
  for (const Plan& plan : plans) {
    if (plan.degree > opts.max_eliminant_degree) break;
    const KernelData& src = plan.swapped ? swapped : kd;
    const int chart = plan.swapped ? swap_chart(ms.chart) : ms.chart;
    std::optional<PlanOutcome> outcome;
    for (int attempt = 0; attempt < 3 && !outcome; ++attempt) outcome = run_plan(plan, src, chart, rng, opts);
    if (!outcome) continue;
    solved = true;
    result.strategy = plan.kind == Kind::Bilinear ? "bilinear"
                      : plan.y == 0              ? "holomorphic"
                      : plan.swapped             ? "beta-pure"
                                                 : "alpha-pure";
    result.candidate_count = outcome->candidate_count;
    result.eliminant_degree = plan.degree;
    result.degree_pair = {plan.x, plan.y};
    result.discarded_nonconjugate = outcome->discarded_nonconjugate;
    for (auto [a, b] : outcome->candidates) {
      if (plan.swapped) std::swap(a, b);
      accept(a, b, hint);
    }
    break;
  }

  if (!solved) {
    // Either no elimination is affordable or every eliminant vanished identically.
    result.strategy = "multistart";
    result.continuum = !plans.empty() && plans.front().degree <= opts.max_eliminant_degree;
    std::uniform_real_distribution<double> radius(0.0, opts.chart_radius);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
    for (int s = 0; s < opts.multistart; ++s) {
      const double ra = radius(rng), ta = angle(rng), rb = radius(rng), tb = angle(rng);
      CVector g(n);
      for (int c = 0; c < n; ++c) g(c) = random_complex(rng);
      accept(std::polar(ra, ta), std::polar(rb, tb), g);
    }
    result.candidate_count = opts.multistart;
  }
  return result;
}

std::vector<ProductVector> sample_product_vectors(const KernelData& kd, int starts, std::uint64_t seed,
                                                  double membership_tol) {
  Rng rng(seed);
  const auto rows = constraint_rows(kd);
  std::vector<ProductVector> out;
  for (int s = 0; s < starts; ++s) {
    const ProductVector start = random_product_vector(kd.dims, rng);
    const Polished p = polish(rows, kd.dims, start.chart, *start.alpha, *start.beta, start.g);
    if (!std::isfinite(std::abs(p.alpha)) || !std::isfinite(std::abs(p.beta))) continue;
    const ProductVector v = ProductVector::from_chart(start.chart, p.alpha, p.beta, p.g);
    if (!(membership_residual(kd, v) <= membership_tol)) continue;
    const ProductVector canon = ProductVector::from_factors(v.e, v.f, v.g);
    const bool seen = std::any_of(out.begin(), out.end(),
                                  [&](const ProductVector& w) { return product_fidelity(w, canon) >= 1.0 - 1e-8; });
    if (!seen) out.push_back(canon);
  }
  return out;
}

ProductSearchResult find_product_vectors(const TripartiteState& state, const SolveOptions& opts) {
  return find_product_vectors(state.op(0), state.dims(), state.tolerance(), opts);
}

ProductSearchResult find_product_vectors(const CMatrix& rho, Dims dims, const Tolerance& tol,
                                         const SolveOptions& opts) {
  require_shape(rho, dims);
  const KernelData original = assemble_constraints(rho, dims, tol);
  Rng rng(opts.seed);
  const CMatrix ua = random_unitary(2, rng);
  const CMatrix ub = random_unitary(2, rng);
  const CMatrix local = kron(kron(ua, ub), CMatrix(CMatrix::Identity(dims.n, dims.n)));
  const CMatrix rotated = local * hermitize(rho, tol) * local.adjoint();
  const KernelData kd = assemble_constraints(rotated, dims, tol);

  ProductSearchResult out;
  out.k_total = kd.total();
  auto keep = [&](const ProductVector& v) {
    if (!(membership_residual(original, v) <= opts.membership_tol)) return;
    const bool seen = std::any_of(out.vectors.begin(), out.vectors.end(),
                                  [&](const ProductVector& w) { return product_fidelity(w, v) >= 1.0 - 1e-8; });
    if (!seen) out.vectors.push_back(v);
  };
  auto unrotate = [&](const CVector& e, const CVector& f, const CVector& g) {
    return ProductVector::from_factors(ua.adjoint() * e, ub.adjoint() * f, g);
  };

  if (kd.total() <= dims.n) {
    out.threshold_met = false;
    out.strategy = "sampling";
    for (const auto& v : sample_product_vectors(kd, opts.multistart, opts.seed + 1, opts.membership_tol))
      keep(unrotate(v.e, v.f, v.g));
    out.continuum = !out.vectors.empty();
    return out;
  }

  for (int chart = 0; chart < 4; ++chart) {
    const MinorSystem ms = build_minor_system(kd, chart, opts.seed + static_cast<std::uint64_t>(chart));
    const MinorSolveResult r = solve_minor_system(ms, opts);
    const auto c = static_cast<std::size_t>(chart);
    out.candidate_counts[c] = r.candidate_count;
    out.eliminant_degrees[c] = r.eliminant_degree;
    out.degree_pairs[c] = r.degree_pair;
    if (out.strategy.empty()) out.strategy = r.strategy;
    out.continuum = out.continuum || r.continuum;
    for (const auto& s : r.solutions) {
      const ProductVector v = ProductVector::from_chart(chart, s.alpha, s.beta, s.g);
      keep(unrotate(v.e, v.f, v.g));
    }
  }
  return out;
}

}  // namespace trisep
