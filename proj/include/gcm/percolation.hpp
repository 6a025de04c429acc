#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "gcm/degree_model.hpp"
#include "gcm/error.hpp"
#include "gcm/linalg.hpp"

namespace gcm {

/// Per-block excess-degree generating functions g_i(x) = sum_{k in H_i} k p_k x^{k-1} / E(Z).
class GenFunctions {
 public:
  GenFunctions() = default;

  explicit GenFunctions(const BlockPartition& part) : b_(part.b) {
    const DegreePmf& p = part.adjusted;
    const double mean = p.mean();
    if (!(mean > 0.0)) throw config_error("degenerate distribution: E(Z) = 0");
    coef_.resize(static_cast<std::size_t>(b_));
    for (int i = 0; i < b_; ++i) {
      const int hi = part.last_degree[static_cast<std::size_t>(i)];
      auto& c = coef_[static_cast<std::size_t>(i)];
      c.assign(static_cast<std::size_t>(std::max(hi, 1)), 0.0);
      for (int k = std::max(1, part.first_degree[static_cast<std::size_t>(i)]); k <= hi; ++k)
        c[static_cast<std::size_t>(k - 1)] = k * p[k] / mean;
    }
  }

  int blocks() const noexcept { return b_; }

  /// Coefficient of x^power in g_i.
  const std::vector<double>& coefficients(int i) const noexcept { return coef_[static_cast<std::size_t>(i)]; }

  double value(int i, double x) const noexcept {
    const auto& c = coef_[static_cast<std::size_t>(i)];
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 0;) v = v * x + c[k];
    return v;
  }
  double derivative(int i, double x) const noexcept {
    const auto& c = coef_[static_cast<std::size_t>(i)];
    double v = 0.0;
    for (std::size_t k = c.size(); k-- > 1;) v = v * x + double(k) * c[k];
    return v;
  }

 private:
  int b_ = 0;
  std::vector<std::vector<double>> coef_;
};

inline GenFunctions build_gen_functions(const BlockPartition& part) { return GenFunctions(part); }

/// Parameters shared by the fixed-point map and its Jacobian.
struct PercolationModel {
  double phi = 1.0;
  double q = 0.0;
  Permutation h;
  GenFunctions g;

  int b() const noexcept { return g.blocks(); }
};

namespace detail {
inline void check_model(const PercolationModel& m) {
  if (m.h.size() != m.b()) throw config_error("permutation size does not match b");
  if (!(m.q >= 0.0 && m.q < 1.0)) throw config_error("q must lie in [0, 1)");
  if (!(m.phi >= 0.0 && m.phi <= 1.0)) throw config_error("phi must lie in [0, 1]");
}
}  // namespace detail

/// f_i(a) = 1 - phi + phi [ (bq + 1 - q) g_h(i)(a_h(i)) + (1 - q) sum_{j != h(i)} g_j(a_j) ]
inline std::vector<double> f_map(const std::vector<double>& alpha, const PercolationModel& m) {
  const int b = m.b();
  std::vector<double> gv(static_cast<std::size_t>(b));
  double sum = 0.0;
  for (int j = 0; j < b; ++j) sum += (gv[static_cast<std::size_t>(j)] = m.g.value(j, alpha[static_cast<std::size_t>(j)]));
  std::vector<double> out(static_cast<std::size_t>(b));
  for (int i = 0; i < b; ++i) {
    const double own = gv[static_cast<std::size_t>(m.h(i))];
    const double bracket = (b * m.q + 1.0 - m.q) * own + (1.0 - m.q) * (sum - own);
    out[static_cast<std::size_t>(i)] = 1.0 - m.phi + m.phi * bracket;
  }
  return out;
}

/// J(a) = phi (bq H + (1 - q) 1) diag(g_1'(a_1), ..., g_b'(a_b)), H_ij = [j = h(i)].
inline Matrix jacobian(const std::vector<double>& alpha, const PercolationModel& m) {
  const auto b = static_cast<std::size_t>(m.b());
  Matrix j(b, b);
  for (std::size_t r = 0; r < b; ++r)
    for (std::size_t c = 0; c < b; ++c) {
      const double mix = (static_cast<int>(c) == m.h(int(r)) ? b * m.q : 0.0) + (1.0 - m.q);
      j(r, c) = m.phi * mix * m.g.derivative(int(c), alpha[c]);
    }
  return j;
}

enum class fixed_point_kind { attracting_one, interior_attracting };

inline const char* to_string(fixed_point_kind k) noexcept {
  return k == fixed_point_kind::attracting_one ? "attracting_one" : "interior_attracting";
}

struct PercolationSolution {
  std::vector<double> alpha;
  double phi = 0.0;
  double eta = 0.0;
  double eta_paper_form = 0.0;
  fixed_point_kind classification = fixed_point_kind::attracting_one;
  int iterations = 0;
  double residual = 0.0;
};

struct SolverOptions {
  double tol = 1e-12;
  int max_iter = 1'000'000;
  double interior_gap = 1e-6;  // ||alpha - 1||_inf above this counts as interior
  bool newton = true;
};

namespace detail {

inline double residual(const std::vector<double>& a, const std::vector<double>& fa) {
  double r = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) r = std::max(r, std::abs(fa[i] - a[i]));
  return r;
}

// Monotone Newton step from a sub-solution a <= f(a): a' = a + (I - J(a))^{-1} (f(a) - a).
// Accepted only when (I - J)^{-1} (f(a) - a) is non-negative and a' is again a sub-solution;
// for the convex isotone f this keeps the iterates below the least fixed point.
inline std::optional<std::vector<double>> newton_step(const std::vector<double>& a, const std::vector<double>& fa,
                                                      const PercolationModel& m) {
  const std::size_t b = a.size();
  Matrix sys = jacobian(a, m);
  for (std::size_t r = 0; r < b; ++r)
    for (std::size_t c = 0; c < b; ++c) sys(r, c) = (r == c ? 1.0 : 0.0) - sys(r, c);
  std::vector<double> rhs(b);
  for (std::size_t i = 0; i < b; ++i) rhs[i] = fa[i] - a[i];
  auto d = solve_linear(sys, rhs);
  if (!d) return std::nullopt;
  std::vector<double> next(b);
  for (std::size_t i = 0; i < b; ++i) {
    if (!((*d)[i] >= 0.0) || !std::isfinite((*d)[i])) return std::nullopt;
    // A step well past 1 means (I - J) is too ill-conditioned to trust; clamping it would
    // jump over an interior fixed point.
    if (a[i] + (*d)[i] > 1.0 + 1e-12) return std::nullopt;
    next[i] = std::min(1.0, a[i] + (*d)[i]);
  }
  const auto fn = f_map(next, m);
  for (std::size_t i = 0; i < b; ++i)
    if (fn[i] < next[i] - 1e-15) return std::nullopt;
  return next;
}

// Iterates to the least fixed point above `start`, which must be a sub-solution.
inline PercolationSolution iterate_fixed_point(std::vector<double> alpha, const PercolationModel& m,
                                               const SolverOptions& opt, bool throw_on_failure) {
  PercolationSolution sol;
  sol.phi = m.phi;
  auto fa = f_map(alpha, m);
  double res = residual(alpha, fa);
  int it = 0;
  while (res > opt.tol && it < opt.max_iter) {
    ++it;
    std::optional<std::vector<double>> next;
    if (opt.newton) next = newton_step(alpha, fa, m);
    // f is isotone, so plain iteration from a sub-solution never decreases.
    alpha = next ? std::move(*next) : fa;
    fa = f_map(alpha, m);
    res = residual(alpha, fa);
  }
  sol.alpha = alpha;
  sol.iterations = it;
  sol.residual = res;
  if (res > opt.tol && throw_on_failure)
    throw convergence_error("fixed-point iteration exceeded " + std::to_string(opt.max_iter) + " iterations", alpha);
  double gap = 0.0;
  for (double a : alpha) gap = std::max(gap, 1.0 - a);
  sol.classification = gap > opt.interior_gap ? fixed_point_kind::interior_attracting : fixed_point_kind::attracting_one;
  return sol;
}

}  // namespace detail

/// Least fixed point of f in [0,1]^b, reached by monotone iteration from the zero vector
/// (Newton-accelerated where the monotone Newton step is admissible).
inline PercolationSolution solve_fixed_point(const PercolationModel& m, const SolverOptions& opt = {}) {
  detail::check_model(m);
  return detail::iterate_fixed_point(std::vector<double>(static_cast<std::size_t>(m.b()), 0.0), m, opt, true);
}

struct GiantFraction {
  double eta = 0.0;             // sum_i eta_i
  double eta_paper_form = 0.0;  // sum_i eta_i * sum_{k in H_i} p_k
  std::vector<double> per_block;
};

/// eta_i = phi sum_{k in H_i} p_k (1 - alpha_i^k)
inline GiantFraction giant_fraction(const std::vector<double>& alpha, double phi, const BlockPartition& part) {
  GiantFraction out;
  out.per_block.resize(static_cast<std::size_t>(part.b));
  for (int i = 0; i < part.b; ++i) {
    const double a = alpha[static_cast<std::size_t>(i)];
    double e = 0.0;
    for (int k = part.first_degree[static_cast<std::size_t>(i)]; k <= part.last_degree[static_cast<std::size_t>(i)]; ++k)
      e += part.adjusted[k] * (1.0 - std::pow(a, k));
    e *= phi;
    out.per_block[static_cast<std::size_t>(i)] = e;
    out.eta += e;
    out.eta_paper_form += e * part.probability_mass(i);
  }
  return out;
}

inline GiantFraction giant_fraction(const PercolationSolution& sol, const BlockPartition& part) {
  return giant_fraction(sol.alpha, sol.phi, part);
}

/// Solve and fill the giant-component fields in one call.
inline PercolationSolution solve_percolation(const PercolationModel& m, const BlockPartition& part,
                                             const SolverOptions& opt = {}) {
  PercolationSolution sol = solve_fixed_point(m, opt);
  // At the all-ones fixed point there is no giant component; the residual gap to 1 is noise.
  if (sol.classification == fixed_point_kind::attracting_one) return sol;
  const auto gf = giant_fraction(sol, part);
  sol.eta = gf.eta;
  sol.eta_paper_form = gf.eta_paper_form;
  return sol;
}

struct ThresholdReport {
  double lambda1 = 0.0;
  std::vector<double> eigvec;
  double phi_star = 0.0;
  bool supercritical_capable = true;  // false when lambda1 <= 1: no giant component even at phi = 1
  bool analytic_only = false;         // h is not an involution, so the generator cannot realize it
  std::optional<double> phi_star_numeric;
  std::optional<double> agreement;
};

/// Matrix whose Perron root is lambda1: (bq H + (1 - q) 1) diag(g'(1)).
inline Matrix threshold_matrix(double q, const Permutation& h, const GenFunctions& g) {
  PercolationModel m{1.0, q, h, g};
  return jacobian(std::vector<double>(static_cast<std::size_t>(g.blocks()), 1.0), m);
}

/// phi* = 1 / lambda1 of the Jacobian at the all-ones fixed point (taken at phi = 1).
inline ThresholdReport critical_phi(double q, const Permutation& h, const GenFunctions& g) {
  if (h.size() != g.blocks()) throw config_error("permutation size does not match b");
  if (!(q >= 0.0 && q < 1.0)) throw config_error("q must lie in [0, 1)");
  const auto pair = dominant_eig(threshold_matrix(q, h, g));
  ThresholdReport r;
  r.lambda1 = pair.lambda;
  r.eigvec = pair.vector;
  r.phi_star = 1.0 / pair.lambda;
  r.supercritical_capable = pair.lambda > 1.0;
  r.analytic_only = !h.is_involution();
  return r;
}

struct BisectionResult {
  double phi = std::numeric_limits<double>::quiet_NaN();
  bool found = false;  // false: no interior solution at any phi <= 1
};

/// Smallest phi (to within `width`) at which the solver reaches an interior fixed point.
inline BisectionResult critical_phi_numeric(double q, const Permutation& h, const GenFunctions& g, double width = 1e-5,
                                            SolverOptions opt = {}) {
  PercolationModel m{1.0, q, h, g};
  detail::check_model(m);
  const std::vector<double> zero(static_cast<std::size_t>(g.blocks()), 0.0);
  auto sol_hi = detail::iterate_fixed_point(zero, m, opt, false);
  if (sol_hi.classification != fixed_point_kind::interior_attracting) return {};
  double lo = 0.0;
  double hi = 1.0;
  while (hi - lo > width) {
    const double mid = 0.5 * (lo + hi);
    m.phi = mid;
    // The least fixed point decreases in phi, so alpha*(hi) is a sub-solution at mid.
    auto s = detail::iterate_fixed_point(sol_hi.alpha, m, opt, false);
    if (s.classification == fixed_point_kind::interior_attracting) {
      hi = mid;
      sol_hi = std::move(s);
    } else {
      lo = mid;
    }
  }
  return {hi, true};
}

inline ThresholdReport threshold_report(double q, const Permutation& h, const GenFunctions& g, double width = 1e-5) {
  ThresholdReport r = critical_phi(q, h, g);
  const auto num = critical_phi_numeric(q, h, g, width);
  if (num.found) {
    r.phi_star_numeric = num.phi;
    r.agreement = std::abs(r.phi_star - num.phi);
  }
  return r;
}

enum class stability { attracting, repelling, saddle };

inline const char* to_string(stability s) noexcept {
  switch (s) {
    case stability::attracting: return "attracting";
    case stability::repelling: return "repelling";
    case stability::saddle: break;
  }
  return "saddle";
}

struct StabilityReport {
  stability kind = stability::attracting;
  double spectral_radius = 0.0;
  std::vector<double> magnitudes;  // descending
  bool marginal = false;           // spectral radius within 1e-9 of 1
};

/// Linearized stability of a fixed point from the eigenvalue magnitudes of J(alpha).
inline StabilityReport classify_fixed_point(const std::vector<double>& alpha, const PercolationModel& m) {
  detail::check_model(m);
  const auto fa = f_map(alpha, m);
  if (detail::residual(alpha, fa) > 1e-8) throw config_error("classify_fixed_point: alpha is not a fixed point");
  StabilityReport r;
  for (const auto& z : eigenvalues(jacobian(alpha, m))) r.magnitudes.push_back(std::abs(z));
  std::sort(r.magnitudes.begin(), r.magnitudes.end(), std::greater<>());
  r.spectral_radius = r.magnitudes.front();
  r.marginal = std::abs(r.spectral_radius - 1.0) < 1e-9;
  if (r.spectral_radius < 1.0)
    r.kind = stability::attracting;
  else if (r.magnitudes.back() > 1.0)
    r.kind = stability::repelling;
  else
    r.kind = stability::saddle;
  return r;
}

}  // namespace gcm
