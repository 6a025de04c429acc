#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <variant>
#include <vector>

#include "gcm/degree_model.hpp"
#include "gcm/error.hpp"
#include "gcm/generator.hpp"

namespace gcm {

/// Dense square table over degrees 0..max_degree. entries[x * dim + y] = P(X = x, Y = y).
struct JointDegreePmf {
  std::size_t dim = 0;
  std::vector<double> entries;
  std::vector<std::vector<double>> block_coupling;  // C_ij; empty for empirical tables

  double operator()(int x, int y) const noexcept {
    if (x < 0 || y < 0 || static_cast<std::size_t>(x) >= dim || static_cast<std::size_t>(y) >= dim) return 0.0;
    return entries[static_cast<std::size_t>(x) * dim + static_cast<std::size_t>(y)];
  }
  double total() const noexcept { return std::accumulate(entries.begin(), entries.end(), 0.0); }
  std::vector<double> marginal_x() const {
    std::vector<double> m(dim, 0.0);
    for (std::size_t x = 0; x < dim; ++x)
      for (std::size_t y = 0; y < dim; ++y) m[x] += entries[x * dim + y];
    return m;
  }
  std::vector<double> marginal_y() const {
    std::vector<double> m(dim, 0.0);
    for (std::size_t x = 0; x < dim; ++x)
      for (std::size_t y = 0; y < dim; ++y) m[y] += entries[x * dim + y];
    return m;
  }
};

enum class correlation_source { analytic, empirical };

struct CorrelationReport {
  double rho = 0.0;
  double c = 0.0;
  double covariance = 0.0;
  double sigma = 0.0;
  correlation_source source = correlation_source::analytic;
  double ci_halfwidth = 0.0;
  bool defined = true;  // false when the endpoint degree variance is zero
};

// C_ij = bq + 1 - q if h(i) = j, else 1 - q.
inline std::vector<std::vector<double>> coupling_matrix(int b, double q, const Permutation& h) {
  std::vector<std::vector<double>> c(static_cast<std::size_t>(b), std::vector<double>(static_cast<std::size_t>(b), 1.0 - q));
  for (int i = 0; i < b; ++i) c[static_cast<std::size_t>(i)][static_cast<std::size_t>(h(i))] = b * q + 1.0 - q;
  return c;
}

struct FiniteSize {
  std::size_t n = 0;
};
struct LargeNetworkLimit {};
using PmfMode = std::variant<FiniteSize, LargeNetworkLimit>;

/// Pr(X = x | Y = y). Finite mode keeps the -delta(i, h(i)) and -1 corrections of a network with
/// n vertices and 2m = n E(Z) stubs; the limit mode is their n -> infinity form.
inline double conditional_pmf(const BlockPartition& part, const Permutation& h, double q, int x, int y,
                              const PmfMode& mode) {
  const DegreePmf& p = part.adjusted;
  const double mean = p.mean();
  const int i = part.block_of(x);
  const bool paired = part.block_of(y) == h(i);
  return std::visit(
      [&](const auto& m) -> double {
        using M = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<M, LargeNetworkLimit>) {
          const double coef = paired ? part.b * q + 1.0 - q : 1.0 - q;
          return coef * x * p[x] / mean;
        } else {
          const double n = double(m.n);
          const double two_m = n * mean;
          const double stubs_x = n * x * p[x];
          double r = (1.0 - q) * (1.0 - q) * stubs_x / (two_m * (1.0 - q) - 1.0);
          if (paired && q > 0.0) {
            const double delta = h(i) == i ? 1.0 : 0.0;
            r += q * q * stubs_x / (two_m * q / part.b - delta);
          }
          return r;
        }
      },
      mode);
}

/// P(x, y) = C_ij x y p_x p_y / E(Z)^2 for x in H_i, y in H_j.
inline JointDegreePmf joint_pmf(const BlockPartition& part, const Permutation& h, double q) {
  const DegreePmf& p = part.adjusted;
  const double mean = p.mean();
  JointDegreePmf out;
  out.dim = static_cast<std::size_t>(p.truncation_degree()) + 1;
  out.entries.assign(out.dim * out.dim, 0.0);
  out.block_coupling = coupling_matrix(part.b, q, h);
  for (std::size_t x = 1; x < out.dim; ++x) {
    if (p[int(x)] == 0.0) continue;
    const auto bx = static_cast<std::size_t>(part.block_of(int(x)));
    for (std::size_t y = 1; y < out.dim; ++y) {
      const auto by = static_cast<std::size_t>(part.block_of(int(y)));
      out.entries[x * out.dim + y] =
          out.block_coupling[bx][by] * double(x) * double(y) * p[int(x)] * p[int(y)] / (mean * mean);
    }
  }
  return out;
}

/// rho = c q with c = (b sum_i u_i u_h(i) - (sum_i u_i)^2) / (sigma^2 E(Z)^2).
inline CorrelationReport analytic_rho(const BlockPartition& part, const Permutation& h, double q) {
  if (h.size() != part.b) throw config_error("permutation size does not match b");
  const DegreePmf& p = part.adjusted;
  const double mean = p.mean();
  const auto u = compute_u(part);
  const double sum_u = std::accumulate(u.begin(), u.end(), 0.0);
  double paired = 0.0;
  for (int i = 0; i < part.b; ++i) paired += u[static_cast<std::size_t>(i)] * u[static_cast<std::size_t>(h(i))];
  const double spread = part.b * paired - sum_u * sum_u;

  const double ex = sum_u / mean;
  const double ex2 = p.moment(3) / mean;
  const double var = ex2 - ex * ex;
  if (!(var > 1e-14 * ex2)) throw config_error("degenerate degrees: endpoint degree variance is zero");

  CorrelationReport r;
  r.source = correlation_source::analytic;
  r.sigma = std::sqrt(var);
  r.c = spread / (var * mean * mean);
  // + 0.0 folds a negative zero (c < 0, q = 0) into +0.
  r.covariance = q * spread / (mean * mean) + 0.0;
  r.rho = r.c * q + 0.0;
  return r;
}

enum class mixing { assortative, disassortative };

/// pi sorts u descending; assortative pairs each block with itself, disassortative pairs the
/// i-th largest u with the i-th smallest. Both results are involutions.
inline Permutation choose_permutation(const std::vector<double>& u, mixing mode) {
  const int b = static_cast<int>(u.size());
  if (mode == mixing::assortative) return Permutation::identity(b);
  std::vector<int> pi(static_cast<std::size_t>(b));
  std::iota(pi.begin(), pi.end(), 0);
  std::stable_sort(pi.begin(), pi.end(), [&](int a, int c) { return u[static_cast<std::size_t>(a)] > u[static_cast<std::size_t>(c)]; });
  std::vector<int> m(static_cast<std::size_t>(b));
  for (int i = 0; i < b; ++i) m[static_cast<std::size_t>(pi[static_cast<std::size_t>(i)])] = pi[static_cast<std::size_t>(b - 1 - i)];
  return Permutation(std::move(m));
}

/// Integer sums over the 2m ordered edge endpoints; merge() is associative, so per-batch
/// accumulators combine in any order.
struct EndpointMoments {
  std::uint64_t count = 0;
  std::uint64_t sum = 0;
  std::uint64_t sum_sq = 0;
  std::uint64_t sum_prod = 0;

  void add_edge(std::uint64_t du, std::uint64_t dv) noexcept {
    count += 2;
    sum += du + dv;
    sum_sq += du * du + dv * dv;
    sum_prod += 2 * du * dv;
  }
  void merge(const EndpointMoments& o) noexcept {
    count += o.count;
    sum += o.sum;
    sum_sq += o.sum_sq;
    sum_prod += o.sum_prod;
  }

  CorrelationReport report() const {
    CorrelationReport r;
    r.source = correlation_source::empirical;
    if (count == 0) throw config_error("empirical correlation needs at least one edge");
    using wide = unsigned __int128;
    // count^2 var = count sum_sq - sum^2, count^2 cov = count sum_prod - sum^2 (exact)
    const wide s2 = wide(sum) * sum;
    const wide var_num = wide(count) * sum_sq - s2;
    const wide prod = wide(count) * sum_prod;
    const double n2 = double(count) * double(count);
    const double cov = (prod >= s2 ? double(prod - s2) : -double(s2 - prod)) / n2;
    r.covariance = cov;
    r.sigma = std::sqrt(double(var_num) / n2);
    if (var_num == 0) {
      r.defined = false;
      r.rho = 0.0;
      return r;
    }
    r.rho = cov / (double(var_num) / n2);
    return r;
  }
};

inline EndpointMoments endpoint_moments(const GeneratedGraph& g) {
  EndpointMoments m;
  for (const Edge& e : g.edges)
    m.add_edge(static_cast<std::uint64_t>(g.degrees[e.u]), static_cast<std::uint64_t>(g.degrees[e.v]));
  return m;
}

/// Pearson correlation of endpoint degrees over both orientations of every edge.
inline CorrelationReport empirical_pearson(const GeneratedGraph& g) {
  if (g.edges.empty()) throw config_error("empirical correlation needs at least one edge");
  CorrelationReport r = endpoint_moments(g).report();
  if (g.config.q > 0.0 && r.defined) r.c = r.rho / g.config.q;
  return r;
}

inline JointDegreePmf empirical_joint(const GeneratedGraph& g) {
  if (g.edges.empty()) throw config_error("empirical joint pmf needs at least one edge");
  JointDegreePmf out;
  out.dim = static_cast<std::size_t>(*std::max_element(g.degrees.begin(), g.degrees.end())) + 1;
  out.entries.assign(out.dim * out.dim, 0.0);
  const double w = 1.0 / (2.0 * double(g.edges.size()));
  for (const Edge& e : g.edges) {
    const auto du = static_cast<std::size_t>(g.degrees[e.u]);
    const auto dv = static_cast<std::size_t>(g.degrees[e.v]);
    out.entries[du * out.dim + dv] += w;
    out.entries[dv * out.dim + du] += w;
  }
  return out;
}

/// Total variation distance between two joint tables (missing cells count as zero).
inline double total_variation(const JointDegreePmf& a, const JointDegreePmf& b) {
  const std::size_t dim = std::max(a.dim, b.dim);
  double s = 0.0;
  for (std::size_t x = 0; x < dim; ++x)
    for (std::size_t y = 0; y < dim; ++y) s += std::abs(a(int(x), int(y)) - b(int(x), int(y)));
  return 0.5 * s;
}

}  // namespace gcm
