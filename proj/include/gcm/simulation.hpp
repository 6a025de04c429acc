#pragma once

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <numeric>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include <boost/math/distributions/students_t.hpp>

#include "gcm/degree_model.hpp"
#include "gcm/error.hpp"
#include "gcm/generator.hpp"
#include "gcm/metrics.hpp"
#include "gcm/rng.hpp"

namespace gcm {

class DisjointSets {
 public:
  explicit DisjointSets(std::size_t n) : parent_(n), size_(n, 1) { std::iota(parent_.begin(), parent_.end(), std::size_t{0}); }

  std::size_t find(std::size_t x) noexcept {
    while (parent_[x] != x) {
      parent_[x] = parent_[parent_[x]];
      x = parent_[x];
    }
    return x;
  }
  void unite(std::size_t a, std::size_t b) noexcept {
    a = find(a);
    b = find(b);
    if (a == b) return;
    if (size_[a] < size_[b]) std::swap(a, b);
    parent_[b] = a;
    size_[a] += size_[b];
  }
  std::size_t size_of(std::size_t x) noexcept { return size_[find(x)]; }

 private:
  std::vector<std::size_t> parent_;
  std::vector<std::size_t> size_;
};

/// Vertices retained by node percolation; edges survive iff both endpoints do.
struct SurvivingSubgraph {
  std::size_t original_n = 0;
  std::vector<char> alive;
  std::vector<std::pair<std::size_t, std::size_t>> edges;

  std::size_t surviving_vertices() const noexcept {
    return static_cast<std::size_t>(std::count(alive.begin(), alive.end(), char{1}));
  }
};

inline SurvivingSubgraph node_percolate(const GeneratedGraph& g, double phi, rng_type& rng) {
  if (!(phi >= 0.0 && phi <= 1.0)) throw config_error("phi must lie in [0, 1]");
  SurvivingSubgraph s;
  s.original_n = g.n;
  s.alive.resize(g.n);
  std::bernoulli_distribution keep(phi);
  for (std::size_t v = 0; v < g.n; ++v) s.alive[v] = (phi >= 1.0 || keep(rng)) ? 1 : 0;
  s.edges.reserve(g.edges.size());
  for (const Edge& e : g.edges)
    if (s.alive[e.u] && s.alive[e.v]) s.edges.emplace_back(e.u, e.v);
  return s;
}

/// Largest connected component of the survivors as a fraction of the original vertex count.
inline double giant_size(const SurvivingSubgraph& s) {
  if (s.original_n == 0) return 0.0;
  DisjointSets dsu(s.original_n);
  for (auto [u, v] : s.edges)
    if (u != v) dsu.unite(u, v);
  std::size_t best = 0;
  for (std::size_t v = 0; v < s.original_n; ++v)
    if (s.alive[v]) best = std::max(best, dsu.size_of(v));
  return double(best) / double(s.original_n);
}

inline double giant_size(const GeneratedGraph& g) {
  SurvivingSubgraph s;
  s.original_n = g.n;
  s.alive.assign(g.n, 1);
  for (const Edge& e : g.edges) s.edges.emplace_back(e.u, e.v);
  return giant_size(s);
}

struct BatchResult {
  double point_estimate = 0.0;
  std::vector<double> batch_means;
  double ci90_halfwidth = 0.0;
  std::size_t replications = 0;
  std::size_t batches = 0;

  double ci_low() const noexcept { return point_estimate - ci90_halfwidth; }
  double ci_high() const noexcept { return point_estimate + ci90_halfwidth; }
  bool contains(double x) const noexcept { return x >= ci_low() && x <= ci_high(); }
};

/// Two-sided Student-t quantile at `level` with `dof` degrees of freedom.
inline double student_t_quantile(double level, std::size_t dof) {
  boost::math::students_t dist(static_cast<double>(dof));
  return boost::math::quantile(dist, 0.5 + level / 2.0);
}

/// Batch-means summary: consecutive groups of values.size()/batches replications are averaged,
/// and the 90% CI is Student-t on the batch means with batches - 1 degrees of freedom.
inline BatchResult batch_means(const std::vector<double>& values, std::size_t batches) {
  if (batches < 2 || values.size() % batches != 0 || values.empty())
    throw config_error("replications must be a positive multiple of the batch count (>= 2)");
  BatchResult r;
  r.replications = values.size();
  r.batches = batches;
  const std::size_t per = values.size() / batches;
  for (std::size_t b = 0; b < batches; ++b) {
    const auto first = values.begin() + static_cast<std::ptrdiff_t>(b * per);
    r.batch_means.push_back(std::accumulate(first, first + static_cast<std::ptrdiff_t>(per), 0.0) / double(per));
  }
  r.point_estimate = std::accumulate(r.batch_means.begin(), r.batch_means.end(), 0.0) / double(batches);
  double ss = 0.0;
  for (double m : r.batch_means) ss += (m - r.point_estimate) * (m - r.point_estimate);
  const double sd = std::sqrt(ss / double(batches - 1));
  r.ci90_halfwidth = student_t_quantile(0.90, batches - 1) * sd / std::sqrt(double(batches));
  return r;
}

/// Evaluates task(i) for i in [0, count) on worker threads. Results are stored by index, so the
/// output does not depend on scheduling.
template <class Task>
std::vector<double> run_replications(std::size_t count, Task task, unsigned threads = 0) {
  std::vector<double> out(count);
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) out[i] = task(i);
    return out;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < threads; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) out[i] = task(i);
    });
  for (auto& th : pool) th.join();
  return out;
}

struct ExperimentConfig {
  BlockPartition partition;
  std::size_t n = 0;
  double q = 0.0;
  Permutation h;
  std::uint64_t seed = 0;
  std::size_t replications = 100;
  std::size_t batches = 5;
  unsigned threads = 0;
};

/// Giant fraction after node percolation, batch-means over independent graph + percolation draws.
/// Replication i uses generator seed stream_seed(seed, 2i) and percolation seed stream_seed(seed, 2i+1).
inline BatchResult batch_experiment(const ExperimentConfig& cfg, double phi) {
  if (!(phi >= 0.0 && phi <= 1.0)) throw config_error("phi must lie in [0, 1]");
  const DegreeSequence seq = sample_degree_sequence(cfg.partition, cfg.n);
  auto values = run_replications(
      cfg.replications,
      [&](std::size_t i) {
        GeneratedGraph g = generate_from_degrees(seq.degrees, cfg.partition.b, cfg.q, cfg.h, stream_seed(cfg.seed, 2 * i));
        rng_type rng = make_rng(stream_seed(cfg.seed, 2 * i + 1));
        return giant_size(node_percolate(g, phi, rng));
      },
      cfg.threads);
  return batch_means(values, cfg.batches);
}

/// Empirical Pearson correlation over independent graphs, summarized by batch means.
inline BatchResult batch_correlation(const ExperimentConfig& cfg) {
  const DegreeSequence seq = sample_degree_sequence(cfg.partition, cfg.n);
  auto values = run_replications(
      cfg.replications,
      [&](std::size_t i) {
        GeneratedGraph g = generate_from_degrees(seq.degrees, cfg.partition.b, cfg.q, cfg.h, stream_seed(cfg.seed, 2 * i));
        return empirical_pearson(g).rho;
      },
      cfg.threads);
  return batch_means(values, cfg.batches);
}

struct SweepRow {
  double phi = 0.0;
  double q = 0.0;
  int b = 1;
  std::string mode;
  BatchResult result;
  std::size_t n = 0;
  std::uint64_t seed = 0;
};

/// One batch_experiment per phi; grid point j runs under master seed stream_seed(seed, j).
inline std::vector<SweepRow> sweep_phi(const ExperimentConfig& cfg, const std::vector<double>& phis, const std::string& mode) {
  if (phis.empty()) throw config_error("phi grid is empty");
  std::vector<SweepRow> rows;
  for (std::size_t j = 0; j < phis.size(); ++j) {
    ExperimentConfig c = cfg;
    c.seed = stream_seed(cfg.seed, j);
    rows.push_back({phis[j], cfg.q, cfg.partition.b, mode, batch_experiment(c, phis[j]), cfg.n, c.seed});
  }
  return rows;
}

}  // namespace gcm
