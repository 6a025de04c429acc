#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcm/error.hpp"

namespace gcm {

enum class family { explicit_masses, geometric, powerlaw, uniform, poisson };

// Provenance of a DegreePmf. Parameters are stored positionally:
//   geometric(p)                -> a = p
//   powerlaw(exponent, lo, hi)  -> a = exponent, b = lo, c = hi
//   uniform(lo, hi)             -> a = lo, b = hi
//   poisson(mean)               -> a = mean
struct family_tag {
  family kind = family::explicit_masses;
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

// Default cut-off for infinite-support families: the discarded tail carries less stub mass
// (sum of k * p_k) than this.
inline constexpr double default_tail_stub_mass = 1e-9;

/// Probability masses over degrees 0..K, stored densely (index = degree).
class DegreePmf {
 public:
  DegreePmf() = default;

  /// Validates non-negativity and that the masses sum to 1 within 1e-12.
  explicit DegreePmf(std::vector<double> masses, family_tag tag = {}) : masses_(std::move(masses)), tag_(tag) {
    trim();
    if (masses_.empty()) throw config_error("degree pmf has empty support");
    double total = 0.0;
    for (double m : masses_) {
      if (!(m >= 0.0) || !std::isfinite(m)) throw config_error("degree pmf has a negative or non-finite mass");
      total += m;
    }
    if (std::abs(total - 1.0) > 1e-12) throw config_error("degree pmf masses do not sum to 1");
  }

  /// Normalizes arbitrary non-negative weights keyed by degree.
  static DegreePmf from_weights(const std::map<int, double>& weights, family_tag tag = {}) {
    if (weights.empty()) throw config_error("degree pmf has empty support");
    if (weights.begin()->first < 0) throw config_error("degrees must be non-negative");
    std::vector<double> masses(static_cast<std::size_t>(weights.rbegin()->first) + 1, 0.0);
    double total = 0.0;
    for (auto [k, w] : weights) {
      if (!(w >= 0.0) || !std::isfinite(w)) throw config_error("degree weight must be finite and non-negative");
      masses[static_cast<std::size_t>(k)] = w;
      total += w;
    }
    if (!(total > 0.0)) throw config_error("degree weights sum to zero");
    for (double& m : masses) m /= total;
    return DegreePmf(std::move(masses), tag);
  }

  /// p_k = (1-p) p^k, k >= 0, truncated where the remaining stub mass drops below `tail`.
  static DegreePmf geometric(double p, double tail = default_tail_stub_mass) {
    if (!(p > 0.0 && p < 1.0)) throw config_error("geometric parameter must lie in (0, 1)");
    auto mass = [p](int k) { return (1.0 - p) * std::pow(p, k); };
    // Tail stub mass beyond K: sum_{k>K} k (1-p) p^k = p^{K+1} ((K+1) - K p) / (1-p).
    auto tail_stub = [p](int k) { return std::pow(p, k + 1) * ((k + 1) - k * p) / (1.0 - p); };
    return truncated(mass, tail_stub, tail, {family::geometric, p});
  }

  static DegreePmf poisson(double mean, double tail = default_tail_stub_mass) {
    if (!(mean > 0.0)) throw config_error("poisson mean must be positive");
    auto mass = [mean](int k) { return std::exp(k * std::log(mean) - mean - std::lgamma(k + 1.0)); };
    // sum_{k>K} k p_k = mean * P(Z >= K), accumulated from the pmf.
    auto tail_stub = [mean, mass](int k) {
      double upper = 0.0;
      for (int j = k + 1; j < k + 2000; ++j) {
        double t = j * mass(j);
        upper += t;
        if (j > mean && t < 1e-300) break;
      }
      return upper;
    };
    return truncated(mass, tail_stub, tail, {family::poisson, mean});
  }

  static DegreePmf uniform(int lo, int hi) {
    if (lo < 0 || hi < lo) throw config_error("uniform degree range must satisfy 0 <= lo <= hi");
    std::map<int, double> w;
    for (int k = lo; k <= hi; ++k) w[k] = 1.0;
    return from_weights(w, {family::uniform, double(lo), double(hi)});
  }

  /// p_k proportional to k^-exponent on [lo, hi].
  static DegreePmf powerlaw(double exponent, int lo, int hi) {
    if (lo < 1 || hi < lo) throw config_error("power-law degree range must satisfy 1 <= lo <= hi");
    std::map<int, double> w;
    for (int k = lo; k <= hi; ++k) w[k] = std::pow(double(k), -exponent);
    return from_weights(w, {family::powerlaw, exponent, double(lo), double(hi)});
  }

  static DegreePmf point_mass(int k) {
    if (k < 0) throw config_error("degrees must be non-negative");
    std::vector<double> m(static_cast<std::size_t>(k) + 1, 0.0);
    m.back() = 1.0;
    return DegreePmf(std::move(m));
  }

  double operator[](int k) const noexcept {
    return (k >= 0 && static_cast<std::size_t>(k) < masses_.size()) ? masses_[static_cast<std::size_t>(k)] : 0.0;
  }
  std::span<const double> masses() const noexcept { return masses_; }
  int truncation_degree() const noexcept { return static_cast<int>(masses_.size()) - 1; }
  const family_tag& tag() const noexcept { return tag_; }

  /// E(Z^r)
  double moment(int r) const noexcept {
    double s = 0.0;
    for (std::size_t k = 0; k < masses_.size(); ++k) s += std::pow(double(k), r) * masses_[k];
    return s;
  }
  double mean() const noexcept {
    double s = 0.0;
    for (std::size_t k = 1; k < masses_.size(); ++k) s += double(k) * masses_[k];
    return s;
  }

 private:
  template <class Mass, class TailStub>
  static DegreePmf truncated(Mass mass, TailStub tail_stub, double tail, family_tag tag) {
    int cut = 0;
    while (tail_stub(cut) >= tail) {
      if (++cut > 1'000'000) throw config_error("degree distribution tail does not decay");
    }
    std::vector<double> m(static_cast<std::size_t>(cut) + 1);
    double total = 0.0;
    for (int k = 0; k <= cut; ++k) total += (m[static_cast<std::size_t>(k)] = mass(k));
    for (double& x : m) x /= total;
    return DegreePmf(std::move(m), tag);
  }

  void trim() {
    while (masses_.size() > 1 && masses_.back() == 0.0) masses_.pop_back();
  }

  std::vector<double> masses_;
  family_tag tag_;
};

inline std::string to_string(const family_tag& tag) {
  auto num = [](double v) {
    std::string s = std::to_string(v);
    while (!s.empty() && s.back() == '0') s.pop_back();
    if (!s.empty() && s.back() == '.') s.pop_back();
    return s;
  };
  switch (tag.kind) {
    case family::geometric: return "geometric(" + num(tag.a) + ")";
    case family::powerlaw: return "powerlaw(" + num(tag.a) + "," + num(tag.b) + "," + num(tag.c) + ")";
    case family::uniform: return "uniform(" + num(tag.a) + "," + num(tag.b) + ")";
    case family::poisson: return "poisson(" + num(tag.a) + ")";
    case family::explicit_masses: break;
  }
  return "explicit";
}

/// Size-biased degree law: mass(k) = k p_k / E(Z), the degree of the owner of a uniform stub.
struct StubMassPmf {
  std::vector<double> masses;

  double operator[](int k) const noexcept {
    return (k >= 0 && static_cast<std::size_t>(k) < masses.size()) ? masses[static_cast<std::size_t>(k)] : 0.0;
  }
};

inline StubMassPmf size_biased(const DegreePmf& pmf) {
  const double mean = pmf.mean();
  if (!(mean > 0.0)) throw config_error("degenerate distribution: E(Z) = 0");
  StubMassPmf out;
  out.masses.resize(pmf.masses().size());
  for (std::size_t k = 0; k < out.masses.size(); ++k) out.masses[k] = double(k) * pmf.masses()[k] / mean;
  return out;
}

/// A permutation h of the block indices, stored 0-based (h(i) = mapping[i]).
class Permutation {
 public:
  Permutation() = default;
  explicit Permutation(std::vector<int> mapping) : mapping_(std::move(mapping)) {
    std::vector<char> seen(mapping_.size(), 0);
    for (int v : mapping_) {
      if (v < 0 || static_cast<std::size_t>(v) >= mapping_.size() || seen[static_cast<std::size_t>(v)])
        throw config_error("block mapping is not a permutation");
      seen[static_cast<std::size_t>(v)] = 1;
    }
  }

  /// Builds from 1-based images h(1..b) as written in configs.
  static Permutation from_one_based(const std::vector<int>& images) {
    std::vector<int> m(images.size());
    for (std::size_t i = 0; i < images.size(); ++i) m[i] = images[i] - 1;
    return Permutation(std::move(m));
  }

  static Permutation identity(int b) {
    std::vector<int> m(static_cast<std::size_t>(b));
    std::iota(m.begin(), m.end(), 0);
    return Permutation(std::move(m));
  }
  /// h(i) = b + 1 - i
  static Permutation reversal(int b) {
    std::vector<int> m(static_cast<std::size_t>(b));
    for (int i = 0; i < b; ++i) m[static_cast<std::size_t>(i)] = b - 1 - i;
    return Permutation(std::move(m));
  }
  /// h(i) = ((i + 1) mod b) + 1 in 1-based indexing. Not an involution for b >= 3.
  static Permutation rotator(int b) {
    std::vector<int> m(static_cast<std::size_t>(b));
    for (int i = 1; i <= b; ++i) m[static_cast<std::size_t>(i - 1)] = ((i + 1) % b + 1) - 1;
    return Permutation(std::move(m));
  }

  int operator()(int i) const noexcept { return mapping_[static_cast<std::size_t>(i)]; }
  int size() const noexcept { return static_cast<int>(mapping_.size()); }
  const std::vector<int>& mapping() const noexcept { return mapping_; }
  std::vector<int> one_based() const {
    std::vector<int> m(mapping_);
    for (int& v : m) ++v;
    return m;
  }

  bool is_involution() const noexcept {
    for (std::size_t i = 0; i < mapping_.size(); ++i)
      if (mapping_[static_cast<std::size_t>(mapping_[i])] != static_cast<int>(i)) return false;
    return true;
  }
  bool is_identity() const noexcept {
    for (std::size_t i = 0; i < mapping_.size(); ++i)
      if (mapping_[i] != static_cast<int>(i)) return false;
    return true;
  }

  friend bool operator==(const Permutation&, const Permutation&) = default;

 private:
  std::vector<int> mapping_;
};

struct MassShift {
  int from = 0;
  int to = 0;
  double stub_mass = 0.0;  // amount of k * p_k moved
};

/// Contiguous split of the degree axis into b blocks of equal stub mass. Block indices are
/// 0-based; block i covers degrees [first_degree[i], last_degree[i]].
struct BlockPartition {
  int b = 0;
  std::vector<int> first_degree;
  std::vector<int> last_degree;
  std::vector<MassShift> shifts;
  DegreePmf adjusted;
  DegreePmf original;

  int block_of(int k) const {
    auto it = std::upper_bound(last_degree.begin(), last_degree.end(), k - 1);
    return static_cast<int>(it - last_degree.begin());
  }
  // sum_{k in H_i} k p'_k
  double stub_mass(int i) const noexcept {
    double s = 0.0;
    for (int k = first_degree[static_cast<std::size_t>(i)]; k <= last_degree[static_cast<std::size_t>(i)]; ++k)
      s += k * adjusted[k];
    return s;
  }
  // sum_{k in H_i} p'_k
  double probability_mass(int i) const noexcept {
    double s = 0.0;
    for (int k = first_degree[static_cast<std::size_t>(i)]; k <= last_degree[static_cast<std::size_t>(i)]; ++k)
      s += adjusted[k];
    return s;
  }
};

/// Splits the degrees into b contiguous blocks of stub mass E(Z)/b. Wherever the cumulative stub
/// mass overshoots a boundary at degree k, the excess is moved to degree k+1 in stub-mass space and
/// the freed probability Delta/k - Delta/(k+1) is parked at degree 0, so E(Z) and sum p = 1 hold.
inline BlockPartition partition_blocks(const DegreePmf& pmf, int b) {
  if (b < 1) throw config_error("block count b must be at least 1");
  const auto p = pmf.masses();
  const int kmax = pmf.truncation_degree();

  int positive_support = 0;
  for (int k = 1; k <= kmax; ++k)
    if (p[static_cast<std::size_t>(k)] > 0.0) ++positive_support;
  if (positive_support == 0) throw config_error("degenerate distribution: E(Z) = 0");
  if (b > positive_support)
    throw config_error("partition error: b = " + std::to_string(b) + " exceeds the " +
                       std::to_string(positive_support) + " degrees carrying stub mass");

  // q_k = k p_k, with room for one degree past the support.
  std::vector<double> q(static_cast<std::size_t>(kmax) + 2, 0.0);
  double total = 0.0;
  for (int k = 1; k <= kmax; ++k) total += (q[static_cast<std::size_t>(k)] = k * p[static_cast<std::size_t>(k)]);
  const double eps = 1e-12 * total;

  BlockPartition out;
  out.b = b;
  out.original = pmf;
  double parked = 0.0;
  double cum = 0.0;
  int block = 0;
  int first = 0;
  for (int k = 1; k < static_cast<int>(q.size()) && block < b - 1; ++k) {
    cum += q[static_cast<std::size_t>(k)];
    const double target = total * (block + 1) / b;
    if (cum < target - eps) continue;
    const double over = cum - target;
    if (over > eps) {
      if (k + 1 >= static_cast<int>(q.size())) q.push_back(0.0);
      q[static_cast<std::size_t>(k)] -= over;
      q[static_cast<std::size_t>(k) + 1] += over;
      out.shifts.push_back({k, k + 1, over});
      parked += over / k - over / (k + 1);
    }
    cum = target;
    out.first_degree.push_back(first);
    out.last_degree.push_back(k);
    first = k + 1;
    ++block;
  }
  while (q.size() > 1 && q.back() == 0.0) q.pop_back();
  const int top = static_cast<int>(q.size()) - 1;
  if (block != b - 1 || first > top) throw config_error("partition error: a block would carry zero stub mass");
  out.first_degree.push_back(first);
  out.last_degree.push_back(top);

  std::vector<double> adjusted(q.size(), 0.0);
  adjusted[0] = p[0] + parked;
  for (std::size_t k = 1; k < q.size(); ++k) {
    const bool untouched = k <= static_cast<std::size_t>(kmax) && q[k] == double(k) * p[k];
    adjusted[k] = untouched ? p[k] : q[k] / double(k);
  }
  if (!out.shifts.empty()) {
    // The shifts preserve sum p = 1 analytically; absorb the rounding residue at degree 0.
    const double s = std::accumulate(adjusted.begin(), adjusted.end(), 0.0);
    adjusted[0] = std::max(0.0, adjusted[0] + (1.0 - s));
  }
  out.adjusted = DegreePmf(std::move(adjusted), pmf.tag());

  for (int i = 0; i < b; ++i)
    if (!(out.stub_mass(i) > 0.0)) throw config_error("partition error: a block would carry zero stub mass");
  return out;
}

/// u_i = sum_{x in H_i} x^2 p'_x
inline std::vector<double> compute_u(const BlockPartition& part) {
  std::vector<double> u(static_cast<std::size_t>(part.b), 0.0);
  for (int i = 0; i < part.b; ++i)
    for (int k = part.first_degree[static_cast<std::size_t>(i)]; k <= part.last_degree[static_cast<std::size_t>(i)]; ++k)
      u[static_cast<std::size_t>(i)] += double(k) * k * part.adjusted[k];
  return u;
}

struct DegreeSequence {
  std::vector<int> degrees;             // ascending
  std::vector<std::size_t> counts;      // vertices per degree, index = degree
  std::size_t requested_n = 0;
  std::size_t added_vertices = 0;       // vertices added by the parity/balance repair
  std::vector<std::size_t> block_stubs; // stubs per block, all equal

  std::size_t n() const noexcept { return degrees.size(); }
  std::size_t total_degree() const noexcept {
    return std::accumulate(degrees.begin(), degrees.end(), std::size_t{0});
  }
};

namespace detail {

// Hamilton apportionment of n seats over weights w (which sum to 1). Ties go to the lower index.
inline std::vector<std::size_t> largest_remainder(std::span<const double> w, std::size_t n) {
  std::vector<std::size_t> counts(w.size());
  std::vector<double> rem(w.size());
  std::size_t assigned = 0;
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double quota = double(n) * w[k];
    const double fl = std::floor(quota);
    counts[k] = static_cast<std::size_t>(fl);
    rem[k] = quota - fl;
    assigned += counts[k];
  }
  std::vector<std::size_t> order(w.size());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t c) { return rem[a] > rem[c]; });
  for (std::size_t i = 0; assigned < n && i < order.size(); ++i, ++assigned) ++counts[order[i]];
  // Rounding in the quotas can leave a seat over or under; settle against the largest weights.
  while (assigned > n) {
    auto it = std::max_element(counts.begin(), counts.end());
    --*it;
    --assigned;
  }
  return counts;
}

inline std::vector<std::size_t> block_stub_counts(const BlockPartition& part, const std::vector<std::size_t>& counts) {
  std::vector<std::size_t> stubs(static_cast<std::size_t>(part.b), 0);
  for (std::size_t k = 1; k < counts.size(); ++k) stubs[static_cast<std::size_t>(part.block_of(int(k)))] += k * counts[k];
  return stubs;
}

// Incremental min-count coin table over a fixed set of positive denominations.
class CoinTable {
 public:
  explicit CoinTable(std::vector<int> coins) : coins_(std::move(coins)), best_{0}, last_{0} {}

  bool reachable(std::size_t x) {
    extend(x);
    return best_[x] != unreachable;
  }
  // Coins making up x, using the smallest denomination alone when it divides x.
  std::vector<int> make(std::size_t x) {
    const auto smallest = static_cast<std::size_t>(coins_.front());
    if (x % smallest == 0) return std::vector<int>(x / smallest, coins_.front());
    extend(x);
    std::vector<int> out;
    while (x > 0) {
      out.push_back(last_[x]);
      x -= static_cast<std::size_t>(last_[x]);
    }
    return out;
  }

 private:
  static constexpr std::size_t unreachable = std::numeric_limits<std::size_t>::max();

  void extend(std::size_t x) {
    for (std::size_t v = best_.size(); v <= x; ++v) {
      std::size_t b = unreachable;
      int l = 0;
      for (int c : coins_) {
        const auto cu = static_cast<std::size_t>(c);
        if (cu <= v && best_[v - cu] != unreachable && best_[v - cu] + 1 < b) {
          b = best_[v - cu] + 1;
          l = c;
        }
      }
      best_.push_back(b);
      last_.push_back(l);
    }
  }

  std::vector<int> coins_;
  std::vector<std::size_t> best_;
  std::vector<int> last_;
};

}  // namespace detail

/// Degree sequence by proportional allocation: degree k gets round(n p'_k) vertices
/// (largest-remainder), then vertices are added to deficient blocks until every block holds the
/// same stub count T with b T even.
inline DegreeSequence sample_degree_sequence(const BlockPartition& part, std::size_t n) {
  if (n < 1) throw config_error("vertex count n must be at least 1");
  const auto w = part.adjusted.masses();

  auto counts = detail::largest_remainder(w, n);
  auto stubs = detail::block_stub_counts(part, counts);
  if (std::find(stubs.begin(), stubs.end(), std::size_t{0}) != stubs.end()) {
    std::size_t min_n = n + 1;
    for (;; ++min_n) {
      auto s = detail::block_stub_counts(part, detail::largest_remainder(w, min_n));
      if (std::find(s.begin(), s.end(), std::size_t{0}) == s.end()) break;
      if (min_n > 100'000'000) break;
    }
    throw config_error("n = " + std::to_string(n) + " is too small to give every block a stub; minimum n is " +
                       std::to_string(min_n));
  }

  std::vector<detail::CoinTable> tables;
  for (int i = 0; i < part.b; ++i) {
    std::vector<int> coins;
    for (int k = std::max(1, part.first_degree[static_cast<std::size_t>(i)]); k <= part.last_degree[static_cast<std::size_t>(i)]; ++k)
      if (w[static_cast<std::size_t>(k)] > 0.0) coins.push_back(k);
    tables.emplace_back(std::move(coins));
  }

  const std::size_t start = *std::max_element(stubs.begin(), stubs.end());
  const std::size_t b = static_cast<std::size_t>(part.b);
  std::optional<std::size_t> target;
  for (std::size_t t = start; t <= start + 1'000'000; ++t) {
    if ((b * t) % 2 != 0) continue;
    bool ok = true;
    for (std::size_t i = 0; i < b && ok; ++i) ok = tables[i].reachable(t - stubs[i]);
    if (ok) {
      target = t;
      break;
    }
  }
  if (!target) throw config_error("no balanced degree sequence found near n = " + std::to_string(n));

  DegreeSequence out;
  out.requested_n = n;
  for (std::size_t i = 0; i < b; ++i) {
    for (int k : tables[i].make(*target - stubs[i])) {
      if (static_cast<std::size_t>(k) >= counts.size()) counts.resize(static_cast<std::size_t>(k) + 1, 0);
      ++counts[static_cast<std::size_t>(k)];
      ++out.added_vertices;
    }
  }
  out.counts = counts;
  for (std::size_t k = 0; k < counts.size(); ++k) out.degrees.insert(out.degrees.end(), counts[k], int(k));
  out.block_stubs = detail::block_stub_counts(part, counts);
  return out;
}

}  // namespace gcm
