#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "gcm/degree_model.hpp"
#include "gcm/error.hpp"
#include "gcm/rng.hpp"

namespace gcm {

enum class stub_kind : std::uint8_t { type1, type2 };

inline const char* to_string(stub_kind k) noexcept { return k == stub_kind::type1 ? "type1" : "type2"; }

struct Stub {
  std::size_t vertex = 0;
  int block = 0;  // 0-based
  stub_kind kind = stub_kind::type2;
};

/// Stubs sorted ascending by owner degree (ties by vertex id), cut into b equal blocks.
/// Stub id = position in `stubs`; block i holds ids [i * block_size, (i+1) * block_size).
struct StubBlocks {
  int b = 0;
  std::size_t block_size = 0;
  std::vector<Stub> stubs;
  std::vector<std::size_t> type1_per_block;  // filled by designate_types

  std::span<const Stub> block(int i) const {
    return std::span<const Stub>(stubs).subspan(static_cast<std::size_t>(i) * block_size, block_size);
  }
};

inline StubBlocks build_stubs(std::span<const int> degrees, int b) {
  if (b < 1) throw config_error("block count b must be at least 1");
  std::size_t total = 0;
  for (int d : degrees) {
    if (d < 0) throw config_error("degrees must be non-negative");
    total += static_cast<std::size_t>(d);
  }
  if (total % 2 != 0 || total % static_cast<std::size_t>(b) != 0)
    throw config_error("total degree " + std::to_string(total) + " must be even and divisible by b = " +
                       std::to_string(b));

  std::vector<std::size_t> order(degrees.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) { return degrees[x] < degrees[y]; });

  StubBlocks out;
  out.b = b;
  out.block_size = total / static_cast<std::size_t>(b);
  out.stubs.reserve(total);
  for (std::size_t v : order)
    for (int s = 0; s < degrees[v]; ++s) {
      const auto id = out.stubs.size();
      out.stubs.push_back({v, static_cast<int>(id / out.block_size), stub_kind::type2});
    }
  out.type1_per_block.assign(static_cast<std::size_t>(b), 0);
  return out;
}

/// Type-1 stubs per block: ceil(2m q / b), minus one for a self-paired block (h(i) = i) when odd.
inline std::size_t type1_count(std::size_t total_stubs, int b, double q, bool self_paired) {
  const double raw = double(total_stubs) * q / b;
  auto c = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  c = std::min(c, total_stubs / static_cast<std::size_t>(b));
  if (self_paired && c % 2 == 1) --c;
  return c;
}

inline StubBlocks designate_types(StubBlocks blocks, double q, const Permutation& h, rng_type& rng) {
  if (!(q >= 0.0 && q < 1.0)) throw config_error("q must lie in [0, 1)");
  if (h.size() != blocks.b) throw config_error("permutation size does not match b");
  const std::size_t total = blocks.stubs.size();
  std::vector<std::size_t> idx(blocks.block_size);
  for (int i = 0; i < blocks.b; ++i) {
    const std::size_t c = type1_count(total, blocks.b, q, h(i) == i);
    blocks.type1_per_block[static_cast<std::size_t>(i)] = c;
    if (c == 0) continue;
    // Partial Fisher-Yates: the first c positions are a uniform c-subset of the block.
    std::iota(idx.begin(), idx.end(), static_cast<std::size_t>(i) * blocks.block_size);
    for (std::size_t j = 0; j < c; ++j) {
      std::uniform_int_distribution<std::size_t> pick(j, idx.size() - 1);
      std::swap(idx[j], idx[pick(rng)]);
      blocks.stubs[idx[j]].kind = stub_kind::type1;
    }
  }
  return blocks;
}

struct Edge {
  std::size_t u = 0;
  std::size_t v = 0;
  stub_kind kind = stub_kind::type2;
  std::size_t stub_u = 0;
  std::size_t stub_v = 0;
};

struct GeneratorEcho {
  int b = 1;
  double q = 0.0;
  Permutation h;
  std::uint64_t seed = 0;
};

struct GeneratedGraph {
  std::size_t n = 0;
  std::vector<Edge> edges;
  std::vector<int> degrees;
  GeneratorEcho config;
  std::size_t self_loops = 0;
  std::size_t multiedges = 0;      // parallel copies beyond the first, over non-loop pairs
  std::size_t added_vertices = 0;  // from degree-sequence repair, when built via generate()
  std::vector<int> vertex_block;   // block of each vertex's first stub (-1 for degree 0)
};

inline void count_defects(GeneratedGraph& g) {
  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(g.edges.size());
  g.self_loops = 0;
  for (const Edge& e : g.edges) {
    if (e.u == e.v)
      ++g.self_loops;
    else
      pairs.emplace_back(std::min(e.u, e.v), std::max(e.u, e.v));
  }
  std::sort(pairs.begin(), pairs.end());
  g.multiedges = 0;
  for (std::size_t i = 1; i < pairs.size(); ++i)
    if (pairs[i] == pairs[i - 1]) ++g.multiedges;
}

/// Uniform matching: type-1 stubs of block i with type-1 stubs of block h(i), type-2 stubs
/// globally. Processing a random permutation is equivalent to repeatedly connecting a random
/// unconnected stub to a uniform eligible partner.
inline GeneratedGraph match_stubs(const StubBlocks& blocks, const Permutation& h, rng_type& rng) {
  if (h.size() != blocks.b) throw config_error("permutation size does not match b");
  if (!h.is_involution())
    throw config_error("generative semantics undefined: h is not an involution (analytic-only permutation)");

  std::vector<std::vector<std::size_t>> type1(static_cast<std::size_t>(blocks.b));
  std::vector<std::size_t> type2;
  for (std::size_t s = 0; s < blocks.stubs.size(); ++s) {
    const Stub& st = blocks.stubs[s];
    if (st.kind == stub_kind::type1)
      type1[static_cast<std::size_t>(st.block)].push_back(s);
    else
      type2.push_back(s);
  }
  for (int i = 0; i < blocks.b; ++i) {
    const auto& mine = type1[static_cast<std::size_t>(i)];
    const auto& theirs = type1[static_cast<std::size_t>(h(i))];
    if (mine.size() != theirs.size() || (h(i) == i && mine.size() % 2 != 0))
      throw config_error("type-1 stub counts do not pair up between blocks " + std::to_string(i + 1) + " and " +
                         std::to_string(h(i) + 1));
  }
  if (type2.size() % 2 != 0) throw config_error("odd number of type-2 stubs");

  GeneratedGraph g;
  g.edges.reserve(blocks.stubs.size() / 2);
  auto connect = [&](std::size_t a, std::size_t c, stub_kind kind) {
    g.edges.push_back({blocks.stubs[a].vertex, blocks.stubs[c].vertex, kind, a, c});
  };
  for (int i = 0; i < blocks.b; ++i) {
    const int j = h(i);
    if (j < i) continue;
    auto& mine = type1[static_cast<std::size_t>(i)];
    std::shuffle(mine.begin(), mine.end(), rng);
    if (j == i) {
      for (std::size_t k = 0; k + 1 < mine.size(); k += 2) connect(mine[k], mine[k + 1], stub_kind::type1);
    } else {
      auto& theirs = type1[static_cast<std::size_t>(j)];
      std::shuffle(theirs.begin(), theirs.end(), rng);
      for (std::size_t k = 0; k < mine.size(); ++k) connect(mine[k], theirs[k], stub_kind::type1);
    }
  }
  std::shuffle(type2.begin(), type2.end(), rng);
  for (std::size_t k = 0; k + 1 < type2.size(); k += 2) connect(type2[k], type2[k + 1], stub_kind::type2);

  std::size_t n = 0;
  for (const Stub& s : blocks.stubs) n = std::max(n, s.vertex + 1);
  g.n = n;
  g.degrees.assign(n, 0);
  g.vertex_block.assign(n, -1);
  for (const Stub& s : blocks.stubs) {
    if (g.degrees[s.vertex]++ == 0) g.vertex_block[s.vertex] = s.block;
  }
  g.config.b = blocks.b;
  g.config.h = h;
  count_defects(g);
  return g;
}

/// Runs designate_types + match_stubs on an explicit degree sequence. Vertices with degree 0
/// are kept (vertex count = degrees.size()).
inline GeneratedGraph generate_from_degrees(std::span<const int> degrees, int b, double q, const Permutation& h,
                                            std::uint64_t seed) {
  rng_type rng = make_rng(seed);
  auto typed = designate_types(build_stubs(degrees, b), q, h, rng);
  GeneratedGraph g = match_stubs(typed, h, rng);
  g.n = degrees.size();
  g.degrees.assign(degrees.begin(), degrees.end());
  g.vertex_block.resize(g.n, -1);
  g.config = {b, q, h, seed};
  return g;
}

struct GeneratorConfig {
  std::size_t n = 0;
  DegreePmf pmf;
  int b = 1;
  double q = 0.0;
  Permutation h;
  std::uint64_t seed = 0;
};

inline GeneratedGraph generate(const BlockPartition& part, std::size_t n, double q, const Permutation& h,
                               std::uint64_t seed) {
  const DegreeSequence seq = sample_degree_sequence(part, n);
  GeneratedGraph g = generate_from_degrees(seq.degrees, part.b, q, h, seed);
  g.added_vertices = seq.added_vertices;
  return g;
}

/// sample_degree_sequence -> build_stubs -> designate_types -> match_stubs
inline GeneratedGraph generate(const GeneratorConfig& cfg) {
  return generate(partition_blocks(cfg.pmf, cfg.b), cfg.n, cfg.q, cfg.h, cfg.seed);
}

}  // namespace gcm
