#pragma once

#include <cstdint>
#include <fstream>
#include <iomanip>
#include <istream>
#include <locale>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gcm/degree_model.hpp"
#include "gcm/error.hpp"
#include "gcm/generator.hpp"
#include "gcm/simulation.hpp"

namespace gcm::io {

using json = nlohmann::json;

/// Locale-independent decimal text with at least 10 significant digits.
inline std::string fmt(double v, int precision = 10) {
  std::ostringstream os;
  os.imbue(std::locale::classic());
  os << std::setprecision(precision) << v;
  return os.str();
}

/// Parses {"family": "...", "params": {...}} or {"explicit": {"k": p_k, ...}}.
inline DegreePmf pmf_from_json(const json& j) {
  try {
    if (j.contains("explicit")) {
      std::map<int, double> w;
      for (const auto& [k, v] : j.at("explicit").items()) w[std::stoi(k)] = v.get<double>();
      return DegreePmf::from_weights(w);
    }
    const std::string fam = j.at("family").get<std::string>();
    const json params = j.value("params", json::object());
    const double tail = params.value("tail_stub_mass", default_tail_stub_mass);
    if (fam == "geometric") return DegreePmf::geometric(params.at("p").get<double>(), tail);
    if (fam == "poisson") return DegreePmf::poisson(params.at("mean").get<double>(), tail);
    if (fam == "uniform") return DegreePmf::uniform(params.at("lo").get<int>(), params.at("hi").get<int>());
    if (fam == "powerlaw")
      return DegreePmf::powerlaw(params.at("exponent").get<double>(), params.value("lo", 1), params.at("hi").get<int>());
    throw config_error("unknown degree distribution family '" + fam + "'");
  } catch (const json::exception& e) {
    throw config_error(std::string("malformed distribution spec: ") + e.what());
  }
}

inline json pmf_to_json(const DegreePmf& pmf) {
  json masses = json::object();
  for (int k = 0; k <= pmf.truncation_degree(); ++k)
    if (pmf[k] > 0.0) masses[std::to_string(k)] = pmf[k];
  return {{"explicit", masses}, {"family_tag", to_string(pmf.tag())}};
}

/// Compact command-line form: uniform:LO:HI, geometric:P, poisson:MEAN, powerlaw:EXP:LO:HI,
/// point:K, explicit:K=W,K=W,...
inline DegreePmf pmf_from_spec(const std::string& spec) {
  std::vector<std::string> parts;
  std::stringstream ss(spec);
  for (std::string tok; std::getline(ss, tok, ':');) parts.push_back(tok);
  if (parts.empty()) throw config_error("empty distribution spec");
  auto num = [&](std::size_t i) {
    if (i >= parts.size()) throw config_error("distribution spec '" + spec + "' is missing parameters");
    std::istringstream is(parts[i]);
    is.imbue(std::locale::classic());
    double v = 0.0;
    if (!(is >> v) || !is.eof()) throw config_error("bad number '" + parts[i] + "' in distribution spec");
    return v;
  };
  const std::string& fam = parts[0];
  if (fam == "uniform") return DegreePmf::uniform(int(num(1)), int(num(2)));
  if (fam == "geometric") return DegreePmf::geometric(num(1));
  if (fam == "poisson") return DegreePmf::poisson(num(1));
  if (fam == "powerlaw") return DegreePmf::powerlaw(num(1), int(num(2)), int(num(3)));
  if (fam == "point") return DegreePmf::point_mass(int(num(1)));
  if (fam == "explicit") {
    if (parts.size() < 2) throw config_error("explicit spec needs K=W pairs");
    std::map<int, double> w;
    std::stringstream es(parts[1]);
    for (std::string kv; std::getline(es, kv, ',');) {
      const auto eq = kv.find('=');
      if (eq == std::string::npos) throw config_error("explicit spec entry '" + kv + "' is not K=W");
      w[std::stoi(kv.substr(0, eq))] = std::stod(kv.substr(eq + 1));
    }
    return DegreePmf::from_weights(w);
  }
  throw config_error("unknown degree distribution family '" + fam + "'");
}

/// Blocks are reported 1-based.
inline json partition_to_json(const BlockPartition& part) {
  json blocks = json::array();
  for (int i = 0; i < part.b; ++i)
    blocks.push_back({{"index", i + 1},
                      {"degrees", {part.first_degree[static_cast<std::size_t>(i)], part.last_degree[static_cast<std::size_t>(i)]}},
                      {"stub_mass", part.stub_mass(i)},
                      {"probability_mass", part.probability_mass(i)}});
  json shifts = json::array();
  for (const auto& s : part.shifts) shifts.push_back({{"from", s.from}, {"to", s.to}, {"stub_mass", s.stub_mass}});
  json adjusted = json::object();
  for (int k = 0; k <= part.adjusted.truncation_degree(); ++k)
    if (part.adjusted[k] > 0.0) adjusted[std::to_string(k)] = part.adjusted[k];
  return {{"b", part.b}, {"blocks", blocks}, {"shifts", shifts}, {"adjusted_masses", adjusted}};
}

/// One "u v kind" line per edge, 0-based vertex ids.
inline void write_edge_list(std::ostream& os, const GeneratedGraph& g) {
  for (const Edge& e : g.edges) os << e.u << ' ' << e.v << ' ' << to_string(e.kind) << '\n';
}

inline json metadata_json(const GeneratedGraph& g) {
  return {{"n", g.n},
          {"m", g.edges.size()},
          {"b", g.config.b},
          {"q", g.config.q},
          {"h", g.config.h.one_based()},
          {"seed", g.config.seed},
          {"self_loops", g.self_loops},
          {"multiedges", g.multiedges},
          {"added_vertices", g.added_vertices}};
}

/// Reads an edge list written by write_edge_list. Vertex count is taken from `n` when given,
/// else from the largest id seen. Degrees count self-loops twice.
inline GeneratedGraph read_edge_list(std::istream& is, std::size_t n = 0) {
  GeneratedGraph g;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ls(line);
    Edge e;
    std::string kind = "type2";
    if (!(ls >> e.u >> e.v)) throw std::runtime_error("edge list line " + std::to_string(lineno) + " is malformed");
    ls >> kind;
    e.kind = kind == "type1" ? stub_kind::type1 : stub_kind::type2;
    n = std::max({n, e.u + 1, e.v + 1});
    g.edges.push_back(e);
  }
  g.n = n;
  g.degrees.assign(n, 0);
  for (const Edge& e : g.edges) {
    ++g.degrees[e.u];
    ++g.degrees[e.v];
  }
  count_defects(g);
  return g;
}

inline GeneratedGraph read_edge_list_file(const std::string& path, std::size_t n = 0) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read edge list '" + path + "'");
  return read_edge_list(in, n);
}

/// Simulation sweep rows: phi,q,b,mode,eta_hat,ci_low,ci_high,n,seed
inline void write_sweep_csv(std::ostream& os, const std::vector<SweepRow>& rows, bool header = true) {
  if (header) os << "phi,q,b,mode,eta_hat,ci_low,ci_high,n,seed\n";
  for (const SweepRow& r : rows)
    os << fmt(r.phi) << ',' << fmt(r.q) << ',' << r.b << ',' << r.mode << ',' << fmt(r.result.point_estimate) << ','
       << fmt(r.result.ci_low()) << ',' << fmt(r.result.ci_high()) << ',' << r.n << ',' << r.seed << '\n';
}

}  // namespace gcm::io
