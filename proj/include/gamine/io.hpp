// Copyright 2026 The Gamine Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// TSV formats.
//
// Graph:      "#alpha=<float>" line, header "src\tdst\tprob", one edge per
//             row; node labels are arbitrary strings. A sidecar
//             "<path>.nodes" ("id\tname") fixes the id order and keeps nodes
//             without edges.
// Costs:      header "node\tcost"; unlisted nodes cost 0.
// Relevance:  header "src\trank\tdst\tscore", ranks contiguous from 1.
// Trace:      header "round\ti\tj\tk\tdelta_pred\tf_before\tf_after\tms".
// Lines starting with '#' other than the alpha line are comments; writers
// put a "#config_hash=<hex>" line first when a hash is given.

#pragma once

#include <charconv>
#include <cmath>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <json.hpp>

#include "gamine/errors.hpp"
#include "gamine/graph.hpp"
#include "gamine/optimizers.hpp"
#include "gamine/relevance.hpp"

namespace gamine {

// FNV-1a over the canonical (key-sorted, compact) JSON dump.
inline std::string config_hash(const nlohmann::json& config) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : config.dump()) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace detail {

inline std::string format_double(double x) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, end);
}

inline std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    auto pos = line.find('\t', start);
    out.push_back(line.substr(start, pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

inline std::string_view chomp(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == '\n')) s.remove_suffix(1);
  return s;
}

inline double parse_double(std::string_view s, const std::string& file,
                           std::size_t line, const char* what) {
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw ValidationError(file, line,
                          std::string("malformed ") + what + " '" +
                              std::string(s) + "'");
  }
  return v;
}

inline std::ifstream open_in(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path + " for reading");
  return in;
}

inline std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path + " for writing");
  return out;
}

inline void write_hash(std::ostream& out, const std::string& hash) {
  if (!hash.empty()) out << "#config_hash=" << hash << '\n';
}

inline std::unordered_map<std::string, NodeId> name_table(const RecGraph& g) {
  std::unordered_map<std::string, NodeId> ids;
  for (NodeId i = 0; i < g.size(); ++i) ids.emplace(g.name(i), i);
  return ids;
}

}  // namespace detail

inline std::string node_table_path(const std::string& graph_path) {
  return graph_path + ".nodes";
}

inline void save_graph(const RecGraph& g, const std::string& path,
                       const std::string& hash = "") {
  auto out = detail::open_out(path);
  detail::write_hash(out, hash);
  out << "#alpha=" << detail::format_double(g.alpha()) << '\n';
  out << "src\tdst\tprob\n";
  for (NodeId i = 0; i < g.size(); ++i) {
    for (const auto& e : g.out_edges(i)) {
      out << g.name(i) << '\t' << g.name(e.target) << '\t'
          << detail::format_double(e.prob) << '\n';
    }
  }
  auto nodes = detail::open_out(node_table_path(path));
  detail::write_hash(nodes, hash);
  nodes << "id\tname\n";
  for (NodeId i = 0; i < g.size(); ++i) nodes << i << '\t' << g.name(i) << '\n';
}

inline RecGraph load_graph(const std::string& path,
                           double row_tol = kLoadRowSumTolerance) {
  std::vector<std::string> names;
  std::unordered_map<std::string, NodeId> ids;
  auto intern = [&](std::string_view name) {
    auto [it, fresh] = ids.emplace(std::string(name),
                                   static_cast<NodeId>(names.size()));
    if (fresh) names.emplace_back(name);
    return it->second;
  };

  const std::string sidecar = node_table_path(path);
  if (std::filesystem::exists(sidecar)) {
    auto in = detail::open_in(sidecar);
    std::string raw;
    std::size_t lineno = 0;
    bool header = false;
    while (std::getline(in, raw)) {
      ++lineno;
      auto line = detail::chomp(raw);
      if (line.empty() || line.front() == '#') continue;
      if (!header) {
        header = true;
        if (line != "id\tname") {
          throw ValidationError(sidecar, lineno, "expected header 'id\\tname'");
        }
        continue;
      }
      auto cols = detail::split_tabs(line);
      if (cols.size() != 2) throw ValidationError(sidecar, lineno, "expected 2 columns");
      if (std::to_string(names.size()) != cols[0]) {
        throw ValidationError(sidecar, lineno, "ids must be dense and ordered");
      }
      if (ids.count(std::string(cols[1])) != 0) {
        throw ValidationError(sidecar, lineno, "duplicate node name");
      }
      intern(cols[1]);
    }
  }
  const bool fixed_nodes = !names.empty();

  struct Row {
    NodeId src;
    NodeId dst;
    double prob;
    std::size_t line;
  };
  std::vector<Row> rows;
  std::optional<double> alpha;
  auto in = detail::open_in(path);
  std::string raw;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = detail::chomp(raw);
    if (line.empty()) continue;
    if (line.front() == '#') {
      if (line.starts_with("#alpha=")) {
        alpha = detail::parse_double(line.substr(7), path, lineno, "alpha");
      }
      continue;
    }
    if (!header) {
      header = true;
      if (line != "src\tdst\tprob") {
        throw ValidationError(path, lineno, "expected header 'src\\tdst\\tprob'");
      }
      continue;
    }
    auto cols = detail::split_tabs(line);
    if (cols.size() != 3) throw ValidationError(path, lineno, "expected 3 columns");
    if (fixed_nodes && (ids.count(std::string(cols[0])) == 0 ||
                        ids.count(std::string(cols[1])) == 0)) {
      throw ValidationError(path, lineno, "node missing from " + sidecar);
    }
    const NodeId src = intern(cols[0]);
    const NodeId dst = intern(cols[1]);
    rows.push_back({src, dst, detail::parse_double(cols[2], path, lineno, "probability"),
                    lineno});
  }
  if (!alpha) throw ValidationError(path, lineno, "missing '#alpha=' line");
  if (!(*alpha > 0.0 && *alpha <= 1.0)) {
    throw ValidationError(path, 1, "alpha outside (0, 1]");
  }
  if (names.empty()) throw ValidationError(path, lineno, "graph has no nodes");

  RecGraph g(names.size(), *alpha);
  std::vector<std::size_t> last_line(names.size(), 0);
  std::vector<double> row_sum(names.size(), 0.0);
  for (const auto& r : rows) {
    if (!(r.prob > 0.0 && r.prob <= 1.0 - *alpha + row_tol)) {
      throw ValidationError(path, r.line, "probability outside (0, 1 - alpha]");
    }
    try {
      g.add_edge(r.src, r.dst, r.prob);
    } catch (const PreconditionError& e) {
      throw ValidationError(path, r.line, e.what());
    }
    last_line[r.src] = r.line;
    row_sum[r.src] += r.prob;
  }
  for (NodeId i = 0; i < g.size(); ++i) {
    if (last_line[i] == 0) continue;
    double sum = 0.0;
    for (const auto& e : g.out_edges(i)) sum += e.prob;
    if (std::abs(sum - (1.0 - *alpha)) > row_tol) {
      throw ValidationError(path, last_line[i],
                            "out-probabilities of '" + names[i] + "' sum to " +
                                detail::format_double(sum) +
                                ", expected 1 - alpha");
    }
  }
  g.set_names(std::move(names));
  return g;
}

inline void save_costs(const RecGraph& g, const CostVector& c,
                       const std::string& path, const std::string& hash = "") {
  auto out = detail::open_out(path);
  detail::write_hash(out, hash);
  out << "node\tcost\n";
  for (NodeId i = 0; i < g.size(); ++i) {
    out << g.name(i) << '\t' << detail::format_double(c[i]) << '\n';
  }
}

inline CostVector load_costs(const std::string& path, const RecGraph& g) {
  const auto ids = detail::name_table(g);
  std::vector<double> costs(g.size(), 0.0);
  std::vector<bool> seen(g.size(), false);
  auto in = detail::open_in(path);
  std::string raw;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = detail::chomp(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      header = true;
      if (line == "node\tcost") continue;
    }
    auto cols = detail::split_tabs(line);
    if (cols.size() != 2) throw ValidationError(path, lineno, "expected 2 columns");
    auto it = ids.find(std::string(cols[0]));
    if (it == ids.end()) {
      throw ValidationError(path, lineno,
                            "unknown node '" + std::string(cols[0]) + "'");
    }
    if (seen[it->second]) throw ValidationError(path, lineno, "duplicate node");
    seen[it->second] = true;
    const double v = detail::parse_double(cols[1], path, lineno, "cost");
    if (!(v >= 0.0 && v <= 1.0)) {
      throw ValidationError(path, lineno, "cost outside [0, 1]");
    }
    costs[it->second] = v;
  }
  return CostVector(std::move(costs));
}

inline void save_relevance(const RecGraph& g, const RelevanceIndex& index,
                           const std::string& path,
                           const std::string& hash = "") {
  auto out = detail::open_out(path);
  detail::write_hash(out, hash);
  out << "src\trank\tdst\tscore\n";
  for (NodeId i = 0; i < index.size(); ++i) {
    for (const auto& t : index.ranking(i)) {
      out << g.name(i) << '\t' << t.rank << '\t' << g.name(t.target) << '\t'
          << detail::format_double(t.score) << '\n';
    }
  }
}

inline RelevanceIndex load_relevance(const std::string& path, const RecGraph& g,
                                     std::size_t k_cand = kDefaultCandidateCount) {
  const auto ids = detail::name_table(g);
  struct Entry {
    std::uint32_t rank;
    NodeId dst;
    double score;
    std::size_t line;
  };
  std::vector<std::vector<Entry>> per_source(g.size());
  auto in = detail::open_in(path);
  std::string raw;
  std::size_t lineno = 0;
  bool header = false;
  while (std::getline(in, raw)) {
    ++lineno;
    auto line = detail::chomp(raw);
    if (line.empty() || line.front() == '#') continue;
    if (!header) {
      header = true;
      if (line != "src\trank\tdst\tscore") {
        throw ValidationError(path, lineno,
                              "expected header 'src\\trank\\tdst\\tscore'");
      }
      continue;
    }
    auto cols = detail::split_tabs(line);
    if (cols.size() != 4) throw ValidationError(path, lineno, "expected 4 columns");
    auto src = ids.find(std::string(cols[0]));
    auto dst = ids.find(std::string(cols[2]));
    if (src == ids.end() || dst == ids.end()) {
      throw ValidationError(path, lineno, "unknown node");
    }
    const double rank = detail::parse_double(cols[1], path, lineno, "rank");
    if (rank < 1.0 || rank != std::floor(rank)) {
      throw ValidationError(path, lineno, "rank must be a positive integer");
    }
    const double score = detail::parse_double(cols[3], path, lineno, "score");
    if (score < 0.0) throw ValidationError(path, lineno, "negative score");
    per_source[src->second].push_back(
        {static_cast<std::uint32_t>(rank), dst->second, score, lineno});
  }
  RelevanceIndex index(g.size(), k_cand);
  for (NodeId i = 0; i < g.size(); ++i) {
    auto& entries = per_source[i];
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.rank < b.rank; });
    std::vector<RankedTarget> ranked;
    for (std::size_t r = 0; r < entries.size(); ++r) {
      if (entries[r].rank != r + 1) {
        throw ValidationError(path, entries[r].line,
                              "ranks of '" + g.name(i) +
                                  "' are not contiguous from 1");
      }
      ranked.push_back({entries[r].dst, entries[r].score, entries[r].rank});
    }
    try {
      index.set_ranking(i, std::move(ranked));
    } catch (const ValidationError& e) {
      throw ValidationError(path, entries.empty() ? 0 : entries.back().line,
                            e.what());
    }
  }
  try {
    index.validate_against(g);
  } catch (const ValidationError& e) {
    throw ValidationError(path, lineno, e.what());
  }
  return index;
}

inline void save_exposures(const RecGraph& g, std::span<const double> exposure,
                           const std::string& path, const std::string& hash = "") {
  auto out = detail::open_out(path);
  detail::write_hash(out, hash);
  out << "node\texposure\n";
  for (NodeId i = 0; i < g.size(); ++i) {
    out << g.name(i) << '\t' << detail::format_double(exposure[i]) << '\n';
  }
}

inline void save_trace(const RecGraph& g, const RunTrace& trace,
                       const std::string& path, const std::string& hash = "") {
  auto out = detail::open_out(path);
  detail::write_hash(out, hash);
  out << "#algorithm=" << to_string(trace.algorithm) << '\n';
  out << "#kappa=" << trace.kappa << '\n';
  out << "#stop_reason=" << trace.stop_reason << '\n';
  out << "round\ti\tj\tk\tdelta_pred\tf_before\tf_after\tms\n";
  for (const auto& r : trace.rounds) {
    out << r.edit.round << '\t' << g.name(r.edit.i) << '\t' << g.name(r.edit.j)
        << '\t' << g.name(*r.edit.k) << '\t' << detail::format_double(r.delta_pred)
        << '\t' << detail::format_double(r.f_before) << '\t'
        << detail::format_double(r.f_after) << '\t'
        << detail::format_double(r.ms) << '\n';
  }
}

}  // namespace gamine
