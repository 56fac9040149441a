#pragma once

// Citation graphs: the bipartite decision/legislation graph, its weighted
// legislation co-citation projection, and on-demand decision similarity.

#include <algorithm>
#include <cstdint>
#include <istream>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lexcite/errors.hpp"
#include "lexcite/textcite.hpp"

namespace lexcite::graphstore {

using textcite::CitationEdge;
using textcite::CitationType;

inline constexpr int kUnknownYear = 0;
inline constexpr int kUnknownJusticeKind = 0;

struct DecisionMeta {
  int year = kUnknownYear;
  int justice_kind = kUnknownJusticeKind;  // 1 civil, 2 criminal, 3 commercial, 4 admin, 5 constitutional

  bool operator==(const DecisionMeta&) const = default;
};

struct YearRange {
  int first = 0;
  int last = 0;

  bool contains(int year) const { return year >= first && year <= last; }
  int length() const { return last - first + 1; }
  bool operator==(const YearRange&) const = default;
};

struct LegislationNode {
  std::string key;  // "law_ref::article_ref"
  CitationType type = CitationType::CodexArticle;

  bool operator==(const LegislationNode&) const = default;
};

struct Neighbor {
  std::uint32_t node;
  std::uint32_t weight;

  bool operator==(const Neighbor&) const = default;
};

enum class Side { Decisions, Legislation };

namespace detail {

template <typename T>
void write_pod(std::ostream& os, T v) {
  unsigned char buf[sizeof(T)];
  auto u = static_cast<std::make_unsigned_t<T>>(v);
  for (std::size_t i = 0; i < sizeof(T); ++i) buf[i] = static_cast<unsigned char>(u >> (8 * i));
  os.write(reinterpret_cast<const char*>(buf), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
  unsigned char buf[sizeof(T)];
  if (!is.read(reinterpret_cast<char*>(buf), sizeof(T))) {
    throw InputError("graph file truncated");
  }
  std::make_unsigned_t<T> u = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) u |= std::make_unsigned_t<T>(buf[i]) << (8 * i);
  return static_cast<T>(u);
}

inline void write_string(std::ostream& os, std::string_view s) {
  write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

inline std::string read_string(std::istream& is) {
  const auto n = read_pod<std::uint32_t>(is);
  if (n > (1u << 26)) throw InputError("graph file: implausible string length");
  std::string s(n, '\0');
  if (n > 0 && !is.read(s.data(), n)) throw InputError("graph file truncated");
  return s;
}

}  // namespace detail

// G_B. Ordinals are dense and assigned in lexicographic key order, so the same
// multiset of input edges always produces the same graph regardless of input
// order.
class BipartiteGraph {
 public:
  static constexpr std::string_view kMagic = "LXBG";
  static constexpr std::uint8_t kVersion = 1;

  std::size_t decision_count() const { return decision_ids_.size(); }
  std::size_t legislation_count() const { return legislation_.size(); }
  std::size_t edge_count() const { return decision_adj_.size(); }

  const std::string& decision_id(std::size_t d) const { return decision_ids_.at(d); }
  const DecisionMeta& meta(std::size_t d) const { return meta_.at(d); }
  const LegislationNode& legislation(std::size_t l) const { return legislation_.at(l); }

  // Cited legislation of decision d, sorted by ordinal.
  std::span<const Neighbor> citations(std::size_t d) const {
    return {decision_adj_.data() + decision_offsets_[d],
            decision_adj_.data() + decision_offsets_[d + 1]};
  }

  // Citing decisions of legislation node l, sorted by ordinal.
  std::span<const Neighbor> citing(std::size_t l) const {
    return {legislation_adj_.data() + legislation_offsets_[l],
            legislation_adj_.data() + legislation_offsets_[l + 1]};
  }

  std::size_t legislation_degree(std::size_t l) const { return citing(l).size(); }
  std::size_t decision_degree(std::size_t d) const { return citations(d).size(); }

  std::optional<std::size_t> find_decision(std::string_view id) const {
    auto it = std::lower_bound(decision_ids_.begin(), decision_ids_.end(), id);
    if (it == decision_ids_.end() || *it != id) return std::nullopt;
    return static_cast<std::size_t>(it - decision_ids_.begin());
  }

  std::optional<std::size_t> find_legislation(std::string_view key) const {
    auto it = std::lower_bound(legislation_.begin(), legislation_.end(), key,
                               [](const LegislationNode& n, std::string_view k) { return n.key < k; });
    if (it == legislation_.end() || it->key != key) return std::nullopt;
    return static_cast<std::size_t>(it - legislation_.begin());
  }

  // Decisions that had edges but no metadata record.
  std::size_t missing_meta() const { return missing_meta_; }

  void save(std::ostream& os) const {
    os.write(kMagic.data(), static_cast<std::streamsize>(kMagic.size()));
    detail::write_pod<std::uint8_t>(os, kVersion);
    detail::write_pod<std::uint64_t>(os, decision_ids_.size());
    for (std::size_t d = 0; d < decision_ids_.size(); ++d) {
      detail::write_string(os, decision_ids_[d]);
      detail::write_pod<std::int32_t>(os, meta_[d].year);
      detail::write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(meta_[d].justice_kind));
    }
    detail::write_pod<std::uint64_t>(os, legislation_.size());
    for (const auto& n : legislation_) {
      detail::write_string(os, n.key);
      detail::write_pod<std::uint8_t>(os, static_cast<std::uint8_t>(n.type));
    }
    for (std::size_t d = 0; d < decision_ids_.size(); ++d) {
      const auto adj = citations(d);
      detail::write_pod<std::uint32_t>(os, static_cast<std::uint32_t>(adj.size()));
      for (const auto& nb : adj) {
        detail::write_pod<std::uint32_t>(os, nb.node);
        detail::write_pod<std::uint32_t>(os, nb.weight);
      }
    }
    detail::write_pod<std::uint64_t>(os, missing_meta_);
  }

  static BipartiteGraph load(std::istream& is) {
    char magic[4];
    if (!is.read(magic, 4) || std::string_view(magic, 4) != kMagic) {
      throw InputError("not a bipartite graph file (bad magic)");
    }
    const auto version = detail::read_pod<std::uint8_t>(is);
    if (version != kVersion) {
      throw InputError("unsupported bipartite graph version " + std::to_string(version));
    }
    BipartiteGraph g;
    const auto nd = detail::read_pod<std::uint64_t>(is);
    for (std::uint64_t d = 0; d < nd; ++d) {
      g.decision_ids_.push_back(detail::read_string(is));
      DecisionMeta m;
      m.year = detail::read_pod<std::int32_t>(is);
      m.justice_kind = detail::read_pod<std::uint8_t>(is);
      g.meta_.push_back(m);
    }
    const auto nl = detail::read_pod<std::uint64_t>(is);
    for (std::uint64_t l = 0; l < nl; ++l) {
      LegislationNode n;
      n.key = detail::read_string(is);
      const auto t = detail::read_pod<std::uint8_t>(is);
      if (t >= textcite::kCitationTypeCount) throw InputError("graph file: bad citation type");
      n.type = static_cast<CitationType>(t);
      g.legislation_.push_back(std::move(n));
    }
    for (std::uint64_t d = 0; d < nd; ++d) {
      const auto deg = detail::read_pod<std::uint32_t>(is);
      for (std::uint32_t i = 0; i < deg; ++i) {
        Neighbor nb{detail::read_pod<std::uint32_t>(is), detail::read_pod<std::uint32_t>(is)};
        if (nb.node >= nl) throw InputError("graph file: neighbor out of range");
        g.decision_adj_.push_back(nb);
      }
      g.decision_offsets_.push_back(g.decision_adj_.size());
    }
    g.missing_meta_ = detail::read_pod<std::uint64_t>(is);
    g.build_transpose();
    return g;
  }

  bool operator==(const BipartiteGraph& o) const {
    return decision_ids_ == o.decision_ids_ && meta_ == o.meta_ && legislation_ == o.legislation_ &&
           decision_offsets_ == o.decision_offsets_ && decision_adj_ == o.decision_adj_ &&
           missing_meta_ == o.missing_meta_;
  }

 private:
  friend class BipartiteBuilder;

  void build_transpose() {
    legislation_offsets_.assign(legislation_.size() + 1, 0);
    for (const auto& nb : decision_adj_) ++legislation_offsets_[nb.node + 1];
    for (std::size_t l = 0; l < legislation_.size(); ++l) {
      legislation_offsets_[l + 1] += legislation_offsets_[l];
    }
    legislation_adj_.resize(decision_adj_.size());
    auto cursor = legislation_offsets_;
    for (std::size_t d = 0; d < decision_ids_.size(); ++d) {
      for (const auto& nb : citations(d)) {
        legislation_adj_[cursor[nb.node]++] = {static_cast<std::uint32_t>(d), nb.weight};
      }
    }
  }

  std::vector<std::string> decision_ids_;
  std::vector<DecisionMeta> meta_;
  std::vector<LegislationNode> legislation_;
  std::vector<std::size_t> decision_offsets_{0};
  std::vector<Neighbor> decision_adj_;
  std::vector<std::size_t> legislation_offsets_{0};
  std::vector<Neighbor> legislation_adj_;
  std::size_t missing_meta_ = 0;
};

// Single-writer accumulator for G_B.
class BipartiteBuilder {
 public:
  void add(const CitationEdge& e) {
    const auto d = intern_decision(e.decision_id);
    const auto key = textcite::legislation_key(e);
    auto [it, inserted] = legislation_index_.try_emplace(key, legislation_.size());
    if (inserted) {
      legislation_.push_back({key, e.type});
    } else if (e.type < legislation_[it->second].type) {
      legislation_[it->second].type = e.type;
    }
    edges_.push_back({d, static_cast<std::uint32_t>(it->second), e.count});
  }

  void set_meta(const std::string& decision_id, DecisionMeta meta) {
    const auto d = intern_decision(decision_id);
    meta_[d] = meta;
    has_meta_[d] = true;
  }

  BipartiteGraph build() const {
    BipartiteGraph g;

    std::vector<std::uint32_t> dec_order(decisions_.size());
    for (std::uint32_t i = 0; i < dec_order.size(); ++i) dec_order[i] = i;
    std::sort(dec_order.begin(), dec_order.end(),
              [&](auto a, auto b) { return decisions_[a] < decisions_[b]; });
    std::vector<std::uint32_t> dec_rank(decisions_.size());
    for (std::uint32_t r = 0; r < dec_order.size(); ++r) dec_rank[dec_order[r]] = r;

    std::vector<std::uint32_t> leg_order(legislation_.size());
    for (std::uint32_t i = 0; i < leg_order.size(); ++i) leg_order[i] = i;
    std::sort(leg_order.begin(), leg_order.end(),
              [&](auto a, auto b) { return legislation_[a].key < legislation_[b].key; });
    std::vector<std::uint32_t> leg_rank(legislation_.size());
    for (std::uint32_t r = 0; r < leg_order.size(); ++r) leg_rank[leg_order[r]] = r;

    for (auto i : dec_order) {
      g.decision_ids_.push_back(decisions_[i]);
      g.meta_.push_back(meta_[i]);
    }
    for (auto i : leg_order) g.legislation_.push_back(legislation_[i]);

    std::vector<RawEdge> edges;
    edges.reserve(edges_.size());
    for (const auto& e : edges_) edges.push_back({dec_rank[e.decision], leg_rank[e.legislation], e.weight});
    std::sort(edges.begin(), edges.end(), [](const RawEdge& a, const RawEdge& b) {
      return std::pair(a.decision, a.legislation) < std::pair(b.decision, b.legislation);
    });

    std::vector<bool> has_edges(decisions_.size(), false);
    g.decision_offsets_.assign(decisions_.size() + 1, 0);
    for (std::size_t i = 0; i < edges.size();) {
      std::size_t j = i;
      std::uint64_t w = 0;
      while (j < edges.size() && edges[j].decision == edges[i].decision &&
             edges[j].legislation == edges[i].legislation) {
        w += edges[j].weight;
        ++j;
      }
      if (w > 0) {
        g.decision_adj_.push_back(
            {edges[i].legislation, static_cast<std::uint32_t>(std::min<std::uint64_t>(w, UINT32_MAX))});
        ++g.decision_offsets_[edges[i].decision + 1];
        has_edges[edges[i].decision] = true;
      }
      i = j;
    }
    for (std::size_t d = 0; d < decisions_.size(); ++d) {
      g.decision_offsets_[d + 1] += g.decision_offsets_[d];
    }
    for (std::size_t i = 0; i < decisions_.size(); ++i) {
      if (!has_meta_[i] && has_edges[dec_rank[i]]) ++g.missing_meta_;
    }
    g.build_transpose();
    return g;
  }

 private:
  struct RawEdge {
    std::uint32_t decision;
    std::uint32_t legislation;
    std::uint32_t weight;
  };

  std::uint32_t intern_decision(const std::string& id) {
    auto [it, inserted] = decision_index_.try_emplace(id, static_cast<std::uint32_t>(decisions_.size()));
    if (inserted) {
      decisions_.push_back(id);
      meta_.push_back({});
      has_meta_.push_back(false);
    }
    return it->second;
  }

  std::unordered_map<std::string, std::uint32_t> decision_index_;
  std::vector<std::string> decisions_;
  std::vector<DecisionMeta> meta_;
  std::vector<bool> has_meta_;
  std::unordered_map<std::string, std::size_t> legislation_index_;
  std::vector<LegislationNode> legislation_;
  std::vector<RawEdge> edges_;
};

// Builds G_B from extracted edges. Every decision in `meta` becomes a node even
// if it cites nothing, so per-year decision counts stay exact.
inline BipartiteGraph build_bipartite(std::span<const CitationEdge> edges,
                                      const std::unordered_map<std::string, DecisionMeta>& meta) {
  BipartiteBuilder b;
  for (const auto& e : edges) b.add(e);
  for (const auto& [id, m] : meta) b.set_meta(id, m);
  return b.build();
}

// G_L: weighted, undirected, no self-loops, edges stored once with u < v.
class CoCitationGraph {
 public:
  struct Edge {
    std::uint32_t u;
    std::uint32_t v;
    std::uint64_t w;

    bool operator==(const Edge&) const = default;
  };

  struct Adjacent {
    std::uint32_t node;
    double weight;
  };

  CoCitationGraph() = default;

  // Canonicalizes and validates an explicit edge list. Duplicate pairs are
  // summed; self-loops and out-of-range endpoints are rejected. Keys must be
  // unique.
  static CoCitationGraph from_edges(std::vector<std::string> keys, std::vector<Edge> edges,
                                    std::uint64_t min_weight = 1) {
    CoCitationGraph g;
    g.min_weight_ = min_weight;
    {
      auto sorted = keys;
      std::sort(sorted.begin(), sorted.end());
      if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
        throw InputError("co-citation graph: duplicate node key");
      }
    }
    for (auto& e : edges) {
      if (e.u >= keys.size() || e.v >= keys.size()) throw InputError("co-citation graph: endpoint out of range");
      if (e.u == e.v) throw InputError("co-citation graph: self-loop");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::sort(edges.begin(), edges.end(),
              [](const Edge& a, const Edge& b) { return std::pair(a.u, a.v) < std::pair(b.u, b.v); });
    for (std::size_t i = 0; i < edges.size();) {
      Edge acc = edges[i];
      std::size_t j = i + 1;
      while (j < edges.size() && edges[j].u == acc.u && edges[j].v == acc.v) acc.w += edges[j++].w;
      if (acc.w >= min_weight && acc.w > 0) g.edges_.push_back(acc);
      i = j;
    }
    g.keys_ = std::move(keys);
    g.build_adjacency();
    return g;
  }

  std::size_t node_count() const { return keys_.size(); }
  std::size_t edge_count() const { return edges_.size(); }
  bool empty() const { return keys_.empty(); }
  std::uint64_t min_weight() const { return min_weight_; }

  const std::string& key(std::size_t i) const { return keys_.at(i); }
  const std::vector<std::string>& keys() const { return keys_; }
  std::span<const Edge> edges() const { return edges_; }

  std::optional<std::size_t> find(std::string_view key) const {
    if (index_.empty()) {
      for (std::size_t i = 0; i < keys_.size(); ++i) {
        if (keys_[i] == key) return i;
      }
      return std::nullopt;
    }
    auto it = index_.find(std::string(key));
    if (it == index_.end()) return std::nullopt;
    return it->second;
  }

  std::span<const Adjacent> neighbors(std::size_t i) const {
    return {adj_.data() + offsets_[i], adj_.data() + offsets_[i + 1]};
  }

  double weighted_degree(std::size_t i) const { return strength_[i]; }

  // Total edge weight m (each undirected edge once).
  double total_weight() const { return total_weight_; }

  std::uint64_t weight(std::size_t a, std::size_t b) const {
    if (a > b) std::swap(a, b);
    auto it = std::lower_bound(edges_.begin(), edges_.end(), std::pair(a, b),
                               [](const Edge& e, const std::pair<std::size_t, std::size_t>& k) {
                                 return std::pair<std::size_t, std::size_t>(e.u, e.v) < k;
                               });
    if (it != edges_.end() && it->u == a && it->v == b) return it->w;
    return 0;
  }

  // "u-key\tv-key\tweight" per line, sorted by (u, v).
  void write_edge_list(std::ostream& os) const {
    std::vector<Edge> sorted(edges_.begin(), edges_.end());
    std::sort(sorted.begin(), sorted.end(), [&](const Edge& a, const Edge& b) {
      const auto& au = keys_[a.u];
      const auto& bu = keys_[b.u];
      if (au != bu) return au < bu;
      return keys_[a.v] < keys_[b.v];
    });
    for (const auto& e : sorted) os << keys_[e.u] << '\t' << keys_[e.v] << '\t' << e.w << '\n';
  }

  static CoCitationGraph read_edge_list(std::istream& is, std::uint64_t min_weight = 1) {
    std::vector<std::string> keys;
    std::unordered_map<std::string, std::uint32_t> index;
    std::vector<Edge> edges;
    auto intern = [&](const std::string& k) {
      auto [it, inserted] = index.try_emplace(k, static_cast<std::uint32_t>(keys.size()));
      if (inserted) keys.push_back(k);
      return it->second;
    };
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(is, line)) {
      ++lineno;
      if (line.empty()) continue;
      const auto t1 = line.find('\t');
      const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
      if (t2 == std::string::npos) {
        throw InputError("edge list line " + std::to_string(lineno) + ": expected 3 columns");
      }
      std::uint64_t w = 0;
      const std::string_view ws(line.data() + t2 + 1, line.size() - t2 - 1);
      auto [p, ec] = std::from_chars(ws.data(), ws.data() + ws.size(), w);
      if (ec != std::errc{} || p != ws.data() + ws.size()) {
        throw InputError("edge list line " + std::to_string(lineno) + ": bad weight");
      }
      const auto u = intern(line.substr(0, t1));
      const auto v = intern(line.substr(t1 + 1, t2 - t1 - 1));
      edges.push_back({u, v, w});
    }
    // Re-index in key order so ordinals do not depend on line order.
    std::vector<std::uint32_t> order(keys.size());
    for (std::uint32_t i = 0; i < order.size(); ++i) order[i] = i;
    std::sort(order.begin(), order.end(), [&](auto a, auto b) { return keys[a] < keys[b]; });
    std::vector<std::uint32_t> rank(keys.size());
    std::vector<std::string> sorted_keys;
    for (std::uint32_t r = 0; r < order.size(); ++r) {
      rank[order[r]] = r;
      sorted_keys.push_back(keys[order[r]]);
    }
    for (auto& e : edges) {
      e.u = rank[e.u];
      e.v = rank[e.v];
    }
    return from_edges(std::move(sorted_keys), std::move(edges), min_weight);
  }

  bool operator==(const CoCitationGraph& o) const {
    return keys_ == o.keys_ && edges_ == o.edges_ && min_weight_ == o.min_weight_;
  }

 private:
  void build_adjacency() {
    const std::size_t n = keys_.size();
    offsets_.assign(n + 1, 0);
    for (const auto& e : edges_) {
      ++offsets_[e.u + 1];
      ++offsets_[e.v + 1];
    }
    for (std::size_t i = 0; i < n; ++i) offsets_[i + 1] += offsets_[i];
    adj_.resize(offsets_[n]);
    strength_.assign(n, 0.0);
    total_weight_ = 0.0;
    auto cursor = offsets_;
    for (const auto& e : edges_) {
      const auto w = static_cast<double>(e.w);
      adj_[cursor[e.u]++] = {e.v, w};
      adj_[cursor[e.v]++] = {e.u, w};
      strength_[e.u] += w;
      strength_[e.v] += w;
      total_weight_ += w;
    }
    index_.clear();
    if (n > 64) {
      index_.reserve(n);
      for (std::size_t i = 0; i < n; ++i) index_.emplace(keys_[i], i);
    }
  }

  std::vector<std::string> keys_;
  std::vector<Edge> edges_;
  std::uint64_t min_weight_ = 1;
  std::vector<std::size_t> offsets_{0};
  std::vector<Adjacent> adj_;
  std::vector<double> strength_;
  double total_weight_ = 0.0;
  std::unordered_map<std::string, std::size_t> index_;
};

struct ProjectionOptions {
  std::uint64_t min_weight = 10;
  // Case references, law-by-number and Supreme Court rulings are left out of
  // G_L unless this is set.
  bool include_all_types = false;
  // Decisions citing more distinct nodes than this are skipped.
  std::size_t max_decision_degree = 1000;
  std::optional<YearRange> years;
};

struct ProjectionDiagnostics {
  std::size_t skipped_decisions = 0;
  std::size_t decisions_used = 0;
};

inline bool projected_type(CitationType t, bool include_all) {
  return include_all || textcite::has_article(t);
}

// w(l1, l2) = number of distinct decisions citing both. Pairs below
// min_weight are dropped; nodes are the endpoints of surviving edges.
inline CoCitationGraph project_cocitation(const BipartiteGraph& g, const ProjectionOptions& opts,
                                          ProjectionDiagnostics* diag = nullptr) {
  if (opts.min_weight == 0) throw InputError("project_cocitation: min_weight must be positive");
  std::unordered_map<std::uint64_t, std::uint64_t> pair_counts;
  std::vector<std::uint32_t> nodes;
  ProjectionDiagnostics local;
  for (std::size_t d = 0; d < g.decision_count(); ++d) {
    if (opts.years && !opts.years->contains(g.meta(d).year)) continue;
    nodes.clear();
    for (const auto& nb : g.citations(d)) {
      if (projected_type(g.legislation(nb.node).type, opts.include_all_types)) nodes.push_back(nb.node);
    }
    if (nodes.size() > opts.max_decision_degree) {
      ++local.skipped_decisions;
      continue;
    }
    if (nodes.size() >= 2) ++local.decisions_used;
    for (std::size_t i = 0; i < nodes.size(); ++i) {
      for (std::size_t j = i + 1; j < nodes.size(); ++j) {
        ++pair_counts[(std::uint64_t(nodes[i]) << 32) | nodes[j]];
      }
    }
  }

  std::vector<std::pair<std::uint64_t, std::uint64_t>> kept;
  for (const auto& [k, w] : pair_counts) {
    if (w >= opts.min_weight) kept.emplace_back(k, w);
  }
  std::sort(kept.begin(), kept.end());

  std::vector<std::uint32_t> used;
  for (const auto& [k, w] : kept) {
    used.push_back(static_cast<std::uint32_t>(k >> 32));
    used.push_back(static_cast<std::uint32_t>(k & 0xffffffffu));
  }
  std::sort(used.begin(), used.end());
  used.erase(std::unique(used.begin(), used.end()), used.end());

  std::vector<std::string> keys;
  keys.reserve(used.size());
  for (auto l : used) keys.push_back(g.legislation(l).key);
  auto rank = [&](std::uint32_t l) {
    return static_cast<std::uint32_t>(std::lower_bound(used.begin(), used.end(), l) - used.begin());
  };
  std::vector<CoCitationGraph::Edge> edges;
  edges.reserve(kept.size());
  for (const auto& [k, w] : kept) {
    edges.push_back({rank(static_cast<std::uint32_t>(k >> 32)),
                     rank(static_cast<std::uint32_t>(k & 0xffffffffu)), w});
  }
  if (diag != nullptr) *diag = local;
  return CoCitationGraph::from_edges(std::move(keys), std::move(edges), opts.min_weight);
}

inline CoCitationGraph project_cocitation(const BipartiteGraph& g, std::uint64_t min_weight) {
  ProjectionOptions opts;
  opts.min_weight = min_weight;
  return project_cocitation(g, opts);
}

// Decisions sharing at least k distinct cited nodes with `decision_id`,
// computed on demand; G_D is never materialized. Sorted by shared count
// (descending), then id.
inline std::vector<std::pair<std::string, std::size_t>> decision_neighbors(
    const BipartiteGraph& g, std::string_view decision_id, std::size_t k) {
  if (k == 0) throw InputError("decision_neighbors: k must be positive");
  const auto d = g.find_decision(decision_id);
  if (!d) throw NotFoundError("unknown decision: " + std::string(decision_id));
  std::unordered_map<std::uint32_t, std::size_t> shared;
  for (const auto& nb : g.citations(*d)) {
    for (const auto& other : g.citing(nb.node)) {
      if (other.node != *d) ++shared[other.node];
    }
  }
  std::vector<std::pair<std::string, std::size_t>> out;
  for (const auto& [o, c] : shared) {
    if (c >= k) out.emplace_back(g.decision_id(o), c);
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

// Distinct-neighbor degrees, descending, key as tie-break.
inline std::vector<std::pair<std::string, std::uint64_t>> degree_sequence(const BipartiteGraph& g,
                                                                          Side side) {
  std::vector<std::pair<std::string, std::uint64_t>> out;
  if (side == Side::Decisions) {
    for (std::size_t d = 0; d < g.decision_count(); ++d) {
      if (g.decision_degree(d) > 0) out.emplace_back(g.decision_id(d), g.decision_degree(d));
    }
  } else {
    for (std::size_t l = 0; l < g.legislation_count(); ++l) {
      out.emplace_back(g.legislation(l).key, g.legislation_degree(l));
    }
  }
  std::sort(out.begin(), out.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  return out;
}

}  // namespace lexcite::graphstore
