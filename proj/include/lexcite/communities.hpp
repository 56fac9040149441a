#pragma once

// Community structure of the co-citation graph: modularity, Louvain, NMI
// between partitions, per-period stability, and the class/relation export
// that turns a partition into a citation ontology.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <ostream>
#include <span>
#include <string>
#include <unordered_map>
#include <utility>
#include <vector>

#include "lexcite/errors.hpp"
#include "lexcite/csv.hpp"
#include "lexcite/graphstore.hpp"
#include "lexcite/random.hpp"

namespace lexcite::communities {

using graphstore::BipartiteGraph;
using graphstore::CoCitationGraph;
using graphstore::YearRange;

struct Partition {
  std::vector<std::uint32_t> assignment;  // node ordinal -> community id, dense from 0
  double q = 0.0;

  std::size_t size() const { return assignment.size(); }

  std::size_t community_count() const {
    std::uint32_t hi = 0;
    for (auto c : assignment) hi = std::max(hi, c + 1);
    return assignment.empty() ? 0 : hi;
  }

  // Relabels arbitrary labels to dense ids in order of first appearance.
  template <typename Label>
  static Partition from_labels(std::span<const Label> labels) {
    Partition p;
    std::map<Label, std::uint32_t> ids;
    p.assignment.reserve(labels.size());
    for (const auto& l : labels) {
      auto [it, inserted] = ids.try_emplace(l, static_cast<std::uint32_t>(ids.size()));
      p.assignment.push_back(it->second);
    }
    return p;
  }

  std::vector<std::vector<std::uint32_t>> blocks() const {
    std::vector<std::vector<std::uint32_t>> out(community_count());
    for (std::uint32_t i = 0; i < assignment.size(); ++i) out[assignment[i]].push_back(i);
    return out;
  }

  bool operator==(const Partition&) const = default;
};

// Q = 1/(2m) sum_ij [A_ij - gamma k_i k_j / 2m] delta(c_i, c_j), weighted.
// A graph without edges has Q = 0.
inline double modularity(const CoCitationGraph& g, const Partition& p, double resolution = 1.0) {
  if (p.assignment.size() != g.node_count()) {
    throw InputError("modularity: partition covers " + std::to_string(p.assignment.size()) +
                     " nodes, graph has " + std::to_string(g.node_count()));
  }
  const double two_m = 2.0 * g.total_weight();
  if (two_m == 0.0) return 0.0;
  const std::size_t k = p.community_count();
  std::vector<double> internal(k, 0.0), total(k, 0.0);
  for (const auto& e : g.edges()) {
    if (p.assignment[e.u] == p.assignment[e.v]) internal[p.assignment[e.u]] += 2.0 * static_cast<double>(e.w);
  }
  for (std::size_t i = 0; i < g.node_count(); ++i) total[p.assignment[i]] += g.weighted_degree(i);
  double in_sum = 0.0, tot_sum = 0.0;
  for (std::size_t c = 0; c < k; ++c) {
    in_sum += internal[c] / two_m;
    const double f = total[c] / two_m;
    tot_sum += f * f;
  }
  return in_sum - resolution * tot_sum;
}

struct LouvainOptions {
  double resolution = 1.0;
  int max_levels = 64;
  int max_passes = 256;
  double min_gain = 1e-12;
};

namespace detail {

struct LevelGraph {
  std::vector<std::vector<std::pair<std::uint32_t, double>>> adj;  // no self entries
  std::vector<double> loop;                                       // A_ii
  std::vector<double> strength;                                   // k_i
  double two_m = 0.0;
};

inline LevelGraph from_cocitation(const CoCitationGraph& g) {
  LevelGraph lg;
  const std::size_t n = g.node_count();
  lg.adj.resize(n);
  lg.loop.assign(n, 0.0);
  lg.strength.assign(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& nb : g.neighbors(i)) lg.adj[i].emplace_back(nb.node, nb.weight);
    lg.strength[i] = g.weighted_degree(i);
    lg.two_m += lg.strength[i];
  }
  return lg;
}

// One round of local moving. Returns true if any node changed community.
inline bool local_moving(const LevelGraph& lg, std::vector<std::uint32_t>& comm, Rng& rng,
                         const LouvainOptions& opts) {
  const std::size_t n = lg.adj.size();
  comm.resize(n);
  std::vector<double> tot(n);
  for (std::uint32_t i = 0; i < n; ++i) {
    comm[i] = i;
    tot[i] = lg.strength[i];
  }
  std::vector<std::uint32_t> order(n);
  for (std::uint32_t i = 0; i < n; ++i) order[i] = i;
  rng.shuffle(std::span<std::uint32_t>(order));

  std::vector<double> link(n, -1.0);
  std::vector<std::uint32_t> touched;
  bool any_move = false;
  for (int pass = 0; pass < opts.max_passes; ++pass) {
    bool moved = false;
    for (const auto i : order) {
      const auto old = comm[i];
      const double ki = lg.strength[i];
      touched.clear();
      link[old] = 0.0;
      touched.push_back(old);
      for (const auto& [j, w] : lg.adj[i]) {
        const auto c = comm[j];
        if (link[c] < 0.0) {
          link[c] = 0.0;
          touched.push_back(c);
        }
        link[c] += w;
      }
      tot[old] -= ki;
      const double scale = opts.resolution * ki / lg.two_m;
      auto best = old;
      double best_gain = link[old] - scale * tot[old];
      for (const auto c : touched) {
        const double gain = link[c] - scale * tot[c];
        if (gain > best_gain + opts.min_gain) {
          best_gain = gain;
          best = c;
        }
      }
      tot[best] += ki;
      comm[i] = best;
      if (best != old) moved = true;
      for (const auto c : touched) link[c] = -1.0;
    }
    if (!moved) break;
    any_move = true;
  }
  return any_move;
}

inline std::uint32_t renumber(std::vector<std::uint32_t>& comm) {
  std::vector<std::uint32_t> id(comm.size(), std::numeric_limits<std::uint32_t>::max());
  std::uint32_t next = 0;
  for (auto& c : comm) {
    if (id[c] == std::numeric_limits<std::uint32_t>::max()) id[c] = next++;
    c = id[c];
  }
  return next;
}

inline LevelGraph aggregate(const LevelGraph& lg, const std::vector<std::uint32_t>& comm, std::uint32_t k) {
  LevelGraph out;
  out.adj.resize(k);
  out.loop.assign(k, 0.0);
  out.strength.assign(k, 0.0);
  out.two_m = lg.two_m;
  std::vector<std::map<std::uint32_t, double>> acc(k);
  for (std::size_t i = 0; i < lg.adj.size(); ++i) {
    const auto ci = comm[i];
    out.loop[ci] += lg.loop[i];
    out.strength[ci] += lg.strength[i];
    for (const auto& [j, w] : lg.adj[i]) {
      const auto cj = comm[j];
      if (ci == cj) {
        out.loop[ci] += w;
      } else {
        acc[ci][cj] += w;
      }
    }
  }
  for (std::uint32_t c = 0; c < k; ++c) {
    for (const auto& [d, w] : acc[c]) out.adj[c].emplace_back(d, w);
  }
  return out;
}

}  // namespace detail

// Louvain: local moving plus aggregation until a level makes no move. Node
// visit order is shuffled from `seed`, so equal seeds give equal partitions.
// The returned q is modularity() of the returned assignment.
inline Partition louvain(const CoCitationGraph& g, std::uint64_t seed, const LouvainOptions& opts = {}) {
  if (g.node_count() == 0) throw InputError("louvain: empty graph");
  std::vector<std::uint32_t> membership(g.node_count());
  for (std::uint32_t i = 0; i < membership.size(); ++i) membership[i] = i;

  Rng rng(seed);
  if (g.total_weight() > 0.0) {
    auto level = detail::from_cocitation(g);
    for (int lvl = 0; lvl < opts.max_levels; ++lvl) {
      std::vector<std::uint32_t> comm;
      const bool moved = detail::local_moving(level, comm, rng, opts);
      const auto k = detail::renumber(comm);
      for (auto& m : membership) m = comm[m];
      if (!moved || k == level.adj.size()) break;
      level = detail::aggregate(level, comm, k);
    }
  }

  Partition p = Partition::from_labels<std::uint32_t>(membership);
  p.q = modularity(g, p, opts.resolution);
  if (p.q < 0.0) {
    // All-in-one scores exactly 0; never return something worse.
    p.assignment.assign(g.node_count(), 0);
    p.q = modularity(g, p, opts.resolution);
  }
  return p;
}

// NMI = 2 I(A;B) / (H(A) + H(B)), natural log. 0 when both are trivial.
inline double nmi(const Partition& a, const Partition& b) {
  if (a.size() != b.size()) throw InputError("nmi: partitions differ in size");
  if (a.size() == 0) throw InputError("nmi: empty partitions");
  const double n = static_cast<double>(a.size());
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
  std::vector<double> ca(a.community_count(), 0.0), cb(b.community_count(), 0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    joint[{a.assignment[i], b.assignment[i]}] += 1.0;
    ca[a.assignment[i]] += 1.0;
    cb[b.assignment[i]] += 1.0;
  }
  auto entropy = [&](const std::vector<double>& counts) {
    double h = 0.0;
    for (double c : counts) {
      if (c > 0.0) h += (c / n) * std::log(n / c);
    }
    return h;
  };
  const double ha = entropy(ca), hb = entropy(cb);
  if (ha + hb == 0.0) return 0.0;
  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    mi += (c / n) * std::log((c * n) / (ca[key.first] * cb[key.second]));
  }
  return std::clamp(2.0 * mi / (ha + hb), 0.0, 1.0);
}

struct KeyedNmi {
  double value = 0.0;
  std::size_t common = 0;
  double coverage = 0.0;  // |common| / |union of node keys|
};

// NMI restricted to nodes present in both keyed partitions.
inline KeyedNmi nmi_by_key(std::span<const std::string> keys_a, const Partition& a,
                           std::span<const std::string> keys_b, const Partition& b) {
  if (keys_a.size() != a.size() || keys_b.size() != b.size()) {
    throw InputError("nmi_by_key: key list does not match partition size");
  }
  std::unordered_map<std::string_view, std::uint32_t> b_index;
  for (std::size_t i = 0; i < keys_b.size(); ++i) b_index.emplace(keys_b[i], b.assignment[i]);
  std::vector<std::uint32_t> la, lb;
  for (std::size_t i = 0; i < keys_a.size(); ++i) {
    auto it = b_index.find(keys_a[i]);
    if (it == b_index.end()) continue;
    la.push_back(a.assignment[i]);
    lb.push_back(it->second);
  }
  if (la.empty()) throw InputError("nmi_by_key: partitions share no nodes");
  KeyedNmi r;
  r.common = la.size();
  r.coverage = static_cast<double>(la.size()) /
               static_cast<double>(keys_a.size() + keys_b.size() - la.size());
  r.value = nmi(Partition::from_labels<std::uint32_t>(la), Partition::from_labels<std::uint32_t>(lb));
  return r;
}

// Consecutive fixed-width periods covering [first, last].
inline std::vector<YearRange> make_periods(int first, int last, int width) {
  if (width <= 0 || last < first) throw InputError("make_periods: bad range or width");
  std::vector<YearRange> out;
  for (int y = first; y <= last; y += width) out.push_back({y, std::min(last, y + width - 1)});
  return out;
}

struct PeriodCommunities {
  YearRange period;
  Partition partition;
  std::vector<std::string> keys;
};

struct StabilityLink {
  YearRange from;
  YearRange to;
  KeyedNmi nmi;
  bool stable = false;
};

struct TemporalCommunities {
  std::vector<PeriodCommunities> periods;
  std::vector<StabilityLink> links;
};

inline TemporalCommunities temporal_communities(
    const std::vector<std::pair<YearRange, CoCitationGraph>>& graphs, std::uint64_t seed,
    double stable_threshold = 0.8, const LouvainOptions& opts = {}) {
  if (graphs.size() < 2) throw InputError("temporal_communities: need at least 2 periods");
  TemporalCommunities out;
  for (const auto& [period, g] : graphs) {
    if (g.node_count() == 0) {
      throw InputError("temporal_communities: period " + std::to_string(period.first) + "-" +
                       std::to_string(period.last) + " has an empty graph");
    }
    out.periods.push_back({period, louvain(g, seed, opts), g.keys()});
  }
  for (std::size_t i = 0; i + 1 < out.periods.size(); ++i) {
    const auto& a = out.periods[i];
    const auto& b = out.periods[i + 1];
    StabilityLink link{a.period, b.period, nmi_by_key(a.keys, a.partition, b.keys, b.partition), false};
    link.stable = link.nmi.value >= stable_threshold;
    out.links.push_back(link);
  }
  return out;
}

// --- ontology ---------------------------------------------------------------

struct OntologyMember {
  std::string key;
  double cocitation_weight = 0.0;      // weighted degree in G_L
  std::uint64_t citation_frequency = 0;  // distinct citing decisions in G_B
  int first_year = graphstore::kUnknownYear;
  int last_year = graphstore::kUnknownYear;
};

struct OntologyClass {
  std::uint32_t id = 0;
  std::string label;
  std::string dominant_codex;  // empty when no member is a codex article
  std::vector<OntologyMember> members;
};

struct InterClassRelation {
  std::uint32_t a = 0;  // a < b
  std::uint32_t b = 0;
  std::uint64_t weight = 0;
};

struct OntologyExport {
  std::vector<OntologyClass> classes;
  std::vector<InterClassRelation> relations;

  std::uint64_t relation_weight(std::uint32_t a, std::uint32_t b) const {
    if (a > b) std::swap(a, b);
    for (const auto& r : relations) {
      if (r.a == a && r.b == b) return r.weight;
    }
    return 0;
  }

  void write(std::ostream& os) const {
    os << "# lexcite ontology v1\n";
    for (const auto& c : classes) {
      os << "CLASS\t" << c.id << "\tmembers=" << c.members.size()
         << "\tdominant_codex=" << (c.dominant_codex.empty() ? "-" : c.dominant_codex)
         << "\tlabel=" << c.label << '\n';
      for (const auto& m : c.members) {
        os << "MEMBER\t" << m.key << '\t' << m.cocitation_weight << '\t' << m.citation_frequency << '\t'
           << m.first_year << '\t' << m.last_year << '\n';
      }
    }
    os << "# relations\n";
    for (const auto& r : relations) os << "RELATION\t" << r.a << '\t' << r.b << '\t' << r.weight << '\n';
  }
};

inline OntologyExport export_ontology(const CoCitationGraph& g, const Partition& p, const BipartiteGraph& gb) {
  if (p.assignment.size() != g.node_count()) throw InputError("export_ontology: partition/graph mismatch");
  const auto& codices = textcite::CodexTable::instance();
  OntologyExport out;
  out.classes.resize(p.community_count());
  std::vector<std::map<std::string, std::size_t>> codex_counts(out.classes.size());
  for (std::uint32_t c = 0; c < out.classes.size(); ++c) out.classes[c].id = c;

  for (std::size_t i = 0; i < g.node_count(); ++i) {
    OntologyMember m;
    m.key = g.key(i);
    m.cocitation_weight = g.weighted_degree(i);
    if (auto l = gb.find_legislation(m.key)) {
      m.citation_frequency = gb.legislation_degree(*l);
      for (const auto& nb : gb.citing(*l)) {
        const int y = gb.meta(nb.node).year;
        if (y == graphstore::kUnknownYear) continue;
        if (m.first_year == graphstore::kUnknownYear || y < m.first_year) m.first_year = y;
        if (m.last_year == graphstore::kUnknownYear || y > m.last_year) m.last_year = y;
      }
    }
    const auto c = p.assignment[i];
    const auto law = textcite::split_legislation_key(m.key).first;
    if (codices.is_canonical(law)) ++codex_counts[c][std::string(law)];
    out.classes[c].members.push_back(std::move(m));
  }
  for (std::size_t c = 0; c < out.classes.size(); ++c) {
    std::size_t best = 0;
    for (const auto& [codex, count] : codex_counts[c]) {
      if (count > best) {
        best = count;
        out.classes[c].dominant_codex = codex;
      }
    }
  }

  std::map<std::pair<std::uint32_t, std::uint32_t>, std::uint64_t> cross;
  for (const auto& e : g.edges()) {
    auto a = p.assignment[e.u], b = p.assignment[e.v];
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    cross[{a, b}] += e.w;
  }
  for (const auto& [k, w] : cross) out.relations.push_back({k.first, k.second, w});
  return out;
}

inline void write_partition_csv(std::ostream& os, const CoCitationGraph& g, const Partition& p) {
  os << "key,community\n";
  for (std::size_t i = 0; i < g.node_count(); ++i) os << csv_field(g.key(i)) << ',' << p.assignment[i] << '\n';
}

}  // namespace lexcite::communities
