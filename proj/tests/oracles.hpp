#pragma once

// Slow, obviously-correct reference implementations used as test oracles.
// Nothing here shares code with the library beyond the graph containers.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "lexcite/graphstore.hpp"
#include "lexcite/random.hpp"

namespace oracle {

using lexcite::Rng;
using lexcite::graphstore::BipartiteGraph;
using lexcite::graphstore::CoCitationGraph;
using lexcite::textcite::CitationEdge;
using lexcite::textcite::CitationType;

// Random G_B over article-bearing nodes: every decision cites each node with
// probability p.
inline std::vector<CitationEdge> random_bipartite_edges(Rng& rng, std::size_t decisions, std::size_t laws, double p) {
  std::vector<CitationEdge> out;
  for (std::size_t d = 0; d < decisions; ++d) {
    for (std::size_t l = 0; l < laws; ++l) {
      if (!rng.bernoulli(p)) continue;
      out.push_back({"d" + std::to_string(d), CitationType::CodexArticle, "ЦК", std::to_string(l + 1),
                     static_cast<std::uint32_t>(1 + rng.below(3))});
    }
  }
  return out;
}

// Pair weights by explicit set intersection of citing decisions.
inline std::map<std::pair<std::string, std::string>, std::uint64_t> cocitation(const std::vector<CitationEdge>& edges,
                                                                               std::uint64_t min_weight) {
  std::map<std::string, std::set<std::string>> citing;
  for (const auto& e : edges) citing[e.law_ref + "::" + e.article_ref.value_or("")].insert(e.decision_id);
  std::map<std::pair<std::string, std::string>, std::uint64_t> out;
  for (auto a = citing.begin(); a != citing.end(); ++a) {
    for (auto b = std::next(a); b != citing.end(); ++b) {
      std::vector<std::string> both;
      std::set_intersection(a->second.begin(), a->second.end(), b->second.begin(), b->second.end(),
                            std::back_inserter(both));
      if (both.size() >= min_weight) out[{a->first, b->first}] = both.size();
    }
  }
  return out;
}

inline CoCitationGraph random_graph(Rng& rng, std::size_t n, double p, std::uint64_t max_w = 5) {
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < n; ++i) keys.push_back("n" + std::to_string(1000 + i));
  std::vector<CoCitationGraph::Edge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (rng.bernoulli(p)) edges.push_back({i, j, 1 + rng.below(max_w)});
    }
  }
  return CoCitationGraph::from_edges(std::move(keys), std::move(edges));
}

inline Eigen::MatrixXd adjacency(const CoCitationGraph& g) {
  const auto n = static_cast<Eigen::Index>(g.node_count());
  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(n, n);
  for (const auto& e : g.edges()) {
    a(e.u, e.v) += static_cast<double>(e.w);
    a(e.v, e.u) += static_cast<double>(e.w);
  }
  return a;
}

// Q = 1/2m sum_ij (A_ij - k_i k_j / 2m) delta(c_i, c_j), summed over all pairs.
inline double modularity(const CoCitationGraph& g, const std::vector<std::uint32_t>& c) {
  const auto a = adjacency(g);
  const Eigen::VectorXd k = a.rowwise().sum();
  const double two_m = a.sum();
  if (two_m == 0.0) return 0.0;
  double q = 0.0;
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      if (c[static_cast<std::size_t>(i)] == c[static_cast<std::size_t>(j)]) q += a(i, j) - k(i) * k(j) / two_m;
    }
  }
  return q / two_m;
}

// PageRank as the solution of the dense linear system
// (I - d M) x = (1 - d)/n 1, with dangling columns spread uniformly.
inline std::vector<double> pagerank(const CoCitationGraph& g, double d) {
  const auto a = adjacency(g);
  const auto n = a.rows();
  Eigen::MatrixXd m(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double s = a.col(j).sum();
    if (s > 0.0) {
      m.col(j) = a.col(j) / s;
    } else {
      m.col(j).setConstant(1.0 / static_cast<double>(n));
    }
  }
  const Eigen::MatrixXd lhs = Eigen::MatrixXd::Identity(n, n) - d * m;
  const Eigen::VectorXd rhs = Eigen::VectorXd::Constant(n, (1.0 - d) / static_cast<double>(n));
  const Eigen::VectorXd x = lhs.partialPivLu().solve(rhs);
  return {x.data(), x.data() + n};
}

// PageRank by dense power iteration on the full Google matrix.
inline std::vector<double> pagerank_power(const CoCitationGraph& g, double d, int iterations = 100000) {
  const auto a = adjacency(g);
  const auto n = a.rows();
  Eigen::MatrixXd google(n, n);
  for (Eigen::Index j = 0; j < n; ++j) {
    const double s = a.col(j).sum();
    for (Eigen::Index i = 0; i < n; ++i) {
      const double m = s > 0.0 ? a(i, j) / s : 1.0 / static_cast<double>(n);
      google(i, j) = d * m + (1.0 - d) / static_cast<double>(n);
    }
  }
  Eigen::VectorXd x = Eigen::VectorXd::Constant(n, 1.0 / static_cast<double>(n));
  for (int it = 0; it < iterations; ++it) {
    const Eigen::VectorXd next = google * x;
    const double change = (next - x).lpNorm<1>();
    x = next;
    if (change < 1e-15) break;
  }
  x /= x.sum();
  return {x.data(), x.data() + n};
}

// Leading eigenvector of the adjacency of the given node subset, L2-normalized
// and sign-fixed non-negative; zero elsewhere.
inline std::vector<double> principal_eigenvector(const CoCitationGraph& g, const std::vector<bool>& keep) {
  std::vector<Eigen::Index> idx;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) idx.push_back(static_cast<Eigen::Index>(i));
  }
  const auto full = adjacency(g);
  Eigen::MatrixXd sub(idx.size(), idx.size());
  for (std::size_t i = 0; i < idx.size(); ++i) {
    for (std::size_t j = 0; j < idx.size(); ++j) sub(i, j) = full(idx[i], idx[j]);
  }
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(sub);
  Eigen::VectorXd v = es.eigenvectors().col(sub.rows() - 1);
  if (v.sum() < 0) v = -v;
  std::vector<double> out(keep.size(), 0.0);
  for (std::size_t i = 0; i < idx.size(); ++i) out[static_cast<std::size_t>(idx[i])] = v(static_cast<Eigen::Index>(i));
  return out;
}


struct Planted {
  CoCitationGraph graph;
  std::vector<std::uint32_t> blocks;
};

// Stochastic block model with equal blocks: edge probability p_in within a
// block and p_out across, unit weights.
inline Planted planted_partition(Rng& rng, std::size_t blocks, std::size_t size, double p_in, double p_out) {
  const std::size_t n = blocks * size;
  Planted out;
  std::vector<std::string> keys;
  for (std::size_t i = 0; i < n; ++i) {
    keys.push_back("v" + std::to_string(10000 + i));
    out.blocks.push_back(static_cast<std::uint32_t>(i / size));
  }
  std::vector<CoCitationGraph::Edge> edges;
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = i + 1; j < n; ++j) {
      if (rng.bernoulli(out.blocks[i] == out.blocks[j] ? p_in : p_out)) edges.push_back({i, j, 1});
    }
  }
  out.graph = CoCitationGraph::from_edges(std::move(keys), std::move(edges));
  return out;
}

// NMI from the contingency table in bits; the ratio is base independent.
inline double nmi(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  std::map<std::uint32_t, double> ca, cb;
  std::map<std::pair<std::uint32_t, std::uint32_t>, double> joint;
  const double n = static_cast<double>(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) {
    ca[a[i]] += 1;
    cb[b[i]] += 1;
    joint[{a[i], b[i]}] += 1;
  }
  double ha = 0, hb = 0, hab = 0;
  for (const auto& [k, c] : ca) ha -= c / n * std::log2(c / n);
  for (const auto& [k, c] : cb) hb -= c / n * std::log2(c / n);
  for (const auto& [k, c] : joint) hab -= c / n * std::log2(c / n);
  if (ha + hb == 0) return 0.0;
  return 2.0 * (ha + hb - hab) / (ha + hb);
}

// AUC as the fraction of (positive, negative) pairs ranked correctly, ties half.
inline double auc(const std::vector<double>& s, const std::vector<int>& y) {
  double good = 0.0, pairs = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (!y[i]) continue;
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (y[j]) continue;
      pairs += 1.0;
      if (s[i] > s[j]) good += 1.0;
      if (s[i] == s[j]) good += 0.5;
    }
  }
  return good / pairs;
}

// Hurwitz zeta by direct summation plus an Euler-Maclaurin tail at N = 2000.
inline double hurwitz(double s, double q) {
  constexpr int kN = 2000;
  double sum = 0.0;
  for (int k = kN - 1; k >= 0; --k) sum += std::pow(q + k, -s);
  const double a = q + kN;
  return sum + std::pow(a, 1.0 - s) / (s - 1.0) + 0.5 * std::pow(a, -s) + s / 12.0 * std::pow(a, -s - 1.0);
}

// Exact discrete power-law sampler: P(X >= x) = zeta(alpha, x) / zeta(alpha, x_min).
// Survival is tabulated near x_min and inverted by bisection beyond the table.
class DiscretePowerLaw {
 public:
  DiscretePowerLaw(double alpha, std::uint64_t x_min, std::size_t table = 20000) : alpha_(alpha), x_min_(x_min) {
    const double norm = hurwitz(alpha, static_cast<double>(x_min));
    survival_.push_back(1.0);
    for (std::size_t i = 0; i < table; ++i) {
      survival_.push_back(survival_.back() - std::pow(static_cast<double>(x_min + i), -alpha) / norm);
    }
    norm_ = norm;
  }

  double survival(std::uint64_t x) const {
    if (x <= x_min_) return 1.0;
    if (x - x_min_ < survival_.size()) return survival_[x - x_min_];
    return hurwitz(alpha_, static_cast<double>(x)) / norm_;
  }

  // Largest x with survival(x) >= u.
  std::uint64_t operator()(Rng& rng) const {
    const double u = rng.uniform_open0();
    if (survival_.back() < u) {
      // survival_ is decreasing; find first index with value < u.
      auto it = std::lower_bound(survival_.begin(), survival_.end(), u, [](double s, double v) { return s >= v; });
      return x_min_ + static_cast<std::uint64_t>(it - survival_.begin()) - 1;
    }
    std::uint64_t lo = x_min_ + survival_.size() - 1;
    std::uint64_t hi = lo + 1;
    while (survival(hi) >= u) {
      lo = hi;
      hi = x_min_ + 2 * (hi - x_min_);
    }
    while (hi - lo > 1) {
      const auto mid = lo + (hi - lo) / 2;
      if (survival(mid) >= u) {
        lo = mid;
      } else {
        hi = mid;
      }
    }
    return lo;
  }

 private:
  double alpha_;
  std::uint64_t x_min_;
  double norm_ = 1.0;
  std::vector<double> survival_;  // survival_[i] = P(X >= x_min + i)
};

}  // namespace oracle
