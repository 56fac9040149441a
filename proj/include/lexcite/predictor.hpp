#pragma once

// Forward-looking prominence: features from a training window, a small
// L2-regularized logistic regression, and ranking metrics against the
// test-window top-N.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>
#include <span>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "lexcite/csv.hpp"
#include "lexcite/errors.hpp"
#include "lexcite/graphstore.hpp"
#include "lexcite/netmetrics.hpp"
#include "lexcite/random.hpp"

namespace lexcite::predictor {

using graphstore::BipartiteGraph;
using graphstore::YearRange;

inline constexpr std::array<std::string_view, 4> kFeatureNames{"log_total", "active_years", "growth_ratio",
                                                               "cv"};

struct ArticleFeatures {
  double log_total = 0.0;
  double active_years = 0.0;
  double growth_ratio = 1.0;
  double cv = 0.0;

  std::vector<double> values() const { return {log_total, active_years, growth_ratio, cv}; }
};

// `yearly` holds one count per training year, in order.
inline ArticleFeatures features_from_counts(std::span<const double> yearly) {
  ArticleFeatures f;
  const std::size_t n = yearly.size();
  double total = 0.0;
  for (double c : yearly) {
    total += c;
    if (c > 0.0) f.active_years += 1.0;
  }
  f.log_total = std::log1p(total);

  const std::size_t third = n / 3;
  double first = 0.0, last = 0.0;
  for (std::size_t i = 0; i < third; ++i) {
    first += yearly[i];
    last += yearly[n - third + i];
  }
  f.growth_ratio = (last + 1.0) / (first + 1.0);

  if (n > 0 && total > 0.0) {
    const double mean = total / static_cast<double>(n);
    double ss = 0.0;
    for (double c : yearly) ss += (c - mean) * (c - mean);
    f.cv = std::sqrt(ss / static_cast<double>(n)) / mean;
  }
  return f;
}

// Distinct citing decisions per year of `window` for legislation node l.
inline std::vector<double> yearly_counts(const BipartiteGraph& g, std::size_t l, const YearRange& window) {
  std::vector<double> out(static_cast<std::size_t>(std::max(window.length(), 0)), 0.0);
  for (const auto& nb : g.citing(l)) {
    const int y = g.meta(nb.node).year;
    if (window.contains(y)) out[static_cast<std::size_t>(y - window.first)] += 1.0;
  }
  return out;
}

inline double window_total(const BipartiteGraph& g, std::size_t l, const YearRange& window) {
  double t = 0.0;
  for (const auto& nb : g.citing(l)) {
    if (window.contains(g.meta(nb.node).year)) t += 1.0;
  }
  return t;
}

// Unknown keys are treated as never cited.
inline ArticleFeatures compute_features(const BipartiteGraph& g, std::string_view key, const YearRange& train) {
  const auto l = g.find_legislation(key);
  if (!l) {
    const std::vector<double> zeros(static_cast<std::size_t>(std::max(train.length(), 0)), 0.0);
    return features_from_counts(zeros);
  }
  const auto counts = yearly_counts(g, *l, train);
  return features_from_counts(counts);
}

struct LogisticOptions {
  double l2 = 1e-4;
  double learning_rate = 0.1;
  int epochs = 500;
};

struct LogisticModel {
  std::vector<std::string> feature_names;
  std::vector<double> mean;
  std::vector<double> scale;
  std::vector<double> weights;  // on standardized features
  double bias = 0.0;
  std::vector<double> loss_history;

  double decision(std::span<const double> x) const {
    if (x.size() != weights.size()) throw InputError("logistic model: feature length mismatch");
    double z = bias;
    for (std::size_t j = 0; j < x.size(); ++j) z += weights[j] * (x[j] - mean[j]) / scale[j];
    return z;
  }

  double probability(std::span<const double> x) const { return 1.0 / (1.0 + std::exp(-decision(x))); }

  void save(std::ostream& os) const {
    std::ostringstream ss;
    ss.precision(17);
    ss << "features=";
    for (std::size_t j = 0; j < feature_names.size(); ++j) ss << (j ? "," : "") << feature_names[j];
    ss << "\nbias=" << bias << '\n';
    for (std::size_t j = 0; j < weights.size(); ++j) {
      ss << "weight." << j << '=' << weights[j] << '\n';
      ss << "mean." << j << '=' << mean[j] << '\n';
      ss << "scale." << j << '=' << scale[j] << '\n';
    }
    ss << "epochs=" << loss_history.size() << '\n';
    if (!loss_history.empty()) ss << "final_loss=" << loss_history.back() << '\n';
    os << ss.str();
  }

  static LogisticModel load(std::istream& is) {
    std::map<std::string, std::string> kv;
    std::string line;
    while (std::getline(is, line)) {
      const auto eq = line.find('=');
      if (eq == std::string::npos) continue;
      kv[line.substr(0, eq)] = line.substr(eq + 1);
    }
    LogisticModel m;
    if (!kv.contains("features") || !kv.contains("bias")) throw InputError("logistic model: missing fields");
    std::stringstream names(kv["features"]);
    for (std::string name; std::getline(names, name, ',');) m.feature_names.push_back(name);
    auto num = [&](const std::string& k) {
      const auto it = kv.find(k);
      if (it == kv.end()) throw InputError("logistic model: missing " + k);
      return std::stod(it->second);
    };
    m.bias = num("bias");
    for (std::size_t j = 0; j < m.feature_names.size(); ++j) {
      m.weights.push_back(num("weight." + std::to_string(j)));
      m.mean.push_back(num("mean." + std::to_string(j)));
      m.scale.push_back(num("scale." + std::to_string(j)));
    }
    return m;
  }
};

// Full-batch gradient descent on mean log-loss + (l2/2)|w|^2 over z-scored
// features, starting from zero. loss_history[0] is the loss before the first
// step and the last entry the loss after the final step.
inline LogisticModel train_logistic(const std::vector<std::vector<double>>& x, std::span<const int> y,
                                    const LogisticOptions& opts = {},
                                    std::vector<std::string> feature_names = {}) {
  if (x.size() != y.size()) throw InputError("train_logistic: feature/label length mismatch");
  if (x.empty()) throw InsufficientDataError("train_logistic: no samples");
  const std::size_t n = x.size(), p = x.front().size();
  std::size_t positives = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i].size() != p) throw InputError("train_logistic: ragged feature matrix");
    if (y[i] != 0 && y[i] != 1) throw InputError("train_logistic: labels must be 0/1");
    positives += static_cast<std::size_t>(y[i]);
  }
  if (positives == 0 || positives == n) throw DegenerateInputError("train_logistic: labels are single-class");

  LogisticModel m;
  m.feature_names = std::move(feature_names);
  if (m.feature_names.size() != p) {
    m.feature_names.clear();
    for (std::size_t j = 0; j < p; ++j) m.feature_names.push_back("f" + std::to_string(j));
  }
  m.mean.assign(p, 0.0);
  m.scale.assign(p, 1.0);
  for (std::size_t j = 0; j < p; ++j) {
    double s = 0.0;
    for (const auto& row : x) s += row[j];
    m.mean[j] = s / static_cast<double>(n);
    double ss = 0.0;
    for (const auto& row : x) ss += (row[j] - m.mean[j]) * (row[j] - m.mean[j]);
    const double sd = std::sqrt(ss / static_cast<double>(n));
    m.scale[j] = sd > 0.0 ? sd : 1.0;
  }
  std::vector<std::vector<double>> z(n, std::vector<double>(p));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < p; ++j) z[i][j] = (x[i][j] - m.mean[j]) / m.scale[j];
  }

  m.weights.assign(p, 0.0);
  std::vector<double> grad(p);
  const double inv_n = 1.0 / static_cast<double>(n);
  auto loss_and_grad = [&](bool want_grad, double* grad_b) {
    double loss = 0.0;
    std::fill(grad.begin(), grad.end(), 0.0);
    double gb = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      double s = m.bias;
      for (std::size_t j = 0; j < p; ++j) s += m.weights[j] * z[i][j];
      // log(1 + e^s) - y s, evaluated stably
      loss += (s > 0 ? s + std::log1p(std::exp(-s)) : std::log1p(std::exp(s))) - y[i] * s;
      if (want_grad) {
        const double r = 1.0 / (1.0 + std::exp(-s)) - y[i];
        for (std::size_t j = 0; j < p; ++j) grad[j] += r * z[i][j];
        gb += r;
      }
    }
    double reg = 0.0;
    for (std::size_t j = 0; j < p; ++j) {
      reg += m.weights[j] * m.weights[j];
      grad[j] = grad[j] * inv_n + opts.l2 * m.weights[j];
    }
    if (grad_b) *grad_b = gb * inv_n;
    return loss * inv_n + 0.5 * opts.l2 * reg;
  };

  for (int epoch = 0; epoch < opts.epochs; ++epoch) {
    double gb = 0.0;
    m.loss_history.push_back(loss_and_grad(true, &gb));
    for (std::size_t j = 0; j < p; ++j) m.weights[j] -= opts.learning_rate * grad[j];
    m.bias -= opts.learning_rate * gb;
  }
  m.loss_history.push_back(loss_and_grad(false, nullptr));
  return m;
}

// Rank-sum AUC; tied scores get average ranks.
inline double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw InputError("auc: length mismatch");
  const auto ranks = netmetrics::average_ranks(scores);
  double pos = 0.0, rank_sum = 0.0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i]) {
      pos += 1.0;
      rank_sum += ranks[i];
    }
  }
  const double neg = static_cast<double>(labels.size()) - pos;
  if (pos == 0.0) throw InputError("auc: no positives");
  if (neg == 0.0) throw InputError("auc: no negatives");
  return (rank_sum - pos * (pos + 1.0) / 2.0) / (pos * neg);
}

// Indices ordered by score descending, key ascending on ties.
inline std::vector<std::size_t> rank_order(std::span<const double> scores, std::span<const std::string> keys) {
  std::vector<std::size_t> idx(scores.size());
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    if (scores[a] != scores[b]) return scores[a] > scores[b];
    return keys[a] < keys[b];
  });
  return idx;
}

inline double precision_at_k(std::span<const double> scores, std::span<const int> labels,
                             std::span<const std::string> keys, std::size_t k) {
  if (scores.size() != labels.size() || scores.size() != keys.size()) {
    throw InputError("precision_at_k: length mismatch");
  }
  if (k == 0) throw InputError("precision_at_k: k must be positive");
  const auto order = rank_order(scores, keys);
  const std::size_t top = std::min(k, order.size());
  double hits = 0.0;
  for (std::size_t i = 0; i < top; ++i) hits += labels[order[i]];
  return hits / static_cast<double>(k);
}

struct KeyedCount {
  std::string key;
  double count = 0.0;
};

// Top-K by count descending, key ascending.
inline std::vector<KeyedCount> top_by_count(std::vector<KeyedCount> items, std::size_t k) {
  std::sort(items.begin(), items.end(), [](const KeyedCount& a, const KeyedCount& b) {
    if (a.count != b.count) return a.count > b.count;
    return a.key < b.key;
  });
  if (items.size() > k) items.resize(k);
  return items;
}

// P@K of ranking by training citations against the test top set.
inline std::map<std::size_t, double> naive_baseline(const std::vector<KeyedCount>& train_counts,
                                                    const std::unordered_set<std::string>& test_top,
                                                    std::span<const std::size_t> ks) {
  std::map<std::size_t, double> out;
  std::size_t kmax = 0;
  for (auto k : ks) kmax = std::max(kmax, k);
  const auto ranked = top_by_count(train_counts, kmax);
  for (auto k : ks) {
    if (k == 0) throw InputError("naive_baseline: k must be positive");
    double hits = 0.0;
    for (std::size_t i = 0; i < std::min(k, ranked.size()); ++i) hits += test_top.contains(ranked[i].key);
    out[k] = hits / static_cast<double>(k);
  }
  return out;
}

// Retention of the training top-K among the test top-K.
inline double top_k_retention(const std::vector<KeyedCount>& train_counts,
                              const std::vector<KeyedCount>& test_counts, std::size_t k) {
  if (k == 0) throw InputError("top_k_retention: k must be positive");
  const auto a = top_by_count(train_counts, k);
  const auto b = top_by_count(test_counts, k);
  std::unordered_set<std::string> bs;
  for (const auto& e : b) bs.insert(e.key);
  double kept = 0.0;
  for (const auto& e : a) kept += bs.contains(e.key);
  return kept / static_cast<double>(k);
}

struct SurpriseRiser {
  std::string key;
  double train_citations = 0.0;
  double test_citations = 0.0;
};

// Members of `test_top` with strictly fewer than `max_train` training citations.
inline std::vector<SurpriseRiser> surprise_risers(const std::vector<KeyedCount>& test_top,
                                                  const std::unordered_map<std::string, double>& train_counts,
                                                  double max_train) {
  std::vector<SurpriseRiser> out;
  for (const auto& e : test_top) {
    const auto it = train_counts.find(e.key);
    const double train = it == train_counts.end() ? 0.0 : it->second;
    if (train < max_train) out.push_back({e.key, train, e.count});
  }
  return out;
}

struct EvaluationReport {
  double auc = 0.0;
  std::map<std::size_t, double> precision_at;
  std::map<std::size_t, double> baseline_precision_at;
  std::vector<std::pair<std::string, double>> coefficients;
  std::vector<SurpriseRiser> surprise_risers;
  double top_retention = 0.0;
};

inline EvaluationReport evaluate(std::span<const double> scores, std::span<const int> labels,
                                 std::span<const std::string> keys, std::span<const std::size_t> ks) {
  EvaluationReport r;
  r.auc = auc(scores, labels);
  for (auto k : ks) r.precision_at[k] = precision_at_k(scores, labels, keys, k);
  return r;
}

struct PredictionConfig {
  YearRange train{2007, 2019};
  YearRange test{2020, 2026};
  std::size_t top_n = 1000;
  double negative_ratio = 10.0;  // zero-train pool cap, as a multiple of positives
  std::vector<std::size_t> ks{100, 500, 1000};
  double max_train_riser = 100.0;
  std::uint64_t seed = 42;
  LogisticOptions logistic;
};

struct PredictionResult {
  EvaluationReport report;
  LogisticModel model;
  std::size_t population = 0;
  std::size_t positives = 0;
  std::size_t zero_train_sampled = 0;
  std::vector<std::string> keys;
  std::vector<double> scores;
  std::vector<int> labels;
};

inline PredictionResult run_prediction(const BipartiteGraph& g, const PredictionConfig& cfg) {
  if (cfg.train.last >= cfg.test.first) throw InputError("prediction: train window must precede test window");
  std::vector<KeyedCount> train_counts, test_counts;
  std::unordered_map<std::string, double> train_map;
  std::vector<std::size_t> cited_in_train, zero_train;
  for (std::size_t l = 0; l < g.legislation_count(); ++l) {
    if (!textcite::has_article(g.legislation(l).type)) continue;
    const double tr = window_total(g, l, cfg.train);
    const double te = window_total(g, l, cfg.test);
    const auto& key = g.legislation(l).key;
    if (tr > 0.0) {
      train_counts.push_back({key, tr});
      train_map[key] = tr;
      cited_in_train.push_back(l);
    } else if (te > 0.0) {
      zero_train.push_back(l);
    }
    if (te > 0.0) test_counts.push_back({key, te});
  }
  const auto top = top_by_count(test_counts, cfg.top_n);
  std::unordered_set<std::string> top_set;
  for (const auto& e : top) top_set.insert(e.key);
  if (top_set.empty()) throw InsufficientDataError("prediction: no citations in test window");

  // The zero-train pool is sampled blind to labels, capped relative to the
  // positive count.
  Rng rng(cfg.seed);
  const auto cap = static_cast<std::size_t>(cfg.negative_ratio * static_cast<double>(top_set.size()));
  std::vector<std::size_t> pool = zero_train;
  rng.shuffle(std::span<std::size_t>(pool));
  if (pool.size() > cap) pool.resize(cap);
  std::sort(pool.begin(), pool.end());

  PredictionResult res;
  std::vector<std::size_t> population = cited_in_train;
  population.insert(population.end(), pool.begin(), pool.end());
  res.zero_train_sampled = pool.size();
  std::vector<std::vector<double>> x;
  for (auto l : population) {
    const auto& key = g.legislation(l).key;
    res.keys.push_back(key);
    res.labels.push_back(top_set.contains(key) ? 1 : 0);
    x.push_back(features_from_counts(yearly_counts(g, l, cfg.train)).values());
  }
  res.population = population.size();
  res.positives = static_cast<std::size_t>(std::count(res.labels.begin(), res.labels.end(), 1));
  if (res.positives == 0) throw InputError("prediction: population contains no positives");

  res.model = train_logistic(x, res.labels, cfg.logistic,
                             std::vector<std::string>(kFeatureNames.begin(), kFeatureNames.end()));
  for (const auto& row : x) res.scores.push_back(res.model.decision(row));
  res.report = evaluate(res.scores, res.labels, res.keys, cfg.ks);
  res.report.baseline_precision_at = naive_baseline(train_counts, top_set, cfg.ks);
  for (std::size_t j = 0; j < res.model.weights.size(); ++j) {
    res.report.coefficients.emplace_back(res.model.feature_names[j], res.model.weights[j]);
  }
  res.report.surprise_risers = surprise_risers(top, train_map, cfg.max_train_riser);
  res.report.top_retention = top_k_retention(train_counts, test_counts, cfg.top_n);
  return res;
}

inline void write_evaluation(std::ostream& os, const EvaluationReport& r) {
  os << "auc=" << r.auc << '\n';
  for (const auto& [k, v] : r.precision_at) os << "precision_at_" << k << '=' << v << '\n';
  for (const auto& [k, v] : r.baseline_precision_at) os << "baseline_precision_at_" << k << '=' << v << '\n';
  for (const auto& [name, w] : r.coefficients) os << "coef." << name << '=' << w << '\n';
  os << "top_retention=" << r.top_retention << '\n';
  os << "surprise_risers=" << r.surprise_risers.size() << '\n';
}

inline void write_risers_csv(std::ostream& os, const std::vector<SurpriseRiser>& risers) {
  os << "key,train_citations,test_citations\n";
  for (const auto& r : risers) os << csv_field(r.key) << ',' << r.train_citations << ',' << r.test_citations << '\n';
}

}  // namespace lexcite::predictor
