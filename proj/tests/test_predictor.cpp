#include <gtest/gtest.h>

#include <sstream>

#include "lexcite/predictor.hpp"
#include "oracles.hpp"

using namespace lexcite::predictor;
using lexcite::Rng;

namespace {

// Regularized logistic regression by Newton's method on the same objective.
Eigen::VectorXd newton_fit(const std::vector<std::vector<double>>& x, const std::vector<int>& y, double l2) {
  const auto n = static_cast<Eigen::Index>(x.size());
  const auto p = static_cast<Eigen::Index>(x.front().size());
  Eigen::MatrixXd z(n, p + 1);
  for (Eigen::Index j = 0; j < p; ++j) {
    double mean = 0, ss = 0;
    for (Eigen::Index i = 0; i < n; ++i) mean += x[i][j];
    mean /= n;
    for (Eigen::Index i = 0; i < n; ++i) ss += (x[i][j] - mean) * (x[i][j] - mean);
    const double sd = std::sqrt(ss / n);
    for (Eigen::Index i = 0; i < n; ++i) z(i, j) = (x[i][j] - mean) / sd;
  }
  z.col(p).setOnes();
  Eigen::VectorXd reg = Eigen::VectorXd::Constant(p + 1, l2);
  reg(p) = 0.0;
  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p + 1);
  for (int it = 0; it < 50; ++it) {
    const Eigen::VectorXd s = z * beta;
    Eigen::VectorXd r(n), w(n);
    for (Eigen::Index i = 0; i < n; ++i) {
      const double pr = 1.0 / (1.0 + std::exp(-s(i)));
      r(i) = pr - y[i];
      w(i) = pr * (1.0 - pr);
    }
    const Eigen::VectorXd g = z.transpose() * r / n + reg.cwiseProduct(beta);
    Eigen::MatrixXd h = z.transpose() * w.asDiagonal() * z / n;
    h.diagonal() += reg;
    beta -= h.ldlt().solve(g);
  }
  return beta;
}

std::pair<std::vector<std::vector<double>>, std::vector<int>> noisy_data(Rng& rng, std::size_t n) {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  for (std::size_t i = 0; i < n; ++i) {
    const double a = rng.normal() * 2 + 1, b = rng.normal() * 0.5;
    x.push_back({a, b, rng.normal()});
    const double logit = 0.8 * a - 1.5 * b - 0.5;
    y.push_back(rng.uniform() < 1.0 / (1.0 + std::exp(-logit)) ? 1 : 0);
  }
  return {x, y};
}

}  // namespace

TEST(Features, HandComputed) {
  const std::vector<double> c{0, 2, 0, 4, 1, 5};
  const auto f = features_from_counts(c);
  EXPECT_DOUBLE_EQ(f.log_total, std::log(13.0));
  EXPECT_EQ(f.active_years, 4.0);
  EXPECT_DOUBLE_EQ(f.growth_ratio, (6.0 + 1.0) / (2.0 + 1.0));
  const double mean = 2.0, var = (4 + 0 + 4 + 4 + 1 + 9) / 6.0;
  EXPECT_DOUBLE_EQ(f.cv, std::sqrt(var) / mean);
  const auto z = features_from_counts(std::vector<double>(13, 0.0));
  EXPECT_EQ(z.log_total, 0.0);
  EXPECT_EQ(z.growth_ratio, 1.0);
  EXPECT_EQ(z.cv, 0.0);
}

TEST(Logistic, ConvergesToNewtonSolution) {
  Rng rng(1);
  auto [x, y] = noisy_data(rng, 400);
  LogisticOptions o;
  o.epochs = 20000;
  o.learning_rate = 0.5;
  o.l2 = 1e-3;
  const auto m = train_logistic(x, y, o);
  const auto beta = newton_fit(x, y, o.l2);
  for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(m.weights[j], beta(static_cast<Eigen::Index>(j)), 1e-6);
  EXPECT_NEAR(m.bias, beta(3), 1e-6);
}

TEST(Logistic, LossNeverIncreases) {
  Rng rng(2);
  auto [x, y] = noisy_data(rng, 300);
  const auto m = train_logistic(x, y);
  ASSERT_EQ(m.loss_history.size(), 501u);
  EXPECT_NEAR(m.loss_history.front(), std::log(2.0), 1e-12);
  for (std::size_t i = 1; i < m.loss_history.size(); ++i) EXPECT_LE(m.loss_history[i], m.loss_history[i - 1] + 1e-15);
}

TEST(Logistic, Validation) {
  std::vector<std::vector<double>> x{{1.0}, {2.0}};
  EXPECT_THROW(train_logistic(x, std::vector<int>{1, 1}), lexcite::DegenerateInputError);
  EXPECT_THROW(train_logistic(x, std::vector<int>{1}), lexcite::InputError);
  EXPECT_THROW(train_logistic({}, std::vector<int>{}), lexcite::InsufficientDataError);
}

TEST(Logistic, SaveLoadRoundTrip) {
  Rng rng(3);
  auto [x, y] = noisy_data(rng, 100);
  const auto m = train_logistic(x, y, {}, {"a", "b", "c"});
  std::stringstream ss;
  m.save(ss);
  const auto back = LogisticModel::load(ss);
  EXPECT_EQ(back.feature_names, m.feature_names);
  for (const auto& row : x) EXPECT_DOUBLE_EQ(back.decision(row), m.decision(row));
}

TEST(Auc, MatchesConcordantPairs) {
  Rng rng(4);
  for (int t = 0; t < 40; ++t) {
    const std::size_t n = 2 + rng.below(499);
    std::vector<double> s(n);
    std::vector<int> y(n);
    for (std::size_t i = 0; i < n; ++i) {
      s[i] = static_cast<double>(rng.below(20));  // plenty of ties
      y[i] = rng.bernoulli(0.3) ? 1 : 0;
    }
    y[0] = 1;
    y[1] = 0;
    EXPECT_NEAR(auc(s, y), oracle::auc(s, y), 1e-12);
  }
}

TEST(Auc, Extremes) {
  EXPECT_EQ(auc(std::vector<double>{0.9, 0.8, 0.1, 0.2}, std::vector<int>{1, 1, 0, 0}), 1.0);
  EXPECT_EQ(auc(std::vector<double>{0.1, 0.2, 0.9, 0.8}, std::vector<int>{1, 1, 0, 0}), 0.0);
  EXPECT_EQ(auc(std::vector<double>(6, 0.3), std::vector<int>{1, 0, 1, 0, 0, 1}), 0.5);
  EXPECT_THROW(auc(std::vector<double>{1, 2}, std::vector<int>{1, 1}), lexcite::InputError);
}

TEST(PrecisionAtK, TieBreakByKey) {
  const std::vector<double> s{0.5, 0.5, 0.9, 0.1};
  const std::vector<int> y{0, 1, 1, 0};
  const std::vector<std::string> keys{"b", "a", "c", "d"};
  EXPECT_EQ(precision_at_k(s, y, keys, 2), 1.0);
  EXPECT_EQ(precision_at_k(s, y, keys, 4), 0.5);
  // Fewer items than k still divides by k.
  EXPECT_EQ(precision_at_k(s, y, keys, 8), 0.25);
}

TEST(Baseline, ConstructedRetention) {
  // Train top-20 is t0..t19; the test top-20 keeps t0..t12 plus 7 newcomers.
  std::vector<KeyedCount> train, test;
  std::unordered_set<std::string> test_top;
  for (int i = 0; i < 40; ++i) train.push_back({"t" + std::to_string(100 + i), 1000.0 - i});
  for (int i = 0; i < 13; ++i) test.push_back({"t" + std::to_string(100 + i), 500.0 - i});
  for (int i = 0; i < 7; ++i) test.push_back({"n" + std::to_string(i), 400.0 - i});
  for (int i = 20; i < 40; ++i) test.push_back({"t" + std::to_string(100 + i), 10.0});
  for (const auto& e : top_by_count(test, 20)) test_top.insert(e.key);
  const std::vector<std::size_t> ks{10, 20};
  const auto b = naive_baseline(train, test_top, ks);
  EXPECT_EQ(b.at(10), 1.0);
  EXPECT_EQ(b.at(20), 13.0 / 20.0);
  EXPECT_EQ(top_k_retention(train, test, 20), 13.0 / 20.0);

  std::unordered_map<std::string, double> train_map;
  for (const auto& e : train) train_map[e.key] = e.count;
  const auto risers = surprise_risers(top_by_count(test, 20), train_map, 100.0);
  EXPECT_EQ(risers.size(), 7u);
}

TEST(Prediction, EndToEndOnSmallGraph) {
  // Rising articles get more citations each year; fading ones fewer.
  std::vector<lexcite::textcite::CitationEdge> edges;
  std::unordered_map<std::string, lexcite::graphstore::DecisionMeta> meta;
  Rng rng(5);
  int id = 0;
  for (int year = 2007; year <= 2026; ++year) {
    for (int a = 0; a < 60; ++a) {
      const bool rising = a % 2 == 0;
      const double rate = rising ? 0.2 * (year - 2006) : 0.2 * (2027 - year);
      const auto n = static_cast<int>(rate + rng.uniform());
      for (int k = 0; k < n; ++k) {
        const auto d = "d" + std::to_string(id++);
        meta[d] = {year, 1};
        edges.push_back({d, lexcite::textcite::CitationType::CodexArticle, "ЦК", std::to_string(a + 1), 1});
      }
    }
  }
  const auto g = lexcite::graphstore::build_bipartite(edges, meta);
  PredictionConfig cfg;
  cfg.top_n = 30;
  cfg.ks = {10, 30};
  const auto r = run_prediction(g, cfg);
  EXPECT_EQ(r.positives, 30u);
  EXPECT_GT(r.report.auc, 0.9);
  EXPECT_EQ(r.scores.size(), r.population);
  cfg.train = {2007, 2021};
  EXPECT_THROW(run_prediction(g, cfg), lexcite::InputError);
}
