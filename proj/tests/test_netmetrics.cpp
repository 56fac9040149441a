#include <gtest/gtest.h>

#include <boost/math/special_functions/zeta.hpp>
#include <numeric>
#include <sstream>

#include "lexcite/netmetrics.hpp"
#include "oracles.hpp"

using namespace lexcite::netmetrics;
using lexcite::Rng;
using lexcite::graphstore::CoCitationGraph;

namespace {

std::vector<std::uint64_t> exact_samples(std::uint64_t seed, std::size_t n, double alpha, std::uint64_t x_min) {
  Rng rng(seed);
  oracle::DiscretePowerLaw dist(alpha, x_min);
  std::vector<std::uint64_t> xs(n);
  for (auto& x : xs) x = dist(rng);
  return xs;
}

}  // namespace

TEST(Zeta, MatchesRiemannAtUnitShift) {
  for (double s : {1.1, 1.5, 2.0, 2.5, 3.7, 8.0}) {
    EXPECT_NEAR(hurwitz_zeta(s, 1.0), boost::math::zeta(s), 1e-12 * boost::math::zeta(s)) << s;
  }
}

TEST(Zeta, MatchesDirectSummation) {
  for (double s : {1.3, 2.0, 2.5, 4.0}) {
    for (double q : {0.5, 1.0, 5.0, 37.0, 1000.0}) {
      const double ref = oracle::hurwitz(s, q);
      EXPECT_NEAR(hurwitz_zeta(s, q), ref, 1e-9 * ref) << s << " " << q;
    }
  }
  EXPECT_THROW(hurwitz_zeta(1.0, 1.0), lexcite::InputError);
}

TEST(PowerLaw, RecoversExponentContinuousApprox) {
  const auto xs = exact_samples(1, 20000, 2.5, 5);
  const auto fit = fit_power_law(xs);
  EXPECT_NEAR(fit.alpha, 2.5, 0.07);
  EXPECT_GE(fit.x_min, 3u);
  EXPECT_LE(fit.x_min, 10u);
  EXPECT_LT(fit.ks_d, 0.05);
  EXPECT_EQ(fit.n_total, xs.size());
  EXPECT_NEAR(fit.sigma, (fit.alpha - 1) / std::sqrt(static_cast<double>(fit.n_tail)), 1e-12);
}

TEST(PowerLaw, RecoversExponentDiscreteExact) {
  const auto xs = exact_samples(2, 20000, 2.2, 3);
  PowerLawOptions o;
  o.method = FitMethod::DiscreteExact;
  const auto fit = fit_power_law(xs, o);
  EXPECT_NEAR(fit.alpha, 2.2, 0.06);
  EXPECT_GE(fit.x_min, 2u);
  EXPECT_LE(fit.x_min, 6u);
}

TEST(PowerLaw, FixedXminUsesWholeTail) {
  const auto xs = exact_samples(3, 5000, 2.5, 5);
  PowerLawOptions o;
  o.fixed_xmin = 5;
  const auto fit = fit_power_law(xs, o);
  EXPECT_EQ(fit.x_min, 5u);
  EXPECT_EQ(fit.n_tail, xs.size());
}

TEST(PowerLaw, InputChecks) {
  std::vector<std::uint64_t> few(10, 3);
  EXPECT_THROW(fit_power_law(few), lexcite::InsufficientDataError);
  std::vector<std::uint64_t> zeros(100, 0);
  EXPECT_THROW(fit_power_law(zeros), lexcite::InputError);
}

TEST(PowerLaw, LibrarySamplerIsClose) {
  Rng rng(4);
  std::vector<std::uint64_t> xs(30000);
  for (auto& x : xs) x = sample_power_law(rng, 2.5, 5);
  EXPECT_EQ(*std::min_element(xs.begin(), xs.end()), 5u);
  PowerLawOptions o;
  o.fixed_xmin = 5;
  EXPECT_NEAR(fit_power_law(xs, o).alpha, 2.5, 0.08);
}

TEST(Comparisons, PowerLawDataIsNotLognormalFavoured) {
  const auto xs = exact_samples(5, 20000, 2.5, 5);
  const auto fit = fit_power_law(xs);
  const auto cmp = compare_distributions(xs, fit);
  ASSERT_EQ(cmp.size(), 2u);
  EXPECT_EQ(to_string(cmp[0].alternative), "lognormal");
  EXPECT_EQ(to_string(cmp[1].alternative), "truncated_power_law");
  for (const auto& c : cmp) {
    EXPECT_GE(c.p_value, 0.0);
    EXPECT_LE(c.p_value, 1.0);
    // On genuine power-law data neither alternative should win decisively.
    EXPECT_FALSE(c.r < 0 && c.p_value < 0.01) << to_string(c.alternative);
  }
}

TEST(Comparisons, LognormalDataPrefersLognormal) {
  Rng rng(6);
  std::vector<std::uint64_t> xs(20000);
  for (auto& x : xs) x = 1 + static_cast<std::uint64_t>(std::exp(2.0 + 0.6 * rng.normal()));
  PowerLawOptions o;
  o.fixed_xmin = 5;
  const auto fit = fit_power_law(xs, o);
  const auto cmp = compare_distributions(xs, fit);
  EXPECT_LT(cmp[0].r, 0.0);
  EXPECT_LT(cmp[0].p_value, 0.01);
}

TEST(PageRank, TwoNodes) {
  const auto g = CoCitationGraph::from_edges({"a", "b"}, {{0, 1, 3}});
  const auto r = pagerank(g);
  EXPECT_NEAR(r.scores[0], 0.5, 1e-12);
  EXPECT_NEAR(r.scores[1], 0.5, 1e-12);
}

TEST(PageRank, MatchesDenseSolve) {
  Rng rng(7);
  for (int t = 0; t < 30; ++t) {
    const auto g = oracle::random_graph(rng, 5 + rng.below(45), 0.05 + 0.3 * rng.uniform());
    const auto r = pagerank(g);
    const auto ref = oracle::pagerank(g, 0.85);
    EXPECT_NEAR(std::accumulate(r.scores.begin(), r.scores.end(), 0.0), 1.0, 1e-9);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(r.scores[i], ref[i], 1e-8) << t;
  }
}

TEST(PageRank, NonConvergenceReportsIterate) {
  Rng rng(8);
  const auto g = oracle::random_graph(rng, 30, 0.2);
  PageRankOptions o;
  o.max_iterations = 2;
  o.tol = 0.0;
  try {
    pagerank(g, o);
    FAIL() << "expected ConvergenceError";
  } catch (const lexcite::ConvergenceError& e) {
    EXPECT_EQ(e.last_iterate().size(), 30u);
  }
}

TEST(Eigenvector, MatchesSymmetricEigensolver) {
  Rng rng(9);
  for (int t = 0; t < 20; ++t) {
    const auto g = oracle::random_graph(rng, 10 + rng.below(40), 0.15);
    if (g.edge_count() == 0) continue;
    const auto r = eigenvector_authority(g);
    const auto comp = connected_components(g);
    std::map<std::uint32_t, std::size_t> sizes;
    for (auto c : comp) ++sizes[c];
    std::uint32_t largest = 0;
    for (const auto& [c, s] : sizes) {
      if (s > sizes[largest]) largest = c;
    }
    std::vector<bool> keep(comp.size());
    for (std::size_t i = 0; i < comp.size(); ++i) keep[i] = comp[i] == largest;
    const auto ref = oracle::principal_eigenvector(g, keep);
    for (std::size_t i = 0; i < ref.size(); ++i) EXPECT_NEAR(r.scores[i], ref[i], 1e-6) << t;
  }
}

TEST(Eigenvector, RejectsEdgelessGraph) {
  const auto g = CoCitationGraph::from_edges({"a", "b"}, {});
  EXPECT_THROW(eigenvector_authority(g), lexcite::DegenerateInputError);
}

TEST(Spearman, MatchesClosedFormWithoutTies) {
  Rng rng(10);
  for (int t = 0; t < 50; ++t) {
    const std::size_t n = 3 + rng.below(40);
    std::vector<double> x(n), y(n);
    std::iota(x.begin(), x.end(), 0.0);
    std::iota(y.begin(), y.end(), 0.0);
    rng.shuffle(std::span<double>(x));
    rng.shuffle(std::span<double>(y));
    double d2 = 0.0;
    for (std::size_t i = 0; i < n; ++i) d2 += (x[i] - y[i]) * (x[i] - y[i]);
    const double nn = static_cast<double>(n);
    EXPECT_NEAR(spearman(x, y), 1.0 - 6.0 * d2 / (nn * (nn * nn - 1.0)), 1e-12);
  }
}

TEST(Spearman, TiesUseAverageRanks) {
  const std::vector<double> x{1, 2, 2, 3};
  EXPECT_EQ(average_ranks(x), (std::vector<double>{1, 2.5, 2.5, 4}));
  EXPECT_NEAR(spearman(x, x), 1.0, 1e-15);
  EXPECT_THROW(spearman(std::vector<double>{1, 1, 1}, std::vector<double>{1, 2, 3}), lexcite::DegenerateInputError);
}

TEST(Centrality, ReportIsConsistent) {
  Rng rng(12);
  const auto g = oracle::random_graph(rng, 40, 0.2);
  const auto r = centrality_report(g);
  ASSERT_EQ(r.degree.size(), 40u);
  for (std::size_t i = 0; i < 40; ++i) EXPECT_DOUBLE_EQ(r.degree[i], g.weighted_degree(i));
  EXPECT_GT(r.rho_degree_pagerank, 0.8);
}

TEST(Output, HistogramIsSorted) {
  std::vector<std::uint64_t> xs{3, 1, 3, 2};
  std::ostringstream os;
  write_degree_histogram(os, xs);
  EXPECT_NE(os.str().find("3,2"), std::string::npos);
}
