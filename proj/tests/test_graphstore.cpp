#include <gtest/gtest.h>

#include <sstream>

#include "lexcite/graphstore.hpp"
#include "oracles.hpp"

using namespace lexcite::graphstore;
using lexcite::textcite::CitationEdge;
using lexcite::textcite::CitationType;

namespace {

std::map<std::pair<std::string, std::string>, std::uint64_t> as_map(const CoCitationGraph& g) {
  std::map<std::pair<std::string, std::string>, std::uint64_t> out;
  for (const auto& e : g.edges()) {
    auto a = g.key(e.u), b = g.key(e.v);
    if (b < a) std::swap(a, b);
    out[{a, b}] = e.w;
  }
  return out;
}

CitationEdge edge(std::string d, std::string law, std::string art, std::uint32_t count = 1,
                  CitationType t = CitationType::CodexArticle) {
  CitationEdge e{std::move(d), t, std::move(law), std::nullopt, count};
  if (!art.empty()) e.article_ref = std::move(art);
  return e;
}

BipartiteGraph small_graph() {
  std::vector<CitationEdge> edges{
      edge("d1", "ЦК", "1"), edge("d1", "ЦК", "2", 3), edge("d1", "КК", "7"),
      edge("d2", "ЦК", "1"), edge("d2", "ЦК", "2"),    edge("d2", "200/1/20", "", 1, CitationType::CaseReference),
      edge("d3", "ЦК", "2"), edge("d3", "КК", "7"),
  };
  std::unordered_map<std::string, DecisionMeta> meta{
      {"d1", {2015, 1}}, {"d2", {2016, 1}}, {"d3", {2016, 2}}, {"d4", {2017, 3}}};
  return build_bipartite(edges, meta);
}

}  // namespace

TEST(Bipartite, OrdinalsFollowKeyOrder) {
  const auto g = small_graph();
  ASSERT_EQ(g.decision_count(), 4u);
  EXPECT_EQ(g.decision_id(0), "d1");
  EXPECT_EQ(g.decision_id(3), "d4");
  for (std::size_t l = 1; l < g.legislation_count(); ++l) EXPECT_LT(g.legislation(l - 1).key, g.legislation(l).key);
  EXPECT_EQ(g.edge_count(), 8u);
  EXPECT_EQ(g.decision_degree(*g.find_decision("d4")), 0u);
  EXPECT_EQ(g.missing_meta(), 0u);
}

TEST(Bipartite, DuplicateEdgesSumCounts) {
  std::vector<CitationEdge> edges{edge("d1", "ЦК", "1", 2), edge("d1", "ЦК", "1", 5)};
  const auto g = build_bipartite(edges, {});
  ASSERT_EQ(g.edge_count(), 1u);
  EXPECT_EQ(g.citations(0)[0].weight, 7u);
  EXPECT_EQ(g.missing_meta(), 1u);
}

TEST(Bipartite, TransposeMatches) {
  const auto g = small_graph();
  std::size_t total = 0;
  for (std::size_t l = 0; l < g.legislation_count(); ++l) {
    for (const auto& nb : g.citing(l)) {
      const auto cites = g.citations(nb.node);
      const auto it = std::find_if(cites.begin(), cites.end(), [&](const Neighbor& x) { return x.node == l; });
      ASSERT_NE(it, cites.end());
      EXPECT_EQ(it->weight, nb.weight);
      ++total;
    }
  }
  EXPECT_EQ(total, g.edge_count());
}

TEST(Bipartite, SaveLoadRoundTrip) {
  const auto g = small_graph();
  std::stringstream ss;
  g.save(ss);
  const auto h = BipartiteGraph::load(ss);
  EXPECT_TRUE(g == h);
  std::stringstream again;
  h.save(again);
  std::stringstream first;
  g.save(first);
  EXPECT_EQ(first.str(), again.str());
}

TEST(Bipartite, LoadRejectsGarbage) {
  std::stringstream bad("not a graph");
  EXPECT_THROW(BipartiteGraph::load(bad), lexcite::InputError);
  std::stringstream ss;
  small_graph().save(ss);
  auto bytes = ss.str();
  std::stringstream truncated(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(BipartiteGraph::load(truncated), lexcite::InputError);
}

TEST(Projection, SmallGraphByHand) {
  const auto g = small_graph();
  const auto gl = project_cocitation(g, 1);
  const auto m = as_map(gl);
  EXPECT_EQ(m.size(), 3u);
  EXPECT_EQ(m.at({"ЦК::1", "ЦК::2"}), 2u);
  EXPECT_EQ(m.at({"КК::7", "ЦК::2"}), 2u);
  EXPECT_EQ(m.at({"КК::7", "ЦК::1"}), 1u);
  EXPECT_FALSE(gl.find("200/1/20::").has_value());

  ProjectionOptions all;
  all.min_weight = 1;
  all.include_all_types = true;
  EXPECT_TRUE(project_cocitation(g, all).find("200/1/20::").has_value());
}

TEST(Projection, ThresholdDropsNodes) {
  const auto gl = project_cocitation(small_graph(), 2);
  EXPECT_EQ(gl.edge_count(), 2u);
  EXPECT_EQ(gl.node_count(), 3u);
  EXPECT_THROW(project_cocitation(small_graph(), 0), lexcite::InputError);
}

TEST(Projection, YearWindowAndDegreeCap) {
  ProjectionOptions o;
  o.min_weight = 1;
  o.years = YearRange{2016, 2016};
  auto m = as_map(project_cocitation(small_graph(), o));
  EXPECT_EQ(m.at({"ЦК::1", "ЦК::2"}), 1u);
  EXPECT_EQ(m.at({"КК::7", "ЦК::2"}), 1u);
  EXPECT_EQ(m.size(), 2u);

  ProjectionOptions cap;
  cap.min_weight = 1;
  cap.max_decision_degree = 2;
  ProjectionDiagnostics diag;
  m = as_map(project_cocitation(small_graph(), cap, &diag));
  EXPECT_EQ(diag.skipped_decisions, 1u);
  EXPECT_EQ(m.size(), 2u);
}

TEST(Projection, MatchesSetIntersectionOracle) {
  lexcite::Rng rng(5);
  for (int t = 0; t < 25; ++t) {
    const auto edges = oracle::random_bipartite_edges(rng, 30 + rng.below(60), 10 + rng.below(40), 0.15);
    const auto g = build_bipartite(edges, {});
    for (std::uint64_t mw : {1u, 2u, 3u}) {
      EXPECT_EQ(as_map(project_cocitation(g, mw)), oracle::cocitation(edges, mw)) << "trial " << t;
    }
  }
}

TEST(CoCitation, FromEdgesCanonicalizes) {
  auto g = CoCitationGraph::from_edges({"a", "b", "c"}, {{1, 0, 2}, {0, 1, 3}, {2, 1, 1}});
  ASSERT_EQ(g.edge_count(), 2u);
  EXPECT_EQ(g.weight(0, 1), 5u);
  EXPECT_EQ(g.weight(1, 0), 5u);
  EXPECT_DOUBLE_EQ(g.weighted_degree(1), 6.0);
  EXPECT_DOUBLE_EQ(g.total_weight(), 6.0);
  EXPECT_THROW(CoCitationGraph::from_edges({"a", "b"}, {{0, 0, 1}}), lexcite::InputError);
  EXPECT_THROW(CoCitationGraph::from_edges({"a", "b"}, {{0, 2, 1}}), lexcite::InputError);
  EXPECT_THROW(CoCitationGraph::from_edges({"a", "a"}, {}), lexcite::InputError);
}

TEST(CoCitation, EdgeListRoundTrip) {
  lexcite::Rng rng(3);
  const auto g = oracle::random_graph(rng, 30, 0.2);
  std::stringstream ss;
  g.write_edge_list(ss);
  const auto h = CoCitationGraph::read_edge_list(ss);
  EXPECT_EQ(as_map(g), as_map(h));
  std::stringstream bad("x\ty\n");
  EXPECT_THROW(CoCitationGraph::read_edge_list(bad), lexcite::InputError);
}

TEST(DecisionSimilarity, SharedCounts) {
  const auto g = small_graph();
  const auto n = decision_neighbors(g, "d1", 1);
  ASSERT_EQ(n.size(), 2u);
  EXPECT_EQ(n[0], (std::pair<std::string, std::size_t>{"d2", 2}));
  EXPECT_EQ(n[1], (std::pair<std::string, std::size_t>{"d3", 2}));
  EXPECT_TRUE(decision_neighbors(g, "d1", 3).empty());
  EXPECT_THROW(decision_neighbors(g, "nope", 1), lexcite::NotFoundError);
}

TEST(DegreeSequence, SortedDescending) {
  const auto s = degree_sequence(small_graph(), Side::Legislation);
  ASSERT_FALSE(s.empty());
  EXPECT_EQ(s[0].first, "ЦК::2");
  EXPECT_EQ(s[0].second, 3u);
  for (std::size_t i = 1; i < s.size(); ++i) EXPECT_GE(s[i - 1].second, s[i].second);
}
