#include <gtest/gtest.h>

#include <set>
#include <sstream>

#include "lexcite/validator.hpp"

using namespace lexcite::validator;
using lexcite::textcite::CitationType;

namespace {

CitationEdge stored(std::string law, std::string art, CitationType t = CitationType::CodexArticle) {
  CitationEdge e{"d", t, std::move(law), std::nullopt, 1};
  if (!art.empty()) e.article_ref = std::move(art);
  return e;
}

}  // namespace

TEST(Wilson, AllSuccesses) {
  const auto w = wilson_interval(200, 200);
  EXPECT_NEAR(w.low, 0.982, 0.001);
  EXPECT_EQ(w.high, 1.0);
}

TEST(Wilson, KnownValue) {
  // 50/100 at z = 1.96: centre 0.5, half-width 1.96 sqrt(0.25/100 + 1.96^2/40000) / (1 + 1.96^2/100).
  const double z = 1.96, n = 100;
  const double half = z * std::sqrt(0.25 / n + z * z / (4 * n * n)) / (1 + z * z / n);
  const auto w = wilson_interval(50, 100, z);
  EXPECT_NEAR(w.low, 0.5 - half, 1e-15);
  EXPECT_NEAR(w.high, 0.5 + half, 1e-15);
  EXPECT_THROW(wilson_interval(0, 0), lexcite::InputError);
  EXPECT_THROW(wilson_interval(3, 2), lexcite::InputError);
}

TEST(Wilson, ContainsPointEstimate) {
  for (std::uint64_t n = 1; n < 60; ++n) {
    for (std::uint64_t s = 0; s <= n; ++s) {
      const auto w = wilson_interval(s, n);
      const double p = static_cast<double>(s) / static_cast<double>(n);
      EXPECT_LE(w.low, p + 1e-15);
      EXPECT_GE(w.high, p - 1e-15);
      EXPECT_GE(w.low, 0.0);
      EXPECT_LE(w.high, 1.0);
    }
  }
}

TEST(Precision, IndexLookupPerType) {
  std::vector<ValidationSample> samples{
      {"d1", "ст. 625 ЦК України; ст. 9999 ЦК України; справа № 200/1234/24", {}},
      {"d2", "постанова Великої Палати ВС та стаття 124 Конституції України", {}},
  };
  const std::unordered_set<std::string> index{"ЦК::625", "CONSTITUTION::124"};
  const auto r = precision_eval(samples, index);
  EXPECT_EQ(r.total, 5u);
  EXPECT_EQ(r.validated, 4u);
  ASSERT_EQ(r.mismatches.size(), 1u);
  EXPECT_EQ(r.mismatches[0].edge.article_ref, "9999");
  const auto& codex = r.per_type[lexcite::textcite::index_of(CitationType::CodexArticle)];
  EXPECT_EQ(codex.total, 2u);
  EXPECT_EQ(codex.precision(), 0.5);
  EXPECT_TRUE(r.per_type[lexcite::textcite::index_of(CitationType::CaseReference)].wilson.has_value());
  std::ostringstream os;
  r.write_table(os);
  EXPECT_NE(os.str().find("overall\t4\t5\t0.8"), std::string::npos);
}

TEST(Precision, CustomExtractorIsUsed) {
  auto fake = [](std::string_view, std::string_view id) {
    return std::vector<CitationEdge>{{std::string(id), CitationType::CodexArticle, "ЦК", "1", 1}};
  };
  std::vector<ValidationSample> samples{{"d1", "anything", {}}};
  const auto r = precision_eval(samples, {"ЦК::1"}, fake);
  EXPECT_EQ(r.precision(), 1.0);
}

TEST(Recall, StrictAndRangeAware) {
  ValidationSample s{"d1", "статті 3, 5 ЦК України; стаття 7 Закону України «Про іпотеку»", {}};
  s.stored = {stored("ЦК", "3"), stored("ЦК", "3, 5"), stored("Про  Іпотеку", "7", CitationType::LawArticle),
              stored("КК", "1"), stored("ЦК", "4")};
  const std::vector<ValidationSample> samples{s};
  const auto r = recall_proxy(samples);
  EXPECT_EQ(r.stored_total, 5u);
  EXPECT_EQ(r.matched_strict, 2u);
  EXPECT_EQ(r.matched_range_aware, 3u);
  ASSERT_EQ(r.unmatched.size(), 3u);
  EXPECT_EQ(r.unmatched[0].reason, UnmatchedReason::RangeNormalization);
  EXPECT_EQ(r.unmatched[1].reason, UnmatchedReason::PatternGap);
  EXPECT_EQ(r.unmatched[2].reason, UnmatchedReason::Other);
  std::ostringstream os;
  write_unmatched_csv(os, r);
  EXPECT_NE(os.str().find("pattern_gap"), std::string::npos);
}

TEST(Recall, NothingStored) {
  std::vector<ValidationSample> samples{{"d1", "ст. 1 ЦК", {}}};
  const auto r = recall_proxy(samples);
  EXPECT_FALSE(r.strict.has_value());
}

TEST(Sampling, WithoutReplacementAndSeeded) {
  const auto a = sample_indices(1000, 100, 7);
  EXPECT_EQ(a.size(), 100u);
  EXPECT_EQ(std::set<std::size_t>(a.begin(), a.end()).size(), 100u);
  EXPECT_EQ(a, sample_indices(1000, 100, 7));
  EXPECT_NE(a, sample_indices(1000, 100, 8));
  EXPECT_EQ(sample_indices(5, 10, 1).size(), 5u);
}

TEST(Sampling, StratifiedIsProportional) {
  std::vector<std::uint64_t> strata;
  for (int i = 0; i < 700; ++i) strata.push_back(1);
  for (int i = 0; i < 200; ++i) strata.push_back(2);
  for (int i = 0; i < 100; ++i) strata.push_back(3);
  const auto s = sample_indices(1000, 50, 3, strata);
  ASSERT_EQ(s.size(), 50u);
  std::map<std::uint64_t, int> per;
  for (auto i : s) ++per[strata[i]];
  EXPECT_EQ(per[1], 35);
  EXPECT_EQ(per[2], 10);
  EXPECT_EQ(per[3], 5);
}
