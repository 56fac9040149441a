#include <gtest/gtest.h>

#include <set>
#include <thread>

#include "fixtures.hpp"
#include "lexcite/random.hpp"
#include "lexcite/textcite.hpp"

using namespace lexcite::textcite;

namespace {

std::vector<CitationEdge> run(std::string_view text) { return extract_citations(text, "fx"); }

std::vector<std::string> articles(const std::vector<CitationEdge>& edges) {
  std::vector<std::string> out;
  for (const auto& e : edges) out.push_back(e.article_ref.value_or(""));
  return out;
}

}  // namespace

TEST(Extraction, FixtureCorpus) {
  const auto cases = fixtures::extraction_cases();
  ASSERT_GE(cases.size(), 200u);
  std::size_t positives = 0, negatives = 0;
  for (const auto& c : cases) {
    SCOPED_TRACE(c.name);
    EXPECT_EQ(run(c.text), c.expected);
    (c.expected.empty() ? negatives : positives)++;
  }
  EXPECT_GE(positives, 100u);
  EXPECT_GE(negatives, 100u);
}

TEST(Extraction, CodexWithNbsp) {
  const auto e = run("ст. 625 ЦК України");
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].type, CitationType::CodexArticle);
  EXPECT_EQ(e[0].law_ref, "ЦК");
  EXPECT_EQ(e[0].article_ref, "625");
}

TEST(Extraction, LongCodexFormFoldsToShort) {
  EXPECT_EQ(run("ст. 5 КАСУ")[0].law_ref, "КАС");
  EXPECT_EQ(run("ст. 5 КАС України")[0].law_ref, "КАС");
}

TEST(Extraction, RepeatsFoldIntoCount) {
  const auto e = run("ст. 625 ЦК України. Також ст. 625 ЦК. І знову статтею 625 ЦК України.");
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].count, 3u);
}

TEST(Extraction, OrderedByFirstOffset) {
  const auto e = run("справа № 200/1234/24; ст. 3 КК України; стаття 124 Конституції України");
  ASSERT_EQ(e.size(), 3u);
  EXPECT_EQ(e[0].type, CitationType::CaseReference);
  EXPECT_EQ(e[1].type, CitationType::CodexArticle);
  EXPECT_EQ(e[2].type, CitationType::Constitution);
}

TEST(Extraction, LawNumberNormalizedUpper) {
  const auto e = run("стаття 7 Закону України № 123-ix");
  ASSERT_EQ(e.size(), 1u);
  EXPECT_EQ(e[0].type, CitationType::LawArticle);
  EXPECT_EQ(e[0].law_ref, "123-IX");
}

TEST(Extraction, EmptyDecisionIdRejected) {
  EXPECT_THROW(extract_citations("ст. 1 ЦК", ""), lexcite::InputError);
}

TEST(Extraction, EmptyTextYieldsNothing) { EXPECT_TRUE(run("").empty()); }

TEST(Extraction, InvalidUtf8DoesNotThrow) {
  std::string s = "ст. 625 ЦК України \xff\xfe\xd0";
  EXPECT_NO_THROW(run(s));
  EXPECT_EQ(run(s).size(), 1u);
}

TEST(Extraction, ConcurrentCallsAgree) {
  const auto cases = fixtures::extraction_cases();
  std::vector<std::vector<CitationEdge>> a(cases.size()), b(cases.size());
  auto work = [&](std::vector<std::vector<CitationEdge>>& out) {
    for (std::size_t i = 0; i < cases.size(); ++i) out[i] = run(cases[i].text);
  };
  std::thread t1(work, std::ref(a)), t2(work, std::ref(b));
  t1.join();
  t2.join();
  EXPECT_EQ(a, b);
}

TEST(Ranges, MixedListExpands) {
  EXPECT_EQ(expand_article_ranges("3, 5, 7–9 та 12"),
            (std::vector<std::string>{"3", "5", "7", "8", "9", "12"}));
  EXPECT_EQ(articles(run("статті 3, 5, 7–9 та 12 ЦК України")),
            (std::vector<std::string>{"3", "5", "7", "8", "9", "12"}));
}

TEST(Ranges, SuffixedArticleIsNotARange) {
  EXPECT_EQ(expand_article_ranges("111-1"), std::vector<std::string>{"111-1"});
  EXPECT_EQ(expand_article_ranges("111 - 113"), (std::vector<std::string>{"111", "112", "113"}));
}

TEST(Ranges, ReversedRangeKeepsEndpoints) {
  RangeDiagnostics d;
  EXPECT_EQ(expand_article_ranges("9–7", &d), (std::vector<std::string>{"9", "7"}));
  EXPECT_EQ(d.reversed_ranges, 1u);
}

TEST(Ranges, LeadingZerosCanonical) { EXPECT_EQ(expand_article_ranges("007"), std::vector<std::string>{"7"}); }

TEST(Ranges, RandomRangesHaveInclusiveLength) {
  lexcite::Rng rng(11);
  for (int t = 0; t < 2000; ++t) {
    const auto a = rng.below(5000);
    const auto b = a + rng.below(50);
    const std::string dash = rng.bernoulli(0.5) ? "–" : " - ";
    const auto out = expand_article_ranges(std::to_string(a) + dash + std::to_string(b));
    ASSERT_EQ(out.size(), b - a + 1) << a << ".." << b;
    EXPECT_EQ(out.front(), std::to_string(a));
    EXPECT_EQ(out.back(), std::to_string(b));
  }
}

TEST(Normalize, CodexUnknownIsNullopt) {
  EXPECT_EQ(normalize_law_ref(CitationType::CodexArticle, "ЦК України"), "ЦК");
  EXPECT_FALSE(normalize_law_ref(CitationType::CodexArticle, "АБВ").has_value());
}

TEST(Normalize, LawNameFolding) {
  EXPECT_EQ(normalize_law_ref(CitationType::LawArticle, "Про  Іпотеку"), "про іпотеку");
  EXPECT_EQ(normalize_law_ref(CitationType::LawByNumber, " 2 3-iv "), "23-IV");
}

TEST(Keys, RoundTrip) {
  const auto k = legislation_key("ЦК", std::optional<std::string>("625"));
  EXPECT_EQ(k, "ЦК::625");
  const auto [law, art] = split_legislation_key(k);
  EXPECT_EQ(law, "ЦК");
  EXPECT_EQ(art, "625");
  EXPECT_EQ(legislation_key("SC_RULING", std::nullopt), "SC_RULING::");
}
