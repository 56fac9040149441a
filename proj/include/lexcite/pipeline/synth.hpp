#pragma once

// Synthetic corpus generator. Article popularity follows a discrete power
// law, articles and decisions are split into planted communities, decision
// volume has a step surge, and every citation is rendered through surface
// forms the extractor recognizes. Ground truth is emitted alongside.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <numeric>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lexcite/errors.hpp"
#include "lexcite/netmetrics.hpp"
#include "lexcite/pipeline/ingest.hpp"
#include "lexcite/random.hpp"
#include "lexcite/textcite.hpp"

namespace lexcite::pipeline {

// Indexed by CitationType.
inline constexpr std::array<double, textcite::kCitationTypeCount> kDefaultTypeMix{
    0.7886,  // codex_article
    0.0579,  // law_article
    0.0111,  // constitution
    0.1315,  // case_reference
    0.0049,  // law_by_number
    0.0060,  // supreme_court_ruling
};

struct SynthSpec {
  std::size_t n_decisions = 10000;
  double alpha = 2.5;
  std::uint64_t x_min = 5;
  std::size_t communities = 4;
  double mixing = 0.05;  // chance a citation stub lands outside the article's community
  std::array<double, textcite::kCitationTypeCount> type_mix = kDefaultTypeMix;
  double article_citations_per_decision = 6.0;
  int first_year = 2007;
  int last_year = 2026;
  int surge_year = 2012;
  double surge_factor = 3.0;  // decision volume from surge_year on, relative to before
  double repeat_probability = 0.1;
  double list_probability = 0.3;
  std::uint64_t seed = 1;

  void validate() const {
    double sum = 0.0;
    for (double w : type_mix) {
      if (!(w >= 0.0)) throw InputError("synth: type mix weights must be non-negative");
      sum += w;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw InputError("synth: type mix must sum to 1");
    if (type_mix[0] + type_mix[1] + type_mix[2] <= 0.0) throw InputError("synth: type mix has no article types");
    if (!(alpha > 1.0)) throw InputError("synth: alpha must exceed 1");
    if (x_min == 0) throw InputError("synth: x_min must be positive");
    if (communities == 0) throw InputError("synth: need at least one community");
    if (!(mixing >= 0.0 && mixing <= 1.0)) throw InputError("synth: mixing must be in [0,1]");
    if (first_year <= 0 || last_year < first_year) throw InputError("synth: bad year range");
    if (!(surge_factor > 0.0)) throw InputError("synth: surge factor must be positive");
    if (!(article_citations_per_decision > 0.0)) throw InputError("synth: citations per decision must be positive");
    if (n_decisions > 0 && communities > n_decisions) {
      throw InputError("synth: more communities than decisions");
    }
  }
};

struct SynthCorpus {
  std::vector<CorpusRecord> records;          // sorted by doc_id
  std::vector<CitationEdge> truth;            // sorted
  std::vector<std::pair<std::string, std::uint32_t>> communities;  // article key -> planted block
};

namespace synth_detail {

inline constexpr std::array<std::string_view, 12> kCodices{"ЦК", "КК", "ГК", "КАС", "ЦПК", "КПК",
                                                          "ГПК", "КУпАП", "ЗК", "СК", "КЗпП", "ПК"};

inline constexpr std::array<std::string_view, 8> kLawNames{
    "Про виконавче провадження",
    "Про іпотеку",
    "Про судоустрій і статус суддів",
    "Про захист прав споживачів",
    "Про оренду землі",
    "Про банки і банківську діяльність",
    "Про державну службу",
    "Про звернення громадян",
};

inline constexpr std::array<std::string_view, 6> kRoman{"IV", "V", "VI", "VII", "VIII", "IX"};

inline constexpr std::array<std::string_view, 10> kFiller{
    "Суд встановив, що позивач звернувся до суду з позовом.",
    "Колегія суддів погоджується з висновками суду першої інстанції.",
    "Відповідач заперечував проти задоволення позовних вимог.",
    "Матеріали справи містять належні докази.",
    "Сторони уклали договір у письмовій формі.",
    "Апеляційну скаргу подано у встановлений строк.",
    "Суд керується Конституцією України та законами України.",
    "Доводи касаційної скарги не спростовують висновків судів.",
    "Позивач просив стягнути заборгованість та судові витрати.",
    "Рішення суду є законним і обґрунтованим.",
};

struct Article {
  CitationType type = CitationType::CodexArticle;
  std::string law;      // codex abbreviation, law name, or empty for constitution
  std::string number;
  std::uint32_t community = 0;
  std::uint64_t degree = 0;
};

struct Mention {
  CitationType type;
  std::size_t article = 0;  // for article-bearing types
  std::string ref;          // case number / law number / empty
  std::string date;
};

inline std::string pad(std::uint64_t v, int width) {
  std::string s = std::to_string(v);
  if (static_cast<int>(s.size()) < width) s.insert(0, static_cast<std::size_t>(width - static_cast<int>(s.size())), '0');
  return s;
}

inline std::string random_date(Rng& rng, int min_year, int max_year) {
  const auto day = 1 + rng.below(28);
  const auto month = 1 + rng.below(12);
  const auto year = min_year + static_cast<int>(rng.below(static_cast<std::uint64_t>(max_year - min_year + 1)));
  return pad(day, 2) + "." + pad(month, 2) + "." + std::to_string(year);
}

// Deterministic integer allocation of `total` proportional to `weights`
// (largest remainder, earlier index wins ties).
inline std::vector<std::size_t> apportion(std::size_t total, std::span<const double> weights) {
  const double sum = std::accumulate(weights.begin(), weights.end(), 0.0);
  std::vector<std::size_t> out(weights.size(), 0);
  std::vector<std::pair<double, std::size_t>> rem;
  std::size_t used = 0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    const double exact = static_cast<double>(total) * weights[i] / sum;
    out[i] = static_cast<std::size_t>(std::floor(exact));
    used += out[i];
    rem.emplace_back(exact - std::floor(exact), i);
  }
  std::stable_sort(rem.begin(), rem.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
  for (std::size_t i = 0; used < total; ++i, ++used) ++out[rem[i % rem.size()].second];
  return out;
}

inline std::string article_phrase(Rng& rng, const Article& a, std::string_view numbers, bool plural) {
  std::string lead;
  if (plural) {
    lead = rng.bernoulli(0.5) ? "статей " : "статтями ";
  } else {
    static constexpr std::array<std::string_view, 4> kForms{"ст. ", "статті ", "статтею ", "ст."};
    lead = std::string(kForms[rng.below(kForms.size())]);
  }
  std::string s = lead + std::string(numbers) + " ";
  switch (a.type) {
    case CitationType::CodexArticle:
      s += a.law;
      if (rng.bernoulli(0.7)) s += " України";
      break;
    case CitationType::Constitution:
      s += "Конституції України";
      break;
    default:
      s += "Закону України «" + a.law + "»";
      break;
  }
  return s;
}

inline std::string render_sentence(Rng& rng, const std::string& citation) {
  static constexpr std::array<std::string_view, 5> kLead{
      "Відповідно до ", "Згідно з вимогами ", "Суд застосував положення ", "З урахуванням ",
      "Як передбачено положеннями "};
  return std::string(kLead[rng.below(kLead.size())]) + citation + ".";
}

}  // namespace synth_detail

inline SynthCorpus synth_corpus(const SynthSpec& spec) {
  using namespace synth_detail;
  spec.validate();
  SynthCorpus out;
  if (spec.n_decisions == 0) return out;
  Rng rng(spec.seed);
  const std::size_t n = spec.n_decisions;
  const auto C = static_cast<std::uint32_t>(spec.communities);

  // Decision volume per year: flat, then stepped up from the surge year.
  std::vector<int> years;
  std::vector<double> year_weight;
  for (int y = spec.first_year; y <= spec.last_year; ++y) {
    years.push_back(y);
    year_weight.push_back(y >= spec.surge_year ? spec.surge_factor : 1.0);
  }
  const auto per_year = apportion(n, year_weight);

  struct Decision {
    std::string id;
    int year;
    int kind;
    std::uint32_t community;
  };
  std::vector<Decision> decisions;
  decisions.reserve(n);
  for (std::size_t yi = 0; yi < years.size(); ++yi) {
    for (std::size_t k = 0; k < per_year[yi]; ++k) {
      decisions.push_back({std::to_string(years[yi]) + "-" + pad(k + 1, 6), years[yi], 0, 0});
    }
  }
  std::vector<std::uint32_t> slots(n);
  for (std::size_t i = 0; i < n; ++i) slots[i] = static_cast<std::uint32_t>(i % C);
  rng.shuffle(std::span<std::uint32_t>(slots));
  std::vector<std::vector<std::uint32_t>> members(C);
  for (std::size_t i = 0; i < n; ++i) {
    auto& d = decisions[i];
    d.community = slots[i];
    d.kind = rng.bernoulli(0.85) ? static_cast<int>(d.community % 5) + 1 : static_cast<int>(rng.below(5)) + 1;
    members[d.community].push_back(static_cast<std::uint32_t>(i));
  }

  // Article universe: degrees drawn until the stub budget is spent.
  const double stub_budget = spec.article_citations_per_decision * static_cast<double>(n);
  std::vector<Article> articles;
  double stubs = 0.0;
  while (stubs < stub_budget) {
    Article a;
    a.community = static_cast<std::uint32_t>(articles.size() % C);
    a.degree = std::min<std::uint64_t>(netmetrics::sample_power_law(rng, spec.alpha, spec.x_min),
                                       members[a.community].size());
    stubs += static_cast<double>(a.degree);
    articles.push_back(std::move(a));
  }
  if (articles.size() < C) throw InputError("synth: more communities than articles");

  // Types: greedy on stub counts so each article type gets its share of citations.
  const std::array<double, 3> art_share{spec.type_mix[0], spec.type_mix[1], spec.type_mix[2]};
  const double art_total = art_share[0] + art_share[1] + art_share[2];
  std::array<double, 3> assigned{};
  double running = 0.0;
  std::map<std::string, std::uint64_t> next_number;
  for (auto& a : articles) {
    running += static_cast<double>(a.degree);
    std::size_t best = 0;
    double best_deficit = -1e300;
    for (std::size_t t = 0; t < 3; ++t) {
      if (art_share[t] <= 0.0) continue;
      const double deficit = art_share[t] / art_total * running - assigned[t];
      if (deficit > best_deficit) {
        best_deficit = deficit;
        best = t;
      }
    }
    assigned[best] += static_cast<double>(a.degree);
    if (best == 0) {
      a.type = CitationType::CodexArticle;
      a.law = std::string(kCodices[a.community % kCodices.size()]);
    } else if (best == 1) {
      a.type = CitationType::LawArticle;
      a.law = std::string(kLawNames[a.community % kLawNames.size()]);
    } else {
      a.type = CitationType::Constitution;
    }
    a.number = std::to_string(++next_number[std::string(textcite::to_string(a.type)) + a.law]);
  }

  // Citing decisions per article: own community except for mixing stubs.
  std::vector<std::vector<Mention>> mentions(n);
  std::vector<std::uint32_t> pool;
  std::vector<char> taken(n, 0);
  std::vector<std::uint32_t> chosen;
  for (std::size_t ai = 0; ai < articles.size(); ++ai) {
    const auto& a = articles[ai];
    std::uint64_t outside = 0;
    for (std::uint64_t k = 0; k < a.degree; ++k) outside += rng.bernoulli(spec.mixing) ? 1 : 0;
    const auto& own = members[a.community];
    const auto inside = std::min<std::uint64_t>(a.degree - outside, own.size());
    outside = std::min<std::uint64_t>(a.degree - inside, n - inside);
    pool = own;
    chosen.clear();
    for (std::uint64_t k = 0; k < inside; ++k) {
      const auto j = k + rng.below(pool.size() - k);
      std::swap(pool[k], pool[j]);
      chosen.push_back(pool[k]);
      taken[pool[k]] = 1;
    }
    for (std::uint64_t k = 0; k < outside; ++k) {
      std::uint32_t d;
      do {
        d = static_cast<std::uint32_t>(rng.below(n));
      } while (taken[d]);
      taken[d] = 1;
      chosen.push_back(d);
    }
    for (auto d : chosen) {
      taken[d] = 0;
      mentions[d].push_back({a.type, ai, {}, {}});
    }
  }

  // Non-article types at rates implied by the realized article volume.
  const double realized = std::accumulate(articles.begin(), articles.end(), 0.0,
                                          [](double s, const Article& a) { return s + static_cast<double>(a.degree); });
  const double total_citations = realized / art_total;
  auto rate = [&](CitationType t) {
    return total_citations * spec.type_mix[textcite::index_of(t)] / static_cast<double>(n);
  };
  auto draw_count = [&](double r) {
    const double whole = std::floor(r);
    return static_cast<std::uint64_t>(whole) + (rng.bernoulli(r - whole) ? 1 : 0);
  };
  std::vector<std::pair<std::string, std::string>> law_numbers;  // number, date
  {
    std::set<std::string> seen;
    while (law_numbers.size() < 60) {
      auto num = std::to_string(100 + rng.below(3900)) + "-" + std::string(kRoman[rng.below(kRoman.size())]);
      if (seen.insert(num).second) law_numbers.emplace_back(num, random_date(rng, 1991, spec.first_year));
    }
  }
  const double case_rate = rate(CitationType::CaseReference);
  const double lbn_rate = rate(CitationType::LawByNumber);
  const double sc_rate = rate(CitationType::SupremeCourtRuling);
  for (std::size_t d = 0; d < n; ++d) {
    std::set<std::string> refs;
    for (auto k = draw_count(case_rate); k > 0; --k) {
      std::string ref;
      do {
        ref = std::to_string(100 + rng.below(900)) + "/" + std::to_string(1 + rng.below(99999)) + "/" +
              pad(static_cast<std::uint64_t>(decisions[d].year % 100), 2);
      } while (!refs.insert(ref).second);
      mentions[d].push_back({CitationType::CaseReference, 0, ref, {}});
    }
    std::set<std::size_t> laws;
    for (auto k = std::min<std::uint64_t>(draw_count(lbn_rate), law_numbers.size()); k > 0; --k) {
      std::size_t li;
      do {
        li = rng.below(law_numbers.size());
      } while (!laws.insert(li).second);
      mentions[d].push_back({CitationType::LawByNumber, 0, law_numbers[li].first, law_numbers[li].second});
    }
    if (draw_count(sc_rate) > 0) mentions[d].push_back({CitationType::SupremeCourtRuling, 0, {}, {}});
  }

  // Render text and record truth.
  out.records.reserve(n);
  for (std::size_t d = 0; d < n; ++d) {
    const auto& dec = decisions[d];
    auto& ms = mentions[d];
    rng.shuffle(std::span<Mention>(ms));
    std::vector<std::string> sentences;
    std::vector<std::string> repeats;
    std::vector<char> done(ms.size(), 0);
    for (std::size_t i = 0; i < ms.size(); ++i) {
      if (done[i]) continue;
      done[i] = 1;
      const auto& m = ms[i];
      std::uint32_t count = 1;
      std::string cite;
      switch (m.type) {
        case CitationType::CodexArticle:
        case CitationType::LawArticle:
        case CitationType::Constitution: {
          const auto& a = articles[m.article];
          // Occasionally fold a second article of the same law into a list.
          std::size_t partner = ms.size();
          if (rng.bernoulli(spec.list_probability)) {
            for (std::size_t j = i + 1; j < ms.size(); ++j) {
              if (!done[j] && textcite::has_article(ms[j].type) && ms[j].type == a.type &&
                  articles[ms[j].article].law == a.law) {
                partner = j;
                break;
              }
            }
          }
          std::string numbers = a.number;
          if (partner < ms.size()) {
            done[partner] = 1;
            numbers += rng.bernoulli(0.5) ? ", " : " та ";
            numbers += articles[ms[partner].article].number;
          }
          cite = article_phrase(rng, a, numbers, partner < ms.size());
          if (partner < ms.size()) {
            const auto& b = articles[ms[partner].article];
            out.truth.push_back({dec.id, b.type, *textcite::normalize_law_ref(b.type, b.law.empty() ? "Конституції" : b.law),
                                 b.number, 1});
          } else if (rng.bernoulli(spec.repeat_probability)) {
            count = 2;
            repeats.push_back(render_sentence(rng, article_phrase(rng, a, a.number, false)));
          }
          out.truth.push_back({dec.id, a.type,
                               *textcite::normalize_law_ref(a.type, a.law.empty() ? "Конституції" : a.law),
                               a.number, count});
          break;
        }
        case CitationType::CaseReference:
          cite = "висновків у справі № " + m.ref;
          out.truth.push_back({dec.id, m.type, m.ref, std::nullopt, 1});
          break;
        case CitationType::LawByNumber:
          cite = "Закону України від " + m.date + " № " + m.ref;
          out.truth.push_back({dec.id, m.type, *textcite::normalize_law_ref(m.type, m.ref), std::nullopt, 1});
          break;
        case CitationType::SupremeCourtRuling:
          cite = rng.bernoulli(0.5) ? "висновків, викладених у постанові Великої Палати Верховного Суду"
                                    : "правової позиції, викладеної у постанові Верховного Суду";
          out.truth.push_back({dec.id, m.type, std::string(textcite::kSupremeCourtRef), std::nullopt, 1});
          break;
      }
      sentences.push_back(render_sentence(rng, cite));
    }
    for (auto& r : repeats) sentences.push_back(std::move(r));

    std::string text = std::string(kFiller[rng.below(kFiller.size())]);
    for (const auto& s : sentences) {
      text += ' ';
      text += s;
      if (rng.bernoulli(0.5)) {
        text += ' ';
        text += kFiller[rng.below(kFiller.size())];
      }
    }
    out.records.push_back({dec.id, dec.year, dec.kind, std::move(text)});
  }
  std::sort(out.records.begin(), out.records.end(),
            [](const CorpusRecord& a, const CorpusRecord& b) { return a.doc_id < b.doc_id; });
  merge_edges(out.truth);

  for (const auto& a : articles) {
    if (a.degree == 0) continue;
    const auto law = *textcite::normalize_law_ref(a.type, a.law.empty() ? "Конституції" : a.law);
    out.communities.emplace_back(textcite::legislation_key(law, a.number), a.community);
  }
  std::sort(out.communities.begin(), out.communities.end());
  return out;
}

// Writes decisions_YYYY.jsonl partitions plus truth_edges.tsv,
// truth_decisions.tsv and truth_communities.tsv. Returns the partition paths.
inline std::vector<std::filesystem::path> write_synth_corpus(const SynthCorpus& c, const std::filesystem::path& dir) {
  std::filesystem::create_directories(dir / "corpus");
  std::map<int, std::vector<const CorpusRecord*>> by_year;
  for (const auto& r : c.records) by_year[r.year].push_back(&r);
  std::vector<std::filesystem::path> paths;
  auto open = [](const std::filesystem::path& p) {
    std::ofstream os(p, std::ios::binary | std::ios::trunc);
    if (!os) throw InputError("cannot write " + p.string());
    return os;
  };
  for (const auto& [year, recs] : by_year) {
    const auto p = dir / "corpus" / ("decisions_" + std::to_string(year) + ".jsonl");
    auto os = open(p);
    for (const auto* r : recs) os << to_json_line(*r) << '\n';
    paths.push_back(p);
  }
  {
    auto os = open(dir / "truth_edges.tsv");
    write_edges_tsv(os, c.truth);
  }
  {
    DecisionTable t;
    for (const auto& r : c.records) t.emplace_back(r.doc_id, DecisionMeta{r.year, r.justice_kind});
    auto os = open(dir / "truth_decisions.tsv");
    write_decisions_tsv(os, t);
  }
  {
    auto os = open(dir / "truth_communities.tsv");
    for (const auto& [key, comm] : c.communities) os << key << '\t' << comm << '\n';
  }
  return paths;
}

inline std::vector<std::pair<std::string, std::uint32_t>> read_communities_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read community file: " + path.string());
  std::vector<std::pair<std::string, std::uint32_t>> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto tab = line.rfind('\t');
    if (tab == std::string::npos) throw InputError(path.string() + ": malformed community row");
    try {
      out.emplace_back(line.substr(0, tab), static_cast<std::uint32_t>(std::stoul(line.substr(tab + 1))));
    } catch (const std::logic_error&) {
      throw InputError(path.string() + ": malformed community row");
    }
  }
  return out;
}

}  // namespace lexcite::pipeline
