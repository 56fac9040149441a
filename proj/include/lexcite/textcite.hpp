#pragma once

// Legislation citation recognition for Ukrainian court-decision text.
//
// Six citation shapes are recognized:
//
//   codex article      "ст. 625 ЦК України", "частина 1 статті 3 КАС України"
//   named law article  "стаття 3 Закону України «Про ринок електричної енергії»"
//   constitution       "стаття 124 Конституції України"
//   case reference     "справа № 200/1234/24"
//   law by number      "Закон України від 01.01.2020 № 123-IX"
//   Supreme Court      "постанова Великої Палати ВС", "постанова Пленуму Верховного Суду"
//
// Matching runs on raw UTF-8 bytes. Article lists ("статті 3, 5, 7–9 та 12")
// are expanded into one reference per article, and repeated references inside
// one decision are folded into a count.

#include <algorithm>
#include <array>
#include <charconv>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include <boost/regex.hpp>

#include "lexcite/errors.hpp"
#include "lexcite/utf8.hpp"

namespace lexcite::textcite {

enum class CitationType : std::uint8_t {
  CodexArticle = 0,
  LawArticle = 1,
  Constitution = 2,
  CaseReference = 3,
  LawByNumber = 4,
  SupremeCourtRuling = 5,
};

inline constexpr std::size_t kCitationTypeCount = 6;

inline constexpr std::array<CitationType, kCitationTypeCount> kAllCitationTypes{
    CitationType::CodexArticle,  CitationType::LawArticle,  CitationType::Constitution,
    CitationType::CaseReference, CitationType::LawByNumber, CitationType::SupremeCourtRuling,
};

inline constexpr std::string_view kConstitutionRef = "CONSTITUTION";
inline constexpr std::string_view kSupremeCourtRef = "SC_RULING";

constexpr std::string_view to_string(CitationType t) {
  switch (t) {
    case CitationType::CodexArticle: return "codex_article";
    case CitationType::LawArticle: return "law_article";
    case CitationType::Constitution: return "constitution";
    case CitationType::CaseReference: return "case_reference";
    case CitationType::LawByNumber: return "law_by_number";
    case CitationType::SupremeCourtRuling: return "supreme_court_ruling";
  }
  return "unknown";
}

inline std::optional<CitationType> parse_citation_type(std::string_view s) {
  for (auto t : kAllCitationTypes) {
    if (to_string(t) == s) return t;
  }
  return std::nullopt;
}

constexpr std::size_t index_of(CitationType t) { return static_cast<std::size_t>(t); }

// Types whose citations carry an article number.
constexpr bool has_article(CitationType t) {
  return t == CitationType::CodexArticle || t == CitationType::LawArticle ||
         t == CitationType::Constitution;
}

struct CitationEdge {
  std::string decision_id;
  CitationType type = CitationType::CodexArticle;
  std::string law_ref;
  std::optional<std::string> article_ref;
  std::uint32_t count = 1;

  bool operator==(const CitationEdge&) const = default;
  auto operator<=>(const CitationEdge&) const = default;
};

// The 18 codex abbreviations and the node key each one folds to.
class CodexTable {
 public:
  struct Entry {
    std::string_view abbreviation;
    std::string_view canonical;
  };

  static const CodexTable& instance() {
    static const CodexTable table;
    return table;
  }

  std::span<const Entry> entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

  std::optional<std::string_view> canonical(std::string_view abbreviation) const {
    for (const auto& e : entries_) {
      if (e.abbreviation == abbreviation) return e.canonical;
    }
    return std::nullopt;
  }

  bool is_canonical(std::string_view key) const {
    return std::any_of(entries_.begin(), entries_.end(),
                       [&](const Entry& e) { return e.canonical == key; });
  }

 private:
  CodexTable() = default;

  // КАСУ is the long form of КАС and folds onto it.
  std::array<Entry, 18> entries_{{
      {"ЦК", "ЦК"},   {"КК", "КК"},   {"ГК", "ГК"},     {"ГПК", "ГПК"},   {"КПК", "КПК"},
      {"КАС", "КАС"}, {"ЦПК", "ЦПК"}, {"КЗпП", "КЗпП"}, {"СК", "СК"},     {"ЗК", "ЗК"},
      {"ПК", "ПК"},   {"МК", "МК"},   {"БК", "БК"},     {"ВК", "ВК"},     {"ЛК", "ЛК"},
      {"ЖК", "ЖК"},   {"КУпАП", "КУпАП"}, {"КАСУ", "КАС"},
  }};
};

struct RangeDiagnostics {
  std::size_t reversed_ranges = 0;
};

// Ranges wider than this are not expanded; both endpoints are kept instead.
inline constexpr std::uint64_t kMaxRangeSpan = 100000;

namespace detail {

enum class TokenKind { Number, Dash, Separator };

struct Token {
  TokenKind kind;
  std::string text;
  bool spaced = false;  // dash only: whitespace on either side
};

inline std::vector<Token> tokenize_article_list(std::string_view s) {
  std::vector<Token> tokens;
  std::size_t pos = 0;
  bool space_before = false;
  while (pos < s.size()) {
    const auto c = static_cast<unsigned char>(s[pos]);
    if (c >= '0' && c <= '9') {
      std::size_t end = pos;
      while (end < s.size() && s[end] >= '0' && s[end] <= '9') ++end;
      tokens.push_back({TokenKind::Number, std::string(s.substr(pos, end - pos))});
      pos = end;
      space_before = false;
      continue;
    }
    const std::size_t start = pos;
    bool valid = true;
    const char32_t cp = utf8::next_codepoint(s, pos, valid);
    if (valid && utf8::is_space(cp)) {
      space_before = true;
      if (!tokens.empty() && tokens.back().kind == TokenKind::Dash) tokens.back().spaced = true;
      continue;
    }
    if (valid && (cp == U'-' || cp == 0x2013 || cp == 0x2014)) {
      tokens.push_back({TokenKind::Dash, std::string(s.substr(start, pos - start)), space_before});
    } else {
      // Comma, conjunction letters, anything else: acts as a list separator.
      if (tokens.empty() || tokens.back().kind != TokenKind::Separator) {
        tokens.push_back({TokenKind::Separator, {}});
      }
    }
    space_before = false;
  }
  return tokens;
}

inline std::optional<std::uint64_t> parse_number(std::string_view digits) {
  std::uint64_t v = 0;
  auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), v);
  if (ec != std::errc{} || ptr != digits.data() + digits.size()) return std::nullopt;
  return v;
}

inline std::string canonical_number(const std::string& digits) {
  if (auto v = parse_number(digits)) return std::to_string(*v);
  return digits;
}

}  // namespace detail

// Expands the article-list fragment of a citation into individual article
// numbers. Commas, "та"/"і"/"й" and dash ranges all separate items. An
// unspaced dash whose right side is shorter than its left ("111-1") forms a
// suffixed article instead of a range.
inline std::vector<std::string> expand_article_ranges(std::string_view text,
                                                      RangeDiagnostics* diag = nullptr) {
  using detail::TokenKind;
  const auto tokens = detail::tokenize_article_list(text);
  std::vector<std::string> out;
  std::size_t i = 0;
  while (i < tokens.size()) {
    if (tokens[i].kind != TokenKind::Number) {
      ++i;
      continue;
    }
    const std::string& left = tokens[i].text;
    if (i + 2 < tokens.size() && tokens[i + 1].kind == TokenKind::Dash &&
        tokens[i + 2].kind == TokenKind::Number) {
      const std::string& right = tokens[i + 2].text;
      if (!tokens[i + 1].spaced && right.size() < left.size()) {
        out.push_back(detail::canonical_number(left) + "-" + right);
        i += 3;
        continue;
      }
      const auto a = detail::parse_number(left);
      const auto b = detail::parse_number(right);
      if (a && b && *a <= *b && *b - *a <= kMaxRangeSpan) {
        for (std::uint64_t v = *a; v <= *b; ++v) out.push_back(std::to_string(v));
      } else {
        if (diag != nullptr) ++diag->reversed_ranges;
        out.push_back(detail::canonical_number(left));
        out.push_back(detail::canonical_number(right));
      }
      i += 3;
      continue;
    }
    out.push_back(detail::canonical_number(left));
    ++i;
  }
  return out;
}

namespace detail {

inline bool looks_like_law_number(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size() && s[i] >= '0' && s[i] <= '9') ++i;
  if (i == 0) return false;
  if (i == s.size()) return true;
  if (s[i] != '-' || i + 1 == s.size()) return false;
  for (std::size_t j = i + 1; j < s.size(); ++j) {
    const char c = s[j];
    if (std::string_view("IVXLivxl").find(c) == std::string_view::npos) return false;
  }
  return true;
}

inline std::string upper_ascii(std::string_view s) {
  std::string out(s);
  for (auto& c : out) {
    if (c >= 'a' && c <= 'z') c = static_cast<char>(c - 'a' + 'A');
  }
  return out;
}

inline std::string strip_spaces(std::string_view s) {
  std::string out;
  std::size_t pos = 0;
  while (pos < s.size()) {
    const std::size_t start = pos;
    bool valid = true;
    const char32_t cp = utf8::next_codepoint(s, pos, valid);
    if (valid && utf8::is_space(cp)) continue;
    out.append(s.substr(start, pos - start));
  }
  return out;
}

}  // namespace detail

// Maps the captured law-identifying fragment onto a node key. Returns nullopt
// only for an unrecognized codex abbreviation.
inline std::optional<std::string> normalize_law_ref(CitationType type, std::string_view raw) {
  raw = utf8::trim(raw);
  switch (type) {
    case CitationType::CodexArticle: {
      std::string_view abbr = raw;
      constexpr std::string_view suffix = "України";
      if (abbr.ends_with(suffix)) abbr = utf8::trim(abbr.substr(0, abbr.size() - suffix.size()));
      if (auto key = CodexTable::instance().canonical(abbr)) return std::string(*key);
      return std::nullopt;
    }
    case CitationType::Constitution:
      return std::string(kConstitutionRef);
    case CitationType::SupremeCourtRuling:
      return std::string(kSupremeCourtRef);
    case CitationType::CaseReference:
      return std::string(raw);
    case CitationType::LawByNumber:
      return detail::upper_ascii(detail::strip_spaces(raw));
    case CitationType::LawArticle: {
      const std::string compact = detail::strip_spaces(raw);
      if (detail::looks_like_law_number(compact)) return detail::upper_ascii(compact);
      return utf8::fold_name(raw);
    }
  }
  return std::nullopt;
}

struct ExtractionDiagnostics {
  std::size_t raw_matches = 0;
  std::size_t reversed_ranges = 0;
  std::size_t overlaps_suppressed = 0;
};

// Compiled pattern set. Immutable after construction; `extract` is reentrant.
class Extractor {
 public:
  Extractor() {
    const std::string ws = "(?:\\s|\\xC2\\xA0)+";
    const std::string ows = "(?:\\s|\\xC2\\xA0)*";
    const std::string not_after_letter = "(?<![\\xD0-\\xD2][\\x80-\\xBF])(?<![A-Za-z0-9_])";
    const std::string not_before_letter = "(?![\\xD0-\\xD2]|[A-Za-z0-9_])";
    const std::string dash = "(?:-|\\xE2\\x80\\x93|\\xE2\\x80\\x94)";
    const std::string number = "\\d{1,5}(?:-\\d{1,3})?";
    const std::string sep = "(?:" + ows + "," + ows + "|" + ows + dash + ows + "|" + ws +
                            "(?:та|і|й)" + ws + ")";
    const std::string law_number = "(\\d{1,5}(?:-[IVXLivxl]{1,6})?)(?![\\d\\-]|[A-Za-z]|[\\xD0-\\xD2])";
    const std::string date = "\\d{1,2}\\.\\d{1,2}\\.\\d{4}(?:" + ws + "(?:року|р\\.))?";

    std::string codex_alt;
    {
      // Longest abbreviations first so that КАСУ is not read as КАС + У.
      std::vector<std::string_view> abbrs;
      for (const auto& e : CodexTable::instance().entries()) abbrs.push_back(e.abbreviation);
      std::stable_sort(abbrs.begin(), abbrs.end(),
                       [](auto a, auto b) { return a.size() > b.size(); });
      for (auto a : abbrs) {
        if (!codex_alt.empty()) codex_alt += "|";
        codex_alt += a;
      }
    }

    // Groups: 1 article list, 2 codex, 3 constitution, 4 law name «», 5 law
    // name "", 6 law number.
    const std::string article =
        not_after_letter + "(?:С|с)т(?:\\.|атт(?:ями|ях|ею|ю|і|я)|атей)" + ows + "(" + number +
        "(?:" + sep + number + ")*)" + ws + "(?:" +
        "(" + codex_alt + ")" + not_before_letter + "(?:" + ws + "України" + not_before_letter +
        ")?" + "|(Конституції)" + not_before_letter + "(?:" + ws + "України" +
        not_before_letter + ")?" + "|Закону(?:" + ws + "України)?" + ws +
        "(?:«([^\\n]{1,400}?)»|\"([^\"\\n]{1,400}?)\"|(?:від" + ws + date + ws + ")?№" + ows +
        law_number + "))";

    const std::string by_number = not_after_letter + "(?:З|з)акон(?:у|ом|і)?" + ws +
                                  "України(?:" + ws + "«[^\\n]{1,400}?»)?" + ws + "від" + ws +
                                  date + ws + "№" + ows + law_number;

    const std::string case_ref = not_after_letter + "(?:С|с)прав(?:ою|ах|а|і|у|и)" + ows + "№" +
                                 ows + "(\\d{1,6}/\\d{1,6}/\\d{2})(?![\\d/])";

    const std::string ruling = not_after_letter + "(?:П|п)останов(?:ою|ах|а|і|у|и)" + ws +
                               "(?:(?:В|в)еликої" + ws + "Палати" + ws + "|Пленуму" + ws +
                               ")?(?:ВС|Верховного" + ws + "Суду)" + not_before_letter;

    article_ = boost::regex(article, boost::regex::perl | boost::regex::optimize);
    by_number_ = boost::regex(by_number, boost::regex::perl | boost::regex::optimize);
    case_ref_ = boost::regex(case_ref, boost::regex::perl | boost::regex::optimize);
    ruling_ = boost::regex(ruling, boost::regex::perl | boost::regex::optimize);
  }

  static const Extractor& shared() {
    static const Extractor extractor;
    return extractor;
  }

  // All citations in `text`, ranges expanded, repeats folded into counts.
  // Output is ordered by first occurrence offset, then citation type.
  std::vector<CitationEdge> extract(std::string_view text, std::string_view decision_id,
                                    ExtractionDiagnostics* diag = nullptr) const {
    if (decision_id.empty()) throw InputError("extract_citations: empty decision_id");

    std::vector<Hit> hits;
    std::vector<std::pair<std::size_t, std::size_t>> claimed;
    ExtractionDiagnostics local;

    auto overlaps = [&](std::size_t b, std::size_t e) {
      return std::any_of(claimed.begin(), claimed.end(),
                         [&](const auto& span) { return b < span.second && span.first < e; });
    };

    // Passes run in priority order; a later pass never claims bytes an earlier
    // one matched (the law-number tail of a law-article citation, say).
    for_each_match(article_, text, [&](const Match& m, std::size_t b, std::size_t e) {
      ++local.raw_matches;
      claimed.emplace_back(b, e);
      CitationType type;
      std::string law_ref;
      if (m[2].matched) {
        type = CitationType::CodexArticle;
        law_ref = *normalize_law_ref(type, m[2].str());
      } else if (m[3].matched) {
        type = CitationType::Constitution;
        law_ref = std::string(kConstitutionRef);
      } else {
        type = CitationType::LawArticle;
        const auto& raw = m[4].matched ? m[4] : (m[5].matched ? m[5] : m[6]);
        law_ref = *normalize_law_ref(type, raw.str());
        if (law_ref.empty()) return;
      }
      RangeDiagnostics rd;
      for (auto& art : expand_article_ranges(m[1].str(), &rd)) {
        hits.push_back({b, type, law_ref, std::move(art)});
      }
      local.reversed_ranges += rd.reversed_ranges;
    });

    auto single = [&](const boost::regex& re, CitationType type, int group) {
      for_each_match(re, text, [&](const Match& m, std::size_t b, std::size_t e) {
        if (overlaps(b, e)) {
          ++local.overlaps_suppressed;
          return;
        }
        ++local.raw_matches;
        claimed.emplace_back(b, e);
        const std::string raw = group > 0 ? m[group].str() : std::string();
        hits.push_back({b, type, *normalize_law_ref(type, raw), std::nullopt});
      });
    };
    single(by_number_, CitationType::LawByNumber, 1);
    single(case_ref_, CitationType::CaseReference, 1);
    single(ruling_, CitationType::SupremeCourtRuling, 0);

    std::stable_sort(hits.begin(), hits.end(), [](const Hit& a, const Hit& b) {
      if (a.offset != b.offset) return a.offset < b.offset;
      return a.type < b.type;
    });

    std::vector<CitationEdge> out;
    std::unordered_map<std::string, std::size_t> index;
    for (auto& h : hits) {
      std::string key;
      key.reserve(h.law_ref.size() + 16);
      key.push_back(static_cast<char>('0' + index_of(h.type)));
      key.push_back('\x1f');
      key += h.law_ref;
      key.push_back('\x1f');
      if (h.article) key += *h.article;
      auto [it, inserted] = index.try_emplace(std::move(key), out.size());
      if (inserted) {
        out.push_back({std::string(decision_id), h.type, std::move(h.law_ref),
                       std::move(h.article), 1});
      } else {
        ++out[it->second].count;
      }
    }

    if (diag != nullptr) {
      diag->raw_matches += local.raw_matches;
      diag->reversed_ranges += local.reversed_ranges;
      diag->overlaps_suppressed += local.overlaps_suppressed;
    }
    return out;
  }

 private:
  using Match = boost::match_results<const char*>;

  struct Hit {
    std::size_t offset;
    CitationType type;
    std::string law_ref;
    std::optional<std::string> article;
  };

  template <typename F>
  static void for_each_match(const boost::regex& re, std::string_view text, F&& f) {
    const char* begin = text.data();
    const char* end = text.data() + text.size();
    boost::regex_iterator<const char*> it(begin, end, re), last;
    for (; it != last; ++it) {
      const auto& m = *it;
      const auto b = static_cast<std::size_t>(m[0].first - begin);
      const auto e = static_cast<std::size_t>(m[0].second - begin);
      f(m, b, e);
    }
  }

  boost::regex article_;
  boost::regex by_number_;
  boost::regex case_ref_;
  boost::regex ruling_;
};

inline std::vector<CitationEdge> extract_citations(std::string_view text,
                                                   std::string_view decision_id) {
  return Extractor::shared().extract(text, decision_id);
}

// Composite node key "law_ref::article_ref" (article part empty when absent).
inline std::string legislation_key(std::string_view law_ref,
                                   const std::optional<std::string>& article_ref) {
  std::string key(law_ref);
  key += "::";
  if (article_ref) key += *article_ref;
  return key;
}

inline std::string legislation_key(const CitationEdge& e) {
  return legislation_key(e.law_ref, e.article_ref);
}

// Splits a composite key back into law_ref and article_ref.
inline std::pair<std::string_view, std::string_view> split_legislation_key(std::string_view key) {
  const auto pos = key.rfind("::");
  if (pos == std::string_view::npos) return {key, {}};
  return {key.substr(0, pos), key.substr(pos + 2)};
}

}  // namespace lexcite::textcite
