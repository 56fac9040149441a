#pragma once

// Extraction quality checks: precision of re-extracted citations against a
// legislation index with Wilson intervals, and a recall proxy comparing
// stored citations to a fresh extraction.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <map>
#include <numeric>
#include <optional>
#include <ostream>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <tuple>
#include <unordered_set>
#include <vector>

#include "lexcite/csv.hpp"
#include "lexcite/errors.hpp"
#include "lexcite/random.hpp"
#include "lexcite/textcite.hpp"

namespace lexcite::validator {

using textcite::CitationEdge;
using textcite::CitationType;

struct WilsonInterval {
  double low = 0.0;
  double high = 0.0;
};

inline WilsonInterval wilson_interval(std::uint64_t successes, std::uint64_t n, double z = 1.96) {
  if (n == 0) throw InputError("wilson_interval: n must be positive");
  if (successes > n) throw InputError("wilson_interval: successes exceed n");
  const double nn = static_cast<double>(n);
  const double p = static_cast<double>(successes) / nn;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / nn;
  const double centre = (p + z2 / (2.0 * nn)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / nn + z2 / (4.0 * nn * nn)) / denom;
  return {std::clamp(centre - half, 0.0, 1.0), std::clamp(centre + half, 0.0, 1.0)};
}

struct ValidationSample {
  std::string decision_id;
  std::string text;
  std::vector<CitationEdge> stored;  // only needed for the recall proxy
};

using ExtractFn = std::function<std::vector<CitationEdge>(std::string_view text, std::string_view id)>;

inline ExtractFn default_extractor() {
  return [](std::string_view text, std::string_view id) { return textcite::extract_citations(text, id); };
}

// Case references and Supreme Court rulings are accepted when well formed;
// everything else must resolve to a key in the index.
inline bool indexed_type(CitationType t) {
  return t != CitationType::CaseReference && t != CitationType::SupremeCourtRuling;
}

struct TypePrecision {
  std::uint64_t validated = 0;
  std::uint64_t total = 0;
  std::optional<WilsonInterval> wilson;

  std::optional<double> precision() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(validated) / static_cast<double>(total);
  }
};

struct Mismatch {
  std::string decision_id;
  CitationEdge edge;
};

enum class UnmatchedReason { RangeNormalization, PatternGap, Other };

constexpr std::string_view to_string(UnmatchedReason r) {
  switch (r) {
    case UnmatchedReason::RangeNormalization: return "range_normalization";
    case UnmatchedReason::PatternGap: return "pattern_gap";
    case UnmatchedReason::Other: return "other";
  }
  return "other";
}

struct UnmatchedCitation {
  std::string decision_id;
  CitationEdge stored;
  UnmatchedReason reason = UnmatchedReason::Other;
};

struct RecallReport {
  std::uint64_t stored_total = 0;
  std::uint64_t matched_strict = 0;
  std::uint64_t matched_range_aware = 0;
  std::optional<double> strict;
  std::optional<double> range_aware;
  std::vector<UnmatchedCitation> unmatched;  // everything missed under strict matching
};

struct ValidationReport {
  std::array<TypePrecision, textcite::kCitationTypeCount> per_type{};
  std::uint64_t validated = 0;
  std::uint64_t total = 0;
  std::optional<WilsonInterval> wilson;
  double z = 1.96;
  std::vector<Mismatch> mismatches;
  std::optional<RecallReport> recall;

  std::optional<double> precision() const {
    if (total == 0) return std::nullopt;
    return static_cast<double>(validated) / static_cast<double>(total);
  }

  void write_table(std::ostream& os) const {
    auto row = [&](std::string_view name, std::uint64_t v, std::uint64_t t, const std::optional<WilsonInterval>& w) {
      os << name << '\t' << v << '\t' << t << '\t';
      if (t > 0) {
        os << static_cast<double>(v) / static_cast<double>(t) << '\t' << w->low << '\t' << w->high;
      } else {
        os << "-\t-\t-";
      }
      os << '\n';
    };
    os << "type\tvalidated\ttotal\tprecision\twilson_low\twilson_high\n";
    for (auto t : textcite::kAllCitationTypes) {
      const auto& tp = per_type[textcite::index_of(t)];
      row(textcite::to_string(t), tp.validated, tp.total, tp.wilson);
    }
    row("overall", validated, total, wilson);
    if (recall) {
      os << "recall_strict\t";
      if (recall->strict) os << *recall->strict; else os << '-';
      os << "\nrecall_range_aware\t";
      if (recall->range_aware) os << *recall->range_aware; else os << '-';
      os << '\n';
    }
  }

  void write_mismatches_csv(std::ostream& os) const {
    os << "decision_id,type,law_ref,article_ref\n";
    for (const auto& m : mismatches) {
      os << csv_field(m.decision_id) << ',' << textcite::to_string(m.edge.type) << ',' << csv_field(m.edge.law_ref)
         << ',' << csv_field(m.edge.article_ref.value_or("")) << '\n';
    }
  }
};

inline ValidationReport precision_eval(std::span<const ValidationSample> samples,
                                       const std::unordered_set<std::string>& index,
                                       const ExtractFn& extract = default_extractor(), double z = 1.96) {
  ValidationReport r;
  r.z = z;
  for (const auto& s : samples) {
    for (const auto& e : extract(s.text, s.decision_id)) {
      auto& tp = r.per_type[textcite::index_of(e.type)];
      ++tp.total;
      ++r.total;
      const bool ok = !indexed_type(e.type) || index.contains(textcite::legislation_key(e));
      if (ok) {
        ++tp.validated;
        ++r.validated;
      } else {
        r.mismatches.push_back({s.decision_id, e});
      }
    }
  }
  for (auto& tp : r.per_type) {
    if (tp.total > 0) tp.wilson = wilson_interval(tp.validated, tp.total, z);
  }
  if (r.total > 0) r.wilson = wilson_interval(r.validated, r.total, z);
  return r;
}

namespace detail {

using EdgeKey = std::tuple<CitationType, std::string, std::string>;

inline EdgeKey stored_key(const CitationEdge& e) {
  auto law = textcite::normalize_law_ref(e.type, e.law_ref).value_or(e.law_ref);
  std::string art(utf8::trim(e.article_ref.value_or("")));
  return {e.type, std::move(law), std::move(art)};
}

}  // namespace detail

// Strict: the stored (type, law_ref, article_ref) must reappear verbatim.
// Range-aware: a stored article field that is a list or range counts as
// matched when every article it expands to reappears.
inline RecallReport recall_proxy(std::span<const ValidationSample> samples,
                                 const ExtractFn& extract = default_extractor()) {
  RecallReport r;
  for (const auto& s : samples) {
    if (s.stored.empty()) continue;
    std::set<detail::EdgeKey> found;
    std::set<std::pair<CitationType, std::string>> found_laws;
    for (const auto& e : extract(s.text, s.decision_id)) {
      found.insert({e.type, e.law_ref, e.article_ref.value_or("")});
      found_laws.insert({e.type, e.law_ref});
    }
    for (const auto& st : s.stored) {
      ++r.stored_total;
      const auto key = detail::stored_key(st);
      const auto& [type, law, art] = key;
      if (found.contains(key)) {
        ++r.matched_strict;
        ++r.matched_range_aware;
        continue;
      }
      bool range_ok = false;
      if (!art.empty()) {
        const auto parts = textcite::expand_article_ranges(art);
        range_ok = !parts.empty() && std::all_of(parts.begin(), parts.end(), [&](const std::string& a) {
          return found.contains({type, law, a});
        });
      }
      UnmatchedReason reason = UnmatchedReason::Other;
      if (range_ok) {
        ++r.matched_range_aware;
        reason = UnmatchedReason::RangeNormalization;
      } else if (!found_laws.contains({type, law})) {
        reason = UnmatchedReason::PatternGap;
      }
      r.unmatched.push_back({s.decision_id, st, reason});
    }
  }
  if (r.stored_total > 0) {
    const double n = static_cast<double>(r.stored_total);
    r.strict = static_cast<double>(r.matched_strict) / n;
    r.range_aware = static_cast<double>(r.matched_range_aware) / n;
  }
  return r;
}

inline void write_unmatched_csv(std::ostream& os, const RecallReport& r) {
  os << "decision_id,type,law_ref,article_ref,reason\n";
  for (const auto& u : r.unmatched) {
    os << csv_field(u.decision_id) << ',' << textcite::to_string(u.stored.type) << ',' << csv_field(u.stored.law_ref)
       << ',' << csv_field(u.stored.article_ref.value_or("")) << ',' << to_string(u.reason) << '\n';
  }
}

// Draws n sample indices without replacement. With strata, allocation is
// proportional to stratum size (largest remainder), sampled within each.
inline std::vector<std::size_t> sample_indices(std::size_t population, std::size_t n, std::uint64_t seed,
                                               std::span<const std::uint64_t> strata = {}) {
  if (!strata.empty() && strata.size() != population) throw InputError("sample_indices: strata length mismatch");
  n = std::min(n, population);
  Rng rng(seed);
  std::vector<std::size_t> out;
  if (strata.empty()) {
    std::vector<std::size_t> idx(population);
    std::iota(idx.begin(), idx.end(), std::size_t{0});
    for (std::size_t i = 0; i < n; ++i) {
      const auto j = i + static_cast<std::size_t>(rng.below(population - i));
      std::swap(idx[i], idx[j]);
    }
    out.assign(idx.begin(), idx.begin() + static_cast<std::ptrdiff_t>(n));
  } else {
    std::map<std::uint64_t, std::vector<std::size_t>> groups;
    for (std::size_t i = 0; i < population; ++i) groups[strata[i]].push_back(i);
    std::vector<std::pair<double, std::uint64_t>> remainders;
    std::map<std::uint64_t, std::size_t> quota;
    std::size_t assigned = 0;
    for (const auto& [k, members] : groups) {
      const double exact = static_cast<double>(n) * static_cast<double>(members.size()) / static_cast<double>(population);
      quota[k] = static_cast<std::size_t>(exact);
      assigned += quota[k];
      remainders.emplace_back(exact - std::floor(exact), k);
    }
    std::stable_sort(remainders.begin(), remainders.end(), [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t i = 0; assigned < n && i < remainders.size(); ++i, ++assigned) ++quota[remainders[i].second];
    for (auto& [k, members] : groups) {
      const auto q = quota[k];
      for (std::size_t i = 0; i < q; ++i) {
        const auto j = i + static_cast<std::size_t>(rng.below(members.size() - i));
        std::swap(members[i], members[j]);
        out.push_back(members[i]);
      }
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace lexcite::validator
