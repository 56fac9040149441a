#pragma once

// Temporal analytics over G_B: yearly volumes, thresholded year-over-year
// regime changes per codex, citation entropy, emergent articles and
// cross-domain bridge articles.
//
// A "citation" here is one distinct (decision, legislation) edge unless a
// function says otherwise; entropy defaults to counting every mention.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <map>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <vector>

#include "lexcite/csv.hpp"
#include "lexcite/errors.hpp"
#include "lexcite/graphstore.hpp"

namespace lexcite::chrono {

using graphstore::BipartiteGraph;
using graphstore::kUnknownYear;
using textcite::CitationType;

struct YearStats {
  std::uint64_t decisions = 0;
  std::uint64_t edges = 0;
  double citations_per_decision = 0.0;
  std::array<std::uint64_t, textcite::kCitationTypeCount> per_type{};
};

// Keyed by year; decisions without a year land under kUnknownYear.
using AnnualSeries = std::map<int, YearStats>;

inline AnnualSeries annual_series(const BipartiteGraph& g) {
  AnnualSeries out;
  for (std::size_t d = 0; d < g.decision_count(); ++d) {
    auto& s = out[g.meta(d).year];
    ++s.decisions;
    for (const auto& nb : g.citations(d)) {
      ++s.edges;
      ++s.per_type[textcite::index_of(g.legislation(nb.node).type)];
    }
  }
  for (auto& [year, s] : out) {
    s.citations_per_decision = static_cast<double>(s.edges) / static_cast<double>(s.decisions);
  }
  return out;
}

inline void write_annual_csv(std::ostream& os, const AnnualSeries& series) {
  os << "year,decisions,edges,citations_per_decision";
  for (auto t : textcite::kAllCitationTypes) os << ',' << textcite::to_string(t);
  os << '\n';
  for (const auto& [year, s] : series) {
    os << year << ',' << s.decisions << ',' << s.edges << ',' << s.citations_per_decision;
    for (auto c : s.per_type) os << ',' << c;
    os << '\n';
  }
}

using YearValues = std::map<int, double>;

// Per-codex citation edges per year, with missing years between the first
// and last known year filled with zero. With `per_decision`, each count is
// divided by that year's decision volume.
inline std::map<std::string, YearValues> codex_series(const BipartiteGraph& g, bool per_decision = false) {
  const auto& codices = textcite::CodexTable::instance();
  std::map<std::string, YearValues> out;
  std::map<int, double> volume;
  int lo = 0, hi = -1;
  for (std::size_t d = 0; d < g.decision_count(); ++d) {
    const int y = g.meta(d).year;
    if (y == kUnknownYear) continue;
    volume[y] += 1.0;
    lo = hi < lo ? y : std::min(lo, y);
    hi = std::max(hi, y);
    for (const auto& nb : g.citations(d)) {
      const auto& node = g.legislation(nb.node);
      if (node.type != CitationType::CodexArticle) continue;
      const auto law = textcite::split_legislation_key(node.key).first;
      if (!codices.is_canonical(law)) continue;
      out[std::string(law)][y] += 1.0;
    }
  }
  for (auto& [codex, series] : out) {
    for (int y = lo; y <= hi; ++y) series.try_emplace(y, 0.0);
    if (per_decision) {
      for (auto& [y, v] : series) v = volume[y] > 0.0 ? v / volume[y] : 0.0;
    }
  }
  return out;
}

enum class RegimeLabel { None, Surge, Drop, Transition };

constexpr std::string_view to_string(RegimeLabel l) {
  switch (l) {
    case RegimeLabel::None: return "NONE";
    case RegimeLabel::Surge: return "SURGE";
    case RegimeLabel::Drop: return "DROP";
    case RegimeLabel::Transition: return "TRANSITION";
  }
  return "NONE";
}

struct RegimeEntry {
  std::string series;
  int year = 0;
  std::optional<double> yoy_pct;  // undefined when the previous year is 0
  bool flagged = false;           // |yoy| >= threshold
  RegimeLabel label = RegimeLabel::None;
};

struct RegimeOptions {
  double threshold_pct = 100.0;
  // A surge followed by a change at or below this is a TRANSITION.
  double dip_pct = -50.0;
};

struct RegimeChangeReport {
  std::vector<RegimeEntry> entries;

  std::vector<RegimeEntry> flagged() const {
    std::vector<RegimeEntry> out;
    for (const auto& e : entries) {
      if (e.flagged || e.label == RegimeLabel::Transition) out.push_back(e);
    }
    return out;
  }
};

inline double yoy_pct(double previous, double current) { return 100.0 * (current - previous) / previous; }

inline RegimeChangeReport regime_changes(const std::map<std::string, YearValues>& series,
                                         const RegimeOptions& opts = {}) {
  RegimeChangeReport report;
  for (const auto& [name, values] : series) {
    if (values.size() < 2) continue;
    std::optional<double> prev_value;
    bool prev_surge = false;
    for (const auto& [year, v] : values) {
      RegimeEntry e{name, year, std::nullopt, false, RegimeLabel::None};
      if (prev_value && *prev_value > 0.0) {
        const double yoy = yoy_pct(*prev_value, v);
        e.yoy_pct = yoy;
        e.flagged = std::abs(yoy) >= opts.threshold_pct;
        if (prev_surge && yoy <= opts.dip_pct) {
          e.label = RegimeLabel::Transition;
        } else if (yoy >= opts.threshold_pct) {
          e.label = RegimeLabel::Surge;
        } else if (yoy <= -opts.threshold_pct) {
          e.label = RegimeLabel::Drop;
        }
      }
      prev_surge = e.yoy_pct && *e.yoy_pct >= opts.threshold_pct;
      if (prev_value) report.entries.push_back(e);
      prev_value = v;
    }
  }
  return report;
}

// Convenience for a single series given as consecutive yearly values.
inline RegimeChangeReport regime_changes(std::string name, int first_year, std::span<const double> counts,
                                         const RegimeOptions& opts = {}) {
  std::map<std::string, YearValues> s;
  auto& v = s[std::move(name)];
  for (std::size_t i = 0; i < counts.size(); ++i) v[first_year + static_cast<int>(i)] = counts[i];
  return regime_changes(s, opts);
}

inline void write_regime_csv(std::ostream& os, const RegimeChangeReport& r) {
  os << "series,year,yoy_pct,flagged,label\n";
  for (const auto& e : r.entries) {
    os << csv_field(e.series) << ',' << e.year << ',';
    if (e.yoy_pct) os << *e.yoy_pct;
    os << ',' << (e.flagged ? 1 : 0) << ',' << to_string(e.label) << '\n';
  }
}

enum class EntropyWeighting {
  Multiplicity,  // every mention counts (edge weight)
  Distinct,      // one per (decision, target) edge
};

// -sum p log_base p over non-zero counts. Base 2 uses log2 directly.
inline double entropy_of_counts(std::span<const double> counts, double base = 2.0) {
  double total = 0.0;
  for (double c : counts) total += c;
  if (total <= 0.0) throw InsufficientDataError("entropy: no mass");
  double h = 0.0;
  for (double c : counts) {
    if (c <= 0.0) continue;
    const double p = c / total;
    h -= p * (base == 2.0 ? std::log2(p) : std::log(p) / std::log(base));
  }
  return h == 0.0 ? 0.0 : h;
}

inline std::vector<double> year_target_counts(const BipartiteGraph& g, int year, EntropyWeighting w) {
  std::map<std::uint32_t, double> counts;
  for (std::size_t d = 0; d < g.decision_count(); ++d) {
    if (g.meta(d).year != year) continue;
    for (const auto& nb : g.citations(d)) {
      counts[nb.node] += w == EntropyWeighting::Multiplicity ? static_cast<double>(nb.weight) : 1.0;
    }
  }
  std::vector<double> out;
  out.reserve(counts.size());
  for (const auto& [node, c] : counts) out.push_back(c);
  return out;
}

inline double citation_entropy(const BipartiteGraph& g, int year,
                               EntropyWeighting w = EntropyWeighting::Multiplicity, double base = 2.0) {
  const auto counts = year_target_counts(g, year, w);
  if (counts.empty()) throw InsufficientDataError("citation_entropy: no citations in year " + std::to_string(year));
  return entropy_of_counts(counts, base);
}

inline YearValues entropy_series(const BipartiteGraph& g, EntropyWeighting w = EntropyWeighting::Multiplicity,
                                 double base = 2.0) {
  std::map<int, std::map<std::uint32_t, double>> by_year;
  for (std::size_t d = 0; d < g.decision_count(); ++d) {
    const int y = g.meta(d).year;
    if (y == kUnknownYear) continue;
    for (const auto& nb : g.citations(d)) {
      by_year[y][nb.node] += w == EntropyWeighting::Multiplicity ? static_cast<double>(nb.weight) : 1.0;
    }
  }
  YearValues out;
  for (const auto& [y, counts] : by_year) {
    std::vector<double> v;
    for (const auto& [node, c] : counts) v.push_back(c);
    out[y] = entropy_of_counts(v, base);
  }
  return out;
}

inline void write_year_values_csv(std::ostream& os, const YearValues& v, std::string_view column) {
  os << "year," << column << '\n';
  for (const auto& [y, x] : v) os << y << ',' << x << '\n';
}

struct KeyCount {
  std::string key;
  std::uint64_t citations = 0;

  bool operator==(const KeyCount&) const = default;
};

inline std::optional<int> first_citing_year(const BipartiteGraph& g, std::size_t l) {
  std::optional<int> first;
  for (const auto& nb : g.citing(l)) {
    const int y = g.meta(nb.node).year;
    if (y == kUnknownYear) continue;
    if (!first || y < *first) first = y;
  }
  return first;
}

// Articles first cited in or after `cutoff_year` with at least `min_citations`
// citing decisions, most-cited first.
inline std::vector<KeyCount> emergent_nodes(const BipartiteGraph& g, int cutoff_year, std::uint64_t min_citations,
                                            bool articles_only = true) {
  std::vector<KeyCount> out;
  for (std::size_t l = 0; l < g.legislation_count(); ++l) {
    if (articles_only && !textcite::has_article(g.legislation(l).type)) continue;
    const auto total = static_cast<std::uint64_t>(g.legislation_degree(l));
    if (total < min_citations) continue;
    const auto first = first_citing_year(g, l);
    if (!first || *first < cutoff_year) continue;
    out.push_back({g.legislation(l).key, total});
  }
  std::sort(out.begin(), out.end(), [](const KeyCount& a, const KeyCount& b) {
    if (a.citations != b.citations) return a.citations > b.citations;
    return a.key < b.key;
  });
  return out;
}

enum class BridgeMode {
  PerDomain,  // count within each qualifying justice kind > threshold
  Aggregate,  // total > threshold, cited at all in >= min_domains kinds
};

struct BridgeArticle {
  std::string key;
  std::vector<int> domains;  // qualifying justice kinds
  std::uint64_t citations = 0;
};

struct BridgeReport {
  std::vector<BridgeArticle> articles;
  double share = 0.0;  // citations of bridge articles / all citations
};

inline BridgeReport bridge_articles(const BipartiteGraph& g, std::uint64_t min_citations_per_domain,
                                    std::size_t min_domains, BridgeMode mode = BridgeMode::PerDomain) {
  BridgeReport r;
  std::uint64_t all = 0, covered = 0;
  for (std::size_t l = 0; l < g.legislation_count(); ++l) {
    std::array<std::uint64_t, 6> by_kind{};
    for (const auto& nb : g.citing(l)) {
      const int k = g.meta(nb.node).justice_kind;
      if (k >= 1 && k <= 5) ++by_kind[static_cast<std::size_t>(k)];
    }
    const auto total = static_cast<std::uint64_t>(g.legislation_degree(l));
    all += total;
    std::vector<int> domains;
    for (int k = 1; k <= 5; ++k) {
      const auto c = by_kind[static_cast<std::size_t>(k)];
      if (mode == BridgeMode::PerDomain ? c > min_citations_per_domain : c > 0) domains.push_back(k);
    }
    const bool qualifies = domains.size() >= min_domains &&
                           (mode == BridgeMode::PerDomain || total > min_citations_per_domain);
    if (!qualifies) continue;
    covered += total;
    r.articles.push_back({g.legislation(l).key, std::move(domains), total});
  }
  std::sort(r.articles.begin(), r.articles.end(), [](const BridgeArticle& a, const BridgeArticle& b) {
    if (a.citations != b.citations) return a.citations > b.citations;
    return a.key < b.key;
  });
  r.share = all > 0 ? static_cast<double>(covered) / static_cast<double>(all) : 0.0;
  return r;
}

}  // namespace lexcite::chrono
