#pragma once

// Named analysis runs over a frozen bipartite graph. Each writes its tables
// as CSV under <out>/<name>/ plus a key=value summary.txt.

#include <algorithm>
#include <array>
#include <numeric>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "lexcite/chrono.hpp"
#include "lexcite/communities.hpp"
#include "lexcite/csv.hpp"
#include "lexcite/errors.hpp"
#include "lexcite/graphstore.hpp"
#include "lexcite/netmetrics.hpp"
#include "lexcite/pipeline/ingest.hpp"
#include "lexcite/pipeline/synth.hpp"
#include "lexcite/predictor.hpp"
#include "lexcite/validator.hpp"

namespace lexcite::pipeline {

using graphstore::BipartiteGraph;
using graphstore::YearRange;

inline constexpr std::array<std::string_view, 7> kExperiments{"powerlaw", "centrality", "communities", "temporal",
                                                              "predict",  "validate",   "ablation"};

struct ExperimentConfig {
  std::filesystem::path out_dir = "out";
  std::filesystem::path graph;              // bipartite graph (binary)
  std::filesystem::path truth_communities;  // optional, communities
  std::vector<std::filesystem::path> corpus;  // validate
  std::filesystem::path stored_edges;       // validate: stored citations for the recall proxy
  std::filesystem::path index;              // validate: one legislation key per line (default: graph keys)
  std::uint64_t min_weight = 10;
  std::uint64_t seed = 42;
  int period_years = 4;
  bool include_all_types = false;
  netmetrics::FitMethod fit_method = netmetrics::FitMethod::ContinuousApprox;
  double regime_threshold = 100.0;
  double stability_threshold = 0.8;
  std::optional<int> emergent_cutoff;       // default: last year - 3
  std::uint64_t emergent_min_citations = 10;
  std::uint64_t bridge_min_per_domain = 10;
  std::size_t bridge_min_domains = 3;
  std::size_t sample_size = 500;
  bool stratified = false;
  predictor::PredictionConfig prediction;
};

struct ExperimentSummary {
  std::string name;
  std::vector<std::pair<std::string, std::string>> values;

  template <typename T>
  void add(std::string key, const T& v) {
    std::ostringstream ss;
    ss.precision(10);
    ss << v;
    values.emplace_back(std::move(key), ss.str());
  }

  std::optional<std::string> get(std::string_view key) const {
    for (const auto& [k, v] : values) {
      if (k == key) return v;
    }
    return std::nullopt;
  }

  void write(std::ostream& os) const {
    os << "experiment=" << name << '\n';
    for (const auto& [k, v] : values) os << k << '=' << v << '\n';
  }
};

namespace exp_detail {

inline std::ofstream open_out(const std::filesystem::path& p) {
  std::filesystem::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw InputError("cannot write " + p.string());
  os.precision(12);
  return os;
}

inline BipartiteGraph load_graph(const std::filesystem::path& p) {
  if (p.empty()) throw InputError("experiment needs a graph file (--graph)");
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read graph file: " + p.string());
  return BipartiteGraph::load(in);
}

inline std::pair<int, int> year_span(const BipartiteGraph& g) {
  int lo = 0, hi = -1;
  for (std::size_t d = 0; d < g.decision_count(); ++d) {
    const int y = g.meta(d).year;
    if (y == graphstore::kUnknownYear) continue;
    if (hi < lo) {
      lo = hi = y;
    } else {
      lo = std::min(lo, y);
      hi = std::max(hi, y);
    }
  }
  if (hi < lo) throw InsufficientDataError("graph has no dated decisions");
  return {lo, hi};
}

inline std::vector<std::uint64_t> legislation_degrees(const BipartiteGraph& g) {
  std::vector<std::uint64_t> out;
  for (std::size_t l = 0; l < g.legislation_count(); ++l) {
    if (g.legislation_degree(l) > 0) out.push_back(g.legislation_degree(l));
  }
  return out;
}

}  // namespace exp_detail

inline ExperimentSummary experiment_powerlaw(const BipartiteGraph& g, const ExperimentConfig& cfg,
                                             const std::filesystem::path& dir) {
  ExperimentSummary s{"powerlaw", {}};
  const auto degrees = exp_detail::legislation_degrees(g);
  netmetrics::PowerLawOptions opts;
  opts.method = cfg.fit_method;
  const auto fit = netmetrics::fit_power_law(degrees, opts);
  {
    auto os = exp_detail::open_out(dir / "fit.txt");
    netmetrics::write_fit(os, fit);
  }
  {
    auto os = exp_detail::open_out(dir / "degree_histogram.csv");
    netmetrics::write_degree_histogram(os, degrees);
  }
  const auto cmp = netmetrics::compare_distributions(degrees, fit);
  {
    auto os = exp_detail::open_out(dir / "comparisons.csv");
    os << "alternative,r,p_value,log_likelihood_ratio\n";
    for (const auto& c : cmp) {
      os << netmetrics::to_string(c.alternative) << ',' << c.r << ',' << c.p_value << ',' << c.log_likelihood_ratio
         << '\n';
    }
  }
  s.add("alpha", fit.alpha);
  s.add("x_min", fit.x_min);
  s.add("sigma", fit.sigma);
  s.add("ks_d", fit.ks_d);
  s.add("n_tail", fit.n_tail);
  s.add("n_total", fit.n_total);
  for (const auto& c : cmp) {
    const auto name = std::string(netmetrics::to_string(c.alternative));
    s.add(name + ".r", c.r);
    s.add(name + ".p", c.p_value);
  }
  return s;
}

inline ExperimentSummary experiment_centrality(const BipartiteGraph& g, const ExperimentConfig& cfg,
                                               const std::filesystem::path& dir) {
  ExperimentSummary s{"centrality", {}};
  graphstore::ProjectionOptions po;
  po.min_weight = cfg.min_weight;
  po.include_all_types = cfg.include_all_types;
  const auto gl = graphstore::project_cocitation(g, po);
  if (gl.node_count() == 0) throw InsufficientDataError("centrality: co-citation graph is empty at this min weight");
  const auto r = netmetrics::centrality_report(gl);
  {
    auto os = exp_detail::open_out(dir / "centrality.csv");
    os << "key,weighted_degree,pagerank,eigenvector\n";
    for (std::size_t i = 0; i < gl.node_count(); ++i) {
      os << csv_field(gl.key(i)) << ',' << r.degree[i] << ',' << r.pagerank[i] << ',' << r.eigenvector[i] << '\n';
    }
  }
  s.add("nodes", gl.node_count());
  s.add("edges", gl.edge_count());
  s.add("pagerank_iterations", r.pagerank_iterations);
  s.add("eigenvector_iterations", r.eigenvector_iterations);
  s.add("spearman.degree_pagerank", r.rho_degree_pagerank);
  s.add("spearman.degree_eigenvector", r.rho_degree_eigenvector);
  s.add("spearman.pagerank_eigenvector", r.rho_pagerank_eigenvector);
  std::vector<std::size_t> order(gl.node_count());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](auto a, auto b) {
    if (r.pagerank[a] != r.pagerank[b]) return r.pagerank[a] > r.pagerank[b];
    return gl.key(a) < gl.key(b);
  });
  for (std::size_t i = 0; i < std::min<std::size_t>(10, order.size()); ++i) {
    s.add("top_pagerank." + std::to_string(i + 1), gl.key(order[i]));
  }
  return s;
}

inline ExperimentSummary experiment_communities(const BipartiteGraph& g, const ExperimentConfig& cfg,
                                                const std::filesystem::path& dir) {
  ExperimentSummary s{"communities", {}};
  graphstore::ProjectionOptions po;
  po.min_weight = cfg.min_weight;
  po.include_all_types = cfg.include_all_types;
  const auto gl = graphstore::project_cocitation(g, po);
  if (gl.node_count() == 0) throw InsufficientDataError("communities: co-citation graph is empty at this min weight");
  const auto p = communities::louvain(gl, cfg.seed);
  {
    auto os = exp_detail::open_out(dir / "partition.csv");
    communities::write_partition_csv(os, gl, p);
  }
  {
    auto os = exp_detail::open_out(dir / "ontology.tsv");
    communities::export_ontology(gl, p, g).write(os);
  }
  std::vector<std::size_t> sizes(p.community_count(), 0);
  for (auto c : p.assignment) ++sizes[c];
  std::sort(sizes.begin(), sizes.end(), std::greater<>());
  s.add("nodes", gl.node_count());
  s.add("edges", gl.edge_count());
  s.add("modularity", p.q);
  s.add("communities", p.community_count());
  if (!sizes.empty()) s.add("largest_community", sizes.front());
  if (!cfg.truth_communities.empty()) {
    const auto truth = read_communities_tsv(cfg.truth_communities);
    std::vector<std::string> keys;
    std::vector<std::uint32_t> labels;
    for (const auto& [k, c] : truth) {
      keys.push_back(k);
      labels.push_back(c);
    }
    const auto tp = communities::Partition::from_labels<std::uint32_t>(labels);
    const auto r = communities::nmi_by_key(gl.keys(), p, keys, tp);
    s.add("nmi_vs_truth", r.value);
    s.add("nmi_common_nodes", r.common);
  }
  return s;
}

inline ExperimentSummary experiment_temporal(const BipartiteGraph& g, const ExperimentConfig& cfg,
                                             const std::filesystem::path& dir) {
  ExperimentSummary s{"temporal", {}};
  const auto [lo, hi] = exp_detail::year_span(g);
  {
    auto os = exp_detail::open_out(dir / "annual.csv");
    chrono::write_annual_csv(os, chrono::annual_series(g));
  }
  const auto series = chrono::codex_series(g);
  chrono::RegimeOptions ro;
  ro.threshold_pct = cfg.regime_threshold;
  const auto regimes = chrono::regime_changes(series, ro);
  {
    auto os = exp_detail::open_out(dir / "regime_changes.csv");
    chrono::write_regime_csv(os, regimes);
  }
  std::map<int, std::size_t> flagged_years;
  for (const auto& e : regimes.entries) {
    if (e.flagged) ++flagged_years[e.year];
  }
  std::string flagged;
  for (const auto& [y, c] : flagged_years) flagged += (flagged.empty() ? "" : ",") + std::to_string(y);
  s.add("flagged_years", flagged.empty() ? "-" : flagged);
  for (const auto& [y, c] : flagged_years) s.add("flagged_series." + std::to_string(y), c);

  const auto entropy = chrono::entropy_series(g);
  {
    auto os = exp_detail::open_out(dir / "entropy.csv");
    chrono::write_year_values_csv(os, entropy, "entropy_bits");
  }
  if (!entropy.empty()) {
    s.add("entropy.first", entropy.begin()->second);
    s.add("entropy.last", entropy.rbegin()->second);
  }

  const int cutoff = cfg.emergent_cutoff.value_or(hi - 3);
  const auto emergent = chrono::emergent_nodes(g, cutoff, cfg.emergent_min_citations);
  {
    auto os = exp_detail::open_out(dir / "emergent.csv");
    os << "key,citations\n";
    for (const auto& e : emergent) os << csv_field(e.key) << ',' << e.citations << '\n';
  }
  s.add("emergent_cutoff", cutoff);
  s.add("emergent_nodes", emergent.size());

  const auto bridges = chrono::bridge_articles(g, cfg.bridge_min_per_domain, cfg.bridge_min_domains);
  {
    auto os = exp_detail::open_out(dir / "bridges.csv");
    os << "key,domains,citations\n";
    for (const auto& b : bridges.articles) {
      std::string doms;
      for (int k : b.domains) doms += (doms.empty() ? "" : ";") + std::to_string(k);
      os << csv_field(b.key) << ',' << doms << ',' << b.citations << '\n';
    }
  }
  s.add("bridge_articles", bridges.articles.size());
  s.add("bridge_share", bridges.share);

  // Community stability across consecutive fixed-width periods.
  std::vector<std::pair<YearRange, graphstore::CoCitationGraph>> graphs;
  for (const auto& period : communities::make_periods(lo, hi, cfg.period_years)) {
    graphstore::ProjectionOptions po;
    po.min_weight = cfg.min_weight;
    po.include_all_types = cfg.include_all_types;
    po.years = period;
    auto gl = graphstore::project_cocitation(g, po);
    if (gl.node_count() > 0) graphs.emplace_back(period, std::move(gl));
  }
  if (graphs.size() >= 2) {
    const auto tc = communities::temporal_communities(graphs, cfg.seed, cfg.stability_threshold);
    auto os = exp_detail::open_out(dir / "stability.csv");
    os << "from,to,nmi,common_nodes,stable\n";
    std::size_t stable = 0;
    for (const auto& l : tc.links) {
      os << l.from.first << '-' << l.from.last << ',' << l.to.first << '-' << l.to.last << ',' << l.nmi.value << ','
         << l.nmi.common << ',' << (l.stable ? 1 : 0) << '\n';
      stable += l.stable ? 1 : 0;
    }
    s.add("periods", tc.periods.size());
    s.add("stable_links", stable);
  } else {
    s.add("periods", graphs.size());
  }
  return s;
}

inline ExperimentSummary experiment_predict(const BipartiteGraph& g, const ExperimentConfig& cfg,
                                            const std::filesystem::path& dir) {
  ExperimentSummary s{"predict", {}};
  const auto r = predictor::run_prediction(g, cfg.prediction);
  {
    auto os = exp_detail::open_out(dir / "evaluation.txt");
    predictor::write_evaluation(os, r.report);
  }
  {
    auto os = exp_detail::open_out(dir / "model.txt");
    r.model.save(os);
  }
  {
    auto os = exp_detail::open_out(dir / "surprise_risers.csv");
    predictor::write_risers_csv(os, r.report.surprise_risers);
  }
  {
    auto os = exp_detail::open_out(dir / "loss.csv");
    os << "epoch,loss\n";
    for (std::size_t i = 0; i < r.model.loss_history.size(); ++i) os << i << ',' << r.model.loss_history[i] << '\n';
  }
  s.add("population", r.population);
  s.add("positives", r.positives);
  s.add("zero_train_sampled", r.zero_train_sampled);
  s.add("auc", r.report.auc);
  for (const auto& [k, v] : r.report.precision_at) s.add("precision_at_" + std::to_string(k), v);
  for (const auto& [k, v] : r.report.baseline_precision_at) s.add("baseline_precision_at_" + std::to_string(k), v);
  s.add("top_retention", r.report.top_retention);
  s.add("surprise_risers", r.report.surprise_risers.size());
  return s;
}

inline ExperimentSummary experiment_validate(const ExperimentConfig& cfg, const std::filesystem::path& dir) {
  ExperimentSummary s{"validate", {}};
  if (cfg.corpus.empty()) throw InputError("validate needs corpus files");
  std::vector<CorpusRecord> records;
  std::size_t malformed = 0;
  for (const auto& p : cfg.corpus) {
    auto part = read_records(p, &malformed);
    records.insert(records.end(), std::make_move_iterator(part.begin()), std::make_move_iterator(part.end()));
  }
  std::sort(records.begin(), records.end(),
            [](const CorpusRecord& a, const CorpusRecord& b) { return a.doc_id < b.doc_id; });

  std::unordered_set<std::string> index;
  if (!cfg.index.empty()) {
    std::ifstream in(cfg.index, std::ios::binary);
    if (!in) throw InputError("cannot read index file: " + cfg.index.string());
    for (std::string line; std::getline(in, line);) {
      if (!line.empty()) index.insert(line);
    }
  } else if (!cfg.graph.empty()) {
    const auto g = exp_detail::load_graph(cfg.graph);
    for (std::size_t l = 0; l < g.legislation_count(); ++l) index.insert(g.legislation(l).key);
  } else {
    throw InputError("validate needs a legislation index (--index) or a graph (--graph)");
  }

  std::vector<std::uint64_t> strata;
  if (cfg.stratified) {
    for (const auto& r : records) strata.push_back(static_cast<std::uint64_t>(r.year) * 8 + static_cast<std::uint64_t>(r.justice_kind));
  }
  const auto picks = validator::sample_indices(records.size(), cfg.sample_size, cfg.seed, strata);
  std::unordered_map<std::string, std::vector<CitationEdge>> stored;
  if (!cfg.stored_edges.empty()) {
    for (auto& e : read_edges_tsv(cfg.stored_edges)) stored[e.decision_id].push_back(std::move(e));
  }
  std::vector<validator::ValidationSample> samples;
  for (auto i : picks) {
    auto& r = records[i];
    validator::ValidationSample vs{r.doc_id, r.text, {}};
    if (auto it = stored.find(r.doc_id); it != stored.end()) vs.stored = it->second;
    samples.push_back(std::move(vs));
  }
  {
    auto os = exp_detail::open_out(dir / "sample_manifest.txt");
    for (const auto& v : samples) os << v.decision_id << '\n';
  }
  auto report = validator::precision_eval(samples, index);
  if (!stored.empty()) report.recall = validator::recall_proxy(samples);
  {
    auto os = exp_detail::open_out(dir / "precision.tsv");
    report.write_table(os);
  }
  {
    auto os = exp_detail::open_out(dir / "mismatches.csv");
    report.write_mismatches_csv(os);
  }
  if (report.recall) {
    auto os = exp_detail::open_out(dir / "unmatched.csv");
    validator::write_unmatched_csv(os, *report.recall);
  }
  s.add("sampled_decisions", samples.size());
  s.add("malformed_lines", malformed);
  s.add("citations", report.total);
  s.add("validated", report.validated);
  if (report.precision()) {
    s.add("precision", *report.precision());
    s.add("wilson_low", report.wilson->low);
    s.add("wilson_high", report.wilson->high);
  }
  if (report.recall && report.recall->strict) {
    s.add("recall_strict", *report.recall->strict);
    s.add("recall_range_aware", *report.recall->range_aware);
  }
  return s;
}

// Per-type contribution: edges, unique targets, and target degree stats.
inline ExperimentSummary experiment_ablation(const BipartiteGraph& g, const std::filesystem::path& dir) {
  ExperimentSummary s{"ablation", {}};
  std::array<std::vector<std::uint64_t>, textcite::kCitationTypeCount> degrees;
  for (std::size_t l = 0; l < g.legislation_count(); ++l) {
    degrees[textcite::index_of(g.legislation(l).type)].push_back(g.legislation_degree(l));
  }
  const double total = static_cast<double>(g.edge_count());
  auto os = exp_detail::open_out(dir / "ablation.csv");
  os << "type,edges,share,unique_targets,mean_degree,median_degree\n";
  for (auto t : textcite::kAllCitationTypes) {
    auto& d = degrees[textcite::index_of(t)];
    std::sort(d.begin(), d.end());
    const double edges = std::accumulate(d.begin(), d.end(), 0.0);
    const double mean = d.empty() ? 0.0 : edges / static_cast<double>(d.size());
    double median = 0.0;
    if (!d.empty()) {
      const auto m = d.size() / 2;
      median = d.size() % 2 ? static_cast<double>(d[m]) : 0.5 * static_cast<double>(d[m - 1] + d[m]);
    }
    const double share = total > 0.0 ? edges / total : 0.0;
    const auto name = std::string(textcite::to_string(t));
    os << name << ',' << edges << ',' << share << ',' << d.size() << ',' << mean << ',' << median << '\n';
    s.add(name + ".edges", edges);
    s.add(name + ".share", share);
    s.add(name + ".unique_targets", d.size());
    s.add(name + ".mean_degree", mean);
    s.add(name + ".median_degree", median);
  }
  return s;
}

inline ExperimentSummary run_experiment(std::string_view name, const ExperimentConfig& cfg) {
  if (std::find(kExperiments.begin(), kExperiments.end(), name) == kExperiments.end()) {
    throw InputError("unknown experiment: " + std::string(name));
  }
  const auto dir = cfg.out_dir / std::string(name);
  ExperimentSummary s;
  if (name == "validate") {
    s = experiment_validate(cfg, dir);
  } else {
    const auto g = exp_detail::load_graph(cfg.graph);
    if (name == "powerlaw") s = experiment_powerlaw(g, cfg, dir);
    if (name == "centrality") s = experiment_centrality(g, cfg, dir);
    if (name == "communities") s = experiment_communities(g, cfg, dir);
    if (name == "temporal") s = experiment_temporal(g, cfg, dir);
    if (name == "predict") s = experiment_predict(g, cfg, dir);
    if (name == "ablation") s = experiment_ablation(g, dir);
  }
  auto os = exp_detail::open_out(dir / "summary.txt");
  s.write(os);
  return s;
}

}  // namespace lexcite::pipeline
