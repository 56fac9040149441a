#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "lexcite/errors.hpp"
#include "lexcite/graphstore.hpp"
#include "lexcite/pipeline.hpp"

namespace fs = std::filesystem;
using namespace lexcite;

namespace {

std::ofstream open_out(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream os(p, std::ios::binary | std::ios::trunc);
  if (!os) throw InputError("cannot write " + p.string());
  return os;
}

graphstore::BipartiteGraph load_graph(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw InputError("cannot read graph file: " + p.string());
  return graphstore::BipartiteGraph::load(in);
}

// Expands directories to their *.jsonl files, sorted.
std::vector<fs::path> corpus_files(const std::vector<std::string>& inputs) {
  std::vector<fs::path> out;
  for (const auto& s : inputs) {
    const fs::path p(s);
    if (fs::is_directory(p)) {
      std::vector<fs::path> found;
      for (const auto& e : fs::directory_iterator(p)) {
        if (e.is_regular_file() && e.path().extension() == ".jsonl") found.push_back(e.path());
      }
      std::sort(found.begin(), found.end());
      out.insert(out.end(), found.begin(), found.end());
    } else {
      out.push_back(p);
    }
  }
  if (out.empty()) throw InputError("no corpus files given");
  return out;
}

std::optional<graphstore::YearRange> parse_years(const std::string& s) {
  if (s.empty()) return std::nullopt;
  const auto dash = s.find('-');
  try {
    if (dash == std::string::npos) {
      const int y = std::stoi(s);
      return graphstore::YearRange{y, y};
    }
    return graphstore::YearRange{std::stoi(s.substr(0, dash)), std::stoi(s.substr(dash + 1))};
  } catch (const std::logic_error&) {
    throw InputError("bad year range: " + s);
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"lexcite: court-decision citation extraction and network analysis"};
  app.require_subcommand(1);
  app.fallthrough();
  app.set_config("--config", "", "key=value / TOML config file")->envname("LEXCITE_CONFIG");

  std::size_t workers = 1;
  std::uint64_t min_weight = 10;
  std::uint64_t seed = 42;
  int period_years = 4;
  std::string out = "out";
  app.add_option("--workers", workers, "Worker threads for extraction")->check(CLI::PositiveNumber);
  app.add_option("--min-weight", min_weight, "Minimum co-citation weight kept in G_L")->check(CLI::PositiveNumber);
  app.add_option("--seed", seed, "Seed for every randomized stage");
  app.add_option("--period-years", period_years, "Period width for temporal communities")->check(CLI::PositiveNumber);
  app.add_option("--out", out, "Output directory or file");

  // extract
  auto* extract = app.add_subcommand("extract", "Extract citations from JSONL partitions");
  std::vector<std::string> extract_inputs;
  std::size_t chunk_size = 50000;
  extract->add_option("inputs", extract_inputs, "Partition files or directories")->required();
  extract->add_option("--chunk-size", chunk_size, "Records per work unit")->check(CLI::PositiveNumber);

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic corpus with ground truth");
  pipeline::SynthSpec spec;
  synth->add_option("--decisions", spec.n_decisions, "Number of decisions");
  synth->add_option("--alpha", spec.alpha, "Article popularity exponent");
  synth->add_option("--xmin", spec.x_min, "Minimum article degree");
  synth->add_option("--communities", spec.communities, "Planted communities");
  synth->add_option("--mixing", spec.mixing, "Share of citations crossing communities");
  synth->add_option("--surge-year", spec.surge_year, "First year of the volume surge");
  synth->add_option("--surge-factor", spec.surge_factor, "Volume multiplier from the surge year");

  // build-graph
  auto* build = app.add_subcommand("build-graph", "Build the bipartite graph from edge and decision TSV");
  std::string edges_path, decisions_path;
  build->add_option("--edges", edges_path, "Edge TSV")->required();
  build->add_option("--decisions", decisions_path, "Decision TSV (doc_id, year, justice_kind)");

  // project
  auto* project = app.add_subcommand("project", "Project the bipartite graph onto legislation (G_L)");
  std::string graph_path;
  std::string years;
  bool all_types = false;
  std::size_t max_degree = 1000;
  project->add_option("--graph", graph_path, "Bipartite graph file")->required();
  project->add_option("--years", years, "Restrict to decisions in YYYY or YYYY-YYYY");
  project->add_flag("--all-types", all_types, "Keep case, law-number and ruling nodes");
  project->add_option("--max-decision-degree", max_degree, "Skip decisions citing more nodes than this");

  // experiment
  auto* experiment = app.add_subcommand("experiment", "Run a named analysis");
  std::string exp_name;
  pipeline::ExperimentConfig cfg;
  std::string truth_communities, stored_edges, index_path, fit_method = "continuous";
  std::vector<std::string> exp_corpus;
  experiment->add_option("name", exp_name, "powerlaw|centrality|communities|temporal|predict|validate|ablation")
      ->required()
      ->check(CLI::IsMember({"powerlaw", "centrality", "communities", "temporal", "predict", "validate", "ablation"}));
  experiment->add_option("--graph", graph_path, "Bipartite graph file");
  experiment->add_option("--truth-communities", truth_communities, "Planted community TSV for NMI");
  experiment->add_option("--corpus", exp_corpus, "Corpus files (validate)");
  experiment->add_option("--stored-edges", stored_edges, "Stored edge TSV (validate recall proxy)");
  experiment->add_option("--index", index_path, "Legislation index, one key per line (validate)");
  experiment->add_flag("--all-types", all_types, "Keep non-article nodes in G_L");
  experiment->add_option("--fit", fit_method, "continuous|discrete")->check(CLI::IsMember({"continuous", "discrete"}));
  experiment->add_option("--regime-threshold", cfg.regime_threshold, "Year-over-year change flagged, percent");
  experiment->add_option("--sample-size", cfg.sample_size, "Decisions sampled for validation");
  experiment->add_flag("--stratified", cfg.stratified, "Stratify the validation sample by year and justice kind");
  experiment->add_option("--train-first", cfg.prediction.train.first, "First training year");
  experiment->add_option("--train-last", cfg.prediction.train.last, "Last training year");
  experiment->add_option("--test-first", cfg.prediction.test.first, "First test year");
  experiment->add_option("--test-last", cfg.prediction.test.last, "Last test year");
  experiment->add_option("--top-n", cfg.prediction.top_n, "Size of the test-window top set");

  // validate
  auto* validate = app.add_subcommand("validate", "Precision (and recall proxy) of extraction on a sample");
  std::vector<std::string> validate_inputs;
  validate->add_option("inputs", validate_inputs, "Corpus files or directories")->required();
  validate->add_option("--graph", graph_path, "Graph whose legislation keys form the index");
  validate->add_option("--index", index_path, "Legislation index, one key per line");
  validate->add_option("--stored-edges", stored_edges, "Stored edge TSV for the recall proxy");
  validate->add_option("--sample-size", cfg.sample_size, "Decisions sampled");
  validate->add_flag("--stratified", cfg.stratified, "Stratify by year and justice kind");

  // report
  auto* report = app.add_subcommand("report", "Collect experiment summaries under --out into one report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (*extract) {
      pipeline::IngestOptions io{workers, chunk_size};
      const auto files = corpus_files(extract_inputs);
      const auto r = pipeline::ingest(files, io);
      const fs::path dir(out);
      fs::create_directories(dir);
      {
        auto os = open_out(dir / "edges.tsv");
        pipeline::write_edges_tsv(os, r.edges);
      }
      {
        auto os = open_out(dir / "decisions.tsv");
        pipeline::write_decisions_tsv(os, r.decisions);
      }
      {
        auto os = open_out(dir / "ingest_report.txt");
        r.report.write(os);
      }
      r.report.write(std::cout);
      r.report.write_timing(std::cerr);
    } else if (*synth) {
      spec.seed = seed;
      const auto corpus = pipeline::synth_corpus(spec);
      const auto paths = pipeline::write_synth_corpus(corpus, out);
      std::cout << "decisions=" << corpus.records.size() << '\n'
                << "truth_edges=" << corpus.truth.size() << '\n'
                << "partitions=" << paths.size() << '\n';
    } else if (*build) {
      const auto edges = pipeline::read_edges_tsv(fs::path(edges_path));
      pipeline::DecisionTable decisions;
      if (!decisions_path.empty()) decisions = pipeline::read_decisions_tsv(decisions_path);
      const auto g = pipeline::build_graph(edges, decisions);
      fs::path target(out);
      if (fs::is_directory(target) || !target.has_extension()) target /= "graph.bin";
      auto os = open_out(target);
      g.save(os);
      std::cout << "decisions=" << g.decision_count() << '\n'
                << "legislation=" << g.legislation_count() << '\n'
                << "edges=" << g.edge_count() << '\n'
                << "missing_meta=" << g.missing_meta() << '\n'
                << "graph=" << target.string() << '\n';
    } else if (*project) {
      const auto g = load_graph(graph_path);
      graphstore::ProjectionOptions po;
      po.min_weight = min_weight;
      po.include_all_types = all_types;
      po.max_decision_degree = max_degree;
      po.years = parse_years(years);
      graphstore::ProjectionDiagnostics diag;
      const auto gl = graphstore::project_cocitation(g, po, &diag);
      fs::path target(out);
      if (fs::is_directory(target) || !target.has_extension()) target /= "cocitation.tsv";
      auto os = open_out(target);
      gl.write_edge_list(os);
      std::cout << "nodes=" << gl.node_count() << '\n'
                << "edges=" << gl.edge_count() << '\n'
                << "skipped_decisions=" << diag.skipped_decisions << '\n'
                << "edge_list=" << target.string() << '\n';
    } else if (*experiment || *validate) {
      cfg.out_dir = out;
      cfg.graph = graph_path;
      cfg.truth_communities = truth_communities;
      cfg.stored_edges = stored_edges;
      cfg.index = index_path;
      cfg.min_weight = min_weight;
      cfg.seed = seed;
      cfg.prediction.seed = seed;
      cfg.period_years = period_years;
      cfg.include_all_types = all_types;
      cfg.fit_method = fit_method == "discrete" ? netmetrics::FitMethod::DiscreteExact
                                                : netmetrics::FitMethod::ContinuousApprox;
      std::string name = exp_name;
      if (*validate) {
        name = "validate";
        cfg.corpus = corpus_files(validate_inputs);
      } else if (!exp_corpus.empty()) {
        cfg.corpus = corpus_files(exp_corpus);
      }
      pipeline::run_experiment(name, cfg).write(std::cout);
    } else if (*report) {
      const fs::path dir(out);
      if (!fs::is_directory(dir)) throw InputError("no output directory: " + dir.string());
      std::vector<fs::path> summaries;
      for (const auto& e : fs::recursive_directory_iterator(dir)) {
        if (e.is_regular_file() && e.path().filename() == "summary.txt") summaries.push_back(e.path());
      }
      std::sort(summaries.begin(), summaries.end());
      if (summaries.empty()) throw InputError("no experiment summaries under " + dir.string());
      auto os = open_out(dir / "report.txt");
      for (const auto& p : summaries) {
        std::ifstream in(p, std::ios::binary);
        os << in.rdbuf() << '\n';
      }
      os.close();
      std::ifstream back(dir / "report.txt", std::ios::binary);
      std::cout << back.rdbuf();
    }
  } catch (const ConvergenceError& e) {
    std::cerr << "lexcite: " << e.what() << '\n';
    return 3;
  } catch (const InputError& e) {
    std::cerr << "lexcite: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "lexcite: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
