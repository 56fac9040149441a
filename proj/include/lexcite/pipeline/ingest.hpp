#pragma once

// Newline-delimited JSON corpus records, chunked parallel extraction and the
// edge/decision TSV files everything downstream reads.

#include <algorithm>
#include <array>
#include <charconv>
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <exception>
#include <filesystem>
#include <fstream>
#include <mutex>
#include <optional>
#include <ostream>
#include <span>
#include <string>
#include <string_view>
#include <thread>
#include <unordered_map>
#include <utility>
#include <vector>

#include "json.hpp"

#include "lexcite/errors.hpp"
#include "lexcite/graphstore.hpp"
#include "lexcite/textcite.hpp"

namespace lexcite::pipeline {

using graphstore::DecisionMeta;
using textcite::CitationEdge;
using textcite::CitationType;

struct CorpusRecord {
  std::string doc_id;
  int year = 0;
  int justice_kind = 0;  // 1 civil, 2 criminal, 3 commercial, 4 admin, 5 constitutional
  std::string text;

  bool operator==(const CorpusRecord&) const = default;
};

inline std::string to_json_line(const CorpusRecord& r) {
  nlohmann::ordered_json j;
  j["doc_id"] = r.doc_id;
  j["year"] = r.year;
  j["justice_kind"] = r.justice_kind;
  j["text"] = r.text;
  return j.dump();
}

// nullopt (with a reason) for anything that is not a complete record.
inline std::optional<CorpusRecord> parse_record(std::string_view line, std::string* error = nullptr) {
  auto fail = [&](const char* why) -> std::optional<CorpusRecord> {
    if (error != nullptr) *error = why;
    return std::nullopt;
  };
  const auto j = nlohmann::json::parse(line.begin(), line.end(), nullptr, false);
  if (j.is_discarded()) return fail("invalid json");
  if (!j.is_object()) return fail("not an object");
  const auto id = j.find("doc_id");
  const auto year = j.find("year");
  const auto kind = j.find("justice_kind");
  const auto text = j.find("text");
  if (id == j.end() || !id->is_string() || id->get_ref<const std::string&>().empty()) return fail("bad doc_id");
  if (year == j.end() || !year->is_number_integer()) return fail("bad year");
  if (kind == j.end() || !kind->is_number_integer()) return fail("bad justice_kind");
  if (text == j.end() || !text->is_string()) return fail("bad text");
  CorpusRecord r;
  r.doc_id = id->get<std::string>();
  r.year = year->get<int>();
  r.justice_kind = kind->get<int>();
  r.text = text->get<std::string>();
  if (r.year < 0) return fail("bad year");
  if (r.justice_kind < 1 || r.justice_kind > 5) return fail("justice_kind out of range");
  return r;
}

inline std::vector<CorpusRecord> read_records(const std::filesystem::path& path, std::size_t* malformed = nullptr) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read corpus file: " + path.string());
  std::vector<CorpusRecord> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    if (auto r = parse_record(line)) {
      out.push_back(std::move(*r));
    } else if (malformed != nullptr) {
      ++*malformed;
    }
  }
  return out;
}

// --- edge and decision TSV -------------------------------------------------

inline void write_edges_tsv(std::ostream& os, std::span<const CitationEdge> edges) {
  for (const auto& e : edges) {
    os << e.decision_id << '\t' << textcite::to_string(e.type) << '\t' << e.law_ref << '\t'
       << e.article_ref.value_or("") << '\t' << e.count << '\n';
  }
}

inline std::vector<CitationEdge> read_edges_tsv(std::istream& is, const std::string& name = "edges") {
  std::vector<CitationEdge> out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::array<std::string_view, 5> f;
    std::size_t start = 0, k = 0;
    std::string_view sv(line);
    for (; k < 5; ++k) {
      const auto tab = sv.find('\t', start);
      f[k] = sv.substr(start, tab == std::string_view::npos ? std::string_view::npos : tab - start);
      if (tab == std::string_view::npos) break;
      start = tab + 1;
    }
    auto bad = [&] { return InputError(name + ":" + std::to_string(lineno) + ": malformed edge row"); };
    if (k != 4) throw bad();
    const auto type = textcite::parse_citation_type(f[1]);
    if (!type || f[0].empty() || f[2].empty()) throw bad();
    std::uint32_t count = 0;
    const auto [p, ec] = std::from_chars(f[4].data(), f[4].data() + f[4].size(), count);
    if (ec != std::errc() || p != f[4].data() + f[4].size() || count == 0) throw bad();
    CitationEdge e{std::string(f[0]), *type, std::string(f[2]), std::nullopt, count};
    if (!f[3].empty()) e.article_ref = std::string(f[3]);
    out.push_back(std::move(e));
  }
  return out;
}

inline std::vector<CitationEdge> read_edges_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read edge file: " + path.string());
  return read_edges_tsv(in, path.string());
}

using DecisionTable = std::vector<std::pair<std::string, DecisionMeta>>;

inline void write_decisions_tsv(std::ostream& os, const DecisionTable& decisions) {
  for (const auto& [id, m] : decisions) os << id << '\t' << m.year << '\t' << m.justice_kind << '\n';
}

inline DecisionTable read_decisions_tsv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read decision file: " + path.string());
  DecisionTable out;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const auto t1 = line.find('\t');
    const auto t2 = t1 == std::string::npos ? t1 : line.find('\t', t1 + 1);
    if (t2 == std::string::npos) throw InputError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    try {
      out.emplace_back(line.substr(0, t1),
                       DecisionMeta{std::stoi(line.substr(t1 + 1, t2 - t1 - 1)), std::stoi(line.substr(t2 + 1))});
    } catch (const std::logic_error&) {
      throw InputError(path.string() + ":" + std::to_string(lineno) + ": malformed row");
    }
  }
  return out;
}

inline graphstore::BipartiteGraph build_graph(std::span<const CitationEdge> edges, const DecisionTable& decisions) {
  std::unordered_map<std::string, DecisionMeta> meta(decisions.begin(), decisions.end());
  return graphstore::build_bipartite(edges, meta);
}

// --- ingestion --------------------------------------------------------------

struct IngestOptions {
  std::size_t workers = 1;
  std::size_t chunk_size = 50000;
};

struct IngestReport {
  std::size_t files = 0;
  std::size_t records = 0;
  std::size_t malformed = 0;
  std::size_t duplicate_records = 0;
  std::size_t duplicate_edges = 0;
  std::size_t reversed_ranges = 0;
  std::size_t chunks = 0;
  std::size_t workers = 1;
  std::array<std::uint64_t, textcite::kCitationTypeCount> edges_by_type{};
  std::array<std::uint64_t, textcite::kCitationTypeCount> mentions_by_type{};
  double seconds = 0.0;
  double rows_per_second = 0.0;

  std::uint64_t edges() const {
    std::uint64_t s = 0;
    for (auto c : edges_by_type) s += c;
    return s;
  }

  // Deterministic fields only; timing goes through write_timing.
  void write(std::ostream& os) const {
    os << "files=" << files << '\n'
       << "records=" << records << '\n'
       << "malformed=" << malformed << '\n'
       << "duplicate_records=" << duplicate_records << '\n'
       << "duplicate_edges=" << duplicate_edges << '\n'
       << "reversed_ranges=" << reversed_ranges << '\n'
       << "edges=" << edges() << '\n';
    for (auto t : textcite::kAllCitationTypes) {
      const auto i = textcite::index_of(t);
      os << "edges." << textcite::to_string(t) << '=' << edges_by_type[i] << '\n';
      os << "mentions." << textcite::to_string(t) << '=' << mentions_by_type[i] << '\n';
    }
  }

  void write_timing(std::ostream& os) const {
    os << "workers=" << workers << '\n'
       << "chunks=" << chunks << '\n'
       << "seconds=" << seconds << '\n'
       << "rows_per_second=" << rows_per_second << '\n';
  }
};

struct IngestResult {
  std::vector<CitationEdge> edges;  // sorted, one row per (decision, type, law, article)
  DecisionTable decisions;          // sorted by id
  IngestReport report;
};

namespace detail {

struct ChunkResult {
  std::vector<CitationEdge> edges;
  DecisionTable decisions;
  std::size_t records = 0;
  std::size_t malformed = 0;
  std::size_t reversed_ranges = 0;
};

inline ChunkResult process_chunk(const std::vector<std::string>& lines) {
  ChunkResult r;
  const auto& ex = textcite::Extractor::shared();
  for (const auto& line : lines) {
    auto rec = parse_record(line);
    if (!rec) {
      ++r.malformed;
      continue;
    }
    ++r.records;
    textcite::ExtractionDiagnostics diag;
    auto edges = ex.extract(rec->text, rec->doc_id, &diag);
    r.reversed_ranges += diag.reversed_ranges;
    for (auto& e : edges) r.edges.push_back(std::move(e));
    r.decisions.emplace_back(std::move(rec->doc_id), DecisionMeta{rec->year, rec->justice_kind});
  }
  return r;
}

// Share-nothing workers pulling chunks from a bounded queue.
class ChunkPool {
 public:
  explicit ChunkPool(std::size_t workers) : capacity_(2 * std::max<std::size_t>(workers, 1)) {
    for (std::size_t i = 0; i < std::max<std::size_t>(workers, 1); ++i) {
      threads_.emplace_back([this] { run(); });
    }
  }

  ~ChunkPool() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    not_empty_.notify_all();
    for (auto& t : threads_) {
      if (t.joinable()) t.join();
    }
  }

  void submit(std::vector<std::string> chunk) {
    std::unique_lock lock(mu_);
    not_full_.wait(lock, [&] { return queue_.size() < capacity_; });
    queue_.push_back(std::move(chunk));
    not_empty_.notify_one();
  }

  // Joins the workers and returns every chunk result; rethrows the first
  // worker failure.
  std::vector<ChunkResult> finish() {
    {
      std::lock_guard lock(mu_);
      closed_ = true;
    }
    not_empty_.notify_all();
    for (auto& t : threads_) {
      if (t.joinable()) t.join();
    }
    if (error_) std::rethrow_exception(error_);
    return std::move(results_);
  }

 private:
  void run() {
    for (;;) {
      std::vector<std::string> chunk;
      {
        std::unique_lock lock(mu_);
        not_empty_.wait(lock, [&] { return closed_ || !queue_.empty(); });
        if (queue_.empty()) return;
        chunk = std::move(queue_.front());
        queue_.pop_front();
        not_full_.notify_one();
      }
      try {
        auto r = process_chunk(chunk);
        std::lock_guard lock(mu_);
        results_.push_back(std::move(r));
      } catch (...) {
        std::lock_guard lock(mu_);
        if (!error_) error_ = std::current_exception();
      }
    }
  }

  std::size_t capacity_;
  std::mutex mu_;
  std::condition_variable not_empty_, not_full_;
  std::deque<std::vector<std::string>> queue_;
  std::vector<ChunkResult> results_;
  std::exception_ptr error_;
  bool closed_ = false;
  std::vector<std::thread> threads_;
};

inline bool same_edge_key(const CitationEdge& a, const CitationEdge& b) {
  return a.decision_id == b.decision_id && a.type == b.type && a.law_ref == b.law_ref &&
         a.article_ref == b.article_ref;
}

}  // namespace detail

// Sorts and folds duplicate rows: the first row per key wins, so re-merging
// already merged output is a no-op.
inline std::size_t merge_edges(std::vector<CitationEdge>& edges) {
  std::sort(edges.begin(), edges.end());
  const auto before = edges.size();
  edges.erase(std::unique(edges.begin(), edges.end(), detail::same_edge_key), edges.end());
  return before - edges.size();
}

inline std::size_t merge_decisions(DecisionTable& decisions) {
  std::sort(decisions.begin(), decisions.end(), [](const auto& a, const auto& b) {
    if (a.first != b.first) return a.first < b.first;
    if (a.second.year != b.second.year) return a.second.year < b.second.year;
    return a.second.justice_kind < b.second.justice_kind;
  });
  const auto before = decisions.size();
  decisions.erase(std::unique(decisions.begin(), decisions.end(),
                              [](const auto& a, const auto& b) { return a.first == b.first; }),
                  decisions.end());
  return before - decisions.size();
}

inline IngestResult ingest(std::span<const std::filesystem::path> paths, const IngestOptions& opts = {}) {
  if (opts.chunk_size == 0) throw InputError("ingest: chunk size must be positive");
  const auto t0 = std::chrono::steady_clock::now();
  IngestResult out;
  out.report.workers = std::max<std::size_t>(opts.workers, 1);

  // Open everything first so a bad path fails before any work starts.
  for (const auto& p : paths) {
    std::ifstream probe(p, std::ios::binary);
    if (!probe) throw InputError("cannot read partition file: " + p.string());
  }

  std::vector<detail::ChunkResult> results;
  {
    detail::ChunkPool pool(out.report.workers);
    for (const auto& p : paths) {
      std::ifstream in(p, std::ios::binary);
      if (!in) throw InputError("cannot read partition file: " + p.string());
      ++out.report.files;
      std::vector<std::string> chunk;
      std::string line;
      while (std::getline(in, line)) {
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        chunk.push_back(std::move(line));
        if (chunk.size() == opts.chunk_size) {
          ++out.report.chunks;
          pool.submit(std::move(chunk));
          chunk.clear();
        }
      }
      if (in.bad()) throw InputError("error reading partition file: " + p.string());
      if (!chunk.empty()) {
        ++out.report.chunks;
        pool.submit(std::move(chunk));
      }
    }
    results = pool.finish();
  }

  for (auto& r : results) {
    out.report.records += r.records;
    out.report.malformed += r.malformed;
    out.report.reversed_ranges += r.reversed_ranges;
    out.edges.insert(out.edges.end(), std::make_move_iterator(r.edges.begin()),
                     std::make_move_iterator(r.edges.end()));
    out.decisions.insert(out.decisions.end(), std::make_move_iterator(r.decisions.begin()),
                         std::make_move_iterator(r.decisions.end()));
  }
  out.report.duplicate_records = merge_decisions(out.decisions);
  out.report.duplicate_edges = merge_edges(out.edges);
  for (const auto& e : out.edges) {
    const auto i = textcite::index_of(e.type);
    ++out.report.edges_by_type[i];
    out.report.mentions_by_type[i] += e.count;
  }

  out.report.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.report.rows_per_second =
      out.report.seconds > 0.0 ? static_cast<double>(out.report.records) / out.report.seconds : 0.0;
  return out;
}

}  // namespace lexcite::pipeline
