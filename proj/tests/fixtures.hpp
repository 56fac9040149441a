#pragma once

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "lexcite/textcite.hpp"

namespace fixtures {

struct ExtractionCase {
  std::string name;
  std::string text;
  std::vector<lexcite::textcite::CitationEdge> expected;  // in output order
};

inline std::string slurp(const std::filesystem::path& p) {
  std::ifstream is(p, std::ios::binary);
  std::ostringstream ss;
  ss << is.rdbuf();
  return ss.str();
}

inline std::vector<ExtractionCase> extraction_cases() {
  namespace fs = std::filesystem;
  const fs::path dir = fs::path(LEXCITE_FIXTURE_DIR) / "extraction";
  std::vector<fs::path> txt;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.path().extension() == ".txt") txt.push_back(e.path());
  }
  std::sort(txt.begin(), txt.end());
  std::vector<ExtractionCase> out;
  for (const auto& p : txt) {
    ExtractionCase c;
    c.name = p.stem().string();
    c.text = slurp(p);
    std::ifstream tsv(fs::path(p).replace_extension(".tsv"));
    std::string line;
    while (std::getline(tsv, line)) {
      if (line.empty()) continue;
      std::vector<std::string> f;
      std::stringstream ss(line);
      for (std::string x; std::getline(ss, x, '\t');) f.push_back(x);
      while (f.size() < 4) f.emplace_back();
      lexcite::textcite::CitationEdge e;
      e.decision_id = "fx";
      e.type = *lexcite::textcite::parse_citation_type(f[0]);
      e.law_ref = f[1];
      if (!f[2].empty()) e.article_ref = f[2];
      e.count = static_cast<std::uint32_t>(std::stoul(f[3]));
      c.expected.push_back(e);
    }
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace fixtures
