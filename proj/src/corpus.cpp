#include "kh/corpus.hpp"

#include <fstream>
#include <sstream>

namespace kh {

namespace {
#include "corpus_data.inc"
}

const std::vector<CorpusEntry>& corpus() {
  static const std::vector<CorpusEntry> c = [] {
    std::vector<CorpusEntry> out;
    std::istringstream in(kCorpusText);
    std::string line;
    while (std::getline(in, line)) {
      if (line.empty() || line[0] == '#') continue;
      std::istringstream ls(line);
      CorpusEntry e;
      ls >> e.name >> e.components;
      std::getline(ls >> std::ws, e.pd);
      out.push_back(e);
    }
    return out;
  }();
  return c;
}

std::optional<CorpusEntry> corpus_entry(const std::string& name) {
  for (auto& e : corpus())
    if (e.name == name) return e;
  return std::nullopt;
}

TangleDiagram load_diagram(const std::string& spec) {
  if (auto e = corpus_entry(spec)) return parse_pd(e->pd);
  if (spec.find('[') != std::string::npos) return parse_pd(spec);
  std::ifstream f(spec);
  if (!f) throw DiagramError("not a corpus name, PD code or readable file: " + spec);
  std::stringstream ss;
  ss << f.rdbuf();
  return parse_pd(ss.str());
}

}  // namespace kh
