#pragma once
#include <optional>
#include <string>
#include <vector>

#include "kh/diagram.hpp"

namespace kh {

struct CorpusEntry {
  std::string name;
  int components = 1;
  std::string pd;
};

// Bundled PD codes: prime knots up to 8 crossings, 10_136, a few links and
// unlinks.
const std::vector<CorpusEntry>& corpus();
std::optional<CorpusEntry> corpus_entry(const std::string& name);

// A corpus name, a PD string, or a path to a file holding a PD string.
TangleDiagram load_diagram(const std::string& spec);

}  // namespace kh
