#pragma once
#include <string>

#include "json.hpp"

namespace kh {

struct RunConfig {
  std::string functor = "khovanov";  // khovanov, lee, f3, fc
  std::string ring = "Q";            // Q, F2, Z
  std::string format = "table";      // table, json
  int threads = 1;
  int verbosity = 0;
};

struct Report {
  nlohmann::json json;
  std::string text;
  bool pass = true;
};

// `diagram` is a corpus name, a PD string or a file path.
Report homology_report(const std::string& diagram, const RunConfig& cfg,
                       bool all = false);
Report jones_report(const std::string& diagram);
Report skein_report(const std::string& diagram);
Report compose_report(const std::string& diagram, const RunConfig& cfg);
Report movie_report(const std::string& movie_text, const RunConfig& cfg);
// suite: relations, invariance, planar, movies, dsquared, degrees, jones,
// lee, frobenius, all. mm selects one movie move (0 = all but 10).
Report check_report(const std::string& suite, const RunConfig& cfg,
                    int mm = 0);
Report dump_report(const std::string& diagram, const RunConfig& cfg);

}  // namespace kh
