#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

#include "CLI11.hpp"
#include "kh/api.hpp"

using namespace kh;

namespace {

std::string read_file(const std::string& path) {
  if (path == "-") {
    std::stringstream ss;
    ss << std::cin.rdbuf();
    return ss.str();
  }
  std::ifstream f(path);
  if (!f) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return ss.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Khovanov homology of knots, tangles and movies"};
  app.require_subcommand(1);
  app.fallthrough();
  RunConfig cfg;
  bool json = false;
  app.add_option("--functor", cfg.functor, "khovanov, lee, f3 or fc")
      ->check(CLI::IsMember({"khovanov", "lee", "f3", "fc"}));
  app.add_option("--ring", cfg.ring, "Q, F2 or Z")
      ->check(CLI::IsMember({"Q", "F2", "Z"}));
  app.add_flag("--json", json, "JSON output");
  app.add_option("--threads", cfg.threads, "worker threads (0 = all cores)")
      ->check(CLI::NonNegativeNumber);
  app.add_flag("-v,--verbose", cfg.verbosity, "more output");

  std::string diagram, suite, movie_path;
  bool all = false;
  int mm = 0;

  auto* hom = app.add_subcommand("homology", "Betti tables of a link diagram");
  hom->add_option("diagram", diagram, "corpus name, PD code or file")->required();
  hom->add_flag("--all", all, "Q, F2 and b3 tables in one grid");
  auto* jones = app.add_subcommand("jones", "Jones polynomial and Euler characteristic");
  jones->add_option("diagram", diagram)->required();
  auto* skein = app.add_subcommand("skein", "skein class of a tangle");
  skein->add_option("diagram", diagram)->required();
  auto* comp = app.add_subcommand("compose", "build the complex from one-crossing pieces");
  comp->add_option("diagram", diagram)->required();
  auto* movie = app.add_subcommand("movie", "chain map of a movie file");
  movie->add_option("file", movie_path, "movie file or - for stdin")->required();
  auto* check = app.add_subcommand("check", "self checks");
  check->add_option("suite", suite)
      ->required()
      ->check(CLI::IsMember({"relations", "invariance", "planar", "movies",
                             "dsquared", "degrees", "jones", "lee",
                             "frobenius", "all"}));
  check->add_option("--mm", mm, "single movie move 1..15")->check(CLI::Range(1, 15));
  auto* dump = app.add_subcommand("dump", "formal and algebraic complexes as JSON");
  dump->add_option("diagram", diagram)->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int rc = app.exit(e);
    return rc == 0 ? 0 : 2;
  }
  if (cfg.threads == 0) cfg.threads = (int)std::max(1u, std::thread::hardware_concurrency());
  cfg.format = json ? "json" : "table";

  try {
    Report rep;
    if (*hom) rep = homology_report(diagram, cfg, all);
    else if (*jones) rep = jones_report(diagram);
    else if (*skein) rep = skein_report(diagram);
    else if (*comp) rep = compose_report(diagram, cfg);
    else if (*movie) rep = movie_report(read_file(movie_path), cfg);
    else if (*check) rep = check_report(suite, cfg, mm);
    else rep = dump_report(diagram, cfg);
    if (json) std::cout << rep.json.dump() << "\n";
    else std::cout << rep.text;
    return rep.pass ? 0 : 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
