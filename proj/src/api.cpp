#include "kh/api.hpp"

#include <sstream>
#include <stdexcept>

#include "kh/checks.hpp"
#include "kh/corpus.hpp"
#include "kh/homology.hpp"
#include "kh/movies.hpp"

namespace kh {

namespace {

Field ring_field(const std::string& ring) {
  if (ring == "Q" || ring == "Z") return Field::Q;
  if (ring == "F2") return Field::F2;
  throw std::invalid_argument("unknown ring: " + ring + " (use Q, F2 or Z)");
}

std::string name_of(const std::string& spec) {
  return corpus_entry(spec) ? spec : "custom";
}

nlohmann::json torsion_json(const TangleDiagram& t) {
  nlohmann::json a = nlohmann::json::array();
  for (auto& [rj, fs] : integral_torsion(apply_functor(spec_khovanov(), kh_complex(t))))
    for (auto& f : fs) a.push_back({rj.first, rj.second, f.get_str()});
  return a;
}

std::string verdict_name(int s) {
  return s == 1 || s == 2 ? "+1" : s == -1 ? "-1" : "none";
}

}  // namespace

Report homology_report(const std::string& diagram, const RunConfig& cfg,
                       bool all) {
  auto t = load_diagram(diagram);
  Report rep;
  auto& j = rep.json;
  j["knot"] = name_of(diagram);
  j["tables"] = nlohmann::json::object();
  std::ostringstream text;
  std::vector<BettiTable> tabs;
  if (all) {
    tabs.push_back(khovanov_betti(t, Field::Q, cfg.threads));
    tabs.push_back(khovanov_betti(t, Field::F2, cfg.threads));
    tabs.push_back(betti_b3(kh_complex(t), cfg.threads));
  } else if (cfg.functor == "khovanov") {
    tabs.push_back(khovanov_betti(t, ring_field(cfg.ring), cfg.threads));
    if (cfg.ring == "Z") j["torsion"] = torsion_json(t);
  } else if (cfg.functor == "f3") {
    tabs.push_back(betti_b3(kh_complex(t), cfg.threads));
  } else if (cfg.functor == "lee") {
    int d = total_dimension(apply_functor(spec_lee(), kh_complex(t)),
                            ring_field(cfg.ring), cfg.threads);
    j["dimension"] = d;
    text << "Lee homology over " << cfg.ring << ": dimension " << d << "\n";
  } else if (cfg.functor == "fc") {
    auto c = specialize(apply_functor(spec_fc(), kh_complex(t)), 1);
    int d = total_dimension(c, ring_field(cfg.ring), cfg.threads);
    j["dimension"] = d;
    text << "Fc homology at c = 1 over " << cfg.ring << ": dimension " << d << "\n";
  } else {
    throw std::invalid_argument("unknown functor: " + cfg.functor);
  }
  for (auto& b : tabs) j["tables"][b.field] = to_json(b);
  if (!tabs.empty()) {
    std::vector<const BettiTable*> ptrs;
    for (auto& b : tabs) ptrs.push_back(&b);
    text << betti_grid(ptrs);
    if (j.contains("torsion"))
      for (auto& x : j["torsion"])
        text << "torsion Z/" << x[2].get<std::string>() << " at (r, j) = ("
             << x[0] << ", " << x[1] << ")\n";
  }
  auto jh = jones_hat(t);
  j["jones_hat"] = to_json(jh);
  text << "jones_hat: " << jh.str() << "\n";
  rep.text = text.str();
  return rep;
}

Report jones_report(const std::string& diagram) {
  auto t = load_diagram(diagram);
  Report rep;
  auto jh = jones_hat(t);
  auto euler = graded_euler(kh_complex(t));
  rep.json = {{"knot", name_of(diagram)}, {"jones_hat", to_json(jh)},
              {"euler", to_json(euler)}};
  std::ostringstream text;
  text << "jones_hat: " << jh.str() << "\n";
  if (auto js = jones_standard(jh)) {
    rep.json["jones"] = to_json(*js);
    text << "jones:     " << js->str("t") << "\n";
  }
  text << "euler:     " << euler.str() << "\n";
  rep.pass = euler == jh;
  rep.json["pass"] = rep.pass;
  rep.text = text.str();
  return rep;
}

Report skein_report(const std::string& diagram) {
  auto t = load_diagram(diagram);
  auto fromkh = skein_class(kh_complex(t));
  auto direct = jones_skein(t);
  Report rep;
  rep.pass = fromkh == direct;
  auto tojs = [](const SkeinElement& s) {
    nlohmann::json a = nlohmann::json::array();
    for (auto& [m, p] : s) a.push_back({{"matching", m}, {"coef", to_json(p)}});
    return a;
  };
  rep.json = {{"knot", name_of(diagram)}, {"euler", tojs(fromkh)},
              {"state_sum", tojs(direct)}, {"pass", rep.pass}};
  rep.text = "euler:     " + skein_str(fromkh) + "\nstate sum: " +
             skein_str(direct) + "\n" + (rep.pass ? "agree\n" : "DIFFER\n");
  return rep;
}

Report compose_report(const std::string& diagram, const RunConfig& cfg) {
  auto t = load_diagram(diagram);
  auto cd = crossing_decomposition(t);
  std::vector<FormalComplex> parts;
  for (int i = 0; i < t.size(); ++i) {
    auto c = kh_complex(cd.parts[i]);
    c.xids = {i};
    parts.push_back(std::move(c));
  }
  auto direct = share(kh_complex(t));
  auto comp = t.size() ? share(planar_compose_complexes(cd.d, parts)) : direct;
  auto iso = cube_isomorphism(comp, direct);
  bool same_complex = iso && is_chain_map(*iso);
  Report rep;
  std::ostringstream text;
  text << "composed " << t.size() << " one-crossing complexes: "
       << comp->total_objects() << " objects, complex "
       << (same_complex ? "isomorphic to" : "DIFFERS FROM") << " the direct one\n";
  rep.json = {{"knot", name_of(diagram)},
              {"objects", comp->total_objects()},
              {"isomorphic", same_complex}};
  rep.pass = same_complex;
  if (t.closed()) {
    Field f = ring_field(cfg.ring);
    auto s = spec_khovanov(f == Field::F2 ? 2 : 0);
    auto a = betti(apply_functor(s, *comp), f, cfg.threads);
    auto b = betti(apply_functor(s, *direct), f, cfg.threads);
    rep.json["tables"] = {{a.field, to_json(a)}};
    rep.json["homology_equal"] = a == b;
    rep.pass = rep.pass && a == b;
    text << betti_grid({&a}) << "homology " << (a == b ? "equal" : "DIFFERS") << "\n";
  } else {
    rep.json["skein"] = skein_str(skein_class(*comp));
    text << "skein class: " << skein_str(skein_class(*comp)) << "\n";
  }
  rep.json["pass"] = rep.pass;
  rep.text = text.str();
  return rep;
}

Report movie_report(const std::string& movie_text, const RunConfig& cfg) {
  auto mf = parse_movie(movie_text);
  auto f = evaluate_movie_file(mf);
  Report rep;
  auto degs = map_degrees(f);
  bool chain = is_chain_map(f);
  std::vector<std::vector<int>> ev_degs;
  int chi = 0;
  for (size_t i = 0; i < mf.events.size(); ++i) {
    ev_degs.push_back(map_degrees(event_map(mf.frames[i], mf.events[i]).map));
    if (ev_degs.back().size() == 1) chi += ev_degs.back()[0];
  }
  const auto& first = mf.frames.front();
  const auto& last = mf.frames.back();
  std::string verdict = "none";
  std::optional<int> rank;
  if (first.closed()) rank = homology_rank(f);
  if (first.closed() && isomorphic(last, first)) {
    auto iso = relabel_map(last, first, f.tgt, f.src);
    if (iso) verdict = verdict_name(homotopic_sign(map_compose(*iso, f), cfg.threads));
  }
  rep.json = {{"frames", mf.frames.size()}, {"events", mf.events.size()},
              {"degrees", degs}, {"event_degrees", ev_degs},
              {"euler_characteristic", chi}, {"chain_map", chain}, {"verdict", verdict}};
  std::ostringstream text;
  text << "frames " << mf.frames.size() << ", events " << mf.events.size()
       << "\ndegrees:";
  for (int d : degs) text << " " << d;
  if (degs.empty()) text << " (zero map)";
  text << "\nper event:";
  for (size_t i = 0; i < ev_degs.size(); ++i) {
    text << " " << move_name(mf.events[i].move) << "(";
    for (size_t k = 0; k < ev_degs[i].size(); ++k) text << (k ? "," : "") << ev_degs[i][k];
    text << ")";
  }
  text << "\nsurface euler characteristic: " << chi;
  text << "\nchain map: " << (chain ? "yes" : "NO") << "\n";
  if (rank) {
    rep.json["homology_rank"] = *rank;
    text << "rank on homology: " << *rank << "\n";
  }
  text << "verdict: " << verdict << "\n";
  rep.pass = chain;
  rep.text = text.str();
  return rep;
}

Report check_report(const std::string& suite, const RunConfig& cfg, int mm) {
  std::vector<CheckResult> rs;
  auto want = [&](const char* s) { return suite == s || suite == "all"; };
  bool known = false;
  auto run = [&](const char* s, auto fn) {
    if (!want(s)) return;
    known = true;
    rs.push_back(fn());
  };
  run("relations", [] { return check_relations(); });
  run("relations", [] { return check_reduce(); });
  run("degrees", [] { return check_degrees(); });
  run("dsquared", [] { return check_dsquared(); });
  run("invariance", [&] { return check_invariance(100, 1, 6, cfg.threads); });
  run("planar", [&] { return check_planar(6, cfg.threads); });
  run("jones", [] { return check_jones(); });
  run("lee", [&] { return check_lee(3, 8, cfg.threads); });
  run("frobenius", [] { return check_frobenius(); });
  run("movies", [&] { return check_movies(mm, cfg.threads); });
  if (!known) throw std::invalid_argument("unknown check suite: " + suite);
  Report rep;
  rep.json = nlohmann::json::array();
  for (auto& r : rs) {
    rep.pass = rep.pass && r.pass;
    rep.json.push_back({{"name", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    rep.text += (r.pass ? "PASS " : "FAIL ") + r.name + ": " + r.detail + "\n";
  }
  return rep;
}

Report dump_report(const std::string& diagram, const RunConfig& cfg) {
  auto t = load_diagram(diagram);
  int mod = cfg.ring == "F2" ? 2 : 0;
  auto k = kh_complex(t, mod);
  Report rep;
  rep.json = {{"knot", name_of(diagram)},
              {"pd", to_pd(t)},
              {"formal", to_json(k)},
              {"algebraic", to_json(apply_functor(spec_by_name(cfg.functor, mod), k))}};
  rep.text = rep.json.dump(1) + "\n";
  return rep;
}

}  // namespace kh
