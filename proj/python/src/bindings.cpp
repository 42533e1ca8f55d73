#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "kh/api.hpp"
#include "kh/corpus.hpp"

namespace py = pybind11;
using namespace kh;

namespace {

RunConfig config(const std::string& functor, const std::string& ring,
                 int threads) {
  RunConfig c;
  c.functor = functor;
  c.ring = ring;
  c.threads = threads;
  return c;
}

// JSON text, rendered text and pass flag; the Python side decodes the JSON.
py::tuple wrap(const Report& r) {
  return py::make_tuple(r.json.dump(), r.text, r.pass);
}

}  // namespace

PYBIND11_MODULE(_khtool, m) {
  m.doc() = "Khovanov homology engine";
  m.def(
      "homology",
      [](const std::string& d, const std::string& functor,
         const std::string& ring, bool all, int threads) {
        py::gil_scoped_release nogil;
        auto r = homology_report(d, config(functor, ring, threads), all);
        py::gil_scoped_acquire gil;
        return wrap(r);
      },
      py::arg("diagram"), py::arg("functor") = "khovanov", py::arg("ring") = "Q",
      py::arg("all") = false, py::arg("threads") = 1);
  m.def("jones", [](const std::string& d) { return wrap(jones_report(d)); },
        py::arg("diagram"));
  m.def("skein", [](const std::string& d) { return wrap(skein_report(d)); },
        py::arg("diagram"));
  m.def(
      "compose",
      [](const std::string& d, const std::string& ring, int threads) {
        return wrap(compose_report(d, config("khovanov", ring, threads)));
      },
      py::arg("diagram"), py::arg("ring") = "Q", py::arg("threads") = 1);
  m.def(
      "movie",
      [](const std::string& text, int threads) {
        return wrap(movie_report(text, config("khovanov", "Q", threads)));
      },
      py::arg("text"), py::arg("threads") = 1);
  m.def(
      "check",
      [](const std::string& suite, int mm, int threads) {
        py::gil_scoped_release nogil;
        auto r = check_report(suite, config("khovanov", "Q", threads), mm);
        py::gil_scoped_acquire gil;
        return wrap(r);
      },
      py::arg("suite"), py::arg("mm") = 0, py::arg("threads") = 1);
  m.def(
      "dump",
      [](const std::string& d, const std::string& functor,
         const std::string& ring) {
        return wrap(dump_report(d, config(functor, ring, 1)));
      },
      py::arg("diagram"), py::arg("functor") = "khovanov", py::arg("ring") = "Q");
  m.def("corpus", [] {
    std::vector<std::tuple<std::string, int, std::string>> out;
    for (auto& e : corpus()) out.emplace_back(e.name, e.components, e.pd);
    return out;
  });
}
