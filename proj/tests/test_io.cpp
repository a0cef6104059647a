#include <sstream>

#include "doctest.h"
#include "gpw/error.hpp"
#include "gpw/io.hpp"

using gpw::cplx;
using gpw::Signal;
namespace io = gpw::io;

namespace {

std::size_t parse_error_line(const std::string& text) {
  std::istringstream in(text);
  try {
    io::parse_edge_list(in);
  } catch (const gpw::ParseError& e) {
    return e.line();
  }
  FAIL("edge list unexpectedly accepted");
  return 0;
}

}  // namespace

TEST_CASE("edge lists") {
  std::istringstream in("# comment\n\na b 1.5\nb c\n  c a 2  # trailing\n");
  const auto g = io::parse_edge_list(in);
  CHECK(g.size() == 3);
  CHECK(g.edge_count() == 3);
  CHECK(g.weight(*g.find("a"), *g.find("b")) == 1.5);
  CHECK(g.weight(*g.find("b"), *g.find("c")) == 1.0);
  CHECK(g.weight(*g.find("a"), *g.find("c")) == 2.0);

  CHECK(parse_error_line("a b 1\nb c heavy\n") == 2);
  CHECK(parse_error_line("a b 1\n\nb\n") == 3);
  CHECK(parse_error_line("a b -1\n") == 1);
  CHECK(parse_error_line("a a 1\n") == 1);
  CHECK(parse_error_line("a b 1 2\n") == 1);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(io::parse_edge_list(empty), gpw::ParseError);
}

TEST_CASE("builtin graphs") {
  const auto p = io::builtin_graph("path:9");
  REQUIRE(p.has_value());
  CHECK(p->first == gpw::LatticeKind::path);
  CHECK(p->second == 9);
  CHECK(io::builtin_graph("cycle:12")->first == gpw::LatticeKind::cycle);
  CHECK_FALSE(io::builtin_graph("some/file.edges").has_value());
  CHECK(io::resolve_graph("cycle:5").edge_count() == 5);
  CHECK_THROWS_AS(io::resolve_graph("path:x"), gpw::Error);
  CHECK_THROWS_AS(io::resolve_graph("cycle:2"), gpw::Error);
  CHECK_THROWS_AS(io::resolve_graph("/nonexistent/graph.edges"), gpw::Error);
}

TEST_CASE("complex numbers") {
  CHECK(io::parse_complex("1.5") == cplx(1.5, 0));
  CHECK(io::parse_complex("-2") == cplx(-2, 0));
  CHECK(io::parse_complex("1+2j") == cplx(1, 2));
  CHECK(io::parse_complex("0.5-1e-3j") == cplx(0.5, -1e-3));
  CHECK(io::parse_complex("3j") == cplx(0, 3));
  CHECK(io::parse_complex("1e-3+2e+1j") == cplx(1e-3, 20));
  CHECK_THROWS_AS(io::parse_complex("abc"), gpw::ParseError);
  CHECK_THROWS_AS(io::parse_complex("1+2"), gpw::ParseError);
  CHECK_THROWS_AS(io::parse_complex(""), gpw::ParseError);
  for (cplx z : {cplx(0.1, -0.3), cplx(-7, 0), cplx(1e-300, 2.5e10)})
    CHECK(io::parse_complex(io::format_complex(z)) == z);
}

TEST_CASE("signals") {
  const auto g = io::resolve_graph("path:4");
  const Signal f = io::signal_from_json(io::json::parse(R"([1, "2-1j", [0.5, 0.25], 0])"), 4);
  CHECK(f(1) == cplx(2, -1));
  CHECK(f(2) == cplx(0.5, 0.25));
  CHECK_THROWS_AS(io::signal_from_json(io::json::parse("[1, 2]"), 4), gpw::ParseError);

  std::istringstream csv("vertex,value\n0,1\n3,2+1j\n");
  const Signal h = io::parse_signal_csv(csv, g);
  CHECK(h(0) == cplx(1, 0));
  CHECK(h(1) == cplx(0, 0));
  CHECK(h(3) == cplx(2, 1));
  std::istringstream dup("0,1\n0,2\n");
  CHECK_THROWS_AS(io::parse_signal_csv(dup, g), gpw::ParseError);
  std::istringstream unknown("9,1\n");
  CHECK_THROWS_AS(io::parse_signal_csv(unknown, g), gpw::ParseError);
}

TEST_CASE("cover files") {
  const auto g = io::resolve_graph("path:9");
  const auto fs = io::load_cover(GPW_TEST_DATA "/path9_cover.json", g);
  REQUIRE(fs.count() == 3);
  CHECK(fs.kind == gpw::FunctionalKind::explicit_weights);  // mixed kinds
  CHECK(fs.weights[0].sum() == cplx(3, 0));
  CHECK(fs.weights[1](4) == cplx(1, 0));
  CHECK(fs.weights[1].norm() == doctest::Approx(1.0));
  CHECK(fs.weights[2](7) == cplx(0.5, 0.5));

  const auto bcast = io::functionals_from_json(io::json::parse(R"({"subsets": [[0,1,2],[3,4,5],[6,7,8]]})"), g);
  for (std::size_t j = 0; j < 3; ++j) CHECK(bcast.weights[j].norm() == doctest::Approx(1.0));
  const auto over = io::functionals_from_json(
      io::json::parse(R"({"subsets": [[0,1,2],[3,4,5],[6,7,8]], "functionals": [{"kind": "normalized"}]})"), g,
      gpw::FunctionalKind::dirac);
  CHECK(over.kind == gpw::FunctionalKind::dirac);
  for (std::size_t j = 0; j < 3; ++j) CHECK((over.weights[j].array() != cplx(0)).count() == 1);

  try {
    io::load_cover(GPW_TEST_DATA "/shared_edge_cover.json", g);
    FAIL("shared edge accepted");
  } catch (const gpw::CoverError& e) {
    CHECK(e.clause() == gpw::CoverClause::shared_edge);
  }
  CHECK_THROWS_AS(io::functionals_from_json(io::json::parse(R"({"subsets": 3})"), g), gpw::ParseError);
  CHECK_THROWS_AS(io::functionals_from_json(
                      io::json::parse(R"({"subsets": [[0,1,2],[3,4,5],[6,7,8]], "functionals": [{}, {}]})"), g),
                  gpw::ParseError);
  CHECK_THROWS_AS(io::parse_functional_kind("gaussian"), gpw::ParseError);
  CHECK(io::triple_functionals(g, gpw::FunctionalKind::characteristic).count() == 3);
}

TEST_CASE("reports are deterministic text") {
  const auto fix = gpw::triple_cover_fixture(9, gpw::LatticeKind::path);
  const auto j = io::to_json(fix.spectrum, 1.0);
  CHECK(j["eigenvalues"].size() == 9);
  CHECK(j["dimension"].get<std::size_t>() == fix.spectrum.band_dimension(1.0));
  const std::string a = io::dump(j), b = io::dump(io::to_json(fix.spectrum, 1.0));
  CHECK(a == b);
  CHECK(a.back() == '\n');
  const auto d = io::to_json(gpw::lattice_discrepancies(fix).front());
  CHECK(d["quantity"] == "induced_triple_spectrum");
  CHECK(d["agrees"] == false);
}
