#include "gpw/io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "gpw/error.hpp"

namespace gpw::io {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

bool parse_double(const std::string& text, double& out) {
  if (text.empty()) return false;
  const char* first = text.data();
  if (*first == '+') ++first;
  const char* last = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last && std::isfinite(out);
}

std::ifstream open(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse, "cannot open '" + path + "'");
  return in;
}

std::string vertex_label(const json& v) {
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number_integer()) return std::to_string(v.get<long long>());
  throw ParseError(0, "vertex identifiers must be strings or integers, got " + v.dump());
}

cplx complex_from_json(const json& v) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) return parse_complex(v.get<std::string>());
  if (v.is_array() && v.size() == 2 && v[0].is_number() && v[1].is_number())
    return {v[0].get<double>(), v[1].get<double>()};
  throw ParseError(0, "expected a number, complex string or [re, im], got " + v.dump());
}

json parse_json_file(const std::string& path) {
  std::ifstream in = open(path);
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ParseError(0, path + ": " + e.what());
  }
}

std::size_t parse_count(const std::string& text, const std::string& what) {
  std::size_t n = 0;
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), n);
  if (ec != std::errc() || ptr != text.data() + text.size() || text.empty())
    throw ParseError(0, "malformed builtin graph '" + what + "'");
  return n;
}

json number(double x) { return std::isfinite(x) ? json(x) : json(nullptr); }

}  // namespace

WeightedGraph parse_edge_list(std::istream& in) {
  std::vector<EdgeSpec> edges;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream fields(line);
    std::vector<std::string> tok;
    for (std::string t; fields >> t;) tok.push_back(t);
    if (tok.empty()) continue;
    if (tok.size() != 2 && tok.size() != 3)
      throw ParseError(lineno, "expected 'u v weight', got " + std::to_string(tok.size()) + " fields");
    double w = 1.0;
    if (tok.size() == 3 && !parse_double(tok[2], w)) throw ParseError(lineno, "malformed weight '" + tok[2] + "'");
    if (w < 0.0) throw ParseError(lineno, "negative weight " + tok[2]);
    if (tok[0] == tok[1] && w != 0.0) throw ParseError(lineno, "self-loop at '" + tok[0] + "'");
    edges.emplace_back(tok[0], tok[1], w);
  }
  if (edges.empty()) throw ParseError(0, "edge list is empty");
  try {
    return build_graph(edges);
  } catch (const ParseError&) {
    throw;
  } catch (const Error& e) {
    throw ParseError(0, e.what());
  }
}

WeightedGraph load_edge_list(const std::string& path) {
  std::ifstream in = open(path);
  return parse_edge_list(in);
}

std::optional<std::pair<LatticeKind, std::size_t>> builtin_graph(const std::string& source) {
  for (auto [prefix, kind] : {std::pair{"path:", LatticeKind::path}, std::pair{"cycle:", LatticeKind::cycle}}) {
    const std::string p = prefix;
    if (source.rfind(p, 0) == 0) return std::pair{kind, parse_count(source.substr(p.size()), source)};
  }
  return std::nullopt;
}

WeightedGraph resolve_graph(const std::string& source) {
  if (auto b = builtin_graph(source)) {
    try {
      return b->first == LatticeKind::path ? make_path(b->second) : make_cycle(b->second);
    } catch (const Error& e) {
      throw ParseError(0, "'" + source + "': " + e.what());
    }
  }
  return load_edge_list(source);
}

cplx parse_complex(const std::string& raw) {
  std::string s;
  for (char ch : raw)
    if (!std::isspace(static_cast<unsigned char>(ch))) s.push_back(ch);
  if (s.empty()) throw ParseError(0, "empty complex literal");
  const auto bad = [&] { return ParseError(0, "malformed complex literal '" + raw + "'"); };
  if (s.back() != 'j' && s.back() != 'i') {
    double re = 0.0;
    if (!parse_double(s, re)) throw bad();
    return re;
  }
  s.pop_back();
  // Split at the last sign that is not part of an exponent.
  std::size_t split = std::string::npos;
  for (std::size_t i = s.size(); i-- > 1;)
    if ((s[i] == '+' || s[i] == '-') && s[i - 1] != 'e' && s[i - 1] != 'E') {
      split = i;
      break;
    }
  std::string re_text = split == std::string::npos ? "" : s.substr(0, split);
  std::string im_text = split == std::string::npos ? s : s.substr(split);
  if (im_text.empty() || im_text == "+" || im_text == "-") im_text += "1";
  double re = 0.0, im = 0.0;
  if (!re_text.empty() && !parse_double(re_text, re)) throw bad();
  if (!parse_double(im_text, im)) throw bad();
  return {re, im};
}

std::string format_complex(cplx z) {
  std::ostringstream os;
  os.precision(17);
  os << z.real();
  if (z.imag() != 0.0) os << (std::signbit(z.imag()) ? "-" : "+") << std::abs(z.imag()) << "j";
  return os.str();
}

Signal signal_from_json(const json& j, std::size_t n) {
  if (!j.is_array()) throw ParseError(0, "signal must be a JSON array");
  if (j.size() != n)
    throw ParseError(0, "signal has " + std::to_string(j.size()) + " entries, graph has " + std::to_string(n));
  Signal f(static_cast<Eigen::Index>(n));
  for (std::size_t i = 0; i < n; ++i) f(static_cast<Eigen::Index>(i)) = complex_from_json(j[i]);
  return f;
}

Signal parse_signal_csv(std::istream& in, const WeightedGraph& g) {
  Signal f = Signal::Zero(static_cast<Eigen::Index>(g.size()));
  std::string line;
  std::size_t lineno = 0;
  std::vector<char> seen(g.size(), 0);
  while (std::getline(in, line)) {
    ++lineno;
    line = trim(line);
    if (line.empty() || line[0] == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw ParseError(lineno, "expected 'vertex,value'");
    const std::string v = trim(line.substr(0, comma));
    const std::string val = trim(line.substr(comma + 1));
    if (lineno == 1 && v == "vertex") continue;
    const auto idx = g.find(v);
    if (!idx) throw ParseError(lineno, "unknown vertex '" + v + "'");
    if (seen[*idx]) throw ParseError(lineno, "vertex '" + v + "' listed twice");
    seen[*idx] = 1;
    try {
      f(static_cast<Eigen::Index>(*idx)) = parse_complex(val);
    } catch (const ParseError& e) {
      throw ParseError(lineno, e.what());
    }
  }
  return f;
}

Signal load_signal(const std::string& path, const WeightedGraph& g) {
  if (path.size() >= 4 && path.substr(path.size() - 4) == ".csv") {
    std::ifstream in = open(path);
    return parse_signal_csv(in, g);
  }
  return signal_from_json(parse_json_file(path), g.size());
}

FunctionalKind parse_functional_kind(const std::string& name) {
  if (name == "characteristic") return FunctionalKind::characteristic;
  if (name == "normalized") return FunctionalKind::normalized;
  if (name == "dirac") return FunctionalKind::dirac;
  if (name == "explicit") return FunctionalKind::explicit_weights;
  throw ParseError(0, "unknown functional kind '" + name + "' (characteristic|normalized|dirac|explicit)");
}

FunctionalSet functionals_from_json(const json& j, const WeightedGraph& g, std::optional<FunctionalKind> override_kind) {
  if (!j.is_object() || !j.contains("subsets") || !j["subsets"].is_array())
    throw ParseError(0, "cover must be an object with a 'subsets' array");
  std::vector<std::vector<std::string>> subsets;
  for (const auto& s : j["subsets"]) {
    if (!s.is_array()) throw ParseError(0, "each subset must be an array of vertices");
    std::vector<std::string> labels;
    for (const auto& v : s) labels.push_back(vertex_label(v));
    subsets.push_back(std::move(labels));
  }
  Cover cover = build_cover(g, subsets);

  json entries = j.value("functionals", json::array());
  if (!entries.is_array()) throw ParseError(0, "'functionals' must be an array");
  if (entries.empty()) entries.push_back({{"kind", "normalized"}});
  if (entries.size() != 1 && entries.size() != cover.count())
    throw ParseError(0, "need 1 or " + std::to_string(cover.count()) + " functional entries, got " +
                            std::to_string(entries.size()));

  std::vector<Signal> weights;
  std::optional<FunctionalKind> common;
  bool mixed = false;
  for (std::size_t jdx = 0; jdx < cover.count(); ++jdx) {
    const json& e = entries.size() == 1 ? entries[0] : entries[jdx];
    if (!e.is_object() || !e.contains("kind") || !e["kind"].is_string())
      throw ParseError(0, "functional entry needs a string 'kind'");
    FunctionalKind kind = parse_functional_kind(e["kind"].get<std::string>());
    const bool kind_only = e.size() == 1;
    if (override_kind && kind_only) kind = *override_kind;
    if (common && *common != kind) mixed = true;
    common = kind;

    const VertexSet& s = cover.subsets[jdx];
    switch (kind) {
      case FunctionalKind::characteristic: {
        VertexSet u = s;
        if (e.contains("subset")) {
          u.clear();
          for (const auto& v : e["subset"]) u.push_back(g.index(vertex_label(v)));
        }
        weights.push_back(functional_characteristic(cover, jdx, u));
        break;
      }
      case FunctionalKind::normalized:
        weights.push_back(functional_normalized(cover, jdx));
        break;
      case FunctionalKind::dirac: {
        const std::size_t v = e.contains("vertex") ? g.index(vertex_label(e["vertex"])) : s[s.size() / 2];
        weights.push_back(functional_dirac(cover, jdx, v));
        break;
      }
      case FunctionalKind::explicit_weights: {
        if (!e.contains("weights") || !e["weights"].is_object())
          throw ParseError(0, "explicit functional needs a 'weights' object {vertex: value}");
        Signal psi = Signal::Zero(static_cast<Eigen::Index>(g.size()));
        for (const auto& [label, value] : e["weights"].items())
          psi(static_cast<Eigen::Index>(g.index(label))) = complex_from_json(value);
        weights.push_back(std::move(psi));
        break;
      }
    }
  }
  return make_functionals(std::move(cover), std::move(weights),
                          mixed ? FunctionalKind::explicit_weights : common.value_or(FunctionalKind::explicit_weights));
}

FunctionalSet load_cover(const std::string& path, const WeightedGraph& g, std::optional<FunctionalKind> override_kind) {
  return functionals_from_json(parse_json_file(path), g, override_kind);
}

FunctionalSet triple_functionals(const WeightedGraph& g, FunctionalKind kind) {
  if (g.size() % 3 != 0)
    throw Error(Errc::invalid_argument, "triple cover needs N divisible by 3, got " + std::to_string(g.size()));
  std::vector<VertexSet> subsets;
  for (std::size_t j = 0; j < g.size() / 3; ++j) subsets.push_back({3 * j, 3 * j + 1, 3 * j + 2});
  Cover c = build_cover(g, std::move(subsets));
  switch (kind) {
    case FunctionalKind::characteristic: return characteristic_functionals(std::move(c));
    case FunctionalKind::dirac: return dirac_functionals(std::move(c));
    case FunctionalKind::normalized: return normalized_functionals(std::move(c));
    case FunctionalKind::explicit_weights: break;
  }
  throw Error(Errc::invalid_argument, "explicit functionals need a cover file");
}

// ---------------------------------------------------------------------------
// Reports

json to_json(const SpectralDecomposition& d, std::optional<double> omega) {
  json j;
  j["eigenvalues"] = std::vector<double>(d.eigenvalues.data(), d.eigenvalues.data() + d.eigenvalues.size());
  const auto l1 = d.first_nonzero();
  j["lambda_1"] = l1 ? json(*l1) : json(nullptr);
  j["lambda_max"] = d.lambda_max();
  j["bandwidth"] = omega ? json(*omega) : json(nullptr);
  j["dimension"] = omega ? json(d.band_dimension(*omega)) : json(nullptr);
  return j;
}

json to_json(const InequalityCheck& c) {
  json j{{"name", c.name}, {"lhs", number(c.lhs)}, {"rhs", number(c.rhs)}, {"margin", number(c.margin)},
         {"holds", c.holds}};
  j["epsilon"] = c.epsilon ? json(*c.epsilon) : json(nullptr);
  return j;
}

json to_json(const InequalityReport& r) {
  // Worst check per (name, epsilon), in first-appearance order.
  std::vector<std::pair<std::string, std::optional<double>>> order;
  std::map<std::pair<std::string, double>, std::pair<InequalityCheck, std::size_t>> worst;
  for (const auto& c : r.checks) {
    const auto key = std::pair{c.name, c.epsilon.value_or(-1.0)};
    auto it = worst.find(key);
    if (it == worst.end()) {
      order.emplace_back(c.name, c.epsilon);
      worst.emplace(key, std::pair{c, std::size_t{1}});
    } else {
      ++it->second.second;
      if (c.margin < it->second.first.margin) it->second.first = c;
    }
  }
  json list = json::array();
  for (const auto& [name, eps] : order) {
    const auto& [c, count] = worst.at({name, eps.value_or(-1.0)});
    json e = to_json(c);
    e["worst_margin"] = e["margin"];
    e.erase("margin");
    e["evaluations"] = count;
    list.push_back(std::move(e));
  }
  return {{"all_hold", r.all_hold()},
          {"worst_margin", number(r.worst_margin())},
          {"margin_tolerance", kMarginTolerance},
          {"cover_multiplicity", r.cover_multiplicity},
          {"inequalities", std::move(list)}};
}

json to_json(const PoincareConstants& k) {
  return {{"Theta", k.theta_max}, {"Lambda", number(k.lambda_min)}, {"c", k.c}, {"C", k.C},
          {"theta", k.theta},     {"lambda1", k.lambda1}};
}

json to_json(const FrameCertificate& c) {
  return {{"epsilon", c.epsilon},
          {"gamma", c.gamma},
          {"hypothesis", c.hypothesis},
          {"omega_limit", number(c.omega_limit)},
          {"lower_bound", c.lower_bound},
          {"upper_bound", c.upper_bound},
          {"lower_consistent", c.lower_consistent},
          {"upper_consistent", c.upper_consistent},
          {"best_epsilon", c.best_epsilon},
          {"best_lower_bound", c.best_lower_bound},
          {"cover_multiplicity", c.cover_multiplicity},
          {"constants", to_json(c.constants)}};
}

json to_json(const Discrepancy& d) {
  json stated = json::array(), computed = json::array();
  for (double x : d.stated) stated.push_back(number(x));
  for (double x : d.computed) computed.push_back(number(x));
  return {{"quantity", d.quantity},
          {"stated", std::move(stated)},
          {"computed", std::move(computed)},
          {"max_abs_difference", number(d.max_abs_difference)},
          {"agrees", d.agrees},
          {"note", d.note}};
}

json to_json(const LatticeReport& r) {
  json j;
  j["N"] = r.n;
  j["kind"] = to_string(r.kind);
  j["method"] = to_string(r.method);
  j["omega"] = r.omega;
  j["epsilon"] = r.epsilon;
  j["admissible_range"] = {0.0, number(r.admissible_upper)};
  j["omega_threshold"] = number(r.omega_threshold);
  j["gamma"] = number(r.gamma);
  j["admissible"] = r.admissible;
  j["reconstructible"] = r.reconstructible;
  j["pw_dimension"] = r.pw_dimension;
  j["sample_count"] = r.sample_count;
  j["errors"] = r.errors;
  j["norms"] = r.norms;
  j["bound"] = r.bound ? number(*r.bound) : json(nullptr);
  j["bounds_respected"] = r.bounds_respected;
  if (r.method == ReconMethod::frame) {
    j["frame"] = {{"A", r.A}, {"B", r.B}, {"rho", r.rho}, {"eta", r.eta}, {"iterations", r.max_iterations}};
  } else {
    json rows = json::array();
    for (const auto& row : r.spline_rows)
      rows.push_back({{"k", row.k},
                      {"max_relative_error", row.max_relative_error},
                      {"relative_bound", row.relative_bound ? number(*row.relative_bound) : json(nullptr)}});
    j["spline"] = {{"steps", std::move(rows)}};
  }
  json ev = json::array();
  for (const auto& e : r.eigenvectors) ev.push_back({{"index", e.index}, {"eigenvalue", e.eigenvalue}, {"error", e.error}});
  j["eigenvectors_below_threshold"] = std::move(ev);
  json disc = json::array();
  for (const auto& d : r.discrepancies) disc.push_back(to_json(d));
  j["discrepancies"] = std::move(disc);
  j["within_contract"] = r.within_contract;
  return j;
}

json to_json(const SplineReconstruction& r) {
  json steps = json::array();
  for (const auto& s : r.steps)
    steps.push_back({{"k", s.k},
                     {"objective", number(s.objective)},
                     {"interpolation_residual", s.interpolation_residual},
                     {"error_vs_truth", s.error},
                     {"bound", s.bound ? number(*s.bound) : json(nullptr)}});
  json j{{"omega", r.omega},
         {"gamma", r.gamma},
         {"omega_limit", number(r.omega_limit)},
         {"hypothesis", r.hypothesis},
         {"steps", std::move(steps)}};
  if (!r.warning.empty()) j["warning"] = r.warning;
  return j;
}

std::string dump(const json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::invalid_argument, "cannot write '" + path + "'");
  out << text;
  if (!out) throw Error(Errc::invalid_argument, "write to '" + path + "' failed");
}

}  // namespace gpw::io
