#include "spanauto/io.hpp"

#include <algorithm>
#include <fstream>
#include <map>
#include <set>
#include <sstream>

namespace spanauto {

const char* to_string(DocumentKind kind) {
  switch (kind) {
    case DocumentKind::span: return "span";
    case DocumentKind::rel: return "rel";
    case DocumentKind::det: return "det";
    case DocumentKind::classical_nfa: return "classical-nfa";
  }
  return "span";
}

namespace {

[[noreturn]] void fail(const std::string& path, const std::string& message) {
  throw Error(ErrorCode::input, path + ": " + message);
}

std::string at_key(const std::string& path, const std::string& key) { return path + "." + key; }
std::string at_index(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void expect_object(const Json& j, const std::string& path) {
  if (!j.is_object()) fail(path, "expected an object");
}

void expect_array(const Json& j, const std::string& path) {
  if (!j.is_array()) fail(path, "expected an array");
}

const std::string& expect_string(const Json& j, const std::string& path) {
  if (!j.is_string()) fail(path, "expected a string");
  return j.get_ref<const std::string&>();
}

Nat expect_count(const Json& j, const std::string& path) {
  if (!j.is_number_unsigned() && !(j.is_number_integer() && j.get<std::int64_t>() > 0))
    fail(path, "expected a positive integer");
  const Nat n = j.get<Nat>();
  if (n == 0) fail(path, "expected a positive integer");
  return n;
}

const Json& require(const Json& obj, const std::string& path, const char* key) {
  auto it = obj.find(key);
  if (it == obj.end()) fail(path, std::string("missing field '") + key + "'");
  return *it;
}

void only_keys(const Json& obj, const std::string& path, std::initializer_list<const char*> allowed) {
  for (const auto& [key, value] : obj.items())
    if (std::none_of(allowed.begin(), allowed.end(), [&](const char* a) { return key == a; }))
      fail(at_key(path, key), "unexpected field");
}

void check_version(const Json& j, const std::string& path) {
  const std::string& v = expect_string(require(j, path, "format_version"), at_key(path, "format_version"));
  if (v != kFormatVersion)
    fail(at_key(path, "format_version"), "unsupported version '" + v + "' (expected '" + kFormatVersion + "')");
}

DocumentKind parse_kind(const Json& j, const std::string& path) {
  const std::string& k = expect_string(j, path);
  if (k == "span") return DocumentKind::span;
  if (k == "rel") return DocumentKind::rel;
  if (k == "det") return DocumentKind::det;
  if (k == "classical-nfa") return DocumentKind::classical_nfa;
  fail(path, "unknown kind '" + k + "' (expected span|rel|det|classical-nfa)");
}

BaseGraph parse_base(const Json& j, const std::string& path) {
  expect_object(j, path);
  only_keys(j, path, {"nodes", "edges"});
  const std::string npath = at_key(path, "nodes");
  const Json& nodes_j = require(j, path, "nodes");
  expect_array(nodes_j, npath);
  std::vector<std::string> nodes;
  std::map<std::string, std::size_t> node_index;
  for (std::size_t i = 0; i < nodes_j.size(); ++i) {
    const std::string& n = expect_string(nodes_j[i], at_index(npath, i));
    if (!node_index.emplace(n, i).second) fail(at_index(npath, i), "duplicate node '" + n + "'");
    nodes.push_back(n);
  }
  const std::string epath = at_key(path, "edges");
  std::vector<Edge> edges;
  if (auto it = j.find("edges"); it != j.end()) {
    expect_array(*it, epath);
    std::set<std::string> ids;
    std::set<std::tuple<std::size_t, std::size_t, std::string>> labels;
    for (std::size_t i = 0; i < it->size(); ++i) {
      const Json& e = (*it)[i];
      const std::string p = at_index(epath, i);
      expect_object(e, p);
      only_keys(e, p, {"id", "label", "src", "dst"});
      Edge edge;
      edge.id = expect_string(require(e, p, "id"), at_key(p, "id"));
      edge.label = e.contains("label") ? expect_string(e["label"], at_key(p, "label")) : edge.id;
      for (auto [key, slot] : {std::pair{"src", &edge.src}, std::pair{"dst", &edge.dst}}) {
        const std::string& n = expect_string(require(e, p, key), at_key(p, key));
        auto found = node_index.find(n);
        if (found == node_index.end()) fail(at_key(p, key), "unknown node '" + n + "'");
        *slot = found->second;
      }
      if (!ids.insert(edge.id).second) fail(at_key(p, "id"), "duplicate edge id '" + edge.id + "'");
      if (!labels.emplace(edge.src, edge.dst, edge.label).second)
        fail(at_key(p, "label"), "label '" + edge.label + "' repeats between the same nodes");
      edges.push_back(std::move(edge));
    }
  }
  return BaseGraph(std::move(nodes), std::move(edges));
}

std::vector<FinSet> parse_fibers(const Json& j, const std::string& path, const BaseGraph& base) {
  expect_object(j, path);
  std::vector<std::vector<std::string>> labels(base.nodes().size());
  std::map<std::string, std::string> owner;
  for (const auto& [node, states] : j.items()) {
    const std::string p = at_key(path, node);
    std::size_t n = 0;
    try {
      n = base.node_index(node);
    } catch (const Error&) {
      fail(p, "unknown node '" + node + "'");
    }
    expect_array(states, p);
    for (std::size_t i = 0; i < states.size(); ++i) {
      const std::string& s = expect_string(states[i], at_index(p, i));
      auto [it, fresh] = owner.emplace(s, node);
      if (!fresh) {
        if (it->second == node) fail(at_index(p, i), "duplicate state '" + s + "' in fiber '" + node + "'");
        fail(at_index(p, i), "state '" + s + "' already belongs to fiber '" + it->second + "'");
      }
      labels[n].push_back(s);
    }
  }
  std::vector<FinSet> fibers;
  for (std::size_t n = 0; n < labels.size(); ++n)
    fibers.emplace_back(base.nodes()[n], std::move(labels[n]));
  return fibers;
}

std::size_t state_in(const FinSet& fiber, const Json& j, const std::string& path) {
  const std::string& s = expect_string(j, path);
  auto i = fiber.find(s);
  if (!i) fail(path, "state '" + s + "' is not in fiber '" + fiber.id() + "'");
  return *i;
}

StateRef state_anywhere(const AutomatonShape& a, const Json& j, const std::string& path) {
  const std::string& s = expect_string(j, path);
  for (std::size_t n = 0; n < a.fibers.size(); ++n)
    if (auto i = a.fibers[n].find(s)) return {n, *i};
  fail(path, "unknown state '" + s + "'");
}

Span parse_transition(const Json& j, const std::string& path, DocumentKind kind, const FinSet& src,
                      const FinSet& dst) {
  expect_array(j, path);
  std::map<std::pair<std::size_t, std::size_t>, Nat> counts;
  std::set<std::size_t> seen_from;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = at_index(path, i);
    expect_object(j[i], p);
    if (kind == DocumentKind::span)
      only_keys(j[i], p, {"from", "to", "count"});
    else
      only_keys(j[i], p, {"from", "to"});
    const std::size_t from = state_in(src, require(j[i], p, "from"), at_key(p, "from"));
    const std::size_t to = state_in(dst, require(j[i], p, "to"), at_key(p, "to"));
    const Nat count = j[i].contains("count") ? expect_count(j[i]["count"], at_key(p, "count")) : 1;
    if (!counts.emplace(std::pair{from, to}, count).second)
      fail(p, "repeated pair ('" + src[from] + "', '" + dst[to] + "')");
    if (kind == DocumentKind::det && !seen_from.insert(from).second)
      fail(p, "state '" + src[from] + "' has two successors in a det document");
  }
  if (kind == DocumentKind::det && seen_from.size() != src.size())
    for (std::size_t q = 0; q < src.size(); ++q)
      if (!seen_from.count(q)) fail(path, "state '" + src[q] + "' has no successor in a det document");
  std::vector<NatMatrix::Row> rows(src.size());
  for (const auto& [pair, n] : counts) rows[pair.first].emplace_back(pair.second, n);
  return from_matrix(NatMatrix(src, dst, std::move(rows)));
}

Json base_json(const BaseGraph& base) {
  Json edges = Json::array();
  for (const Edge& e : base.edges())
    edges.push_back({{"id", e.id}, {"label", e.label}, {"src", base.nodes()[e.src]},
                     {"dst", base.nodes()[e.dst]}});
  return {{"nodes", base.nodes()}, {"edges", std::move(edges)}};
}

Json fibers_json(const BaseGraph& base, const std::vector<FinSet>& fibers) {
  Json out = Json::object();
  for (std::size_t n = 0; n < fibers.size(); ++n) out[base.nodes()[n]] = fibers[n].elements();
  return out;
}

Json finals_json(const AutomatonShape& a) {
  std::vector<StateRef> finals = a.finals;
  std::sort(finals.begin(), finals.end());
  finals.erase(std::unique(finals.begin(), finals.end()), finals.end());
  Json out = Json::array();
  for (StateRef s : finals) out.push_back(a.state_label(s));
  return out;
}

Json matrix_entries(const NatMatrix& m, bool with_count) {
  Json out = Json::array();
  for (std::size_t i = 0; i < m.dom().size(); ++i)
    for (const auto& [j, n] : m.row(i)) {
      Json entry = {{"from", m.dom()[i]}, {"to", m.cod()[j]}};
      if (with_count) entry["count"] = n;
      out.push_back(std::move(entry));
    }
  return out;
}

}  // namespace

AutomatonDocument automaton_from_json(const Json& j, const std::string& path) {
  expect_object(j, path);
  only_keys(j, path, {"format_version", "kind", "base", "fibers", "transitions", "initial", "finals"});
  check_version(j, path);
  AutomatonDocument doc;
  doc.kind = parse_kind(require(j, path, "kind"), at_key(path, "kind"));
  SpanAutomaton& a = doc.automaton;
  a.base = parse_base(require(j, path, "base"), at_key(path, "base"));
  a.fibers = parse_fibers(require(j, path, "fibers"), at_key(path, "fibers"), a.base);

  const std::string tpath = at_key(path, "transitions");
  const Json empty = Json::object();
  const Json& transitions = j.contains("transitions") ? j["transitions"] : empty;
  expect_object(transitions, tpath);
  for (const auto& [id, entries] : transitions.items()) {
    try {
      a.base.edge_index(id);
    } catch (const Error&) {
      fail(at_key(tpath, id), "unknown edge '" + id + "'");
    }
  }
  for (const Edge& e : a.base.edges()) {
    const Json none = Json::array();
    const Json& entries = transitions.contains(e.id) ? transitions[e.id] : none;
    a.transitions.push_back(
        parse_transition(entries, at_key(tpath, e.id), doc.kind, a.fibers[e.src], a.fibers[e.dst]));
  }

  a.initial = state_anywhere(a, require(j, path, "initial"), at_key(path, "initial"));
  const std::string fpath = at_key(path, "finals");
  if (auto it = j.find("finals"); it != j.end()) {
    expect_array(*it, fpath);
    for (std::size_t i = 0; i < it->size(); ++i)
      a.finals.push_back(state_anywhere(a, (*it)[i], at_index(fpath, i)));
    std::sort(a.finals.begin(), a.finals.end());
    a.finals.erase(std::unique(a.finals.begin(), a.finals.end()), a.finals.end());
  }

  if (doc.kind == DocumentKind::classical_nfa) {
    if (a.base.nodes().size() != 1) fail(at_key(path, "base"), "a classical-nfa document has exactly one node");
    for (std::size_t i = 0; i < a.base.edges().size(); ++i)
      if (a.base.edges()[i].src != 0 || a.base.edges()[i].dst != 0)
        fail(at_index(at_key(path, "base.edges"), i), "classical-nfa edges must be loops");
  }
  if (auto v = validate(a); !v.empty()) fail(path, v.front());
  return doc;
}

AutomatonDocument parse_automaton(const std::string& text) {
  Json j;
  try {
    j = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::input, std::string("$: malformed JSON: ") + e.what());
  }
  return automaton_from_json(j);
}

namespace {

Json read_json(const std::filesystem::path& file) {
  std::ifstream in(file, std::ios::binary);
  if (!in) throw Error(ErrorCode::input, file.string() + ": cannot open file");
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return Json::parse(buffer.str());
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::input, file.string() + ": malformed JSON: " + e.what());
  }
}

}  // namespace

AutomatonDocument load_automaton(const std::filesystem::path& file) {
  const Json j = read_json(file);
  try {
    return automaton_from_json(j);
  } catch (const Error& e) {
    throw Error(e.code(), file.string() + ": " + e.what());
  }
}

Json to_json(const AutomatonDocument& doc) {
  const SpanAutomaton& a = doc.automaton;
  Json transitions = Json::object();
  for (std::size_t e = 0; e < a.base.edges().size(); ++e)
    transitions[a.base.edges()[e].id] =
        matrix_entries(to_matrix(a.transitions[e]), doc.kind == DocumentKind::span);
  return {{"format_version", kFormatVersion},
          {"kind", to_string(doc.kind)},
          {"base", base_json(a.base)},
          {"fibers", fibers_json(a.base, a.fibers)},
          {"transitions", std::move(transitions)},
          {"initial", a.state_label(a.initial)},
          {"finals", finals_json(a)}};
}

Json to_json(const DetAutomaton& d) { return to_json(AutomatonDocument{DocumentKind::det, to_span(d)}); }

DetAutomaton as_det(const SpanAutomaton& a) {
  DetAutomaton d;
  static_cast<AutomatonShape&>(d) = a;
  for (std::size_t e = 0; e < a.transitions.size(); ++e) {
    const NatMatrix m = to_matrix(a.transitions[e]);
    std::vector<std::size_t> table;
    for (std::size_t i = 0; i < m.dom().size(); ++i) {
      const auto& row = m.row(i);
      if (row.size() != 1 || row[0].second != 1)
        throw Error(ErrorCode::input, "transition '" + a.base.edges()[e].id + "' is not deterministic at state '" +
                                          m.dom()[i] + "'");
      table.push_back(row[0].first);
    }
    d.transitions.push_back(std::move(table));
  }
  return d;
}

Simulation simulation_from_json(const Json& j, const std::filesystem::path& base_dir,
                                const std::string& path) {
  expect_object(j, path);
  only_keys(j, path, {"format_version", "kind", "source", "target", "strength", "components"});
  check_version(j, path);
  if (auto it = j.find("kind"); it != j.end() && expect_string(*it, at_key(path, "kind")) != "simulation")
    fail(at_key(path, "kind"), "expected 'simulation'");

  auto side = [&](const char* key) {
    const std::string p = at_key(path, key);
    const Json& ref = require(j, path, key);
    if (ref.is_string()) {
      const std::filesystem::path file = base_dir / ref.get<std::string>();
      try {
        return load_automaton(file).automaton;
      } catch (const Error& e) {
        throw Error(e.code(), p + ": " + e.what());
      }
    }
    return automaton_from_json(ref, p).automaton;
  };

  Simulation sim{side("source"), side("target"), {}, Strength::lax};
  if (!same_base(sim.source.base, sim.target.base))
    fail(path, "source and target have different base graphs");
  const std::string spath = at_key(path, "strength");
  try {
    sim.strength = parse_strength(expect_string(require(j, path, "strength"), spath));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::input) throw;
    fail(spath, e.what());
  }

  const std::string cpath = at_key(path, "components");
  const Json& comps = require(j, path, "components");
  expect_object(comps, cpath);
  const BaseGraph& base = sim.source.base;
  std::vector<std::map<std::pair<std::size_t, std::size_t>, Nat>> counts(base.nodes().size());
  for (const auto& [node, entries] : comps.items()) {
    const std::string p = at_key(cpath, node);
    std::size_t n = 0;
    try {
      n = base.node_index(node);
    } catch (const Error&) {
      fail(p, "unknown node '" + node + "'");
    }
    expect_array(entries, p);
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const std::string ep = at_index(p, i);
      expect_object(entries[i], ep);
      only_keys(entries[i], ep, {"from", "to", "count"});
      const std::size_t from = state_in(sim.target.fibers[n], require(entries[i], ep, "from"), at_key(ep, "from"));
      const std::size_t to = state_in(sim.source.fibers[n], require(entries[i], ep, "to"), at_key(ep, "to"));
      const Nat c = entries[i].contains("count") ? expect_count(entries[i]["count"], at_key(ep, "count")) : 1;
      if (!counts[n].emplace(std::pair{from, to}, c).second) fail(ep, "repeated pair");
    }
  }
  for (std::size_t n = 0; n < base.nodes().size(); ++n) {
    std::vector<NatMatrix::Row> rows(sim.target.fibers[n].size());
    for (const auto& [pair, c] : counts[n]) rows[pair.first].emplace_back(pair.second, c);
    sim.components.push_back(
        from_matrix(NatMatrix(sim.target.fibers[n], sim.source.fibers[n], std::move(rows))));
  }
  return sim;
}

Simulation load_simulation(const std::filesystem::path& file) {
  const Json j = read_json(file);
  try {
    return simulation_from_json(j, file.parent_path());
  } catch (const Error& e) {
    throw Error(e.code(), file.string() + ": " + e.what());
  }
}

Json to_json(const Simulation& sim) {
  Json comps = Json::object();
  for (std::size_t n = 0; n < sim.components.size(); ++n)
    comps[sim.source.base.nodes()[n]] = matrix_entries(to_matrix(sim.components[n]), true);
  return {{"format_version", kFormatVersion},
          {"kind", "simulation"},
          {"source", to_json(AutomatonDocument{DocumentKind::span, sim.source})},
          {"target", to_json(AutomatonDocument{DocumentKind::span, sim.target})},
          {"strength", to_string(sim.strength)},
          {"components", std::move(comps)}};
}

Json to_json(const MDetMachine& m) {
  Json matrices = Json::object();
  for (std::size_t e = 0; e < m.base.edges().size(); ++e) matrices[m.base.edges()[e].id] = m.matrices[e].dense();
  Json finals = Json::array();
  for (StateRef s : m.finals) finals.push_back(m.fibers[s.node][s.index]);
  return {{"format_version", kFormatVersion},
          {"kind", "mdet"},
          {"base", base_json(m.base)},
          {"fibers", fibers_json(m.base, m.fibers)},
          {"matrices", std::move(matrices)},
          {"initial", m.fibers[m.initial.node][m.initial.index]},
          {"initial_vector", m.initial_vector.counts()},
          {"finals", std::move(finals)}};
}

Json to_json(const MDetMachine& m, const MDetExpansion& x) {
  Json states = Json::object(), accept = Json::object(), transitions = Json::object();
  for (std::size_t n = 0; n < x.states.size(); ++n) {
    Json labels = Json::array(), counts = Json::array();
    for (const Multiset& v : x.states[n]) {
      labels.push_back(v.tuple_label());
      counts.push_back(mdet_accept_count(m, n, v));
    }
    states[m.base.nodes()[n]] = std::move(labels);
    accept[m.base.nodes()[n]] = std::move(counts);
  }
  for (std::size_t e = 0; e < m.base.edges().size(); ++e) {
    const Edge& edge = m.base.edges()[e];
    Json entries = Json::array();
    for (std::size_t i = 0; i < x.transitions[e].size(); ++i) {
      const std::size_t t = x.transitions[e][i];
      if (t == MDetExpansion::npos) continue;
      entries.push_back({{"from", x.states[edge.src][i].tuple_label()},
                         {"to", x.states[edge.dst][t].tuple_label()}});
    }
    transitions[edge.id] = std::move(entries);
  }
  return {{"format_version", kFormatVersion},
          {"kind", "mdet-expanded"},
          {"base", base_json(m.base)},
          {"states", std::move(states)},
          {"transitions", std::move(transitions)},
          {"accept_counts", std::move(accept)},
          {"initial", x.states[x.initial.node][x.initial.index].tuple_label()},
          {"truncated", x.truncated}};
}

Json to_json(const FactorizationResult& r, const std::string& target) {
  return {{"format_version", kFormatVersion},
          {"kind", "factorization"},
          {"target", target},
          {"composite_ok", r.composite_ok},
          {"bisim_ok", r.bisim_ok},
          {"unique_ok", r.unique_ok ? Json(*r.unique_ok) : Json(nullptr)},
          {"mate", to_json(r.mate)}};
}

std::string dump(const Json& j) { return j.dump(2) + "\n"; }

}  // namespace spanauto
