#include "seqlocal/json_io.hpp"

#include <fstream>
#include <sstream>

#include "seqlocal/errors.hpp"

namespace seqlocal::io {

namespace {

[[noreturn]] void fail(const std::string& where, const std::string& what) {
  throw StructuralError(where + ": " + what);
}

const Json& field(const Json& j, const char* key, const std::string& where) {
  if (!j.is_object()) fail(where, "expected an object");
  const auto it = j.find(key);
  if (it == j.end()) fail(where, std::string("missing \"") + key + "\"");
  return *it;
}

std::size_t as_size(const Json& j, const std::string& where) {
  if (!j.is_number_integer() || j.get<std::int64_t>() < 0) fail(where, "expected a non-negative integer");
  return j.get<std::size_t>();
}

int as_int(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) fail(where, "expected an integer");
  return j.get<int>();
}

double as_double(const Json& j, const std::string& where) {
  if (!j.is_number()) fail(where, "expected a number");
  return j.get<double>();
}

const Json& as_array(const Json& j, const std::string& where, std::size_t expected = SIZE_MAX) {
  if (!j.is_array()) fail(where, "expected an array");
  if (expected != SIZE_MAX && j.size() != expected)
    fail(where, "expected " + std::to_string(expected) + " elements, got " + std::to_string(j.size()));
  return j;
}

History history_from_key(const std::string& key, const std::string& where) {
  try {
    return History::parse(key);
  } catch (const std::exception& e) {
    fail(where, std::string("bad history key \"") + key + "\": " + e.what());
  }
}

Json ops_to_json(const std::vector<std::vector<ComplexMatrix>>& ops) {
  Json out = Json::array();
  for (const auto& per_setting : ops) {
    Json row = Json::array();
    for (const auto& m : per_setting) row.push_back(to_json(m));
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<std::vector<ComplexMatrix>> ops_from_json(const Json& j, const std::string& where) {
  std::vector<std::vector<ComplexMatrix>> out;
  for (std::size_t s = 0; s < as_array(j, where).size(); ++s) {
    const auto w = where + "[" + std::to_string(s) + "]";
    auto& row = out.emplace_back();
    for (std::size_t o = 0; o < as_array(j[s], w).size(); ++o)
      row.push_back(matrix_from_json(j[s][o]));
  }
  return out;
}

Json protocol_to_json(const PartyProtocol& p) {
  Json inst = Json::array();
  for (const auto& step : p.instruments) {
    Json m = Json::object();
    for (const auto& [h, k] : step) m[h.key()] = ops_to_json(k.ops);
    inst.push_back(std::move(m));
  }
  Json fin = Json::object();
  for (const auto& [h, e] : p.final_step)
    for (std::size_t x = 0; x < e.effects.size(); ++x) {
      Json outcomes = Json::array();
      for (const auto& m : e.effects[x]) outcomes.push_back(to_json(m));
      fin[h.key() + "|" + std::to_string(x)] = std::move(outcomes);
    }
  return Json{{"instruments", std::move(inst)}, {"final", std::move(fin)}};
}

PartyProtocol protocol_from_json(const Json& j, const std::string& where) {
  PartyProtocol p;
  const auto& inst = as_array(field(j, "instruments", where), where + ".instruments");
  for (std::size_t l = 0; l < inst.size(); ++l) {
    const auto w = where + ".instruments[" + std::to_string(l) + "]";
    if (!inst[l].is_object()) fail(w, "expected an object keyed by history");
    auto& step = p.instruments.emplace_back();
    for (const auto& [key, ops] : inst[l].items())
      step.emplace(history_from_key(key, w), KrausInstrument{ops_from_json(ops, w + "." + key)});
  }
  const auto& fin = field(j, "final", where);
  if (!fin.is_object()) fail(where + ".final", "expected an object keyed by history");
  // Keys are "history|setting"; settings of one history must be listed contiguously from 0.
  for (const auto& [key, eff] : fin.items()) {
    const auto w = where + ".final." + key;
    const auto bar = key.rfind('|');
    if (bar == std::string::npos) fail(w, "expected a \"history|setting\" key");
    std::size_t x = 0;
    try {
      std::size_t used = 0;
      x = std::stoul(key.substr(bar + 1), &used);
      if (used != key.size() - bar - 1) throw std::invalid_argument("trailing characters");
    } catch (const std::exception&) {
      fail(w, "bad setting after '|'");
    }
    auto& povm = p.final_step[history_from_key(key.substr(0, bar), w)];
    if (povm.effects.size() <= x) povm.effects.resize(x + 1);
    auto& outcomes = povm.effects[x];
    for (std::size_t o = 0; o < as_array(eff, w).size(); ++o) outcomes.push_back(matrix_from_json(eff[o]));
  }
  for (const auto& [h, povm] : p.final_step)
    for (std::size_t x = 0; x < povm.effects.size(); ++x)
      if (povm.effects[x].empty()) fail(where + ".final", "history \"" + h.key() + "\" lacks setting " + std::to_string(x));
  return p;
}

Json optional_string(const std::optional<std::string>& s) { return s ? Json(*s) : Json(nullptr); }

}  // namespace

Json read_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw StructuralError(path.string() + ": cannot open file");
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw StructuralError(path.string() + ": malformed JSON: " + e.what());
  }
}

Json to_json(const Scenario& s) {
  return Json{{"steps", s.steps}, {"settings", s.settings}, {"outcomes", s.outcomes}};
}

Scenario scenario_from_json(const Json& j) {
  Scenario s{as_size(field(j, "steps", "scenario"), "scenario.steps"),
             as_size(field(j, "settings", "scenario"), "scenario.settings"),
             as_size(field(j, "outcomes", "scenario"), "scenario.outcomes")};
  s.check();
  return s;
}

Json to_json(const SequentialCorrelation& corr) {
  const auto v = corr.values();
  return Json{{"scenario", to_json(corr.scenario())}, {"p", Json(std::vector<double>(v.begin(), v.end()))}};
}

SequentialCorrelation correlation_from_json(const Json& j) {
  const auto sc = scenario_from_json(field(j, "scenario", "correlation"));
  const auto& p = as_array(field(j, "p", "correlation"), "correlation.p", sc.size());
  std::vector<double> values(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    values[i] = as_double(p[i], "correlation.p[" + std::to_string(i) + "]");
    if (!std::isfinite(values[i])) fail("correlation.p", "non-finite entry");
  }
  return SequentialCorrelation(sc, std::move(values));
}

Json to_json(const ExtremePointSpec& spec) {
  Json per = Json::object();
  for (const auto& [h, id] : spec.per_history) per[h.key()] = id;
  return Json{{"first", spec.first}, {"per_history", std::move(per)}};
}

ExtremePointSpec extreme_spec_from_json(const Json& j) {
  ExtremePointSpec spec;
  spec.first = as_int(field(j, "first", "spec"), "spec.first");
  const auto& per = field(j, "per_history", "spec");
  if (!per.is_object()) fail("spec.per_history", "expected an object keyed by history");
  for (const auto& [key, id] : per.items())
    spec.per_history.emplace(history_from_key(key, "spec.per_history"), as_int(id, "spec.per_history." + key));
  spec.check();
  return spec;
}

Json to_json(const MembershipVerdict& v) {
  return Json{{"member", v.member}, {"margin", v.margin}, {"violated", optional_string(v.violated)},
              {"inconclusive", v.inconclusive}};
}

Json to_json(const WitnessReport& r) {
  return Json{{"value", r.value},
              {"L", r.L},
              {"bounds",
               {{"local", r.bounds.local}, {"qubit_projective", r.bounds.qubit_projective}, {"quantum", r.bounds.quantum}}},
              {"class", to_string(r.classification)}};
}

Json to_json(const ExtremalityCertificate& c) {
  return Json{{"extreme", c.extreme()},   {"structural", c.structural}, {"rank", c.rank},
              {"ambient", c.ambient},     {"consistent", c.consistent()},
              {"spec", c.spec ? to_json(*c.spec) : Json(nullptr)}};
}

Json to_json(const SeesawResult& r, std::uint64_t seed) {
  Json alice = Json::array();
  Json bob = Json::array();
  for (const auto& a : r.alice) alice.push_back(to_json(a));
  for (const auto& b : r.bob) bob.push_back(to_json(b));
  return Json{{"value", r.value},         {"seed", seed},
              {"iterations", r.iterations}, {"trajectory", r.trajectory},
              {"observables", {{"alice", std::move(alice)}, {"bob", std::move(bob)}}}};
}

Json to_json(const QubitSampleReport& r) {
  return Json{{"max_value", r.max_value}, {"argmax", r.argmax}, {"seed", r.seed}, {"n", r.n}};
}

Json to_json(const HiddenNonlocalityDemo& demo) {
  return Json{{"d", demo.d},
              {"mixing", demo.mixing},
              {"seed", demo.seed},
              {"unfiltered", {{"chsh", demo.unfiltered_chsh}, {"local", to_json(demo.unfiltered_box)}}},
              {"filter_pass_probability", demo.pass_probability},
              {"post_filter_chsh", demo.post_filter_chsh},
              {"sequential",
               {{"step1_local", to_json(demo.step1_box)},
                {"conditional_chsh", demo.conditional_chsh},
                {"membership_Q", to_json(demo.sequential_Q)}}}};
}

Json to_json(const ComplexMatrix& m) {
  Json out = Json::array();
  for (std::size_t r = 0; r < m.rows(); ++r) {
    Json row = Json::array();
    for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(Json::array({m(r, c).real(), m(r, c).imag()}));
    out.push_back(std::move(row));
  }
  return out;
}

ComplexMatrix matrix_from_json(const Json& j) {
  const auto& rows = as_array(j, "matrix");
  if (rows.empty()) fail("matrix", "empty matrix");
  const std::size_t n = as_array(rows[0], "matrix[0]").size();
  ComplexMatrix m(rows.size(), n);
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto wr = "matrix[" + std::to_string(r) + "]";
    as_array(rows[r], wr, n);
    for (std::size_t c = 0; c < n; ++c) {
      const auto& e = rows[r][c];
      const auto w = wr + "[" + std::to_string(c) + "]";
      if (e.is_number()) {
        m(r, c) = as_double(e, w);
      } else {
        as_array(e, w, 2);
        m(r, c) = Complex(as_double(e[0], w), as_double(e[1], w));
      }
    }
  }
  if (!m.all_finite()) fail("matrix", "non-finite entry");
  return m;
}

Json to_json(const SequentialStrategy& s) {
  return Json{{"scenario", to_json(s.scenario)},
              {"dims", {s.dim_a, s.dim_b}},
              {"state", to_json(s.state.matrix())},
              {"alice", protocol_to_json(s.alice)},
              {"bob", protocol_to_json(s.bob)}};
}

SequentialStrategy strategy_from_json(const Json& j) {
  SequentialStrategy s;
  s.scenario = scenario_from_json(field(j, "scenario", "strategy"));
  const auto& dims = as_array(field(j, "dims", "strategy"), "strategy.dims", 2);
  s.dim_a = as_size(dims[0], "strategy.dims[0]");
  s.dim_b = as_size(dims[1], "strategy.dims[1]");
  s.state = DensityMatrix(matrix_from_json(field(j, "state", "strategy")));
  s.alice = protocol_from_json(field(j, "alice", "strategy"), "strategy.alice");
  s.bob = protocol_from_json(field(j, "bob", "strategy"), "strategy.bob");
  s.check();
  return s;
}

Json to_json(const StateFile& f) {
  return Json{{"dims", {f.dims[0], f.dims[1]}}, {"matrix", to_json(f.state.matrix())}};
}

StateFile state_from_json(const Json& j) {
  StateFile f;
  const auto& dims = as_array(field(j, "dims", "state"), "state.dims", 2);
  f.dims = {as_size(dims[0], "state.dims[0]"), as_size(dims[1], "state.dims[1]")};
  f.state = DensityMatrix(matrix_from_json(field(j, "matrix", "state")));
  if (f.dims[0] * f.dims[1] != f.state.dim()) fail("state", "dims do not match the matrix size");
  return f;
}

}  // namespace seqlocal::io
