#include "amalgam/serialization.hpp"

#include <cmath>
#include <map>
#include <sstream>

namespace amalgam::io {

namespace {

const json& field(const json& doc, const std::string& key, const std::string& where) {
  if (!doc.is_object()) throw InputError(where + ": expected an object");
  auto it = doc.find(key);
  if (it == doc.end()) throw InputError(where + ": missing field '" + key + "'");
  return *it;
}

double number(const json& value, const std::string& where) {
  if (!value.is_number()) throw InputError(where + ": expected a number");
  return value.get<double>();
}

std::vector<double> numbers(const json& value, const std::string& where) {
  if (!value.is_array()) throw InputError(where + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(value.size());
  for (std::size_t i = 0; i < value.size(); ++i) out.push_back(number(value[i], where + "[" + std::to_string(i) + "]"));
  return out;
}

std::string identifier(const json& value, const std::string& where) {
  if (value.is_string()) return value.get<std::string>();
  if (value.is_number_integer()) return std::to_string(value.get<long long>());
  throw InputError(where + ": expected an outcome identifier");
}

void check_schema(const json& doc, const std::string& where) {
  if (!doc.is_object()) throw InputError(where + ": expected an object");
  auto it = doc.find("schema");
  if (it != doc.end() && (!it->is_string() || it->get<std::string>() != kSchema)) {
    throw InputError(where + ": unsupported schema (expected \"" + std::string(kSchema) + "\")");
  }
}

Partition cells_from_json(const json& value, const std::map<std::string, std::size_t>& ids, const std::string& where) {
  if (!value.is_array()) throw InputError(where + ": expected a list of cells");
  Partition partition;
  for (std::size_t c = 0; c < value.size(); ++c) {
    const std::string cw = where + "[" + std::to_string(c) + "]";
    if (!value[c].is_array()) throw InputError(cw + ": expected a list of outcomes");
    Cell cell;
    for (std::size_t i = 0; i < value[c].size(); ++i) {
      const std::string id = identifier(value[c][i], cw + "[" + std::to_string(i) + "]");
      auto it = ids.find(id);
      if (it == ids.end()) throw InputError(cw + ": unknown outcome '" + id + "'");
      cell.push_back(it->second);
    }
    partition.push_back(std::move(cell));
  }
  return partition;
}

json cells_to_json(const Partition& partition, const std::vector<std::string>& names) {
  json out = json::array();
  for (const Cell& cell : partition) {
    json c = json::array();
    for (std::size_t omega : cell) c.push_back(names[omega]);
    out.push_back(std::move(c));
  }
  return out;
}

}  // namespace

json parse_document(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    std::size_t line = 1;
    std::size_t column = 1;
    const std::size_t limit = std::min<std::size_t>(e.byte == 0 ? 0 : e.byte - 1, text.size());
    for (std::size_t i = 0; i < limit; ++i) {
      if (text[i] == '\n') {
        ++line;
        column = 1;
      } else {
        ++column;
      }
    }
    throw InputError("malformed JSON at line " + std::to_string(line) + ", column " + std::to_string(column) + ": " +
                     e.what());
  }
}

std::string canonical(const json& doc) { return doc.dump(); }

json exponent_to_json(double value) {
  if (std::isinf(value)) return "inf";
  return value;
}

double exponent_from_json(const json& value, const std::string& where) {
  if (value.is_string() && (value.get<std::string>() == "inf" || value.get<std::string>() == "infinity")) {
    return kInfinity;
  }
  return number(value, where);
}

json to_json(const FilteredSpace& space) {
  json filtration = json::array();
  for (const Partition& level : space.filtration()) filtration.push_back(cells_to_json(level, space.outcomes()));
  return json{{"schema", kSchema},
              {"outcomes", space.outcomes()},
              {"prob", std::vector<double>(space.prob().begin(), space.prob().end())},
              {"filtration", std::move(filtration)},
              {"blocks", cells_to_json(space.blocks(), space.outcomes())}};
}

SpacePtr space_from_json(const json& doc) {
  check_schema(doc, "space");
  const json& outcomes = field(doc, "outcomes", "space");
  if (!outcomes.is_array()) throw InputError("space.outcomes: expected an array");
  std::vector<std::string> names;
  std::map<std::string, std::size_t> ids;
  for (std::size_t i = 0; i < outcomes.size(); ++i) {
    names.push_back(identifier(outcomes[i], "space.outcomes[" + std::to_string(i) + "]"));
    if (!ids.emplace(names.back(), i).second) throw InputError("space.outcomes: duplicate outcome '" + names.back() + "'");
  }
  std::vector<double> prob = numbers(field(doc, "prob", "space"), "space.prob");
  const json& levels = field(doc, "filtration", "space");
  if (!levels.is_array()) throw InputError("space.filtration: expected a list of levels");
  std::vector<Partition> filtration;
  for (std::size_t n = 0; n < levels.size(); ++n) {
    filtration.push_back(cells_from_json(levels[n], ids, "space.filtration[" + std::to_string(n) + "]"));
  }
  Partition blocks;
  if (doc.contains("blocks")) {
    blocks = cells_from_json(doc.at("blocks"), ids, "space.blocks");
  } else {
    Cell all;
    for (std::size_t i = 0; i < names.size(); ++i) all.push_back(i);
    blocks.push_back(std::move(all));
  }
  try {
    return make_space(std::move(names), std::move(prob), std::move(filtration), std::move(blocks));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("space: ") + e.what());
  }
}

json to_json(const RandomVariable& x) { return json{{"schema", kSchema}, {"values", x.vector()}}; }

RandomVariable random_variable_from_json(const json& doc, std::size_t expected_size) {
  const json& values = doc.is_array() ? doc : field(doc, "values", "random variable");
  if (doc.is_object()) check_schema(doc, "random variable");
  RandomVariable x(numbers(values, "values"));
  if (x.size() != expected_size) {
    throw InputError("values: expected " + std::to_string(expected_size) + " entries, got " + std::to_string(x.size()));
  }
  return x;
}

json to_json(const StoppingTime& nu) {
  json out = json::array();
  for (int t : nu.times()) {
    if (t == StoppingTime::never) {
      out.push_back(nullptr);
    } else {
      out.push_back(t);
    }
  }
  return out;
}

StoppingTime stopping_time_from_json(const json& doc, const FilteredSpace& space, const std::string& where) {
  if (!doc.is_array()) throw InputError(where + ": expected an array");
  std::vector<int> times;
  for (std::size_t i = 0; i < doc.size(); ++i) {
    if (doc[i].is_null()) {
      times.push_back(StoppingTime::never);
    } else if (doc[i].is_number_integer()) {
      times.push_back(doc[i].get<int>());
    } else {
      throw InputError(where + "[" + std::to_string(i) + "]: expected an integer or null");
    }
  }
  if (!is_stopping_time(space, times)) throw InputError(where + ": not a stopping time of this filtration");
  return StoppingTime::unchecked(std::move(times));
}

json to_json(const Martingale& f) {
  json levels = json::array();
  for (const auto& level : f.levels()) levels.push_back(level.vector());
  return json{{"schema", kSchema}, {"space", to_json(f.space())}, {"levels", std::move(levels)}};
}

Martingale martingale_from_json(const json& doc) {
  check_schema(doc, "martingale");
  SpacePtr space = space_from_json(field(doc, "space", "martingale"));
  try {
    if (doc.contains("terminal")) {
      return Martingale::from_terminal(space, random_variable_from_json(doc.at("terminal"), space->size()));
    }
    const json& levels = field(doc, "levels", "martingale");
    if (!levels.is_array()) throw InputError("martingale.levels: expected a list of levels");
    std::vector<RandomVariable> values;
    for (std::size_t n = 0; n < levels.size(); ++n) {
      RandomVariable level(numbers(levels[n], "martingale.levels[" + std::to_string(n) + "]"));
      if (level.size() != space->size()) {
        throw InputError("martingale.levels[" + std::to_string(n) + "]: wrong number of outcomes");
      }
      values.push_back(std::move(level));
    }
    return Martingale(space, std::move(values));
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("martingale: ") + e.what());
  }
}

json to_json(const Decomposition& d) {
  json triples = json::array();
  for (const auto& t : d.triples) {
    triples.push_back(json{{"k", t.k}, {"lambda", t.lambda}, {"nu", to_json(t.nu)}, {"atom_terminal", t.atom.vector()}});
  }
  return json{{"schema", kSchema},
              {"flavor", to_string(d.flavor)},
              {"defn", to_string(d.defn)},
              {"p", d.p},
              {"q", exponent_to_json(d.q)},
              {"source_norm", d.source_norm},
              {"triples", std::move(triples)}};
}

Decomposition decomposition_from_json(const json& doc, SpacePtr space) {
  check_schema(doc, "decomposition");
  Decomposition d;
  d.space = space;
  try {
    d.flavor = parse_flavor(field(doc, "flavor", "decomposition").get<std::string>());
    d.defn = parse_definition(field(doc, "defn", "decomposition").get<std::string>());
  } catch (const json::type_error&) {
    throw InputError("decomposition: flavor and defn must be strings");
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("decomposition: ") + e.what());
  }
  d.p = number(field(doc, "p", "decomposition"), "decomposition.p");
  d.q = exponent_from_json(field(doc, "q", "decomposition"), "decomposition.q");
  try {
    validate_pq(d.p, d.q);
  } catch (const std::invalid_argument& e) {
    throw InputError(std::string("decomposition: ") + e.what());
  }
  if (doc.contains("source_norm")) d.source_norm = number(doc.at("source_norm"), "decomposition.source_norm");
  const json& triples = field(doc, "triples", "decomposition");
  if (!triples.is_array()) throw InputError("decomposition.triples: expected an array");
  for (std::size_t i = 0; i < triples.size(); ++i) {
    const std::string where = "decomposition.triples[" + std::to_string(i) + "]";
    const json& t = triples[i];
    AtomTriple triple;
    const json& k = field(t, "k", where);
    if (!k.is_number_integer()) throw InputError(where + ".k: expected an integer");
    triple.k = k.get<int>();
    triple.lambda = number(field(t, "lambda", where), where + ".lambda");
    if (triple.lambda < 0.0) throw InputError(where + ".lambda: must be non-negative");
    triple.nu = stopping_time_from_json(field(t, "nu", where), *space, where + ".nu");
    triple.atom = RandomVariable(numbers(field(t, "atom_terminal", where), where + ".atom_terminal"));
    if (triple.atom.size() != space->size()) throw InputError(where + ".atom_terminal: wrong number of outcomes");
    triple.flavor = d.flavor;
    triple.defn = d.defn;
    d.triples.push_back(std::move(triple));
  }
  for (const auto& t : d.triples) {
    const Event support = t.nu.support();
    d.trace.push_back(LadderLevel{t.k, support, space->probability(support), {}});
  }
  return d;
}

json to_json(const HardyNorms& norms) {
  return json{{"H_s", norms.s}, {"H_S", norms.S}, {"H_star", norms.star}, {"Q", norms.Q}, {"P", norms.P}};
}

json to_json(const AtomReport& report) {
  return json{{"vanishing", report.vanishing},
              {"first_failing_time", report.first_failing_time},
              {"vanishing_residual", report.vanishing_residual},
              {"size_ok", report.size_ok},
              {"measured", report.measured},
              {"bound", exponent_to_json(report.bound)},
              {"slack", exponent_to_json(report.slack)},
              {"ratio", report.ratio},
              {"support_ok", report.support_ok},
              {"passed", report.passed()}};
}

json to_json(const BoundCertificate& cert) {
  json rows = json::array();
  for (const auto& row : cert.rows) {
    rows.push_back(json{{"eta", row.eta},
                        {"aggregate", row.aggregate},
                        {"constant", row.constant},
                        {"upper_budget", row.upper_budget},
                        {"upper_ok", row.upper_ok},
                        {"lower_ok", row.lower_ok},
                        {"upper_ratio", row.upper_ratio},
                        {"lower_ratio", row.lower_ratio}});
  }
  return json{{"source_norm", cert.source_norm}, {"rows", rows}, {"failures", cert.failures}, {"passed", cert.passed()}};
}

json to_json(const CampanatoResult& result) {
  return json{{"norm", result.norm_value},
              {"attaining_nu", to_json(result.attaining_nu)},
              {"mode", to_string(result.mode)},
              {"candidates_examined", result.candidates_examined}};
}

json to_json(const DualityCertificate& cert) {
  return json{{"schema", kSchema},
              {"p", cert.p},
              {"q", cert.q},
              {"eta", cert.eta},
              {"pairing_abs", cert.pairing_abs},
              {"atomwise_bound", cert.atomwise_bound},
              {"block_sum_bound", cert.block_sum_bound},
              {"aggregate_bound", cert.aggregate_bound},
              {"budget", cert.budget},
              {"hardy_norm", cert.hardy_norm},
              {"constant", cert.constant},
              {"slack", cert.budget - cert.pairing_abs},
              {"campanato", to_json(cert.campanato)},
              {"failures", cert.failures},
              {"passed", cert.passed()}};
}

json to_json(const ReverseMinkowskiReport& report) {
  return json{{"left", report.left}, {"right", report.right}, {"slack", report.slack}, {"holds", report.holds}};
}

}  // namespace amalgam::io
