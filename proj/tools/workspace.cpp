#include "workspace.hpp"

#include <fstream>
#include <functional>
#include <set>

#include <surplus/error.hpp>
#include <surplus/io.hpp>

namespace surplus::cli {

namespace {

template <class Map>
const typename Map::mapped_type& lookup(const Map& m, const std::string& name, const char* what) {
  auto it = m.find(name);
  if (it == m.end()) throw ReferenceError(std::string("unknown ") + what + " '" + name + "'");
  return it->second;
}

std::string kind_of(const nlohmann::json& spec, const std::string& name) {
  if (!spec.is_object() || !spec.contains("kind") || !spec["kind"].is_string())
    throw InputError("'" + name + "' needs a string field 'kind'");
  return spec["kind"].get<std::string>();
}

double num(const nlohmann::json& spec, const char* key, const std::string& name) {
  if (!spec.contains(key)) throw InputError("'" + name + "' is missing field '" + key + "'");
  return io::number(spec[key], name + "." + key);
}

std::size_t prior_of(const ScenarioSpace& space, const nlohmann::json& spec) {
  return spec.contains("prior") ? io::prior_from_json(space, spec["prior"]) : 0;
}

}  // namespace

Workspace Workspace::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw InputError("cannot read workspace '" + file.string() + "'");
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InputError("workspace '" + file.string() + "' is not valid JSON: " + e.what());
  }
  return from_json(j, file.parent_path());
}

Workspace Workspace::from_json(const nlohmann::json& j, const std::filesystem::path& base) {
  if (!j.is_object()) throw InputError("workspace must be a JSON object");
  Workspace ws(io::space_from_json(j));
  const auto& space = ws.space_;
  if (j.contains("seed")) {
    if (!j["seed"].is_number_unsigned()) throw InputError("seed must be a nonnegative integer");
    ws.seed_ = j["seed"].get<std::uint64_t>();
  }

  std::set<std::string> names;
  auto section = [&](const char* key) -> nlohmann::json {
    if (!j.contains(key)) return nlohmann::json::object();
    if (!j[key].is_object()) throw InputError(std::string("'") + key + "' must be an object of named entries");
    for (const auto& [name, spec] : j[key].items())
      if (!names.insert(name).second) throw InputError("name '" + name + "' is defined twice");
    return j[key];
  };

  // Positions also come as a list of {"name", "payoffs"} records.
  if (j.contains("positions") && j["positions"].is_array()) {
    nlohmann::json named = nlohmann::json::object();
    for (const auto& rec : j["positions"]) {
      if (!rec.is_object() || !rec.contains("name") || !rec["name"].is_string() || !rec.contains("payoffs"))
        throw InputError("position records need 'name' and 'payoffs'");
      const auto name = rec["name"].get<std::string>();
      if (named.contains(name)) throw InputError("name '" + name + "' is defined twice");
      named[name] = rec["payoffs"];
    }
    auto copy = j;
    copy["positions"] = std::move(named);
    return from_json(copy, base);
  }

  const auto sec_positions = section("positions");
  const auto set_specs = section("acceptance_sets");
  const auto sec_functionals = section("functionals");
  const auto sec_solid_sets = section("solid_sets");
  const auto sec_sequences = section("sequences");
  const auto sec_seq_functionals = section("seq_functionals");
  const auto sec_dual_measures = section("dual_measures");
  const auto sec_orlicz = section("orlicz");

  for (const auto& [name, spec] : sec_positions.items()) {
    if (spec.is_object() && spec.contains("csv")) {
      std::filesystem::path p = spec["csv"].get<std::string>();
      if (p.is_relative()) p = base / p;
      std::ifstream in(p);
      if (!in) throw InputError("cannot read CSV '" + p.string() + "' for position '" + name + "'");
      ws.positions_.emplace(name, io::position_from_csv(space, in));
    } else {
      ws.positions_.emplace(name, io::position_from_json(space, spec));
    }
  }

  // Acceptance sets may refer to each other; resolve depth first.
  std::set<std::string> resolving;
  std::function<const AcceptanceSet&(const std::string&)> resolve = [&](const std::string& name) -> const AcceptanceSet& {
    if (auto it = ws.sets_.find(name); it != ws.sets_.end()) return it->second;
    if (!set_specs.contains(name)) throw InputError("acceptance set '" + name + "' is not defined");
    if (!resolving.insert(name).second) throw InputError("acceptance set '" + name + "' refers to itself");
    const auto& spec = set_specs[name];
    const auto kind = kind_of(spec, name);
    auto parts = [&]() {
      if (!spec.contains("of") || !spec["of"].is_array() || spec["of"].empty())
        throw InputError("'" + name + "' needs a nonempty list 'of'");
      std::vector<AcceptanceSet> v;
      for (const auto& part : spec["of"]) v.push_back(resolve(part.get<std::string>()));
      return v;
    };
    std::optional<AcceptanceSet> a;
    if (kind == "var") a = var_set(space, num(spec, "alpha", name), prior_of(space, spec));
    else if (kind == "es") a = es_set(space, num(spec, "alpha", name), prior_of(space, spec));
    else if (kind == "span") {
      if (!spec.contains("event")) throw InputError("'" + name + "' is missing field 'event'");
      std::optional<std::size_t> prior;
      if (spec.contains("prior")) prior = io::prior_from_json(space, spec["prior"]);
      a = span_set(space, io::event_from_json(space, spec["event"]), prior);
    } else if (kind == "shortfall") {
      if (!spec.contains("loss")) throw InputError("'" + name + "' is missing field 'loss'");
      a = shortfall_set(space, io::loss_from_json(spec["loss"]), num(spec, "level", name), prior_of(space, spec));
    } else if (kind == "halfspace") a = halfspace_set(space, prior_of(space, spec));
    else if (kind == "box") {
      if (!spec.contains("bounds") || !spec["bounds"].is_array()) throw InputError("'" + name + "' needs 'bounds'");
      std::vector<double> b;
      for (const auto& v : spec["bounds"]) b.push_back(io::number(v, name + ".bounds"));
      a = box_set(space, std::move(b));
    } else if (kind == "positive_cone") a = positive_cone(space);
    else if (kind == "whole") a = whole_space(space);
    else if (kind == "intersection") a = intersect(parts());
    else if (kind == "union") a = unite(parts());
    else throw InputError("acceptance set '" + name + "' has unknown kind '" + kind + "'");
    resolving.erase(name);
    return ws.sets_.emplace(name, std::move(*a)).first->second;
  };
  for (const auto& [name, spec] : set_specs.items()) resolve(name);

  auto payoff_of = [&](const nlohmann::json& spec) -> std::optional<Position> {
    const char* key = spec.contains("S") ? "S" : "payoff";
    if (!spec.contains(key)) return std::nullopt;
    const auto& p = spec[key];
    if (p.is_string()) {
      auto it = ws.positions_.find(p.get<std::string>());
      if (it == ws.positions_.end()) throw InputError("payoff position '" + p.get<std::string>() + "' is not defined");
      return it->second;
    }
    return io::position_from_json(space, p);
  };

  for (const auto& [name, spec] : sec_functionals.items()) {
    const auto kind = kind_of(spec, name);
    std::optional<RiskFunctional> f;
    if (kind == "var") f = var_functional(space, num(spec, "alpha", name), prior_of(space, spec));
    else if (kind == "es") f = es_functional(space, num(spec, "alpha", name), prior_of(space, spec));
    else if (kind == "shortfall") {
      if (!spec.contains("loss")) throw InputError("'" + name + "' is missing field 'loss'");
      f = shortfall_functional(space, io::loss_from_json(spec["loss"]), prior_of(space, spec), payoff_of(spec));
    } else if (kind == "expectation_loss") f = expectation_loss(space, prior_of(space, spec));
    else if (kind == "max_loss") f = max_loss(space);
    else if (kind == "worst_loss") f = worst_loss(space);
    else if (kind == "span") {
      if (!spec.contains("event")) throw InputError("'" + name + "' is missing field 'event'");
      std::optional<std::size_t> prior;
      if (spec.contains("prior")) prior = io::prior_from_json(space, spec["prior"]);
      const Position s = payoff_of(spec).value_or(Position::constant(space.size(), 1.0));
      f = from_acceptance(span_set(space, io::event_from_json(space, spec["event"]), prior), s);
    } else if (kind == "from_acceptance") {
      if (!spec.contains("set") || !spec["set"].is_string()) throw InputError("'" + name + "' needs a set name");
      const auto set_name = spec["set"].get<std::string>();
      auto it = ws.sets_.find(set_name);
      if (it == ws.sets_.end()) throw InputError("acceptance set '" + set_name + "' is not defined");
      const Position s = payoff_of(spec).value_or(Position::constant(space.size(), 1.0));
      f = from_acceptance(it->second, s);
    } else throw InputError("functional '" + name + "' has unknown kind '" + kind + "'");
    ws.functionals_.emplace(name, std::move(*f));
  }

  for (const auto& [name, spec] : sec_solid_sets.items()) {
    auto c = io::solid_from_json(spec);
    if (c.dimension() != space.size()) throw InputError("solid set '" + name + "' has the wrong dimension");
    ws.solids_.emplace(name, std::move(c));
  }
  for (const auto& [name, spec] : sec_sequences.items()) ws.sequences_.emplace(name, io::seq_from_json(spec));
  for (const auto& [name, spec] : sec_seq_functionals.items())
    ws.seq_functionals_.emplace(name, io::seq_functional_from_json(spec));
  for (const auto& [name, spec] : sec_dual_measures.items())
    ws.measures_.emplace(name, io::measure_from_json(space, spec));
  for (const auto& [name, spec] : sec_orlicz.items()) ws.orlicz_.emplace(name, io::orlicz_from_json(spec));
  return ws;
}

const Position& Workspace::position(const std::string& name) const { return lookup(positions_, name, "position"); }
const RiskFunctional& Workspace::functional(const std::string& name) const {
  return lookup(functionals_, name, "functional");
}
const AcceptanceSet& Workspace::acceptance_set(const std::string& name) const {
  return lookup(sets_, name, "acceptance set");
}
const SolidSet& Workspace::solid_set(const std::string& name) const { return lookup(solids_, name, "solid set"); }
const SeqPosition& Workspace::sequence(const std::string& name) const { return lookup(sequences_, name, "sequence"); }
const SeqFunctional& Workspace::seq_functional(const std::string& name) const {
  return lookup(seq_functionals_, name, "sequence functional");
}
const DualMeasure& Workspace::dual_measure(const std::string& name) const {
  return lookup(measures_, name, "dual measure");
}
const OrliczFunction& Workspace::orlicz(const std::string& name) const { return lookup(orlicz_, name, "Orlicz function"); }

}  // namespace surplus::cli
