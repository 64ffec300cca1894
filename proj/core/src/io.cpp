#include "surplus/io.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "surplus/error.hpp"

namespace surplus::io {

namespace {

const nlohmann::json& field(const nlohmann::json& j, const char* key, const std::string& what) {
  if (!j.is_object() || !j.contains(key)) throw InputError(what + ": missing field '" + key + "'");
  return j.at(key);
}

std::vector<double> numbers(const nlohmann::json& j, const std::string& what) {
  if (!j.is_array()) throw InputError(what + ": expected an array of numbers");
  std::vector<double> out;
  out.reserve(j.size());
  for (const auto& v : j) out.push_back(number(v, what));
  return out;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r\n");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r\n");
  return s.substr(b, e - b + 1);
}

}  // namespace

double number(const nlohmann::json& j, const std::string& what) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const auto s = j.get<std::string>();
    if (s == "inf" || s == "+inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw InputError(what + ": expected a number");
}

ScenarioSpace space_from_json(const nlohmann::json& j) {
  const auto& sc = field(j, "scenarios", "workspace");
  std::vector<std::string> labels;
  if (sc.is_number_unsigned()) {
    const auto n = sc.get<std::size_t>();
    for (std::size_t i = 1; i <= n; ++i) labels.push_back("w" + std::to_string(i));
  } else if (sc.is_array()) {
    for (const auto& l : sc) {
      if (!l.is_string()) throw InputError("scenario labels must be strings");
      labels.push_back(l.get<std::string>());
    }
  } else {
    throw InputError("'scenarios' must be a label list or a count");
  }
  std::vector<Prior> priors;
  if (!j.contains("priors")) {
    if (labels.empty()) throw InputError("a scenario space needs at least one scenario");
    priors.push_back({"P", std::vector<double>(labels.size(), 1.0 / static_cast<double>(labels.size()))});
  } else if (j["priors"].is_object()) {
    for (const auto& [name, w] : j["priors"].items()) priors.push_back({name, numbers(w, "prior " + name)});
  } else if (j["priors"].is_array()) {
    for (const auto& p : j["priors"]) {
      const auto& name = field(p, "name", "prior");
      if (!name.is_string()) throw InputError("prior names must be strings");
      priors.push_back({name.get<std::string>(), numbers(field(p, "weights", "prior"), "prior weights")});
    }
  } else {
    throw InputError("'priors' must be a list or an object");
  }
  return ScenarioSpace(std::move(labels), std::move(priors));
}

nlohmann::json to_json(const ScenarioSpace& space) {
  nlohmann::json priors = nlohmann::json::array();
  for (const auto& p : space.priors()) priors.push_back({{"name", p.name}, {"weights", p.weights}});
  return {{"scenarios", space.labels()}, {"priors", priors}};
}

Position position_from_json(const ScenarioSpace& space, const nlohmann::json& j) {
  if (j.is_array()) return space.position(numbers(j, "position"));
  if (j.is_object()) {
    std::vector<double> v(space.size(), 0.0);
    for (const auto& [label, value] : j.items()) v[space.scenario_index(label)] = number(value, "position " + label);
    return space.position(std::move(v));
  }
  throw InputError("position must be an array or a label map");
}

Position position_from_csv(const ScenarioSpace& space, std::istream& in) {
  std::vector<double> v(space.size(), 0.0);
  std::vector<bool> seen(space.size(), false);
  std::string line;
  std::size_t row = 0;
  while (std::getline(in, line)) {
    ++row;
    line = trim(line);
    if (line.empty() || line.front() == '#') continue;
    const auto comma = line.find(',');
    if (comma == std::string::npos) throw InputError("CSV row " + std::to_string(row) + ": expected 'scenario,value'");
    const std::string label = trim(line.substr(0, comma));
    const std::string value = trim(line.substr(comma + 1));
    if (row == 1 && label == "scenario") continue;
    std::size_t used = 0;
    double x = 0.0;
    try {
      x = std::stod(value, &used);
    } catch (const std::exception&) {
      throw InputError("CSV row " + std::to_string(row) + ": bad value '" + value + "'");
    }
    if (used != value.size()) throw InputError("CSV row " + std::to_string(row) + ": bad value '" + value + "'");
    const std::size_t i = space.scenario_index(label);
    if (seen[i]) throw InputError("CSV row " + std::to_string(row) + ": duplicate scenario '" + label + "'");
    seen[i] = true;
    v[i] = x;
  }
  return space.position(std::move(v));
}

EventMask event_from_json(const ScenarioSpace& space, const nlohmann::json& j) {
  if (!j.is_array()) throw InputError("event must be a list of labels or booleans");
  EventMask e = EventMask::none(space.size());
  if (!j.empty() && j.front().is_boolean()) {
    if (j.size() != space.size()) throw InputError("boolean event has the wrong length");
    for (std::size_t i = 0; i < j.size(); ++i) {
      if (!j[i].is_boolean()) throw InputError("boolean event mixes types");
      e.set(i, j[i].get<bool>());
    }
    return e;
  }
  for (const auto& l : j) {
    if (!l.is_string()) throw InputError("event labels must be strings");
    e.set(space.scenario_index(l.get<std::string>()), true);
  }
  return e;
}

std::size_t prior_from_json(const ScenarioSpace& space, const nlohmann::json& j) {
  if (j.is_string()) return space.prior_index(j.get<std::string>());
  if (j.is_number_unsigned() && j.get<std::size_t>() < space.prior_count()) return j.get<std::size_t>();
  throw InputError("prior must be a known name or index");
}

LossFunction loss_from_json(const nlohmann::json& j) {
  const auto kind = field(j, "kind", "loss").get<std::string>();
  if (kind == "power") return LossFunction::power(number(field(j, "p", "loss"), "loss p"));
  if (kind == "exponential") return LossFunction::exponential(j.contains("rate") ? number(j["rate"], "loss rate") : 1.0);
  if (kind == "piecewise_linear")
    return LossFunction::piecewise_linear(numbers(field(j, "knots", "loss"), "loss knots"),
                                          numbers(field(j, "slopes", "loss"), "loss slopes"));
  throw InputError("unknown loss kind '" + kind + "'");
}

OrliczFunction orlicz_from_json(const nlohmann::json& j) {
  const auto kind = field(j, "kind", "Orlicz function").get<std::string>();
  if (kind == "power") return OrliczFunction::power(number(field(j, "p", "Orlicz"), "Orlicz p"));
  if (kind == "scaled_power")
    return OrliczFunction::scaled_power(number(field(j, "p", "Orlicz"), "Orlicz p"),
                                        number(field(j, "c", "Orlicz"), "Orlicz c"));
  if (kind == "linfty_type" || kind == "linfty") return OrliczFunction::linfty();
  if (kind == "exp_minus_one") return OrliczFunction::exp_minus_one();
  if (kind == "piecewise_linear")
    return OrliczFunction::piecewise_linear(numbers(field(j, "knots", "Orlicz"), "Orlicz knots"),
                                            numbers(field(j, "slopes", "Orlicz"), "Orlicz slopes"));
  throw InputError("unknown Orlicz kind '" + kind + "'");
}

OrliczFunction orlicz_from_string(const std::string& s) {
  std::vector<std::string> parts;
  std::stringstream ss(s);
  std::string part;
  while (std::getline(ss, part, ':')) parts.push_back(part);
  if (parts.empty()) throw InputError("empty Orlicz specification");
  auto num = [&](std::size_t k) {
    if (k >= parts.size()) throw InputError("Orlicz specification '" + s + "' is missing a parameter");
    std::size_t used = 0;
    double v = 0.0;
    try {
      v = std::stod(parts[k], &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != parts[k].size()) throw InputError("bad number in Orlicz specification '" + s + "'");
    return v;
  };
  const auto& kind = parts[0];
  if (kind == "power" && parts.size() == 2) return OrliczFunction::power(num(1));
  if (kind == "scaled_power" && parts.size() == 3) return OrliczFunction::scaled_power(num(1), num(2));
  if ((kind == "linfty" || kind == "linfty_type") && parts.size() == 1) return OrliczFunction::linfty();
  if ((kind == "exp" || kind == "exp_minus_one") && parts.size() == 1) return OrliczFunction::exp_minus_one();
  throw InputError("unknown Orlicz specification '" + s + "'");
}

DualMeasure measure_from_json(const ScenarioSpace& space, const nlohmann::json& j) {
  const auto& terms = field(j, "terms", "dual measure");
  if (!terms.is_array()) throw InputError("dual measure terms must be a list");
  DualMeasure mu;
  for (const auto& t : terms) {
    DualTerm term;
    term.prior = prior_from_json(space, field(t, "prior", "dual term"));
    term.density = numbers(field(t, "density", "dual term"), "dual density");
    term.coeff = t.contains("coeff") ? number(t["coeff"], "dual coefficient") : 1.0;
    mu.add(std::move(term));
  }
  check(space, mu);
  return mu;
}

nlohmann::json to_json(const ScenarioSpace& space, const DualMeasure& mu) {
  nlohmann::json terms = nlohmann::json::array();
  for (const auto& t : mu.terms())
    terms.push_back({{"prior", space.prior(t.prior).name}, {"density", t.density}, {"coeff", t.coeff}});
  return {{"terms", terms}};
}

SolidSet solid_from_json(const nlohmann::json& j) {
  const auto kind = field(j, "kind", "solid set").get<std::string>();
  if (kind == "box") return SolidSet::box(numbers(field(j, "upper", "solid set"), "box upper bounds"));
  if (kind == "polytope") {
    const auto& vs = field(j, "vertices", "solid set");
    if (!vs.is_array()) throw InputError("polytope vertices must be a list");
    std::vector<std::vector<double>> vertices;
    for (const auto& v : vs) vertices.push_back(numbers(v, "polytope vertex"));
    return SolidSet::polytope(std::move(vertices));
  }
  throw InputError("unknown solid set kind '" + kind + "'");
}

SeqPosition seq_from_json(const nlohmann::json& j) {
  std::vector<double> head;
  if (j.contains("head")) head = numbers(j["head"], "sequence head");
  const auto& tail = field(j, "tail", "sequence");
  const auto kind = field(tail, "kind", "sequence tail").get<std::string>();
  if (kind == "constant") return SeqPosition::constant(number(field(tail, "c", "tail"), "tail c"), std::move(head));
  if (kind == "affine")
    return SeqPosition::affine(number(field(tail, "a", "tail"), "tail a"), number(field(tail, "b", "tail"), "tail b"),
                               std::move(head));
  if (kind == "geometric")
    return SeqPosition::geometric(number(field(tail, "c", "tail"), "tail c"), number(field(tail, "r", "tail"), "tail r"),
                                  std::move(head));
  throw InputError("unknown tail kind '" + kind + "'");
}

SeqFunctional seq_functional_from_json(const nlohmann::json& j) {
  const auto kind = field(j, "kind", "sequence functional").get<std::string>();
  if (kind == "weighted_shortfall")
    return SeqFunctional::weighted_shortfall(j.contains("w") ? number(j["w"], "weight") : 1.0,
                                             number(field(j, "q", "weighted shortfall"), "ratio q"));
  if (kind == "sup_shortfall") return SeqFunctional::sup_shortfall();
  throw InputError("unknown sequence functional kind '" + kind + "'");
}

}  // namespace surplus::io
