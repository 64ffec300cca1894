#pragma once

#include <istream>
#include <string>

#include <nlohmann/json.hpp>

#include "surplus/loss.hpp"
#include "surplus/orlicz.hpp"
#include "surplus/robust.hpp"
#include "surplus/scenario.hpp"
#include "surplus/sequence.hpp"
#include "surplus/solid.hpp"

// JSON and CSV readers for the core value types. Every reader throws
// InputError on malformed input; numbers may be given as "inf" where an
// extended value makes sense.

namespace surplus::io {

double number(const nlohmann::json& j, const std::string& what);

/// {"scenarios": [labels], "priors": [{"name": s, "weights": [..]}] }.
/// "priors" may also be an object name -> weights; without priors the
/// space gets a uniform prior "P".
ScenarioSpace space_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ScenarioSpace& space);

/// Array of payoffs, or an object label -> payoff (missing labels are 0).
Position position_from_json(const ScenarioSpace& space, const nlohmann::json& j);
/// `scenario,value` rows; an optional header line is skipped.
Position position_from_csv(const ScenarioSpace& space, std::istream& in);

/// List of labels, or an array of booleans.
EventMask event_from_json(const ScenarioSpace& space, const nlohmann::json& j);

std::size_t prior_from_json(const ScenarioSpace& space, const nlohmann::json& j);

LossFunction loss_from_json(const nlohmann::json& j);
OrliczFunction orlicz_from_json(const nlohmann::json& j);
/// Compact form used on the command line: "power:2", "scaled_power:2:0.5",
/// "linfty", "exp".
OrliczFunction orlicz_from_string(const std::string& s);

/// {"terms": [{"prior": name, "density": [..], "coeff": c}]}.
DualMeasure measure_from_json(const ScenarioSpace& space, const nlohmann::json& j);
nlohmann::json to_json(const ScenarioSpace& space, const DualMeasure& mu);

/// {"kind": "box", "upper": [..]} | {"kind": "polytope", "vertices": [[..]]}.
SolidSet solid_from_json(const nlohmann::json& j);

/// {"head": [..], "tail": {"kind": "constant"|"affine"|"geometric", ..}}.
SeqPosition seq_from_json(const nlohmann::json& j);
SeqFunctional seq_functional_from_json(const nlohmann::json& j);

}  // namespace surplus::io
