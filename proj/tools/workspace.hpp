#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>

#include <nlohmann/json.hpp>

#include <surplus/acceptance.hpp>
#include <surplus/orlicz.hpp>
#include <surplus/risk.hpp>
#include <surplus/robust.hpp>
#include <surplus/scenario.hpp>
#include <surplus/sequence.hpp>
#include <surplus/solid.hpp>

namespace surplus::cli {

/// A name on the command line that the workspace does not define.
class ReferenceError : public std::out_of_range {
public:
  using std::out_of_range::out_of_range;
};

/// Everything a command may refer to by name, parsed from one JSON file.
/// Names are unique across all sections.
class Workspace {
public:
  /// Throws InputError for unreadable or malformed files.
  static Workspace load(const std::filesystem::path& file);
  /// Relative CSV paths resolve against `base`.
  static Workspace from_json(const nlohmann::json& j, const std::filesystem::path& base = {});

  const ScenarioSpace& space() const noexcept { return space_; }
  std::uint64_t seed() const noexcept { return seed_; }

  const Position& position(const std::string& name) const;
  const RiskFunctional& functional(const std::string& name) const;
  const AcceptanceSet& acceptance_set(const std::string& name) const;
  const SolidSet& solid_set(const std::string& name) const;
  const SeqPosition& sequence(const std::string& name) const;
  const SeqFunctional& seq_functional(const std::string& name) const;
  const DualMeasure& dual_measure(const std::string& name) const;
  const OrliczFunction& orlicz(const std::string& name) const;
  bool has_orlicz(const std::string& name) const { return orlicz_.count(name) > 0; }

private:
  explicit Workspace(ScenarioSpace space) : space_(std::move(space)) {}

  ScenarioSpace space_;
  std::uint64_t seed_ = 0;
  std::map<std::string, Position> positions_;
  std::map<std::string, RiskFunctional> functionals_;
  std::map<std::string, AcceptanceSet> sets_;
  std::map<std::string, SolidSet> solids_;
  std::map<std::string, SeqPosition> sequences_;
  std::map<std::string, SeqFunctional> seq_functionals_;
  std::map<std::string, DualMeasure> measures_;
  std::map<std::string, OrliczFunction> orlicz_;
};

}  // namespace surplus::cli
