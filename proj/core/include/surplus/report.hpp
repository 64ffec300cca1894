#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

namespace surplus {

enum class Verdict { pass, counterexample };

/// Outcome of a randomized or exhaustive law check. A counterexample
/// report carries the witness and the seed/trial needed to replay it.
struct LawReport {
  std::string law;
  Verdict verdict = Verdict::pass;
  std::uint64_t trials = 0;
  nlohmann::json witness = nlohmann::json::object();
  std::uint64_t seed = 0;
  std::vector<std::string> flags;

  bool passed() const noexcept { return verdict == Verdict::pass; }
};

void to_json(nlohmann::json& j, const LawReport& r);

std::string to_string(Verdict v);

/// Finite numbers as JSON numbers, infinities as "inf" / "-inf".
nlohmann::json number_json(double v);

}  // namespace surplus
