#include "surplus/report.hpp"

#include <cmath>

namespace surplus {

std::string to_string(Verdict v) { return v == Verdict::pass ? "pass" : "counterexample"; }

void to_json(nlohmann::json& j, const LawReport& r) {
  j = nlohmann::json{{"law", r.law},
                     {"verdict", to_string(r.verdict)},
                     {"trials", r.trials},
                     {"witness", r.witness},
                     {"seed", r.seed}};
  if (!r.flags.empty()) j["flags"] = r.flags;
}

nlohmann::json number_json(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace surplus
