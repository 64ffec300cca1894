#include "commands.hpp"

#include <cstdint>
#include <algorithm>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <surplus/decomposition.hpp>
#include <surplus/duality.hpp>
#include <surplus/error.hpp>
#include <surplus/io.hpp>
#include <surplus/report.hpp>
#include <surplus/sampler.hpp>

#include "workspace.hpp"

namespace surplus::cli {

namespace {

using nlohmann::json;

struct Globals {
  std::string workspace;
  std::uint64_t trials = 1000;
  std::optional<std::uint64_t> seed;
  double tol = 1e-9;
  bool table = false;
};

struct Outcome {
  json body;
  int code = kExitOk;
};

std::uint64_t seed_of(const Globals& g, const Workspace& ws) { return g.seed.value_or(ws.seed()); }

std::size_t prior_of(const Workspace& ws, const std::string& prior) {
  return prior.empty() ? 0 : io::prior_from_json(ws.space(), json(prior));
}

Outcome law(const LawReport& r) { return {json(r), r.passed() ? kExitOk : kExitCounterexample}; }

// Set-valued laws accept a functional name too, meaning its sublevel set {rho <= 0}.
AcceptanceSet set_or_sublevel(const Workspace& ws, const std::string& name) {
  try {
    return ws.acceptance_set(name);
  } catch (const ReferenceError&) {
    try {
      return sublevel_set(ws.functional(name));
    } catch (const ReferenceError&) {
      throw ReferenceError("unknown acceptance set or functional '" + name + "'");
    }
  }
}

Sampler sampler_for(const Workspace& ws, const Globals& g, const AcceptanceSet* a = nullptr) {
  Sampler s(ws.space(), seed_of(g, ws));
  if (a) s.set_boundary_oracle([a](const Position& x) { return a->contains(x); });
  return s;
}

void print_table(std::ostream& out, const json& body) {
  if (!body.is_object()) {
    out << body.dump() << '\n';
    return;
  }
  std::size_t width = 0;
  for (const auto& [k, v] : body.items()) width = std::max(width, k.size());
  for (const auto& [k, v] : body.items()) {
    out << k << std::string(width - k.size() + 2, ' ');
    if (v.is_string()) out << v.get<std::string>();
    else if (v.is_number_float()) {
      std::ostringstream s;
      s.precision(10);
      s << v.get<double>();
      out << s.str();
    } else out << v.dump();
    out << '\n';
  }
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Surplus-invariant acceptance sets and risk functionals on finite scenario spaces", "surplus"};
  app.require_subcommand(1);
  app.fallthrough();

  Globals g;
  app.add_option("-w,--workspace", g.workspace, "workspace JSON file")->required();
  app.add_option("--trials", g.trials, "number of randomized trials for law checks");
  app.add_option("--seed", g.seed, "seed for all randomness (default: workspace seed)");
  app.add_option("--tol", g.tol, "tolerance for extensions and bisections");
  auto* table = app.add_flag("--table", g.table, "print a key/value table");
  app.add_flag("--json", "print JSON (default)")->excludes(table);

  std::string a1, a2, a3;
  std::string prior;

  auto* eval = app.add_subcommand("eval", "evaluate a functional at a position");
  eval->add_option("functional", a1)->required();
  eval->add_option("position", a2)->required();

  auto* accept = app.add_subcommand("accept", "test membership in an acceptance set");
  accept->add_option("set", a1)->required();
  accept->add_option("position", a2)->required();

  auto* check = app.add_subcommand("check", "randomized check of a structural law");
  check->add_option("law", a1)
      ->required()
      ->check(CLI::IsMember({"si", "si-pos", "s-additive", "equivalences", "band-stability", "convexity",
                             "compatibility"}));
  check->add_option("target", a2)->required();

  auto* decompose_cmd = app.add_subcommand("decompose", "split scenarios into E1, E2, E3");
  double t_max = 1e9;
  bool verify = false;
  decompose_cmd->add_option("set", a1)->required();
  decompose_cmd->add_option("--t-max", t_max, "probe bound for loss capacities");
  decompose_cmd->add_flag("--verify", verify, "also check the reconstruction on random positions");

  auto* polar = app.add_subcommand("polar", "polar and bipolar computations on solid sets");
  std::vector<double> density;
  polar->add_option("mode", a1)->required()->check(CLI::IsMember({"support", "witness", "member", "bipolar", "robust"}));
  polar->add_option("solid", a2)->required();
  polar->add_option("position", a3, "position for bipolar and robust modes");
  polar->add_option("--prior", prior, "prior name or index");
  polar->add_option("--density", density, "density z for member mode");

  auto* dual = app.add_subcommand("dual", "biconjugate of a convex monotone functional");
  std::string domain;
  dual->add_option("functional", a1)->required();
  dual->add_option("position", a2)->required();
  dual->add_option("--domain", domain, "negative or negative-with-s (default from claims)")
      ->check(CLI::IsMember({"negative", "negative-with-s"}));

  auto* extend_cmd = app.add_subcommand("extend", "extend a sequence functional by truncation");
  std::optional<double> s_alpha;
  bool uniqueness = false;
  double base = 2.0;
  extend_cmd->add_option("functional", a1)->required();
  extend_cmd->add_option("sequence", a2)->required();
  extend_cmd->add_option("--s-additive", s_alpha, "level alpha of the S-additive extension");
  extend_cmd->add_option("--base", base, "truncation schedule n = base^k");
  extend_cmd->add_flag("--uniqueness", uniqueness, "compare two truncation schedules");

  auto* norm = app.add_subcommand("norm", "Luxemburg norm of a position");
  std::string orlicz;
  norm->add_option("position", a1)->required();
  norm->add_option("--orlicz", orlicz, "workspace name or power:p, scaled_power:p:c, linfty, exp")->required();
  norm->add_option("--prior", prior, "prior name or index");

  auto fail = [&](int code, const std::string& msg) {
    err << json{{"error", msg}}.dump() << '\n';
    return code;
  };

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    return fail(kExitInput, e.what());
  }

  try {
    if (g.trials == 0) throw InputError("--trials must be positive");
    if (!(g.tol > 0.0)) throw InputError("--tol must be positive");
    const Workspace ws = Workspace::load(g.workspace);
    const auto& space = ws.space();
    Outcome o;

    if (*eval) {
      o.body = {{"value", number_json(ws.functional(a1)(ws.position(a2)))}};
    } else if (*accept) {
      o.body = {{"accepted", ws.acceptance_set(a1).contains(ws.position(a2))}};
    } else if (*check) {
      const auto& name = a2;
      if (a1 == "si-pos" || a1 == "s-additive" || a1 == "compatibility") {
        const auto& rho = ws.functional(name);
        const Sampler s = sampler_for(ws, g);
        if (a1 == "si-pos") o = law(check_si_subject_pos(rho, s, g.trials));
        else if (a1 == "s-additive") o = law(check_s_additive(rho, s, g.trials));
        else o = law(check_claim_compatibility(rho, s, g.trials));
      } else {
        const AcceptanceSet a = set_or_sublevel(ws, name);
        const Sampler s = sampler_for(ws, g, &a);
        if (a1 == "si") o = law(check_surplus_invariant(a, s, g.trials));
        else if (a1 == "equivalences") o = law(check_equivalences(a, s, g.trials));
        else if (a1 == "band-stability") o = law(check_band_stability(a, s, g.trials));
        else o = law(check_convexity_via_D(a, s, g.trials));
      }
    } else if (*decompose_cmd) {
      const auto& a = ws.acceptance_set(a1);
      const auto dec = decompose(a, t_max);
      o.body = dec;
      if (verify) {
        const auto r = verify_reconstruction(a, dec, sampler_for(ws, g, &a), g.trials);
        o.body["reconstruction"] = r;
        if (!r.passed()) o.code = kExitCounterexample;
      }
    } else if (*polar) {
      const auto& c = ws.solid_set(a2);
      const std::size_t k = prior_of(ws, prior);
      if (a1 == "support") {
        const auto sf = support_functional(c);
        o.body = {{"z", sf.z.density}, {"sup", number_json(sf.sup)}};
      } else if (a1 == "witness") {
        o.body = {{"z", polar_positive_witness(c, space, k)}};
      } else if (a1 == "member") {
        if (density.empty()) throw InputError("member mode needs --density");
        o.body = {{"status", to_string(polar_membership(c, space, density, k))}};
      } else {
        if (a3.empty()) throw InputError(a1 + " mode needs a position");
        const auto& x = ws.position(a3);
        if (a1 == "bipolar") {
          o.body = bipolar_check(c, space, x, k);
        } else {
          const auto r = robust_bipolar_check(c, space, x);
          o.body = r;
          if (r.witness) o.body["witness"] = io::to_json(space, *r.witness);
        }
      }
    } else if (*dual) {
      const auto& rho = ws.functional(a1);
      DualDomain d = rho.claims().s_additive && rho.payoff() ? DualDomain::negative_with_s : DualDomain::negative;
      if (domain == "negative") d = DualDomain::negative;
      else if (domain == "negative-with-s") d = DualDomain::negative_with_s;
      BiconjugateOptions opts;
      opts.seed = seed_of(g, ws);
      o.body = biconjugate(rho, ws.position(a2), d, opts);
    } else if (*extend_cmd) {
      const auto& rho = ws.seq_functional(a1);
      const auto& x = ws.sequence(a2);
      if (s_alpha) {
        o.body = {{"value", number_json(extend_s_additive(rho, *s_alpha, x, g.tol))}};
      } else if (uniqueness) {
        o = law(uniqueness_check(rho, {x}, g.tol));
      } else {
        o.body = extend(rho, x, g.tol, base);
      }
    } else if (*norm) {
      const OrliczFunction phi = ws.has_orlicz(orlicz) ? ws.orlicz(orlicz) : io::orlicz_from_string(orlicz);
      o.body = {{"norm", number_json(luxemburg_norm(space, ws.position(a1), phi, prior_of(ws, prior)))}};
    }

    if (g.table) print_table(out, o.body);
    else out << o.body.dump() << '\n';
    return o.code;
  } catch (const ReferenceError& e) {
    return fail(kExitReference, e.what());
  } catch (const std::exception& e) {
    return fail(kExitInput, e.what());
  }
}

}  // namespace surplus::cli
