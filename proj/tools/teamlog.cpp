// Command-line surface over the team-semantics library.  Every verdict is
// computed by a single library call; this file only parses arguments,
// shapes reports (text or JSON with "schema": 1) and maps outcomes to exit
// codes: 0 success / true verdict, 1 false verdict, 2 usage or input error.

#include <fstream>
#include <iostream>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "teamlog/closure.hpp"
#include "teamlog/deduction.hpp"
#include "teamlog/normal_form.hpp"
#include "teamlog/sweeps.hpp"
#include "teamlog/synthesis.hpp"

using nlohmann::json;
using namespace teamlog;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

json base_report(const std::string& command) {
  json j;
  j["schema"] = 1;
  j["command"] = command;
  return j;
}

void emit(bool as_json, const json& j, const std::string& text) {
  if (as_json)
    std::cout << j.dump(2) << "\n";
  else
    std::cout << text;
}

std::string team_string(const Universe& u, TeamMask t) {
  std::string out = "{";
  bool first = true;
  for (TeamMask m = t; m; m &= m - 1) {
    if (!first) out += ",";
    first = false;
    out += valuation_to_bits(u, static_cast<Valuation>(std::countr_zero(m)));
  }
  return out + "}";
}

Universe universe_for(const std::vector<Formula>& formulas, const std::vector<std::string>& extra_vars) {
  if (extra_vars.empty()) return Universe::spanning(formulas);
  std::set<std::string> names(extra_vars.begin(), extra_vars.end());
  for (const auto& f : formulas)
    for (const auto& v : f.vars()) names.insert(v);
  return Universe(std::vector<std::string>(names.begin(), names.end()));
}

struct Args {
  bool as_json = false;

  // eval / entails / prove
  std::string team_path;
  std::string formula_text;
  std::vector<std::string> premises;
  std::string conclusion;

  // extension / synth / classify-property
  std::vector<std::string> vars;
  std::string property_path;
  std::string fragment_name;

  // nf
  std::string dnf_input;
  std::string flatten_input;

  // prove / check-proof
  std::string proof_path;
  bool harrop_side_condition = false;

  // verify-lemmas
  std::size_t n = 2;
  std::vector<std::string> lemmas;
  std::optional<std::size_t> sample;
  std::uint64_t seed = 0;
  std::vector<std::string> mutations;
};

int cmd_eval(const Args& a) {
  auto [u, team] = team_from_json(read_file(a.team_path));
  Formula f = parse(a.formula_text);
  if (!u.contains_vars_of(f))
    throw UniverseError("formula uses variables outside the team's universe");
  bool verdict = satisfies(u, team, f);
  json j = base_report("eval");
  j["formula"] = f.str();
  j["team"] = json::parse(team_to_json(u, team));
  j["satisfies"] = verdict;
  emit(a.as_json, j, std::string(verdict ? "true" : "false") + "\n");
  return verdict ? 0 : 1;
}

int cmd_extension(const Args& a) {
  Formula f = parse(a.formula_text);
  Universe u = universe_for({f}, a.vars);
  TeamProperty ext = extension(f, u);
  json j = base_report("extension");
  j["formula"] = f.str();
  j["extension"] = json::parse(property_to_json(ext));
  j["team_count"] = ext.size();
  emit(a.as_json, j, property_to_json(ext) + "\n");
  return 0;
}

int cmd_entails(const Args& a) {
  std::vector<Formula> gamma;
  for (const auto& s : a.premises) gamma.push_back(parse(s));
  Formula phi = parse(a.conclusion);
  std::vector<Formula> all = gamma;
  all.push_back(phi);
  Universe u = universe_for(all, a.vars);
  TeamMask counter = 0;
  bool verdict = entails(gamma, phi, u, &counter);
  json j = base_report("entails");
  j["premises"] = json::array();
  for (const auto& g : gamma) j["premises"].push_back(g.str());
  j["conclusion"] = phi.str();
  j["entails"] = verdict;
  std::string text = verdict ? "true\n" : "false\n";
  if (!verdict) {
    j["countermodel"] = json::parse(team_to_json(u, counter));
    text += "countermodel: " + team_string(u, counter) + "\n";
  }
  emit(a.as_json, j, text);
  return verdict ? 0 : 1;
}

int cmd_classify_property(const Args& a) {
  TeamProperty T = property_from_json(read_file(a.property_path));
  std::optional<ClosureWitness> wd, wu, wf;
  json j = base_report("classify-property");
  const Universe& u = T.universe();
  bool empty = has_empty(T);
  bool down = is_downward_closed(T, &wd);
  bool uni = is_union_closed(T, &wu);
  bool flat = is_flat(T, &wf);
  j["has_empty"] = empty;
  j["downward_closed"] = down;
  j["union_closed"] = uni;
  j["flat"] = flat;
  std::string text;
  auto line = [&](const std::string& name, bool ok, const std::optional<ClosureWitness>& w) {
    text += name + ": " + (ok ? "yes" : "no");
    if (!ok && w) {
      text += " (witness " + team_string(u, w->a);
      if (name != "flat") text += ", " + team_string(u, w->b);
      text += ")";
      json jw;
      jw["a"] = json::parse(team_to_json(u, w->a));
      if (name != "flat") jw["b"] = json::parse(team_to_json(u, w->b));
      j[name == "downward closed" ? "downward_witness"
                                  : name == "union closed" ? "union_witness" : "flat_witness"] = jw;
    }
    text += "\n";
  };
  text += std::string("has empty team: ") + (empty ? "yes" : "no") + "\n";
  line("downward closed", down, wd);
  line("union closed", uni, wu);
  line("flat", flat, wf);
  emit(a.as_json, j, text);
  return 0;
}

int cmd_synth(const Args& a) {
  TeamProperty T = property_from_json(read_file(a.property_path));
  Fragment frag = fragment_from_name(a.fragment_name);
  SynthesisResult r = synth(T, frag);
  json j = base_report("synth");
  j["fragment"] = to_string(r.fragment);
  j["formula"] = r.formula.str();
  j["verified"] = r.verified;
  emit(a.as_json, j,
       r.formula.str() + "\nverified: " + (r.verified ? "true" : "false") + "\n");
  return r.verified ? 0 : 1;
}

int cmd_nf(const Args& a) {
  json j = base_report("nf");
  std::string text;
  if (!a.dnf_input.empty()) {
    Formula f = parse(a.dnf_input);
    std::vector<Formula> disjuncts = to_dnf(f);
    j["formula"] = f.str();
    j["disjuncts"] = json::array();
    for (const auto& d : disjuncts) {
      j["disjuncts"].push_back(d.str());
      text += d.str() + "\n";
    }
  } else {
    Formula f = parse(a.flatten_input);
    Formula g = harrop_flatten(f);
    j["formula"] = f.str();
    j["flattened"] = g.str();
    text = g.str() + "\n";
  }
  emit(a.as_json, j, text);
  return 0;
}

int cmd_prove(const Args& a) {
  std::vector<Formula> gamma;
  for (const auto& s : a.premises) gamma.push_back(parse(s));
  Formula phi = parse(a.conclusion);
  ProveResult r = prove(gamma, phi);
  json j = base_report("prove");
  j["premises"] = json::array();
  for (const auto& g : gamma) j["premises"].push_back(g.str());
  j["conclusion"] = phi.str();
  j["proved"] = r.derivation.has_value();
  std::string text;
  if (r.derivation) {
    j["derivation"] = json::parse(derivation_to_json(*r.derivation));
    Sequent s = check(*r.derivation);
    json hyps = json::array();
    for (const auto& h : s.hypotheses) hyps.push_back(h.str());
    j["checked_hypotheses"] = hyps;
    text = "proved\n";
  } else {
    j["countermodel"] = json::parse(team_to_json(r.universe, *r.countermodel));
    text = "not provable\ncountermodel: " + team_string(r.universe, *r.countermodel) + "\n";
  }
  emit(a.as_json, j, text);
  return r.derivation ? 0 : 1;
}

int cmd_check_proof(const Args& a) {
  Derivation d = derivation_from_json(read_file(a.proof_path));
  CheckOptions opts;
  opts.harrop_side_condition = a.harrop_side_condition;
  json j = base_report("check-proof");
  try {
    Sequent s = check(d, opts);
    j["valid"] = true;
    j["hypotheses"] = json::array();
    std::string text = "valid\n";
    for (const auto& h : s.hypotheses) {
      j["hypotheses"].push_back(h.str());
      text += "hypothesis: " + h.str() + "\n";
    }
    j["conclusion"] = s.conclusion.str();
    text += "conclusion: " + s.conclusion.str() + "\n";
    emit(a.as_json, j, text);
    return 0;
  } catch (const ProofError& e) {
    j["valid"] = false;
    j["error"] = e.what();
    emit(a.as_json, j, std::string("invalid: ") + e.what() + "\n");
    return 1;
  }
}

int cmd_verify_lemmas(const Args& a) {
  json j = base_report("verify-lemmas");
  j["n"] = a.n;
  if (a.sample) j["sample"] = *a.sample;
  j["results"] = json::array();
  bool all_pass = true;
  std::string text;
  auto record = [&](const SweepResult& r) {
    all_pass = all_pass && r.passed;
    json jr;
    jr["id"] = r.id;
    jr["description"] = r.description;
    jr["cases"] = r.cases;
    jr["passed"] = r.passed;
    jr["detail"] = r.detail;
    j["results"].push_back(jr);
    text += r.id + ": " + (r.passed ? "pass" : "FAIL") + " (" + std::to_string(r.cases) +
            " cases) " + r.detail + "\n";
  };
  if (!a.mutations.empty()) {
    for (const auto& m : a.mutations) record(run_mutation(m, a.n));
  } else {
    std::vector<std::string> ids = a.lemmas.empty() ? lemma_ids() : a.lemmas;
    for (const auto& id : ids) record(run_lemma(id, a.n, a.sample, a.seed));
  }
  j["all_passed"] = all_pass;
  emit(a.as_json, j, text);
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Team-semantics engine for propositional team-based logics"};
  app.require_subcommand(1);
  Args a;
  app.add_flag("--json", a.as_json, "emit a JSON report (schema 1)");

  auto* eval = app.add_subcommand("eval", "evaluate a formula on a team");
  eval->add_option("--team", a.team_path, "team JSON file")->required();
  eval->add_option("--formula", a.formula_text, "formula text")->required();

  auto* ext = app.add_subcommand("extension", "print a formula's extension");
  ext->add_option("--formula", a.formula_text, "formula text")->required();
  ext->add_option("--var", a.vars, "additional universe variable (repeatable)");

  auto* ent = app.add_subcommand("entails", "decide semantic entailment");
  ent->add_option("--premise", a.premises, "premise formula (repeatable)");
  ent->add_option("--conclusion", a.conclusion, "conclusion formula")->required();
  ent->add_option("--var", a.vars, "additional universe variable (repeatable)");

  auto* cls = app.add_subcommand("classify-property", "closure classes of a team property");
  cls->add_option("--property", a.property_path, "team-property JSON file")->required();

  auto* syn = app.add_subcommand("synth", "synthesize a defining formula for a property");
  syn->add_option("--fragment", a.fragment_name, "PL|PLv|PLdep|PLinc|PLincV|PLdepinc")->required();
  syn->add_option("--property", a.property_path, "team-property JSON file")->required();

  auto* nf = app.add_subcommand("nf", "normal forms");
  auto* dnf_opt = nf->add_option("--dnf", a.dnf_input, "print the disjunctive normal form, one classical disjunct per line");
  auto* flat_opt = nf->add_option("--flatten", a.flatten_input, "replace global with local disjunction");
  dnf_opt->excludes(flat_opt);

  auto* prv = app.add_subcommand("prove", "search for a derivation of an entailment");
  prv->add_option("--premise", a.premises, "premise formula (repeatable)");
  prv->add_option("--conclusion", a.conclusion, "conclusion formula")->required();

  auto* chk = app.add_subcommand("check-proof", "check a derivation JSON file");
  chk->add_option("--proof", a.proof_path, "derivation JSON file")->required();
  chk->add_flag("--harrop-side-condition", a.harrop_side_condition,
                "widen the reductio/elimination side condition to Harrop formulas");

  auto* ver = app.add_subcommand("verify-lemmas", "run brute-force verification sweeps");
  ver->add_option("--n", a.n, "universe size")->check(CLI::Range(std::size_t{0}, kDefaultUniverseCap));
  ver->add_option("--lemma", a.lemmas, "sweep id (repeatable; default: all)");
  std::size_t sample_value = 0;
  auto* sample_opt = ver->add_option("--sample", sample_value, "sample this many properties instead of sweeping exhaustively");
  ver->add_option("--seed", a.seed, "RNG seed for sampling");
  ver->add_option("--mutate", a.mutations, "run a negative-control mutation instead (repeatable)");

  for (auto* sc : app.get_subcommands({})) sc->fallthrough();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }
  if (sample_opt->count() > 0) a.sample = sample_value;

  try {
    if (*eval) return cmd_eval(a);
    if (*ext) return cmd_extension(a);
    if (*ent) return cmd_entails(a);
    if (*cls) return cmd_classify_property(a);
    if (*syn) return cmd_synth(a);
    if (*nf) {
      if (a.dnf_input.empty() && a.flatten_input.empty()) {
        std::cerr << "nf: one of --dnf or --flatten is required\n";
        return 2;
      }
      return cmd_nf(a);
    }
    if (*prv) return cmd_prove(a);
    if (*chk) return cmd_check_proof(a);
    if (*ver) return cmd_verify_lemmas(a);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
