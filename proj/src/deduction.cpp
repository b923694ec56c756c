#include "teamlog/deduction.hpp"

#include <algorithm>
#include <functional>
#include <json.hpp>
#include <map>
#include <tuple>

#include "teamlog/normal_form.hpp"

namespace teamlog {

// ---------------------------------------------------------------------------
// Rule names

namespace {

const std::vector<std::pair<RuleId, const char*>> kRuleNames = {
    {RuleId::Hypothesis, "Hypothesis"}, {RuleId::BotE, "BotE"},
    {RuleId::AndI, "AndI"},             {RuleId::AndE_L, "AndE_L"},
    {RuleId::AndE_R, "AndE_R"},         {RuleId::NegI, "NegI"},
    {RuleId::NegE, "NegE"},             {RuleId::RAA, "RAA"},
    {RuleId::GOrI_L, "GOrI_L"},         {RuleId::GOrI_R, "GOrI_R"},
    {RuleId::GOrE, "GOrE"},             {RuleId::LOrI, "LOrI"},
    {RuleId::LOrE, "LOrE"},             {RuleId::LOrCom, "LOrCom"},
    {RuleId::LOrMon, "LOrMon"},         {RuleId::DisOrGOr, "DisOrGOr"},
    {RuleId::ImplI, "ImplI"},           {RuleId::ImplE, "ImplE"},
    {RuleId::Split, "Split"},           {RuleId::NegAnton, "NegAnton"},
};

const std::vector<std::pair<DerivedRule, const char*>> kDerivedNames = {
    {DerivedRule::LOrAss, "LOrAss"},
    {DerivedRule::LOrBotElim, "LOrBotElim"},
    {DerivedRule::DisjSyl1, "DisjSyl1"},
    {DerivedRule::DisjSyl2, "DisjSyl2"},
    {DerivedRule::ImplDef_LR, "ImplDef_LR"},
    {DerivedRule::ImplDef_RL, "ImplDef_RL"},
    {DerivedRule::SplitDerived, "SplitDerived"},
    {DerivedRule::NegAntonExpand, "NegAntonExpand"},
};

}  // namespace

std::string to_string(RuleId r) {
  for (const auto& [id, name] : kRuleNames)
    if (id == r) return name;
  return "?";
}

RuleId rule_from_name(const std::string& name) {
  for (const auto& [id, n] : kRuleNames)
    if (name == n) return id;
  throw ProofError("unknown rule name: " + name);
}

std::string to_string(DerivedRule r) {
  for (const auto& [id, name] : kDerivedNames)
    if (id == r) return name;
  return "?";
}

DerivedRule derived_rule_from_name(const std::string& name) {
  for (const auto& [id, n] : kDerivedNames)
    if (name == n) return id;
  throw ProofError("unknown derived rule name: " + name);
}

// ---------------------------------------------------------------------------
// Checker

namespace {

// Open hypotheses as (label, formula) pairs in discovery order.
using Hyps = std::vector<std::pair<std::string, Formula>>;

const Formula* find_hyp(const Hyps& h, const std::string& label) {
  for (const auto& [l, f] : h)
    if (l == label) return &f;
  return nullptr;
}

[[noreturn]] void fail(const std::string& path, const std::string& msg) {
  throw ProofError(path + ": " + msg);
}

bool side_ok(const Formula& alpha, const CheckOptions& opts) {
  return is_classical(alpha) || (opts.harrop_side_condition && is_harrop(alpha));
}

struct Walker {
  const CheckOptions& opts;

  Hyps walk(const Derivation& d, const std::string& path) {
    const std::size_t n = d.premises.size();
    if (!d.discharge.empty() && d.discharge.size() != n)
      fail(path, "discharge list count does not match premise count");

    // Schema validation: premise count, premise/conclusion shapes, and the
    // assumption formula each premise may discharge (none = no discharge).
    std::vector<std::optional<Formula>> dischargeable(n);
    auto expect = [&](bool cond, const std::string& msg) {
      if (!cond) fail(path, msg + " in rule " + to_string(d.rule));
    };
    auto pc = [&](std::size_t i) -> const Formula& { return d.premises[i].conclusion; };
    const Formula& c = d.conclusion;

    switch (d.rule) {
      case RuleId::Hypothesis:
        expect(n == 0, "hypothesis with premises");
        expect(!d.label.empty(), "hypothesis without a label");
        return {{d.label, c}};
      case RuleId::BotE:
        expect(n == 1 && pc(0) == Formula::bottom(), "premise must be _|_");
        break;
      case RuleId::AndI:
        expect(n == 2 && c.is(Conn::And) && c.left() == pc(0) && c.right() == pc(1),
               "conclusion must conjoin the premises");
        break;
      case RuleId::AndE_L:
        expect(n == 1 && pc(0).is(Conn::And) && pc(0).left() == c,
               "conclusion must be the left conjunct");
        break;
      case RuleId::AndE_R:
        expect(n == 1 && pc(0).is(Conn::And) && pc(0).right() == c,
               "conclusion must be the right conjunct");
        break;
      case RuleId::NegI:
        expect(n == 1 && pc(0) == Formula::bottom() && c.is(Conn::Neg),
               "needs premise _|_ and a negated conclusion");
        dischargeable[0] = c.child();
        break;
      case RuleId::NegE:
        expect(n == 2 && pc(1) == Formula::neg(pc(0)),
               "second premise must negate the first");
        break;
      case RuleId::RAA:
        expect(n == 1 && pc(0) == Formula::bottom(), "premise must be _|_");
        if (!opts.weaken_raa && !side_ok(c, opts))
          fail(path, "RAA side condition fails for " + c.str());
        dischargeable[0] = Formula::neg(c);
        break;
      case RuleId::GOrI_L:
        expect(n == 1 && c.is(Conn::GlobalOr) && c.left() == pc(0),
               "premise must be the left disjunct");
        break;
      case RuleId::GOrI_R:
        expect(n == 1 && c.is(Conn::GlobalOr) && c.right() == pc(0),
               "premise must be the right disjunct");
        break;
      case RuleId::GOrE:
        expect(n == 3 && pc(0).is(Conn::GlobalOr) && pc(1) == c && pc(2) == c,
               "needs a \\/ premise and two minor premises proving the conclusion");
        dischargeable[1] = pc(0).left();
        dischargeable[2] = pc(0).right();
        break;
      case RuleId::LOrI:
        expect(n == 1 && c.is(Conn::LocalOr) && c.left() == pc(0),
               "premise must be the left disjunct");
        break;
      case RuleId::LOrE:
        expect(n == 3 && pc(0).is(Conn::LocalOr) && pc(1) == c && pc(2) == c,
               "needs a | premise and two minor premises proving the conclusion");
        if (!side_ok(c, opts))
          fail(path, "local disjunction elimination side condition fails for " + c.str());
        dischargeable[1] = pc(0).left();
        dischargeable[2] = pc(0).right();
        break;
      case RuleId::LOrCom:
        expect(n == 1 && pc(0).is(Conn::LocalOr) &&
                   c == Formula::lor(pc(0).right(), pc(0).left()),
               "conclusion must swap the disjuncts");
        break;
      case RuleId::LOrMon:
        expect(n == 2 && pc(0).is(Conn::LocalOr) && c.is(Conn::LocalOr) &&
                   c.right() == pc(0).right() && c.left() == pc(1),
               "conclusion must replace the left disjunct with the minor premise");
        dischargeable[1] = pc(0).left();
        break;
      case RuleId::DisOrGOr:
        expect(n == 1 && pc(0).is(Conn::LocalOr) && pc(0).right().is(Conn::GlobalOr) &&
                   c == Formula::gor(Formula::lor(pc(0).left(), pc(0).right().left()),
                                     Formula::lor(pc(0).left(), pc(0).right().right())),
               "conclusion must distribute | over \\/");
        break;
      case RuleId::ImplI:
        expect(n == 1 && c.is(Conn::IntImpl) && c.right() == pc(0),
               "premise must be the consequent");
        dischargeable[0] = c.left();
        break;
      case RuleId::ImplE:
        expect(n == 2 && pc(0).is(Conn::IntImpl) && pc(0).left() == pc(1) &&
                   pc(0).right() == c,
               "premises must be an implication and its antecedent");
        break;
      case RuleId::Split:
        expect(n == 1 && pc(0).is(Conn::IntImpl) && pc(0).right().is(Conn::GlobalOr) &&
                   c == Formula::gor(Formula::impl(pc(0).left(), pc(0).right().left()),
                                     Formula::impl(pc(0).left(), pc(0).right().right())),
               "conclusion must split the implication over \\/");
        if (!side_ok(pc(0).left(), opts))
          fail(path, "Split side condition fails for " + pc(0).left().str());
        break;
      case RuleId::NegAnton:
        expect(n == 2 && pc(0).is(Conn::Neg) && pc(0).child() == pc(1) && c.is(Conn::Neg),
               "needs ~phi and a minor premise proving phi");
        dischargeable[1] = c.child();
        break;
    }

    Hyps open;
    for (std::size_t i = 0; i < n; ++i) {
      Hyps sub = walk(d.premises[i], path + "/" + std::to_string(i));
      const std::vector<std::string> no_discharge;
      const std::vector<std::string>& dis =
          d.discharge.empty() ? no_discharge : d.discharge[i];
      if (!dis.empty() && !dischargeable[i])
        fail(path, "premise " + std::to_string(i) + " of " + to_string(d.rule) +
                       " may not discharge hypotheses");
      for (const std::string& label : dis) {
        if (const Formula* f = find_hyp(sub, label)) {
          if (*f != *dischargeable[i])
            fail(path, "label " + label + " binds " + f->str() + ", expected " +
                           dischargeable[i]->str());
          std::erase_if(sub, [&](const auto& p) { return p.first == label; });
        }
        // absent label: vacuous discharge, allowed
      }
      for (auto& [label, f] : sub) {
        if (const Formula* prev = find_hyp(open, label)) {
          if (*prev != f)
            fail(path, "label " + label + " is used for both " + prev->str() + " and " +
                           f.str());
        } else {
          open.emplace_back(label, f);
        }
      }
    }
    return open;
  }
};

}  // namespace

Sequent check(const Derivation& d, const CheckOptions& opts) {
  Walker w{opts};
  Hyps open = w.walk(d, "root");
  Sequent s{{}, d.conclusion};
  for (const auto& [label, f] : open)
    if (std::find(s.hypotheses.begin(), s.hypotheses.end(), f) == s.hypotheses.end())
      s.hypotheses.push_back(f);
  return s;
}

// ---------------------------------------------------------------------------
// JSON

namespace {

nlohmann::json to_json_tree(const Derivation& d) {
  nlohmann::json j;
  j["rule"] = to_string(d.rule);
  j["conclusion"] = d.conclusion.str();
  if (!d.label.empty()) j["label"] = d.label;
  if (!d.premises.empty()) {
    j["premises"] = nlohmann::json::array();
    for (const Derivation& p : d.premises) j["premises"].push_back(to_json_tree(p));
  }
  if (!d.discharge.empty()) j["discharge"] = d.discharge;
  return j;
}

Derivation from_json_tree(const nlohmann::json& j) {
  if (!j.is_object()) throw ProofError("derivation node must be a JSON object");
  Derivation d;
  d.rule = rule_from_name(j.at("rule").get<std::string>());
  d.conclusion = parse(j.at("conclusion").get<std::string>());
  if (j.contains("label")) d.label = j["label"].get<std::string>();
  if (j.contains("premises"))
    for (const auto& p : j["premises"]) d.premises.push_back(from_json_tree(p));
  if (j.contains("discharge"))
    d.discharge = j["discharge"].get<std::vector<std::vector<std::string>>>();
  return d;
}

}  // namespace

Derivation derivation_from_json(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw ProofError(std::string("bad proof JSON: ") + e.what());
  }
  try {
    return from_json_tree(j);
  } catch (const nlohmann::json::exception& e) {
    throw ProofError(std::string("bad proof JSON: ") + e.what());
  }
}

std::string derivation_to_json(const Derivation& d) { return to_json_tree(d).dump(2); }

// ---------------------------------------------------------------------------
// Construction toolkit

namespace {

struct Builder {
  int counter = 0;
  std::string fresh() { return "h" + std::to_string(++counter); }
};

Derivation hyp(const Formula& f, std::string label) {
  Derivation d;
  d.rule = RuleId::Hypothesis;
  d.conclusion = f;
  d.label = std::move(label);
  return d;
}

Derivation mk(RuleId rule, Formula conclusion, std::vector<Derivation> premises,
              std::vector<std::vector<std::string>> discharge = {}) {
  Derivation d;
  d.rule = rule;
  d.conclusion = std::move(conclusion);
  d.premises = std::move(premises);
  d.discharge = std::move(discharge);
  return d;
}

// A derivation whose single open assumption is the labelled hypothesis.
struct Dir {
  Derivation d;
  std::string hyp_label;
};

// Grafts `base` onto every open hypothesis leaf carrying `label`.
Derivation cut(const Derivation& d, const std::string& label, const Derivation& base) {
  if (d.rule == RuleId::Hypothesis && d.label == label) return base;
  Derivation out = d;
  for (Derivation& p : out.premises) p = cut(p, label, base);
  return out;
}

Derivation apply_dir(const Dir& dir, const Derivation& base) {
  return cut(dir.d, dir.hyp_label, base);
}

Formula gor_fold(const std::vector<Formula>& list, std::size_t from = 0) {
  Formula acc = list.back();
  for (std::size_t i = list.size() - 1; i-- > from;) acc = Formula::gor(list[i], acc);
  return acc;
}

Formula and_fold(const std::vector<Formula>& list, std::size_t from = 0) {
  Formula acc = list.back();
  for (std::size_t i = list.size() - 1; i-- > from;) acc = Formula::conj(list[i], acc);
  return acc;
}

std::size_t pos_of(const std::vector<Formula>& list, const Formula& f) {
  for (std::size_t i = 0; i < list.size(); ++i)
    if (list[i] == f) return i;
  throw ProofError("internal: formula missing from disjunct list: " + f.str());
}

// From a proof of list[j], a proof of the right-folded \/ of the whole list.
Derivation inject(const std::vector<Formula>& list, std::size_t j, Derivation d,
                  std::size_t from = 0) {
  if (from + 1 == list.size()) return d;
  if (j == from)
    return mk(RuleId::GOrI_L, gor_fold(list, from), {std::move(d)});
  Derivation rest = inject(list, j, std::move(d), from + 1);
  return mk(RuleId::GOrI_R, gor_fold(list, from), {std::move(rest)});
}

// \/-elimination fold: from a proof of \/list and, for each disjunct, a way
// to prove the target from a proof of that disjunct, proves the target.
using BranchFn = std::function<Derivation(std::size_t, Derivation)>;

Derivation gmap(Builder& b, const std::vector<Formula>& list, Derivation d,
                const Formula& target, const BranchFn& fn, std::size_t from = 0) {
  if (from + 1 == list.size()) return fn(from, std::move(d));
  std::string la = b.fresh(), lb = b.fresh();
  Derivation p2 = fn(from, hyp(list[from], la));
  Derivation p3 = gmap(b, list, hyp(gor_fold(list, from + 1), lb), target, fn, from + 1);
  return mk(RuleId::GOrE, target,
            {std::move(d), std::move(p2), std::move(p3)}, {{}, {la}, {lb}});
}

// From a proof of x | (\/ bs), a proof of \/_j (x | bs[j]) via repeated
// distribution of | over \/.
Derivation distrib_right(Builder& b, const Formula& x, const std::vector<Formula>& bs,
                         Derivation d) {
  if (bs.size() == 1) return d;
  std::vector<Formula> rest(bs.begin() + 1, bs.end());
  Formula grest = gor_fold(rest);
  std::vector<Formula> out;
  for (const Formula& beta : bs) out.push_back(Formula::lor(x, beta));
  Formula target = gor_fold(out);

  Derivation s = mk(RuleId::DisOrGOr,
                    Formula::gor(out[0], Formula::lor(x, grest)), {std::move(d)});
  std::vector<Formula> two = {out[0], Formula::lor(x, grest)};
  BranchFn fn = [&](std::size_t i, Derivation e) {
    if (i == 0) return inject(out, 0, std::move(e));
    Derivation r = distrib_right(b, x, rest, std::move(e));
    std::vector<Formula> out_rest(out.begin() + 1, out.end());
    BranchFn shift = [&](std::size_t k, Derivation e2) {
      return inject(out, k + 1, std::move(e2));
    };
    return gmap(b, out_rest, std::move(r), target, shift);
  };
  return gmap(b, two, std::move(s), target, fn);
}

// From a proof of the right-folded conjunction of list, its i-th member.
Derivation and_extract(const std::vector<Formula>& list, std::size_t i, Derivation d,
                       std::size_t from = 0) {
  if (from + 1 == list.size()) return d;
  if (i == from) return mk(RuleId::AndE_L, list[from], {std::move(d)});
  Derivation rest =
      mk(RuleId::AndE_R, and_fold(list, from + 1), {std::move(d)});
  return and_extract(list, i, std::move(rest), from + 1);
}

// Right-folded conjunction introduction over the given proofs.
Derivation and_intro_fold(const std::vector<Formula>& list, std::vector<Derivation>& ds,
                          std::size_t from = 0) {
  if (from + 1 == list.size()) return std::move(ds[from]);
  Derivation rest = and_intro_fold(list, ds, from + 1);
  return mk(RuleId::AndI, and_fold(list, from), {std::move(ds[from]), std::move(rest)});
}

// ---------------------------------------------------------------------------
// Classical sub-kernel (truth-table guided derivation construction)

// Literal context of a branch: variable -> (hypothesis label, assigned value).
using LitEnv = std::vector<std::tuple<std::string, std::string, bool>>;

const std::tuple<std::string, std::string, bool>& env_of(const LitEnv& env,
                                                         const std::string& var) {
  for (const auto& t : env)
    if (std::get<0>(t) == var) return t;
  throw ProofError("internal: unassigned variable " + var);
}

bool eval_classical(const Formula& f, const LitEnv& env) {
  switch (f.kind()) {
    case Conn::Prop: return std::get<2>(env_of(env, f.prop_name()));
    case Conn::Bottom: return false;
    case Conn::Neg: return !eval_classical(f.child(), env);
    case Conn::And: return eval_classical(f.left(), env) && eval_classical(f.right(), env);
    case Conn::LocalOr:
      return eval_classical(f.left(), env) || eval_classical(f.right(), env);
    default: throw ProofError("not a classical formula: " + f.str());
  }
}

// Proves f (truth = true) or ~f (truth = false) from the branch literals.
Derivation prove_lit(Builder& b, const LitEnv& env, const Formula& f, bool truth) {
  switch (f.kind()) {
    case Conn::Prop: {
      const auto& [var, label, value] = env_of(env, f.prop_name());
      return truth ? hyp(f, label) : hyp(Formula::neg(f), label);
    }
    case Conn::Bottom: {
      std::string l = b.fresh();
      return mk(RuleId::NegI, Formula::neg(f), {hyp(f, l)}, {{l}});
    }
    case Conn::Neg: {
      if (truth) return prove_lit(b, env, f.child(), false);
      std::string l = b.fresh();
      Derivation e = mk(RuleId::NegE, Formula::bottom(),
                        {prove_lit(b, env, f.child(), true), hyp(f, l)});
      return mk(RuleId::NegI, Formula::neg(f), {std::move(e)}, {{l}});
    }
    case Conn::And: {
      if (truth)
        return mk(RuleId::AndI, f,
                  {prove_lit(b, env, f.left(), true), prove_lit(b, env, f.right(), true)});
      bool left_false = !eval_classical(f.left(), env);
      std::string l = b.fresh();
      Derivation part = left_false
                            ? mk(RuleId::AndE_L, f.left(), {hyp(f, l)})
                            : mk(RuleId::AndE_R, f.right(), {hyp(f, l)});
      const Formula& sub = left_false ? f.left() : f.right();
      Derivation e = mk(RuleId::NegE, Formula::bottom(),
                        {std::move(part), prove_lit(b, env, sub, false)});
      return mk(RuleId::NegI, Formula::neg(f), {std::move(e)}, {{l}});
    }
    case Conn::LocalOr: {
      if (truth) {
        if (eval_classical(f.left(), env))
          return mk(RuleId::LOrI, f, {prove_lit(b, env, f.left(), true)});
        Derivation d = mk(RuleId::LOrI, Formula::lor(f.right(), f.left()),
                          {prove_lit(b, env, f.right(), true)});
        return mk(RuleId::LOrCom, f, {std::move(d)});
      }
      std::string l = b.fresh(), la = b.fresh(), lb = b.fresh();
      Derivation pa = mk(RuleId::NegE, Formula::bottom(),
                         {hyp(f.left(), la), prove_lit(b, env, f.left(), false)});
      Derivation pb = mk(RuleId::NegE, Formula::bottom(),
                         {hyp(f.right(), lb), prove_lit(b, env, f.right(), false)});
      Derivation e = mk(RuleId::LOrE, Formula::bottom(),
                        {hyp(f, l), std::move(pa), std::move(pb)}, {{}, {la}, {lb}});
      return mk(RuleId::NegI, Formula::neg(f), {std::move(e)}, {{l}});
    }
    default: throw ProofError("not a classical formula: " + f.str());
  }
}

// Excluded middle p | ~p, by reductio.
Derivation excluded_middle(Builder& b, const std::string& var) {
  Formula p = Formula::prop(var);
  Formula em = Formula::lor(p, Formula::neg(p));
  std::string l = b.fresh(), lp = b.fresh();
  Derivation d1 = mk(RuleId::LOrI, em, {hyp(p, lp)});
  Derivation d2 =
      mk(RuleId::NegE, Formula::bottom(), {std::move(d1), hyp(Formula::neg(em), l)});
  Derivation d3 = mk(RuleId::NegI, Formula::neg(p), {std::move(d2)}, {{lp}});
  Derivation d4 = mk(RuleId::LOrI, Formula::lor(Formula::neg(p), p), {std::move(d3)});
  Derivation d5 = mk(RuleId::LOrCom, em, {std::move(d4)});
  Derivation d6 =
      mk(RuleId::NegE, Formula::bottom(), {std::move(d5), hyp(Formula::neg(em), l)});
  return mk(RuleId::RAA, em, {std::move(d6)}, {{l}});
}

// Delta |- alpha for classical input with the given hypothesis labels,
// by excluded-middle case split over the variables.
Derivation classical_impl(Builder& b,
                          const std::vector<std::pair<Formula, std::string>>& delta,
                          const Formula& alpha) {
  std::set<std::string> var_set = alpha.vars();
  for (const auto& [f, l] : delta)
    for (const auto& v : f.vars()) var_set.insert(v);
  std::vector<std::string> vars(var_set.begin(), var_set.end());

  std::function<Derivation(std::size_t, LitEnv&)> split = [&](std::size_t i,
                                                              LitEnv& env) -> Derivation {
    if (i == vars.size()) {
      for (const auto& [f, l] : delta)
        if (!eval_classical(f, env))
          return mk(RuleId::NegE, alpha, {hyp(f, l), prove_lit(b, env, f, false)});
      if (!eval_classical(alpha, env))
        throw ProofError("not a valid classical entailment: goal " + alpha.str());
      return prove_lit(b, env, alpha, true);
    }
    std::string lt = b.fresh(), lf = b.fresh();
    env.emplace_back(vars[i], lt, true);
    Derivation dt = split(i + 1, env);
    env.back() = {vars[i], lf, false};
    Derivation df = split(i + 1, env);
    env.pop_back();
    return mk(RuleId::LOrE, alpha,
              {excluded_middle(b, vars[i]), std::move(dt), std::move(df)},
              {{}, {lt}, {lf}});
  };
  LitEnv env;
  return split(0, env);
}

// ---------------------------------------------------------------------------
// DNF derivations

struct DnfD {
  std::vector<Formula> list;
  Dir fwd;  // phi |- \/ list
  Dir bwd;  // \/ list |- phi
};

void push_unique_d(std::vector<Formula>& out, const Formula& f) {
  if (std::find(out.begin(), out.end(), f) == out.end()) out.push_back(f);
}

// chi | _|_ |- chi, via the DNF of chi (the derivable rule of dropping a
// falsum disjunct).
Dir lor_bot_elim(Builder& b, const Formula& chi);

DnfD dnf_derive(Builder& b, const Formula& phi) {
  if (is_classical(phi)) {
    std::string l1 = b.fresh(), l2 = b.fresh();
    return {{phi}, {hyp(phi, l1), l1}, {hyp(phi, l2), l2}};
  }
  switch (phi.kind()) {
    case Conn::DepAtom:
    case Conn::IncAtom:
      throw ProofError("no DNF derivation for dependence/inclusion atoms: " + phi.str());

    case Conn::GlobalOr: {
      DnfD A = dnf_derive(b, phi.left());
      DnfD B = dnf_derive(b, phi.right());
      std::vector<Formula> L = A.list;
      for (const Formula& f : B.list) push_unique_d(L, f);
      Formula target = gor_fold(L);

      std::string lf = b.fresh();
      std::vector<Formula> two = {phi.left(), phi.right()};
      BranchFn route = [&](std::size_t side, Derivation e) {
        const DnfD& S = side == 0 ? A : B;
        Derivation d = apply_dir(S.fwd, std::move(e));
        BranchFn in = [&](std::size_t i, Derivation e2) {
          return inject(L, pos_of(L, S.list[i]), std::move(e2));
        };
        return gmap(b, S.list, std::move(d), target, in);
      };
      Derivation fwd = gmap(b, two, hyp(phi, lf), target, route);

      std::string lb = b.fresh();
      BranchFn back = [&](std::size_t k, Derivation e) {
        auto it = std::find(A.list.begin(), A.list.end(), L[k]);
        if (it != A.list.end()) {
          Derivation d = inject(A.list, static_cast<std::size_t>(it - A.list.begin()),
                                std::move(e));
          d = apply_dir(A.bwd, std::move(d));
          return mk(RuleId::GOrI_L, phi, {std::move(d)});
        }
        Derivation d = inject(B.list, pos_of(B.list, L[k]), std::move(e));
        d = apply_dir(B.bwd, std::move(d));
        return mk(RuleId::GOrI_R, phi, {std::move(d)});
      };
      Derivation bwd = gmap(b, L, hyp(target, lb), phi, back);
      return {L, {std::move(fwd), lf}, {std::move(bwd), lb}};
    }

    case Conn::And: {
      DnfD A = dnf_derive(b, phi.left());
      DnfD B = dnf_derive(b, phi.right());
      std::vector<Formula> P;
      std::vector<std::pair<std::size_t, std::size_t>> src;
      for (std::size_t i = 0; i < A.list.size(); ++i)
        for (std::size_t j = 0; j < B.list.size(); ++j) {
          Formula c = Formula::conj(A.list[i], B.list[j]);
          if (std::find(P.begin(), P.end(), c) == P.end()) {
            P.push_back(c);
            src.emplace_back(i, j);
          }
        }
      Formula target = gor_fold(P);

      std::string lf = b.fresh();
      Derivation dl =
          apply_dir(A.fwd, mk(RuleId::AndE_L, phi.left(), {hyp(phi, lf)}));
      BranchFn outer = [&](std::size_t i, Derivation ea) {
        Derivation dr =
            apply_dir(B.fwd, mk(RuleId::AndE_R, phi.right(), {hyp(phi, lf)}));
        BranchFn inner = [&](std::size_t j, Derivation eb) {
          Formula c = Formula::conj(A.list[i], B.list[j]);
          Derivation d = mk(RuleId::AndI, c, {ea, std::move(eb)});
          return inject(P, pos_of(P, c), std::move(d));
        };
        return gmap(b, B.list, std::move(dr), target, inner);
      };
      Derivation fwd = gmap(b, A.list, std::move(dl), target, outer);

      std::string lb = b.fresh();
      BranchFn back = [&](std::size_t k, Derivation e) {
        auto [i, j] = src[k];
        Derivation da = mk(RuleId::AndE_L, A.list[i], {e});
        da = apply_dir(A.bwd, inject(A.list, i, std::move(da)));
        Derivation db = mk(RuleId::AndE_R, B.list[j], {std::move(e)});
        db = apply_dir(B.bwd, inject(B.list, j, std::move(db)));
        return mk(RuleId::AndI, phi, {std::move(da), std::move(db)});
      };
      Derivation bwd = gmap(b, P, hyp(target, lb), phi, back);
      return {P, {std::move(fwd), lf}, {std::move(bwd), lb}};
    }

    case Conn::LocalOr: {
      DnfD A = dnf_derive(b, phi.left());
      DnfD B = dnf_derive(b, phi.right());
      Formula ga = gor_fold(A.list), gb = gor_fold(B.list);
      std::vector<Formula> P;
      std::vector<std::pair<std::size_t, std::size_t>> src;
      for (std::size_t i = 0; i < A.list.size(); ++i)
        for (std::size_t j = 0; j < B.list.size(); ++j) {
          Formula c = Formula::lor(A.list[i], B.list[j]);
          if (std::find(P.begin(), P.end(), c) == P.end()) {
            P.push_back(c);
            src.emplace_back(i, j);
          }
        }
      Formula target = gor_fold(P);

      std::string lf = b.fresh(), lpsi = b.fresh(), lchi = b.fresh();
      Derivation s1 = mk(RuleId::LOrMon, Formula::lor(ga, phi.right()),
                         {hyp(phi, lf), apply_dir(A.fwd, hyp(phi.left(), lpsi))},
                         {{}, {lpsi}});
      Derivation s2 = mk(RuleId::LOrCom, Formula::lor(phi.right(), ga), {std::move(s1)});
      Derivation s3 = mk(RuleId::LOrMon, Formula::lor(gb, ga),
                         {std::move(s2), apply_dir(B.fwd, hyp(phi.right(), lchi))},
                         {{}, {lchi}});
      Derivation s4 = mk(RuleId::LOrCom, Formula::lor(ga, gb), {std::move(s3)});
      Derivation s5 = distrib_right(b, ga, B.list, std::move(s4));
      std::vector<Formula> lb_list;
      for (const Formula& beta : B.list) lb_list.push_back(Formula::lor(ga, beta));
      BranchFn per_j = [&](std::size_t j, Derivation e) {
        Derivation e1 =
            mk(RuleId::LOrCom, Formula::lor(B.list[j], ga), {std::move(e)});
        Derivation e2 = distrib_right(b, B.list[j], A.list, std::move(e1));
        std::vector<Formula> la_list;
        for (const Formula& alpha : A.list) la_list.push_back(Formula::lor(B.list[j], alpha));
        BranchFn per_i = [&](std::size_t i, Derivation e3) {
          Formula c = Formula::lor(A.list[i], B.list[j]);
          Derivation e4 = mk(RuleId::LOrCom, c, {std::move(e3)});
          return inject(P, pos_of(P, c), std::move(e4));
        };
        return gmap(b, la_list, std::move(e2), target, per_i);
      };
      Derivation fwd = gmap(b, lb_list, std::move(s5), target, per_j);

      std::string lbk = b.fresh();
      BranchFn back = [&](std::size_t k, Derivation e) {
        auto [i, j] = src[k];
        std::string la = b.fresh(), lb2 = b.fresh();
        Derivation ma = apply_dir(A.bwd, inject(A.list, i, hyp(A.list[i], la)));
        Derivation e1 = mk(RuleId::LOrMon, Formula::lor(phi.left(), B.list[j]),
                           {std::move(e), std::move(ma)}, {{}, {la}});
        Derivation e2 =
            mk(RuleId::LOrCom, Formula::lor(B.list[j], phi.left()), {std::move(e1)});
        Derivation mb = apply_dir(B.bwd, inject(B.list, j, hyp(B.list[j], lb2)));
        Derivation e3 = mk(RuleId::LOrMon, Formula::lor(phi.right(), phi.left()),
                           {std::move(e2), std::move(mb)}, {{}, {lb2}});
        return mk(RuleId::LOrCom, phi, {std::move(e3)});
      };
      Derivation bwd = gmap(b, P, hyp(target, lbk), phi, back);
      return {P, {std::move(fwd), lf}, {std::move(bwd), lbk}};
    }

    case Conn::Neg: {
      DnfD A = dnf_derive(b, phi.child());
      std::vector<Formula> negs;
      for (const Formula& a : A.list) negs.push_back(Formula::neg(a));
      Formula gamma = and_fold(negs);

      std::string lf = b.fresh();
      std::vector<Derivation> parts;
      for (std::size_t j = 0; j < A.list.size(); ++j) {
        std::string lj = b.fresh();
        Derivation d = inject(A.list, j, hyp(A.list[j], lj));
        d = apply_dir(A.bwd, std::move(d));
        d = mk(RuleId::NegE, Formula::bottom(), {std::move(d), hyp(phi, lf)});
        parts.push_back(mk(RuleId::NegI, negs[j], {std::move(d)}, {{lj}}));
      }
      Derivation fwd = and_intro_fold(negs, parts);

      std::string lb = b.fresh(), lpsi = b.fresh();
      Derivation inner = apply_dir(A.fwd, hyp(phi.child(), lpsi));
      BranchFn clash = [&](std::size_t i, Derivation e) {
        Derivation n = and_extract(negs, i, hyp(gamma, lb));
        return mk(RuleId::NegE, Formula::bottom(), {std::move(e), std::move(n)});
      };
      Derivation contradiction =
          gmap(b, A.list, std::move(inner), Formula::bottom(), clash);
      Derivation bwd = mk(RuleId::NegI, phi, {std::move(contradiction)}, {{lpsi}});
      return {{gamma}, {std::move(fwd), lf}, {std::move(bwd), lb}};
    }

    case Conn::IntImpl: {
      DnfD A = dnf_derive(b, phi.left());
      std::vector<Formula> terms;
      for (const Formula& a : A.list)
        terms.push_back(Formula::lor(Formula::neg(a), phi.right()));
      Formula g = and_fold(terms);
      DnfD G = dnf_derive(b, g);

      // phi |- g, one conjunct at a time
      std::string lf = b.fresh();
      std::vector<Derivation> parts;
      for (std::size_t i = 0; i < A.list.size(); ++i) {
        const Formula& alpha = A.list[i];
        Formula na = Formula::neg(alpha);
        Derivation taut = classical_impl(b, {}, Formula::lor(na, alpha));
        Derivation com1 =
            mk(RuleId::LOrCom, Formula::lor(alpha, na), {std::move(taut)});
        std::string li = b.fresh();
        Derivation minor = apply_dir(A.bwd, inject(A.list, i, hyp(alpha, li)));
        minor = mk(RuleId::ImplE, phi.right(), {hyp(phi, lf), std::move(minor)});
        Derivation mon = mk(RuleId::LOrMon, Formula::lor(phi.right(), na),
                            {std::move(com1), std::move(minor)}, {{}, {li}});
        parts.push_back(mk(RuleId::LOrCom, terms[i], {std::move(mon)}));
      }
      Derivation to_g = and_intro_fold(terms, parts);
      Derivation fwd = apply_dir(G.fwd, std::move(to_g));

      // \/ G.list |- g |- phi
      std::string lb = b.fresh();
      Derivation from_list = apply_dir(G.bwd, hyp(gor_fold(G.list), lb));
      std::string lg = b.fresh(), lpsi = b.fresh();
      Derivation ante = apply_dir(A.fwd, hyp(phi.left(), lpsi));
      BranchFn per_i = [&](std::size_t i, Derivation e) {
        Derivation term = and_extract(terms, i, hyp(g, lg));
        std::string ln = b.fresh();
        Derivation minor = mk(RuleId::NegE, Formula::bottom(),
                              {std::move(e), hyp(Formula::neg(A.list[i]), ln)});
        Derivation mon =
            mk(RuleId::LOrMon, Formula::lor(Formula::bottom(), phi.right()),
               {std::move(term), std::move(minor)}, {{}, {ln}});
        Derivation com = mk(RuleId::LOrCom,
                            Formula::lor(phi.right(), Formula::bottom()), {std::move(mon)});
        return apply_dir(lor_bot_elim(b, phi.right()), std::move(com));
      };
      Derivation conseq = gmap(b, A.list, std::move(ante), phi.right(), per_i);
      Derivation g_to_phi = mk(RuleId::ImplI, phi, {std::move(conseq)}, {{lpsi}});
      Derivation bwd = cut(g_to_phi, lg, from_list);
      return {G.list, {std::move(fwd), lf}, {std::move(bwd), lb}};
    }

    default:
      throw ProofError("internal: unexpected connective in DNF derivation");
  }
}

Dir lor_bot_elim(Builder& b, const Formula& chi) {
  DnfD C = dnf_derive(b, chi);
  Formula gc = gor_fold(C.list);
  std::string l = b.fresh(), lc = b.fresh();
  Derivation mon = mk(RuleId::LOrMon, Formula::lor(gc, Formula::bottom()),
                      {hyp(Formula::lor(chi, Formula::bottom()), l),
                       apply_dir(C.fwd, hyp(chi, lc))},
                      {{}, {lc}});
  Derivation com =
      mk(RuleId::LOrCom, Formula::lor(Formula::bottom(), gc), {std::move(mon)});
  Derivation dist = distrib_right(b, Formula::bottom(), C.list, std::move(com));
  std::vector<Formula> bl;
  for (const Formula& beta : C.list) bl.push_back(Formula::lor(Formula::bottom(), beta));
  BranchFn per_j = [&](std::size_t j, Derivation e) {
    std::string lj = b.fresh();
    Derivation cl = classical_impl(b, {{bl[j], lj}}, C.list[j]);
    cl = cut(cl, lj, std::move(e));
    return inject(C.list, j, std::move(cl));
  };
  Derivation d = gmap(b, bl, std::move(dist), gc, per_j);
  d = apply_dir(C.bwd, std::move(d));
  return {std::move(d), l};
}

}  // namespace

Derivation classical_derivation(const std::vector<Formula>& delta, const Formula& alpha) {
  if (!is_classical(alpha))
    throw ProofError("goal is not classical: " + alpha.str());
  Builder b;
  std::vector<std::pair<Formula, std::string>> labelled;
  for (const Formula& f : delta) {
    if (!is_classical(f)) throw ProofError("hypothesis is not classical: " + f.str());
    labelled.emplace_back(f, b.fresh());
  }
  return classical_impl(b, labelled, alpha);
}

DnfDerivations derive_dnf(const Formula& phi) {
  Builder b;
  DnfD d = dnf_derive(b, phi);
  if (d.list != to_dnf(phi))
    throw ProofError("internal: derived disjunct list disagrees with to_dnf");
  return {d.list, d.fwd.d, d.bwd.d};
}

// ---------------------------------------------------------------------------
// Derived rules

namespace {

void need_args(const std::vector<Formula>& args, std::size_t n, const char* name) {
  if (args.size() != n)
    throw ProofError(std::string(name) + " expects " + std::to_string(n) + " arguments");
}

void need_classical(const Formula& alpha, const char* name) {
  if (!is_classical(alpha))
    throw ProofError(std::string(name) + " requires a classical formula, got " +
                     alpha.str());
}

// From proofs of alpha|phi and ~alpha, a proof of phi.
Derivation disj_syl_core(Builder& b, const Formula& alpha, const Formula& phi,
                         Derivation d_or, Derivation d_neg) {
  std::string la = b.fresh();
  Derivation minor =
      mk(RuleId::NegE, Formula::bottom(), {hyp(alpha, la), std::move(d_neg)});
  Derivation mon = mk(RuleId::LOrMon, Formula::lor(Formula::bottom(), phi),
                      {std::move(d_or), std::move(minor)}, {{}, {la}});
  Derivation com =
      mk(RuleId::LOrCom, Formula::lor(phi, Formula::bottom()), {std::move(mon)});
  return apply_dir(lor_bot_elim(b, phi), std::move(com));
}

// From a proof of alpha->phi, a proof of ~alpha|phi.
Derivation impl_def_lr_core(Builder& b, const Formula& alpha, const Formula& phi,
                            Derivation d_impl) {
  Formula na = Formula::neg(alpha);
  Derivation taut = classical_impl(b, {}, Formula::lor(na, alpha));
  Derivation com1 = mk(RuleId::LOrCom, Formula::lor(alpha, na), {std::move(taut)});
  std::string la = b.fresh();
  Derivation minor = mk(RuleId::ImplE, phi, {std::move(d_impl), hyp(alpha, la)});
  Derivation mon = mk(RuleId::LOrMon, Formula::lor(phi, na),
                      {std::move(com1), std::move(minor)}, {{}, {la}});
  return mk(RuleId::LOrCom, Formula::lor(na, phi), {std::move(mon)});
}

// From a proof of ~alpha|phi, a proof of alpha->phi.
Derivation impl_def_rl_core(Builder& b, const Formula& alpha, const Formula& phi,
                            Derivation d_or) {
  std::string la = b.fresh();
  Derivation body =
      disj_syl_core(b, Formula::neg(alpha), phi, std::move(d_or),
                    // ~~alpha from the hypothesis alpha
                    [&] {
                      std::string ln = b.fresh();
                      Derivation e =
                          mk(RuleId::NegE, Formula::bottom(),
                             {hyp(alpha, la), hyp(Formula::neg(alpha), ln)});
                      return mk(RuleId::NegI, Formula::neg(Formula::neg(alpha)),
                                {std::move(e)}, {{ln}});
                    }());
  return mk(RuleId::ImplI, Formula::impl(alpha, phi), {std::move(body)}, {{la}});
}

}  // namespace

Derivation derived_rule(DerivedRule name, const std::vector<Formula>& args) {
  Builder b;
  switch (name) {
    case DerivedRule::LOrAss: {
      need_args(args, 3, "LOrAss");
      Formula from = Formula::lor(Formula::lor(args[0], args[1]), args[2]);
      Formula to = Formula::lor(args[0], Formula::lor(args[1], args[2]));
      ProveResult r = prove({from}, to);
      if (!r.derivation) throw ProofError("LOrAss instantiation is not derivable");
      return *r.derivation;
    }
    case DerivedRule::LOrBotElim: {
      need_args(args, 1, "LOrBotElim");
      std::string l = b.fresh();
      return apply_dir(lor_bot_elim(b, args[0]),
                       hyp(Formula::lor(args[0], Formula::bottom()), l));
    }
    case DerivedRule::DisjSyl1: {
      need_args(args, 2, "DisjSyl1");
      need_classical(args[0], "DisjSyl1");
      return disj_syl_core(b, args[0], args[1],
                           hyp(Formula::lor(args[0], args[1]), b.fresh()),
                           hyp(Formula::neg(args[0]), b.fresh()));
    }
    case DerivedRule::DisjSyl2: {
      need_args(args, 3, "DisjSyl2");
      need_classical(args[0], "DisjSyl2");
      const Formula &alpha = args[0], &phi = args[1], &psi = args[2];
      std::string ln = b.fresh();
      Derivation minor =
          disj_syl_core(b, alpha, phi, hyp(Formula::lor(alpha, phi), b.fresh()),
                        hyp(Formula::neg(alpha), ln));
      return mk(RuleId::LOrMon, Formula::lor(phi, psi),
                {hyp(Formula::lor(Formula::neg(alpha), psi), b.fresh()),
                 std::move(minor)},
                {{}, {ln}});
    }
    case DerivedRule::ImplDef_LR: {
      need_args(args, 2, "ImplDef_LR");
      need_classical(args[0], "ImplDef_LR");
      return impl_def_lr_core(b, args[0], args[1],
                              hyp(Formula::impl(args[0], args[1]), b.fresh()));
    }
    case DerivedRule::ImplDef_RL: {
      need_args(args, 2, "ImplDef_RL");
      need_classical(args[0], "ImplDef_RL");
      return impl_def_rl_core(
          b, args[0], args[1],
          hyp(Formula::lor(Formula::neg(args[0]), args[1]), b.fresh()));
    }
    case DerivedRule::SplitDerived: {
      need_args(args, 3, "SplitDerived");
      need_classical(args[0], "SplitDerived");
      const Formula &alpha = args[0], &phi = args[1], &psi = args[2];
      Formula na = Formula::neg(alpha);
      Derivation d1 =
          impl_def_lr_core(b, alpha, Formula::gor(phi, psi),
                           hyp(Formula::impl(alpha, Formula::gor(phi, psi)), b.fresh()));
      Formula target = Formula::gor(Formula::impl(alpha, phi), Formula::impl(alpha, psi));
      Derivation d2 = mk(RuleId::DisOrGOr,
                         Formula::gor(Formula::lor(na, phi), Formula::lor(na, psi)),
                         {std::move(d1)});
      std::vector<Formula> two = {Formula::lor(na, phi), Formula::lor(na, psi)};
      BranchFn fn = [&](std::size_t i, Derivation e) {
        const Formula& side = i == 0 ? phi : psi;
        Derivation d = impl_def_rl_core(b, alpha, side, std::move(e));
        return mk(i == 0 ? RuleId::GOrI_L : RuleId::GOrI_R, target, {std::move(d)});
      };
      return gmap(b, two, std::move(d2), target, fn);
    }
    case DerivedRule::NegAntonExpand: {
      need_args(args, 2, "NegAntonExpand");
      const Formula &phi = args[0], &psi = args[1];
      Formula both = Formula::conj(phi, psi);
      std::string lc = b.fresh();
      Derivation e = mk(RuleId::NegE, Formula::bottom(),
                        {mk(RuleId::AndE_L, phi, {hyp(both, lc)}),
                         hyp(Formula::neg(phi), b.fresh())});
      return mk(RuleId::NegI, Formula::neg(both), {std::move(e)}, {{lc}});
    }
  }
  throw ProofError("unknown derived rule");
}

// ---------------------------------------------------------------------------
// Entailment prover

ProveResult prove(const std::vector<Formula>& gamma, const Formula& phi) {
  std::vector<Formula> all = gamma;
  all.push_back(phi);
  Universe u = Universe::spanning(all);
  TeamMask cm = 0;
  if (!entails(gamma, phi, u, &cm)) return {std::nullopt, cm, u};

  Builder b;
  // conjoin the premises (an empty premise set becomes ~_|_)
  Formula psi;
  Derivation psi_deriv;
  if (gamma.empty()) {
    psi = Formula::top();
    std::string l = b.fresh();
    psi_deriv = mk(RuleId::NegI, psi, {hyp(Formula::bottom(), l)}, {{l}});
  } else {
    psi = and_fold(gamma);
    std::vector<Derivation> hyps;
    for (const Formula& g : gamma) hyps.push_back(hyp(g, b.fresh()));
    psi_deriv = and_intro_fold(gamma, hyps);
  }

  DnfD A = dnf_derive(b, psi);
  DnfD B = dnf_derive(b, phi);
  auto classically_entails = [&](const Formula& a, const Formula& c) {
    for (Valuation v = 0; v < u.valuation_count(); ++v)
      if (single_valuation_sat(u, v, a) && !single_valuation_sat(u, v, c)) return false;
    return true;
  };

  Derivation d = apply_dir(A.fwd, std::move(psi_deriv));
  Formula target = gor_fold(B.list);
  BranchFn fn = [&](std::size_t i, Derivation e) {
    for (std::size_t j = 0; j < B.list.size(); ++j) {
      if (!classically_entails(A.list[i], B.list[j])) continue;
      std::string l = b.fresh();
      Derivation cd = classical_impl(b, {{A.list[i], l}}, B.list[j]);
      cd = cut(cd, l, std::move(e));
      return inject(B.list, j, std::move(cd));
    }
    throw ProofError("internal: no covering disjunct for " + A.list[i].str());
  };
  d = gmap(b, A.list, std::move(d), target, fn);
  d = apply_dir(B.bwd, std::move(d));
  return {std::move(d), std::nullopt, u};
}

// ---------------------------------------------------------------------------
// Replacement

namespace {

Hyps open_hypotheses(const Derivation& d) {
  Hyps open;
  if (d.rule == RuleId::Hypothesis) {
    open.emplace_back(d.label, d.conclusion);
    return open;
  }
  for (std::size_t i = 0; i < d.premises.size(); ++i) {
    Hyps sub = open_hypotheses(d.premises[i]);
    if (!d.discharge.empty())
      for (const std::string& l : d.discharge[i])
        std::erase_if(sub, [&](const auto& p) { return p.first == l; });
    for (auto& [l, f] : sub)
      if (!find_hyp(open, l)) open.emplace_back(l, f);
  }
  return open;
}

Derivation relabel(const Derivation& d, Builder& b,
                   std::map<std::string, std::string>& map) {
  auto renamed = [&](const std::string& l) -> std::string {
    auto it = map.find(l);
    if (it == map.end()) it = map.emplace(l, b.fresh()).first;
    return it->second;
  };
  Derivation out = d;
  if (!out.label.empty()) out.label = renamed(out.label);
  for (auto& list : out.discharge)
    for (auto& l : list) l = renamed(l);
  for (auto& p : out.premises) p = relabel(p, b, map);
  return out;
}

// Normalizes a user derivation with one open assumption into a Dir.
Dir to_dir(const Derivation& d, Builder& b, const char* which) {
  std::map<std::string, std::string> map;
  Derivation r = relabel(d, b, map);
  Hyps open = open_hypotheses(r);
  if (open.empty())
    throw ProofError(std::string(which) + " derivation has no open hypothesis");
  const Formula& f = open[0].second;
  for (const auto& [l, g] : open)
    if (g != f)
      throw ProofError(std::string(which) +
                       " derivation must have a single open hypothesis formula");
  std::string common = b.fresh();
  for (const auto& [l, g] : open) r = cut(r, l, hyp(f, common));
  return {std::move(r), common};
}

}  // namespace

Derivation replacement(const Formula& phi, const std::string& p, std::size_t occurrence,
                       const Derivation& chi_to_chi2, const Derivation& chi2_to_chi) {
  Builder b;
  Dir lr = to_dir(chi_to_chi2, b, "forward");
  Dir rl = to_dir(chi2_to_chi, b, "backward");
  Formula chi = open_hypotheses(lr.d)[0].second;
  Formula chi2 = lr.d.conclusion;
  if (rl.d.conclusion != chi || open_hypotheses(rl.d)[0].second != chi2)
    throw ProofError("the two equivalence derivations do not match up");

  Formula f1 = substitute(phi, p, chi, occurrence);
  Formula f2 = substitute(phi, p, chi2, occurrence);

  std::function<Dir(const Formula&, const Formula&)> rec =
      [&](const Formula& a, const Formula& c) -> Dir {
    std::string l = b.fresh();
    if (a == c) return {hyp(a, l), l};
    if (a == chi && c == chi2) {
      std::map<std::string, std::string> map;
      Dir copy = {relabel(lr.d, b, map), map.at(lr.hyp_label)};
      return copy;
    }
    if (a == chi2 && c == chi) {
      std::map<std::string, std::string> map;
      Dir copy = {relabel(rl.d, b, map), map.at(rl.hyp_label)};
      return copy;
    }
    if (a.kind() != c.kind())
      throw ProofError("replacement mismatch between " + a.str() + " and " + c.str());
    switch (a.kind()) {
      case Conn::And: {
        Dir dl = rec(a.left(), c.left()), dr = rec(a.right(), c.right());
        Derivation da = apply_dir(dl, mk(RuleId::AndE_L, a.left(), {hyp(a, l)}));
        Derivation db = apply_dir(dr, mk(RuleId::AndE_R, a.right(), {hyp(a, l)}));
        return {mk(RuleId::AndI, c, {std::move(da), std::move(db)}), l};
      }
      case Conn::LocalOr: {
        Dir dl = rec(a.left(), c.left()), dr = rec(a.right(), c.right());
        std::string la = b.fresh(), lb2 = b.fresh();
        Derivation e1 = mk(RuleId::LOrMon, Formula::lor(c.left(), a.right()),
                           {hyp(a, l), apply_dir(dl, hyp(a.left(), la))}, {{}, {la}});
        Derivation e2 =
            mk(RuleId::LOrCom, Formula::lor(a.right(), c.left()), {std::move(e1)});
        Derivation e3 = mk(RuleId::LOrMon, Formula::lor(c.right(), c.left()),
                           {std::move(e2), apply_dir(dr, hyp(a.right(), lb2))},
                           {{}, {lb2}});
        return {mk(RuleId::LOrCom, c, {std::move(e3)}), l};
      }
      case Conn::GlobalOr: {
        Dir dl = rec(a.left(), c.left()), dr = rec(a.right(), c.right());
        std::string la = b.fresh(), lb2 = b.fresh();
        Derivation p2 =
            mk(RuleId::GOrI_L, c, {apply_dir(dl, hyp(a.left(), la))});
        Derivation p3 =
            mk(RuleId::GOrI_R, c, {apply_dir(dr, hyp(a.right(), lb2))});
        return {mk(RuleId::GOrE, c, {hyp(a, l), std::move(p2), std::move(p3)},
                   {{}, {la}, {lb2}}),
                l};
      }
      case Conn::Neg: {
        // antitone: the minor premise proves the old body from the new one
        Dir back = rec(c.child(), a.child());
        std::string lb2 = b.fresh();
        Derivation minor = apply_dir(back, hyp(c.child(), lb2));
        return {mk(RuleId::NegAnton, c, {hyp(a, l), std::move(minor)}, {{}, {lb2}}), l};
      }
      case Conn::IntImpl: {
        Dir ante = rec(c.left(), a.left());
        Dir cons = rec(a.right(), c.right());
        std::string la = b.fresh();
        Derivation d1 = apply_dir(ante, hyp(c.left(), la));
        Derivation d2 = mk(RuleId::ImplE, a.right(), {hyp(a, l), std::move(d1)});
        Derivation d3 = apply_dir(cons, std::move(d2));
        return {mk(RuleId::ImplI, c, {std::move(d3)}, {{la}}), l};
      }
      default:
        throw ProofError("replacement cannot rewrite inside " + a.str());
    }
  };
  return rec(f1, f2).d;
}

}  // namespace teamlog
