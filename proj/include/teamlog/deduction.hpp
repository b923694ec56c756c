// Natural deduction for the global-disjunction fragment with full
// intuitionistic negation, extended with intuitionistic implication.
//
// Proof objects are explicit trees checked against the rule schemas; the
// reductio and local-disjunction-elimination rules carry a side condition
// (conclusion classical, widened to Harrop formulas under an option).
// On top of the checker sit proof constructors: a classical sub-kernel
// (truth-table guided), derivations into and out of disjunctive normal
// form, the documented derived rules, an entailment prover that assembles
// the DNF pieces, and a replacement derivation for rewriting provably
// equivalent subformulas in context.

#ifndef TEAMLOG_DEDUCTION_HPP
#define TEAMLOG_DEDUCTION_HPP

#include "teamlog/team.hpp"

namespace teamlog {

enum class RuleId {
  Hypothesis,
  BotE,
  AndI,
  AndE_L,
  AndE_R,
  NegI,
  NegE,
  RAA,
  GOrI_L,
  GOrI_R,
  GOrE,
  LOrI,
  LOrE,
  LOrCom,
  LOrMon,
  DisOrGOr,
  ImplI,
  ImplE,
  Split,
  NegAnton,
};

std::string to_string(RuleId r);
RuleId rule_from_name(const std::string& name);

// A node applies one rule; `discharge[i]` lists the hypothesis labels closed
// in the i-th premise subtree (empty vector, or one list per premise).
// Hypothesis leaves carry a label and no premises.
struct Derivation {
  RuleId rule = RuleId::Hypothesis;
  Formula conclusion;
  std::string label;
  std::vector<Derivation> premises;
  std::vector<std::vector<std::string>> discharge;
};

class ProofError : public std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct CheckOptions {
  // Widen the RAA / local-disjunction-elimination / Split side condition
  // from classical to Harrop formulas.
  bool harrop_side_condition = false;
  // Drop the RAA side condition entirely.  Unsound; exists only so the
  // negative-control sweeps can demonstrate why the restriction matters.
  bool weaken_raa = false;
};

struct Sequent {
  std::vector<Formula> hypotheses;  // deduplicated, in first-use order
  Formula conclusion;
};

// Validates every node against its schema (including discharge bookkeeping
// and side conditions) and returns the proved sequent; throws ProofError
// with the offending node's path otherwise.  Vacuous discharge is allowed.
Sequent check(const Derivation& d, const CheckOptions& opts = {});

// JSON tree: {"rule", "conclusion", "label"?, "premises"?, "discharge"?}.
Derivation derivation_from_json(const std::string& json_text);
std::string derivation_to_json(const Derivation& d);

// Classical completeness sub-kernel: for classical delta |= alpha, builds a
// checked derivation by excluded-middle case analysis over the variables.
// Throws ProofError on non-classical input or a non-valid entailment.
Derivation classical_derivation(const std::vector<Formula>& delta, const Formula& alpha);

// Derivations phi |- \/ disjuncts and \/ disjuncts |- phi, with the
// disjunct list equal to to_dnf(phi).
struct DnfDerivations {
  std::vector<Formula> disjuncts;
  Derivation forward;
  Derivation backward;
};
DnfDerivations derive_dnf(const Formula& phi);

// Rules derivable in the system, instantiated with concrete formulas.
// Argument conventions (alpha classical where named alpha):
//   LOrAss        {phi,psi,chi}:  (phi|psi)|chi        |- phi|(psi|chi)
//   LOrBotElim    {phi}:          phi|_|_              |- phi
//   DisjSyl1      {alpha,phi}:    alpha|phi, ~alpha    |- phi
//   DisjSyl2      {alpha,phi,psi}: alpha|phi, ~alpha|psi |- phi|psi
//   ImplDef_LR    {alpha,phi}:    alpha->phi           |- ~alpha|phi
//   ImplDef_RL    {alpha,phi}:    ~alpha|phi           |- alpha->phi
//   SplitDerived  {alpha,phi,psi}: alpha->(phi\/psi)   |- (alpha->phi)\/(alpha->psi)
//   NegAntonExpand {phi,psi}:     ~phi                 |- ~(phi&psi)
enum class DerivedRule {
  LOrAss,
  LOrBotElim,
  DisjSyl1,
  DisjSyl2,
  ImplDef_LR,
  ImplDef_RL,
  SplitDerived,
  NegAntonExpand,
};

std::string to_string(DerivedRule r);
DerivedRule derived_rule_from_name(const std::string& name);

Derivation derived_rule(DerivedRule name, const std::vector<Formula>& args);

// Entailment prover: if gamma |= phi over the spanning universe, returns a
// checked derivation assembled from the DNFs of the conjoined premises and
// the goal plus classical sub-proofs; otherwise returns a refuting team.
struct ProveResult {
  std::optional<Derivation> derivation;
  std::optional<TeamMask> countermodel;
  Universe universe;
};
ProveResult prove(const std::vector<Formula>& gamma, const Formula& phi);

// Given derivations chi |- chi2 and chi2 |- chi (each with a single open
// hypothesis), builds phi[chi/p at occurrence] |- phi[chi2/p at occurrence]
// by structural recursion, using the antitone negation rule at ~-nodes.
Derivation replacement(const Formula& phi, const std::string& p, std::size_t occurrence,
                       const Derivation& chi_to_chi2, const Derivation& chi2_to_chi);

}  // namespace teamlog

#endif
