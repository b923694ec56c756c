// Formula AST, concrete syntax (parser/printer), fragment classification
// and single-occurrence substitution for propositional team-based logics.
//
// Connectives: ~ (negation), & (conjunction), | (local disjunction),
// \/ (global disjunction), -> (intuitionistic implication).
// Atoms: propositional variables, _|_, dependence atoms =(p1 ... pn, q),
// inclusion atoms a1 ... an <= b1 ... bn with term constants T and B.
//
// T at formula position is sugar for ~_|_; inside inclusion atoms T and B
// are genuine term constants.  The defined implications `->.` and `->:`
// are parser-level abbreviations for ~phi | psi and ~phi \/ psi.

#ifndef TEAMLOG_FORMULA_HPP
#define TEAMLOG_FORMULA_HPP

#include <cstddef>
#include <memory>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

namespace teamlog {

enum class Conn {
  Prop,
  Bottom,
  Neg,
  And,
  LocalOr,   // team-splitting disjunction |
  GlobalOr,  // whole-team disjunction \/
  IntImpl,   // subteam-quantifying implication ->
  DepAtom,
  IncAtom,
};

// Inclusion-atom argument: a variable or one of the constants T / B.
struct Term {
  enum class Kind { Var, Top, Bot };
  Kind kind = Kind::Var;
  std::string var;  // meaningful iff kind == Var

  static Term variable(std::string name) { return {Kind::Var, std::move(name)}; }
  static Term top() { return {Kind::Top, {}}; }
  static Term bot() { return {Kind::Bot, {}}; }

  bool operator==(const Term&) const = default;
  std::string str() const;
};

class Formula {
 public:
  Formula() = default;  // empty handle; only valid after assignment

  static Formula prop(std::string name);
  static Formula bottom();
  static Formula top() { return neg(bottom()); }
  static Formula neg(Formula f);
  static Formula conj(Formula l, Formula r);
  static Formula lor(Formula l, Formula r);
  static Formula gor(Formula l, Formula r);
  static Formula impl(Formula l, Formula r);
  static Formula dep(std::vector<std::string> args, std::string target);
  static Formula inc(std::vector<Term> lhs, std::vector<Term> rhs);

  Conn kind() const { return node_->kind; }
  bool is(Conn c) const { return node_->kind == c; }

  const std::string& prop_name() const { return node_->name; }
  const Formula& left() const { return node_->kids[0]; }
  const Formula& right() const { return node_->kids[1]; }
  const Formula& child() const { return node_->kids[0]; }
  const std::vector<std::string>& dep_args() const { return node_->dep_args; }
  const std::string& dep_target() const { return node_->name; }
  const std::vector<Term>& inc_lhs() const { return node_->lhs; }
  const std::vector<Term>& inc_rhs() const { return node_->rhs; }

  bool operator==(const Formula& other) const;
  bool operator!=(const Formula& other) const { return !(*this == other); }

  std::string str() const;
  std::set<std::string> vars() const;
  std::size_t size() const;  // node count

  // Stable identity of the underlying node, usable as a memo key.
  const void* node_key() const { return node_.get(); }

 private:
  struct Node {
    Conn kind;
    std::string name;            // Prop name or DepAtom target
    std::vector<Formula> kids;
    std::vector<std::string> dep_args;
    std::vector<Term> lhs, rhs;  // IncAtom
  };
  std::shared_ptr<const Node> node_;
  explicit Formula(std::shared_ptr<const Node> n) : node_(std::move(n)) {}
};

class ParseError : public std::runtime_error {
 public:
  ParseError(const std::string& msg, std::size_t pos)
      : std::runtime_error(msg + " (at offset " + std::to_string(pos) + ")"), pos_(pos) {}
  std::size_t position() const { return pos_; }

 private:
  std::size_t pos_;
};

Formula parse(const std::string& text);

// ---------------------------------------------------------------------------
// Fragments

enum class Fragment { PL, PLv, PLdep, PLinc, PLincV, PLdepinc, PLfull };

struct FragmentSpec {
  Fragment name;
  bool allows_gor;
  bool allows_impl;
  bool allows_dep;
  bool allows_inc;
};

FragmentSpec fragment_spec(Fragment f);
const std::vector<Fragment>& all_fragments();
std::string to_string(Fragment f);
Fragment fragment_from_name(const std::string& name);

// Every fragment whose syntax contains the formula.
std::set<Fragment> classify(const Formula& f);
bool in_fragment(const Formula& f, Fragment frag);
bool is_classical(const Formula& f);

// Harrop formulas: delta ::= p | _|_ | ~phi | delta & delta | delta | delta,
// with phi arbitrary under the negation.
bool is_harrop(const Formula& f);

// Replaces the occurrence-th instance (left-to-right) of the variable p.
// Occurrences are Prop nodes only; atom argument positions do not count.
Formula substitute(const Formula& f, const std::string& p, const Formula& replacement,
                   std::size_t occurrence);

// Number of Prop-node occurrences of p in f.
std::size_t count_occurrences(const Formula& f, const std::string& p);

}  // namespace teamlog

#endif
