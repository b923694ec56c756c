#include "teamlog/formula.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace teamlog {

std::string Term::str() const {
  switch (kind) {
    case Kind::Var: return var;
    case Kind::Top: return "T";
    case Kind::Bot: return "B";
  }
  return {};
}

Formula Formula::prop(std::string name) {
  auto n = std::make_shared<Node>();
  n->kind = Conn::Prop;
  n->name = std::move(name);
  return Formula(std::move(n));
}

Formula Formula::bottom() {
  auto n = std::make_shared<Node>();
  n->kind = Conn::Bottom;
  return Formula(std::move(n));
}

Formula Formula::neg(Formula f) {
  auto n = std::make_shared<Node>();
  n->kind = Conn::Neg;
  n->kids = {std::move(f)};
  return Formula(std::move(n));
}

#define TEAMLOG_BINARY_FACTORY(fn, conn)                        \
  Formula Formula::fn(Formula l, Formula r) {                   \
    auto n = std::make_shared<Node>();                          \
    n->kind = conn;                                             \
    n->kids = {std::move(l), std::move(r)};                     \
    return Formula(std::move(n));                               \
  }

TEAMLOG_BINARY_FACTORY(conj, Conn::And)
TEAMLOG_BINARY_FACTORY(lor, Conn::LocalOr)
TEAMLOG_BINARY_FACTORY(gor, Conn::GlobalOr)
TEAMLOG_BINARY_FACTORY(impl, Conn::IntImpl)
#undef TEAMLOG_BINARY_FACTORY

Formula Formula::dep(std::vector<std::string> args, std::string target) {
  auto n = std::make_shared<Node>();
  n->kind = Conn::DepAtom;
  n->dep_args = std::move(args);
  n->name = std::move(target);
  return Formula(std::move(n));
}

Formula Formula::inc(std::vector<Term> lhs, std::vector<Term> rhs) {
  if (lhs.empty() || lhs.size() != rhs.size())
    throw std::invalid_argument("inclusion atom requires equal, positive arity");
  auto n = std::make_shared<Node>();
  n->kind = Conn::IncAtom;
  n->lhs = std::move(lhs);
  n->rhs = std::move(rhs);
  return Formula(std::move(n));
}

bool Formula::operator==(const Formula& other) const {
  if (node_ == other.node_) return true;
  if (!node_ || !other.node_) return false;
  const Node& a = *node_;
  const Node& b = *other.node_;
  if (a.kind != b.kind || a.name != b.name || a.dep_args != b.dep_args || a.lhs != b.lhs ||
      a.rhs != b.rhs || a.kids.size() != b.kids.size())
    return false;
  for (std::size_t i = 0; i < a.kids.size(); ++i)
    if (a.kids[i] != b.kids[i]) return false;
  return true;
}

std::size_t Formula::size() const {
  std::size_t n = 1;
  for (const Formula& k : node_->kids) n += k.size();
  return n;
}

static void collect_vars(const Formula& f, std::set<std::string>& out) {
  switch (f.kind()) {
    case Conn::Prop: out.insert(f.prop_name()); break;
    case Conn::Bottom: break;
    case Conn::DepAtom:
      for (const auto& a : f.dep_args()) out.insert(a);
      out.insert(f.dep_target());
      break;
    case Conn::IncAtom:
      for (const auto& t : f.inc_lhs())
        if (t.kind == Term::Kind::Var) out.insert(t.var);
      for (const auto& t : f.inc_rhs())
        if (t.kind == Term::Kind::Var) out.insert(t.var);
      break;
    case Conn::Neg: collect_vars(f.child(), out); break;
    default:
      collect_vars(f.left(), out);
      collect_vars(f.right(), out);
  }
}

std::set<std::string> Formula::vars() const {
  std::set<std::string> out;
  collect_vars(*this, out);
  return out;
}

// ---------------------------------------------------------------------------
// Printing.  Precedence, tightest first: ~, &, |, \/, ->; binaries
// right-associative.

namespace {

int level_of(const Formula& f) {
  switch (f.kind()) {
    case Conn::IntImpl: return 0;
    case Conn::GlobalOr: return 1;
    case Conn::LocalOr: return 2;
    case Conn::And: return 3;
    case Conn::Neg: return 4;
    default: return 5;
  }
}

const char* op_token(Conn c) {
  switch (c) {
    case Conn::And: return " & ";
    case Conn::LocalOr: return " | ";
    case Conn::GlobalOr: return " \\/ ";
    case Conn::IntImpl: return " -> ";
    default: return "?";
  }
}

void print(const Formula& f, int min_level, std::ostream& os) {
  int lvl = level_of(f);
  bool parens = lvl < min_level;
  if (parens) os << '(';
  switch (f.kind()) {
    case Conn::Prop: os << f.prop_name(); break;
    case Conn::Bottom: os << "_|_"; break;
    case Conn::Neg:
      os << '~';
      print(f.child(), 4, os);
      break;
    case Conn::DepAtom: {
      os << "=(";
      for (std::size_t i = 0; i < f.dep_args().size(); ++i) {
        if (i) os << ' ';
        os << f.dep_args()[i];
      }
      if (!f.dep_args().empty()) os << ", ";
      os << f.dep_target() << ')';
      break;
    }
    case Conn::IncAtom: {
      for (std::size_t i = 0; i < f.inc_lhs().size(); ++i) {
        if (i) os << ' ';
        os << f.inc_lhs()[i].str();
      }
      os << " <= ";
      for (std::size_t i = 0; i < f.inc_rhs().size(); ++i) {
        if (i) os << ' ';
        os << f.inc_rhs()[i].str();
      }
      break;
    }
    default:
      // right-associative: left operand needs the strictly-tighter level
      print(f.left(), lvl + 1, os);
      os << op_token(f.kind());
      print(f.right(), lvl, os);
  }
  if (parens) os << ')';
}

}  // namespace

std::string Formula::str() const {
  std::ostringstream os;
  print(*this, 0, os);
  return os.str();
}

// ---------------------------------------------------------------------------
// Parser

namespace {

struct Token {
  enum class Kind {
    Ident, TopConst, BotConst, Bot, Tilde, Amp, Pipe, GOr, Impl, ImplDot, ImplColon,
    Eq, LParen, RParen, Comma, Subseteq, End
  };
  Kind kind;
  std::string text;
  std::size_t pos;
};

class Lexer {
 public:
  explicit Lexer(const std::string& s) : s_(s) { advance(); }
  const Token& peek() const { return cur_; }
  Token next() {
    Token t = cur_;
    advance();
    return t;
  }

 private:
  void advance() {
    while (i_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[i_]))) ++i_;
    std::size_t start = i_;
    if (i_ >= s_.size()) {
      cur_ = {Token::Kind::End, "", start};
      return;
    }
    auto two = s_.substr(i_, 2);
    auto three = s_.substr(i_, 3);
    if (three == "_|_") { i_ += 3; cur_ = {Token::Kind::Bot, three, start}; return; }
    if (three == "->." ) { i_ += 3; cur_ = {Token::Kind::ImplDot, three, start}; return; }
    if (three == "->:") { i_ += 3; cur_ = {Token::Kind::ImplColon, three, start}; return; }
    if (two == "->") { i_ += 2; cur_ = {Token::Kind::Impl, two, start}; return; }
    if (two == "\\/") { i_ += 2; cur_ = {Token::Kind::GOr, two, start}; return; }
    if (two == "<=") { i_ += 2; cur_ = {Token::Kind::Subseteq, two, start}; return; }
    char c = s_[i_];
    switch (c) {
      case '~': ++i_; cur_ = {Token::Kind::Tilde, "~", start}; return;
      case '&': ++i_; cur_ = {Token::Kind::Amp, "&", start}; return;
      case '|': ++i_; cur_ = {Token::Kind::Pipe, "|", start}; return;
      case '=': ++i_; cur_ = {Token::Kind::Eq, "=", start}; return;
      case '(': ++i_; cur_ = {Token::Kind::LParen, "(", start}; return;
      case ')': ++i_; cur_ = {Token::Kind::RParen, ")", start}; return;
      case ',': ++i_; cur_ = {Token::Kind::Comma, ",", start}; return;
      default: break;
    }
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i_;
      while (j < s_.size() &&
             (std::isalnum(static_cast<unsigned char>(s_[j])) || s_[j] == '_' || s_[j] == '\''))
        ++j;
      std::string text = s_.substr(i_, j - i_);
      i_ = j;
      if (text == "T") { cur_ = {Token::Kind::TopConst, text, start}; return; }
      if (text == "B") { cur_ = {Token::Kind::BotConst, text, start}; return; }
      cur_ = {Token::Kind::Ident, text, start};
      return;
    }
    throw ParseError("unexpected character '" + std::string(1, c) + "'", start);
  }

  const std::string& s_;
  std::size_t i_ = 0;
  Token cur_{Token::Kind::End, "", 0};
};

class Parser {
 public:
  explicit Parser(const std::string& s) : lex_(s) {}

  Formula parse_full() {
    Formula f = parse_impl();
    if (lex_.peek().kind != Token::Kind::End)
      throw ParseError("trailing input '" + lex_.peek().text + "'", lex_.peek().pos);
    return f;
  }

 private:
  Formula parse_impl() {
    Formula l = parse_gor();
    switch (lex_.peek().kind) {
      case Token::Kind::Impl:
        lex_.next();
        return Formula::impl(std::move(l), parse_impl());
      case Token::Kind::ImplDot:
        lex_.next();
        return Formula::lor(Formula::neg(std::move(l)), parse_impl());
      case Token::Kind::ImplColon:
        lex_.next();
        return Formula::gor(Formula::neg(std::move(l)), parse_impl());
      default:
        return l;
    }
  }

  Formula parse_gor() {
    Formula l = parse_lor();
    if (lex_.peek().kind == Token::Kind::GOr) {
      lex_.next();
      return Formula::gor(std::move(l), parse_gor());
    }
    return l;
  }

  Formula parse_lor() {
    Formula l = parse_and();
    if (lex_.peek().kind == Token::Kind::Pipe) {
      lex_.next();
      return Formula::lor(std::move(l), parse_lor());
    }
    return l;
  }

  Formula parse_and() {
    Formula l = parse_neg();
    if (lex_.peek().kind == Token::Kind::Amp) {
      lex_.next();
      return Formula::conj(std::move(l), parse_and());
    }
    return l;
  }

  Formula parse_neg() {
    if (lex_.peek().kind == Token::Kind::Tilde) {
      lex_.next();
      return Formula::neg(parse_neg());
    }
    return parse_atom();
  }

  bool at_term() const {
    auto k = lex_.peek().kind;
    return k == Token::Kind::Ident || k == Token::Kind::TopConst || k == Token::Kind::BotConst;
  }

  Term take_term() {
    Token t = lex_.next();
    switch (t.kind) {
      case Token::Kind::Ident: return Term::variable(t.text);
      case Token::Kind::TopConst: return Term::top();
      default: return Term::bot();
    }
  }

  Formula parse_atom() {
    const Token& t = lex_.peek();
    switch (t.kind) {
      case Token::Kind::LParen: {
        lex_.next();
        Formula f = parse_impl();
        expect(Token::Kind::RParen, ")");
        return f;
      }
      case Token::Kind::Bot:
        lex_.next();
        return Formula::bottom();
      case Token::Kind::Eq:
        return parse_dep_atom();
      case Token::Kind::Ident:
      case Token::Kind::TopConst:
      case Token::Kind::BotConst:
        return parse_term_led_atom();
      default:
        throw ParseError("expected a formula, got '" + t.text + "'", t.pos);
    }
  }

  // Either a lone variable / T / B, or an inclusion atom 'a1 ... an <= b1 ... bn'.
  Formula parse_term_led_atom() {
    std::size_t start = lex_.peek().pos;
    std::vector<Term> lhs;
    while (at_term()) lhs.push_back(take_term());
    if (lex_.peek().kind == Token::Kind::Subseteq) {
      lex_.next();
      std::vector<Term> rhs;
      while (at_term()) rhs.push_back(take_term());
      if (rhs.empty() || rhs.size() != lhs.size())
        throw ParseError("inclusion atom arity mismatch: " + std::to_string(lhs.size()) +
                             " <= " + std::to_string(rhs.size()),
                         start);
      return Formula::inc(std::move(lhs), std::move(rhs));
    }
    if (lhs.size() != 1)
      throw ParseError("expected '<=' after term sequence", lex_.peek().pos);
    switch (lhs[0].kind) {
      case Term::Kind::Var: return Formula::prop(lhs[0].var);
      case Term::Kind::Top: return Formula::top();
      default: return Formula::bottom();
    }
  }

  Formula parse_dep_atom() {
    lex_.next();  // '='
    expect(Token::Kind::LParen, "(");
    std::vector<std::string> idents;
    while (lex_.peek().kind == Token::Kind::Ident) idents.push_back(lex_.next().text);
    if (lex_.peek().kind == Token::Kind::Comma) {
      lex_.next();
      Token target = expect(Token::Kind::Ident, "variable");
      expect(Token::Kind::RParen, ")");
      return Formula::dep(std::move(idents), target.text);
    }
    if (idents.size() != 1)
      throw ParseError("dependence atom needs '=(p1 ... pn, q)' or '=(q)'", lex_.peek().pos);
    expect(Token::Kind::RParen, ")");
    return Formula::dep({}, idents[0]);
  }

  Token expect(Token::Kind k, const std::string& what) {
    if (lex_.peek().kind != k)
      throw ParseError("expected '" + what + "', got '" + lex_.peek().text + "'", lex_.peek().pos);
    return lex_.next();
  }

  Lexer lex_;
};

}  // namespace

Formula parse(const std::string& text) { return Parser(text).parse_full(); }

// ---------------------------------------------------------------------------
// Fragments

FragmentSpec fragment_spec(Fragment f) {
  switch (f) {
    case Fragment::PL: return {f, false, false, false, false};
    case Fragment::PLv: return {f, true, false, false, false};
    case Fragment::PLdep: return {f, false, false, true, false};
    case Fragment::PLinc: return {f, false, false, false, true};
    case Fragment::PLincV: return {f, true, false, false, true};
    case Fragment::PLdepinc: return {f, false, false, true, true};
    case Fragment::PLfull: return {f, true, true, true, true};
  }
  throw std::logic_error("bad fragment");
}

const std::vector<Fragment>& all_fragments() {
  static const std::vector<Fragment> all{Fragment::PL,     Fragment::PLv,      Fragment::PLdep,
                                         Fragment::PLinc,  Fragment::PLincV,   Fragment::PLdepinc,
                                         Fragment::PLfull};
  return all;
}

std::string to_string(Fragment f) {
  switch (f) {
    case Fragment::PL: return "PL";
    case Fragment::PLv: return "PLv";
    case Fragment::PLdep: return "PLdep";
    case Fragment::PLinc: return "PLinc";
    case Fragment::PLincV: return "PLincV";
    case Fragment::PLdepinc: return "PLdepinc";
    case Fragment::PLfull: return "PLfull";
  }
  return "?";
}

Fragment fragment_from_name(const std::string& name) {
  for (Fragment f : all_fragments())
    if (to_string(f) == name) return f;
  throw std::invalid_argument("unknown fragment '" + name + "'");
}

namespace {

struct Features {
  bool gor = false, impl = false, dep = false, inc = false;
};

void collect_features(const Formula& f, Features& out) {
  switch (f.kind()) {
    case Conn::GlobalOr: out.gor = true; break;
    case Conn::IntImpl: out.impl = true; break;
    case Conn::DepAtom: out.dep = true; return;
    case Conn::IncAtom: out.inc = true; return;
    default: break;
  }
  switch (f.kind()) {
    case Conn::Prop:
    case Conn::Bottom: return;
    case Conn::Neg: collect_features(f.child(), out); return;
    default:
      collect_features(f.left(), out);
      collect_features(f.right(), out);
  }
}

}  // namespace

std::set<Fragment> classify(const Formula& f) {
  Features feat;
  collect_features(f, feat);
  std::set<Fragment> out;
  for (Fragment frag : all_fragments()) {
    FragmentSpec s = fragment_spec(frag);
    if ((!feat.gor || s.allows_gor) && (!feat.impl || s.allows_impl) &&
        (!feat.dep || s.allows_dep) && (!feat.inc || s.allows_inc))
      out.insert(frag);
  }
  return out;
}

bool in_fragment(const Formula& f, Fragment frag) { return classify(f).count(frag) > 0; }

bool is_classical(const Formula& f) { return in_fragment(f, Fragment::PL); }

bool is_harrop(const Formula& f) {
  switch (f.kind()) {
    case Conn::Prop:
    case Conn::Bottom: return true;
    case Conn::Neg: return true;  // arbitrary formula under the negation
    case Conn::And:
    case Conn::LocalOr: return is_harrop(f.left()) && is_harrop(f.right());
    default: return false;
  }
}

namespace {

// Replaces the occurrence indexed by *counter (decrementing as Prop nodes
// with the right name are passed); sets *done when the replacement happened.
Formula subst_rec(const Formula& f, const std::string& p, const Formula& repl,
                  std::size_t& counter, bool& done) {
  if (done) return f;
  switch (f.kind()) {
    case Conn::Prop:
      if (f.prop_name() == p) {
        if (counter == 0) {
          done = true;
          return repl;
        }
        --counter;
      }
      return f;
    case Conn::Bottom:
    case Conn::DepAtom:
    case Conn::IncAtom: return f;
    case Conn::Neg: {
      Formula c = subst_rec(f.child(), p, repl, counter, done);
      return done ? Formula::neg(std::move(c)) : f;
    }
    default: {
      Formula l = subst_rec(f.left(), p, repl, counter, done);
      bool in_left = done;
      Formula r = in_left ? f.right() : subst_rec(f.right(), p, repl, counter, done);
      if (!done) return f;
      switch (f.kind()) {
        case Conn::And: return Formula::conj(std::move(l), std::move(r));
        case Conn::LocalOr: return Formula::lor(std::move(l), std::move(r));
        case Conn::GlobalOr: return Formula::gor(std::move(l), std::move(r));
        default: return Formula::impl(std::move(l), std::move(r));
      }
    }
  }
}

}  // namespace

std::size_t count_occurrences(const Formula& f, const std::string& p) {
  switch (f.kind()) {
    case Conn::Prop: return f.prop_name() == p ? 1 : 0;
    case Conn::Bottom:
    case Conn::DepAtom:
    case Conn::IncAtom: return 0;
    case Conn::Neg: return count_occurrences(f.child(), p);
    default: return count_occurrences(f.left(), p) + count_occurrences(f.right(), p);
  }
}

Formula substitute(const Formula& f, const std::string& p, const Formula& replacement,
                   std::size_t occurrence) {
  std::size_t counter = occurrence;
  bool done = false;
  Formula out = subst_rec(f, p, replacement, counter, done);
  if (!done)
    throw std::out_of_range("no occurrence " + std::to_string(occurrence) + " of '" + p +
                            "' in " + f.str());
  return out;
}

}  // namespace teamlog
