#include "fcplan/domain_io.hpp"

#include <algorithm>
#include <charconv>
#include <cctype>
#include <cmath>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <random>
#include <sstream>

#include "fcplan/matching.hpp"

namespace fcplan {

ParseError::ParseError(int line, int column, const std::string& msg)
    : Error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + msg),
      line_(line), column_(column) {}

namespace {

enum class Tok { Ident, Number, Punct, Arrow, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  int column = 0;
};

// Tokenizer over one logical line.
class Lexer {
 public:
  Lexer(std::string line, int line_no) : s_(std::move(line)), line_(line_no) { advance(); }

  const Token& peek() const { return cur_; }
  Token take() {
    Token t = cur_;
    advance();
    return t;
  }
  bool at_end() const { return cur_.kind == Tok::End; }
  int line() const { return line_; }

  [[noreturn]] void fail(const std::string& msg) const { throw ParseError(line_, cur_.column, msg); }
  [[noreturn]] void fail_at(const Token& t, const std::string& msg) const {
    throw ParseError(line_, t.column, msg);
  }

  bool accept_punct(char c) {
    if (cur_.kind == Tok::Punct && cur_.text[0] == c) {
      advance();
      return true;
    }
    return false;
  }
  void expect_punct(char c) {
    if (!accept_punct(c)) fail(std::string("expected '") + c + "'");
  }
  bool accept_ident(const std::string& word) {
    if (cur_.kind == Tok::Ident && cur_.text == word) {
      advance();
      return true;
    }
    return false;
  }
  std::string expect_ident(const char* what) {
    if (cur_.kind != Tok::Ident) fail(std::string("expected ") + what);
    return take().text;
  }
  double expect_number(const char* what) {
    if (cur_.kind != Tok::Number) fail(std::string("expected ") + what);
    Token t = take();
    char* end = nullptr;
    double v = std::strtod(t.text.c_str(), &end);
    if (end != t.text.c_str() + t.text.size()) fail_at(t, "malformed number '" + t.text + "'");
    return v;
  }
  void expect_end() {
    if (!at_end()) fail("unexpected '" + cur_.text + "'");
  }

 private:
  void advance() {
    while (pos_ < s_.size() && std::isspace(static_cast<unsigned char>(s_[pos_]))) ++pos_;
    cur_ = Token{};
    cur_.column = static_cast<int>(pos_) + 1;
    if (pos_ >= s_.size()) return;
    const char c = s_[pos_];
    auto is_ident_char = [](char ch) { return std::isalnum(static_cast<unsigned char>(ch)) || ch == '_'; };
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t b = pos_;
      while (pos_ < s_.size() && is_ident_char(s_[pos_])) ++pos_;
      cur_.kind = Tok::Ident;
      cur_.text = s_.substr(b, pos_ - b);
      return;
    }
    if (c == '-' && pos_ + 1 < s_.size() && s_[pos_ + 1] == '>') {
      pos_ += 2;
      cur_.kind = Tok::Arrow;
      cur_.text = "->";
      return;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || c == '.' ||
        ((c == '-' || c == '+') && pos_ + 1 < s_.size() &&
         (std::isdigit(static_cast<unsigned char>(s_[pos_ + 1])) || s_[pos_ + 1] == '.'))) {
      std::size_t b = pos_++;
      while (pos_ < s_.size()) {
        char ch = s_[pos_];
        if (std::isdigit(static_cast<unsigned char>(ch)) || ch == '.' || ch == 'e' || ch == 'E') {
          ++pos_;
        } else if ((ch == '-' || ch == '+') && (s_[pos_ - 1] == 'e' || s_[pos_ - 1] == 'E')) {
          ++pos_;
        } else {
          break;
        }
      }
      cur_.kind = Tok::Number;
      cur_.text = s_.substr(b, pos_ - b);
      return;
    }
    // UTF-8 composition sign is accepted as a synonym for '&'.
    if (s_.compare(pos_, 3, "\xE2\x88\x98") == 0) {
      pos_ += 3;
      cur_.kind = Tok::Punct;
      cur_.text = "&";
      return;
    }
    ++pos_;
    cur_.kind = Tok::Punct;
    cur_.text = std::string(1, c);
  }

  std::string s_;
  int line_;
  std::size_t pos_ = 0;
  Token cur_;
};

bool is_variable_name(const std::string& s) {
  return !s.empty() && (std::isupper(static_cast<unsigned char>(s[0])) || s[0] == '_');
}

Fluent parse_fluent(Lexer& lx) {
  const Token head = lx.peek();
  std::string sym = lx.expect_ident("fluent symbol");
  if (is_variable_name(sym)) lx.fail_at(head, "fluent symbol '" + sym + "' must start with a lowercase letter");
  std::vector<Term> args;
  if (lx.accept_punct('(')) {
    do {
      const Token t = lx.peek();
      if (t.kind == Tok::Number) {
        lx.take();
        args.push_back(Term::constant(t.text));
        continue;
      }
      std::string name = lx.expect_ident("term");
      args.push_back(is_variable_name(name) ? Term::variable(name) : Term::constant(name));
    } while (lx.accept_punct(','));
    lx.expect_punct(')');
  }
  return Fluent(std::move(sym), std::move(args));
}

FluentTerm parse_term_expr(Lexer& lx) {
  if (lx.peek().kind == Tok::Number && lx.peek().text == "1") {
    lx.take();
    return FluentTerm{};
  }
  std::vector<Fluent> fs;
  fs.push_back(parse_fluent(lx));
  while (lx.accept_punct('&')) fs.push_back(parse_fluent(lx));
  return FluentTerm(std::move(fs));
}

CNState parse_state_expr(Lexer& lx) {
  FluentTerm p = parse_term_expr(lx);
  std::vector<FluentTerm> n;
  while (lx.accept_punct(';')) {
    const Token t = lx.peek();
    if (!lx.accept_ident("not")) lx.fail("expected 'not'");
    FluentTerm m = parse_term_expr(lx);
    if (m.empty()) lx.fail_at(t, "negation of the unit term 1 is not allowed");
    n.push_back(std::move(m));
  }
  return CNState(std::move(p), std::move(n));
}

struct Line {
  int no;
  std::string text;
};

std::vector<Line> logical_lines(const std::string& text) {
  std::vector<Line> out;
  std::istringstream is(text);
  std::string raw;
  int no = 0;
  while (std::getline(is, raw)) {
    ++no;
    if (auto h = raw.find('#'); h != std::string::npos) raw.erase(h);
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    if (std::all_of(raw.begin(), raw.end(), [](char c) { return std::isspace(static_cast<unsigned char>(c)); }))
      continue;
    out.push_back({no, raw});
  }
  return out;
}

std::vector<std::string> parse_params(Lexer& lx) {
  std::vector<std::string> params;
  if (!lx.accept_punct('(')) return params;
  if (lx.accept_punct(')')) return params;
  do {
    const Token t = lx.peek();
    std::string v = lx.expect_ident("parameter");
    if (!is_variable_name(v)) lx.fail_at(t, "parameter '" + v + "' must be a variable");
    params.push_back(v);
  } while (lx.accept_punct(','));
  lx.expect_punct(')');
  return params;
}

struct PendingChoice {
  NatureChoice choice;
  bool has_eff = false;
  int line = 0;
};

struct PendingAction {
  std::string name;
  std::vector<std::string> params;
  std::optional<CNState> pre;
  std::vector<PendingChoice> choices;
  std::optional<double> cost;
  int line = 0;
};

void check_arity(const CNState& z, const std::map<std::string, std::size_t>& decl, const std::string& where) {
  auto check = [&](const FluentTerm& t) {
    for (const auto& f : t.fluents()) {
      auto it = decl.find(f.symbol());
      if (it == decl.end()) throw ValidationError(where + ": undeclared fluent " + f.symbol());
      if (it->second != f.arity())
        throw ValidationError(where + ": fluent " + f.symbol() + " used with arity " +
                              std::to_string(f.arity()) + ", declared " + std::to_string(it->second));
    }
  };
  check(z.positive());
  for (const auto& n : z.negative()) check(n);
}

}  // namespace

std::string format_number(double v) {
  char buf[64];
  auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

const StochasticAction* DomainSpec::find_action(const std::string& n) const {
  for (const auto& a : actions)
    if (a.name() == n) return &a;
  return nullptr;
}

void DomainSpec::validate() const {
  std::map<std::string, std::size_t> decl;
  for (const auto& f : fluents) {
    auto [it, fresh] = decl.emplace(f.symbol, f.arity);
    if (!fresh && it->second != f.arity)
      throw ValidationError("fluent " + f.symbol + " declared with two arities");
  }
  if (!(gamma >= 0.0 && gamma <= 1.0)) throw ValidationError("gamma must lie in [0,1]");
  for (const auto& a : actions) {
    for (const auto& c : a.choices()) {
      check_arity(c.pre, decl, "action " + a.name());
      check_arity(c.eff, decl, "action " + a.name());
    }
  }
  std::set<std::string> names;
  for (const auto& a : actions)
    if (!names.insert(a.name()).second) throw ValidationError("duplicate action " + a.name());
  bool absorbing = false;
  for (const auto& r : reward.rules) {
    check_arity(r.condition, decl, "reward rule");
    absorbing = absorbing || r.absorbing;
  }
  if (gamma == 1.0 && !absorbing)
    throw ValidationError("gamma = 1 requires at least one absorbing reward rule");
}

CNState parse_state(const std::string& text) {
  Lexer lx(text, 1);
  CNState z = parse_state_expr(lx);
  lx.expect_end();
  return z;
}

FluentTerm parse_fluent_term(const std::string& text) {
  Lexer lx(text, 1);
  FluentTerm f = parse_term_expr(lx);
  lx.expect_end();
  return f;
}

DomainSpec parse_domain(const std::string& text) {
  DomainSpec dom;
  bool have_name = false;
  bool have_gamma = false;
  std::optional<PendingAction> cur;
  std::vector<PendingAction> pending;

  auto close_action = [&]() {
    if (cur) pending.push_back(std::move(*cur));
    cur.reset();
  };

  for (const auto& ln : logical_lines(text)) {
    Lexer lx(ln.text, ln.no);
    const Token head = lx.peek();
    if (head.kind != Tok::Ident) lx.fail("expected a keyword");
    const std::string kw = lx.take().text;

    if (kw == "domain") {
      close_action();
      dom.name = lx.expect_ident("domain name");
      lx.expect_end();
      have_name = true;
    } else if (kw == "gamma") {
      close_action();
      lx.expect_punct(':');
      dom.gamma = lx.expect_number("discount");
      lx.expect_end();
      have_gamma = true;
    } else if (kw == "fluents") {
      close_action();
      lx.expect_punct(':');
      do {
        std::string sym = lx.expect_ident("fluent symbol");
        lx.expect_punct('/');
        const Token t = lx.peek();
        double ar = lx.expect_number("arity");
        if (ar < 0 || ar != std::floor(ar)) lx.fail_at(t, "arity must be a non-negative integer");
        dom.fluents.push_back({sym, static_cast<std::size_t>(ar)});
      } while (lx.accept_punct(','));
      lx.expect_end();
    } else if (kw == "action") {
      close_action();
      cur.emplace();
      cur->line = ln.no;
      cur->name = lx.expect_ident("action name");
      cur->params = parse_params(lx);
      lx.expect_punct(':');
      lx.expect_end();
    } else if (kw == "pre") {
      if (!cur) lx.fail_at(head, "'pre' outside an action");
      if (cur->pre) lx.fail_at(head, "duplicate 'pre'");
      lx.expect_punct(':');
      cur->pre = parse_state_expr(lx);
      lx.expect_end();
    } else if (kw == "choice") {
      if (!cur) lx.fail_at(head, "'choice' outside an action");
      PendingChoice pc;
      pc.line = ln.no;
      pc.choice.name = lx.expect_ident("choice name");
      if (lx.peek().kind == Tok::Punct && lx.peek().text == "(") {
        pc.choice.params = parse_params(lx);
      } else {
        pc.choice.params = cur->params;
      }
      if (!lx.accept_ident("prob")) lx.fail("expected 'prob'");
      pc.choice.prob = lx.expect_number("probability");
      lx.expect_punct(':');
      lx.expect_end();
      cur->choices.push_back(std::move(pc));
    } else if (kw == "eff") {
      if (!cur || cur->choices.empty()) lx.fail_at(head, "'eff' outside a choice");
      auto& pc = cur->choices.back();
      if (pc.has_eff) lx.fail_at(head, "duplicate 'eff'");
      lx.expect_punct(':');
      pc.choice.eff = parse_state_expr(lx);
      pc.has_eff = true;
      lx.expect_end();
    } else if (kw == "cost") {
      if (!cur) lx.fail_at(head, "'cost' outside an action");
      lx.expect_punct(':');
      cur->cost = lx.expect_number("cost");
      lx.expect_end();
    } else if (kw == "reward") {
      close_action();
      lx.expect_punct(':');
      RewardRule r;
      r.condition = parse_state_expr(lx);
      if (lx.peek().kind != Tok::Arrow) lx.fail("expected '->'");
      lx.take();
      r.value = lx.expect_number("reward value");
      r.absorbing = lx.accept_ident("absorbing");
      lx.expect_end();
      dom.reward.rules.push_back(std::move(r));
    } else if (kw == "default") {
      close_action();
      lx.expect_punct(':');
      dom.reward.default_value = lx.expect_number("default reward");
      lx.expect_end();
    } else {
      lx.fail_at(head, "unknown keyword '" + kw + "'");
    }
  }
  close_action();
  if (!have_name) throw ParseError(1, 1, "missing 'domain' line");
  if (!have_gamma) dom.gamma = 1.0;

  for (auto& pa : pending) {
    if (!pa.pre) throw ParseError(pa.line, 1, "action " + pa.name + " has no 'pre'");
    if (pa.choices.empty()) throw ParseError(pa.line, 1, "action " + pa.name + " has no choices");
    std::vector<NatureChoice> choices;
    for (auto& pc : pa.choices) {
      if (!pc.has_eff) throw ParseError(pc.line, 1, "choice " + pc.choice.name + " has no 'eff'");
      pc.choice.pre = *pa.pre;
      choices.push_back(std::move(pc.choice));
    }
    dom.actions.emplace_back(pa.name, pa.params, std::move(choices), pa.cost.value_or(0.0));
  }
  dom.validate();
  return dom;
}

ProblemSpec parse_problem(const std::string& text, const DomainSpec& dom) {
  ProblemSpec prob;
  bool have_name = false;
  bool have_domain = false;
  std::map<std::string, std::size_t> decl;
  for (const auto& f : dom.fluents) decl.emplace(f.symbol, f.arity);

  for (const auto& ln : logical_lines(text)) {
    Lexer lx(ln.text, ln.no);
    const Token head = lx.peek();
    if (head.kind != Tok::Ident) lx.fail("expected a keyword");
    const std::string kw = lx.take().text;
    if (kw == "problem") {
      prob.name = lx.expect_ident("problem name");
      lx.expect_end();
      have_name = true;
    } else if (kw == "domain") {
      prob.domain = lx.expect_ident("domain name");
      lx.expect_end();
      have_domain = true;
    } else if (kw == "init") {
      lx.expect_punct(':');
      const Token at = lx.peek();
      FluentTerm s = parse_term_expr(lx);
      lx.expect_end();
      if (!s.is_ground()) throw ParseError(ln.no, at.column, "initial states must be ground");
      try {
        check_arity(CNState(s, {}), decl, "initial state");
      } catch (const ValidationError& e) {
        throw ParseError(ln.no, at.column, e.what());
      }
      prob.initial.push_back(std::move(s));
    } else if (kw == "horizon") {
      lx.expect_punct(':');
      const Token t = lx.peek();
      double h = lx.expect_number("horizon");
      if (h < 1 || h != std::floor(h)) lx.fail_at(t, "horizon must be a positive integer");
      prob.horizon = static_cast<int>(h);
      lx.expect_end();
    } else {
      lx.fail_at(head, "unknown keyword '" + kw + "'");
    }
  }
  if (!have_name) throw ParseError(1, 1, "missing 'problem' line");
  if (!have_domain) throw ParseError(1, 1, "missing 'domain' line");
  if (prob.domain != dom.name)
    throw ValidationError("problem refers to domain '" + prob.domain + "' but '" + dom.name + "' was loaded");
  if (prob.initial.empty()) throw ValidationError("problem has no initial state");
  return prob;
}

std::string print_domain(const DomainSpec& dom) {
  std::ostringstream os;
  os << "domain " << dom.name << '\n';
  os << "gamma: " << format_number(dom.gamma) << '\n';
  os << "fluents: ";
  for (std::size_t i = 0; i < dom.fluents.size(); ++i) {
    if (i) os << ", ";
    os << dom.fluents[i].symbol << '/' << dom.fluents[i].arity;
  }
  os << "\n";
  auto params = [](const std::vector<std::string>& ps) {
    std::string s;
    if (ps.empty()) return s;
    s = "(";
    for (std::size_t i = 0; i < ps.size(); ++i) s += (i ? ", " : "") + ps[i];
    return s + ")";
  };
  for (const auto& a : dom.actions) {
    os << "\naction " << a.name() << params(a.params()) << ":\n";
    os << "  pre: " << a.choices().front().pre << '\n';
    for (const auto& c : a.choices()) {
      os << "  choice " << c.name;
      if (c.params != a.params()) os << (c.params.empty() ? "()" : params(c.params));
      os << " prob " << format_number(c.prob) << ":\n";
      os << "    eff: " << c.eff << '\n';
    }
    os << "  cost: " << format_number(a.cost()) << '\n';
  }
  os << '\n';
  for (const auto& r : dom.reward.rules) {
    os << "reward: " << r.condition << " -> " << format_number(r.value);
    if (r.absorbing) os << " absorbing";
    os << '\n';
  }
  os << "default: " << format_number(dom.reward.default_value) << '\n';
  return os.str();
}

std::string print_problem(const ProblemSpec& prob) {
  std::ostringstream os;
  os << "problem " << prob.name << '\n';
  os << "domain " << prob.domain << '\n';
  for (const auto& s : prob.initial) os << "init: " << s << '\n';
  os << "horizon: " << prob.horizon << '\n';
  return os.str();
}

namespace {

std::string color_name(int i) {
  static const char* palette[] = {"red", "blue", "green", "yellow", "orange", "purple", "white", "black"};
  if (i < 8) return palette[i];
  return "c" + std::to_string(i + 1);
}

// Portable index draw; std::uniform_int_distribution is implementation defined.
std::size_t draw(std::mt19937_64& rng, std::size_t n) { return static_cast<std::size_t>(rng() % n); }

}  // namespace

GeneratedInstance generate_colored_bw(int blocks, int colors, std::uint64_t seed, const ColoredBwOptions& opts) {
  if (blocks < 1) throw ValidationError("need at least one block");
  if (colors < 1 || colors > blocks) throw ValidationError("colors must lie in [1, blocks]");
  std::mt19937_64 rng(seed);

  std::vector<std::string> block_color(static_cast<std::size_t>(blocks));
  for (int i = 0; i < blocks; ++i) block_color[static_cast<std::size_t>(i)] = color_name(i % colors);
  for (std::size_t i = block_color.size(); i > 1; --i) std::swap(block_color[i - 1], block_color[draw(rng, i)]);

  auto bname = [](int i) { return "b" + std::to_string(i + 1); };
  auto join = [](const std::vector<std::string>& v) {
    std::string out;
    for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " & " : "") + v[i];
    return out;
  };

  // Random towers: blocks are placed in a shuffled order, each on the table or
  // on top of an existing tower.
  auto draw_towers = [&] {
    std::vector<int> order(static_cast<std::size_t>(blocks));
    for (int i = 0; i < blocks; ++i) order[static_cast<std::size_t>(i)] = i;
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[draw(rng, i)]);
    std::vector<int> tops;
    std::vector<std::string> out;
    for (int b : order) {
      std::size_t k = draw(rng, tops.size() + 1);
      if (k == tops.size()) {
        out.push_back("on(" + bname(b) + ",table)");
        tops.push_back(b);
      } else {
        out.push_back("on(" + bname(b) + "," + bname(tops[k]) + ")");
        tops[k] = b;
      }
    }
    out.push_back("e");
    for (int i = 0; i < blocks; ++i)
      out.push_back("color(" + bname(i) + "," + block_color[static_cast<std::size_t>(i)] + ")");
    std::sort(out.begin(), out.end());
    return out;
  };

  // Goal: a tower (top first) whose colours copy those of randomly chosen
  // blocks. Both are redrawn while the initial state already satisfies it.
  const int height = std::max(1, std::min(blocks, opts.goal_height));
  std::vector<int> pick(static_cast<std::size_t>(blocks));
  std::vector<std::string> init, goal;
  bool fresh = false;
  for (int attempt = 0; attempt < 100 && !fresh; ++attempt) {
    init = draw_towers();
    const GroundState init_state = parse_fluent_term(join(init));
    for (int g = 0; g < 10 && !fresh; ++g) {
      for (int i = 0; i < blocks; ++i) pick[static_cast<std::size_t>(i)] = i;
      for (std::size_t i = pick.size(); i > 1; --i) std::swap(pick[i - 1], pick[draw(rng, i)]);
      goal.clear();
      for (int i = 0; i + 1 < height; ++i)
        goal.push_back("on(X" + std::to_string(i + 1) + ",X" + std::to_string(i + 2) + ")");
      for (int i = 0; i < height; ++i)
        goal.push_back("color(X" + std::to_string(i + 1) + "," +
                       block_color[static_cast<std::size_t>(pick[static_cast<std::size_t>(i)])] + ")");
      fresh = !ground_membership(init_state, parse_state(join(goal)));
    }
  }

  const std::string tag = std::to_string(blocks) + "_" + std::to_string(colors) + "_" + std::to_string(seed);
  const std::string ps = format_number(opts.success_prob);
  const std::string pf = format_number(1.0 - opts.success_prob);
  const std::string cost = format_number(opts.action_cost);
  std::ostringstream d;
  d << "# Colored Blocksworld, " << blocks << " blocks, " << colors << " colours, seed " << seed << "\n"
    << "domain colored_bw_" << tag << "\n"
    << "gamma: 1\n"
    << "fluents: on/2, holding/1, e/0, color/2\n\n"
    << "action pickup(X, Y):\n"
    << "  pre: on(X,Y) & e & on(Y,Z) ; not on(W,X)\n"
    << "  choice pickupS prob " << ps << ":\n"
    << "    eff: holding(X) & on(Y,Z) ; not on(X,Y) ; not on(W,Y)\n"
    << "  choice pickupF prob " << pf << ":\n"
    << "    eff: on(X,Y) & e & on(Y,Z) ; not on(W,X)\n"
    << "  cost: " << cost << "\n\n"
    << "action pickupT(X):\n"
    << "  pre: on(X,table) & e ; not on(W,X)\n"
    << "  choice pickupTS prob " << ps << ":\n"
    << "    eff: holding(X) ; not on(X,table)\n"
    << "  choice pickupTF prob " << pf << ":\n"
    << "    eff: on(X,table) & e ; not on(W,X)\n"
    << "  cost: " << cost << "\n\n"
    << "action putdown(X, Y):\n"
    << "  pre: holding(X) & on(Y,Z) ; not on(W,Y)\n"
    << "  choice putdownS prob " << ps << ":\n"
    << "    eff: on(X,Y) & e & on(Y,Z) ; not on(W,X)\n"
    << "  choice putdownF prob " << pf << ":\n"
    << "    eff: holding(X) & on(Y,Z) ; not on(W,Y)\n"
    << "  cost: " << cost << "\n\n"
    << "action putdownT(X):\n"
    << "  pre: holding(X)\n"
    << "  choice putdownTS prob " << ps << ":\n"
    << "    eff: on(X,table) & e ; not on(W,X)\n"
    << "  choice putdownTF prob " << pf << ":\n"
    << "    eff: holding(X)\n"
    << "  cost: " << cost << "\n\n"
    << "reward: ";
  for (std::size_t i = 0; i < goal.size(); ++i) d << (i ? " & " : "") << goal[i];
  d << " -> " << format_number(opts.goal_reward) << " absorbing\n"
    << "default: 0\n";

  std::ostringstream p;
  p << "problem bw_" << tag << "\n"
    << "domain colored_bw_" << tag << "\n"
    << "init: " << join(init) << "\nhorizon: 1000\n";

  GeneratedInstance g;
  g.domain_text = d.str();
  g.problem_text = p.str();
  g.domain = parse_domain(g.domain_text);
  g.problem = parse_problem(g.problem_text, g.domain);
  return g;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_file(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path);
  out << text;
  if (!out) throw IoError("error writing " + path);
}

}  // namespace fcplan
