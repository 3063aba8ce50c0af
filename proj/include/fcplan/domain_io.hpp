#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "fcplan/action.hpp"
#include "fcplan/term.hpp"

namespace fcplan {

class ParseError : public Error {
 public:
  ParseError(int line, int column, const std::string& msg);
  int line() const { return line_; }
  int column() const { return column_; }

 private:
  int line_;
  int column_;
};

// File could not be read or written.
class IoError : public Error {
 public:
  using Error::Error;
};

struct FluentDecl {
  std::string symbol;
  std::size_t arity = 0;
  bool operator==(const FluentDecl&) const = default;
};

struct DomainSpec {
  std::string name;
  std::vector<FluentDecl> fluents;
  std::vector<StochasticAction> actions;
  RewardModel reward;
  double gamma = 1.0;

  bool operator==(const DomainSpec&) const = default;
  const StochasticAction* find_action(const std::string& name) const;
  // Checks arities, discount range and the absorbing-goal requirement for
  // undiscounted domains. Throws ValidationError.
  void validate() const;
};

struct ProblemSpec {
  std::string name;
  std::string domain;
  std::vector<GroundState> initial;
  int horizon = 1000;
  bool operator==(const ProblemSpec&) const = default;
};

DomainSpec parse_domain(const std::string& text);
ProblemSpec parse_problem(const std::string& text, const DomainSpec& dom);

// Single CN-state / fluent term in the `P ; not N1 ; not N2` syntax.
CNState parse_state(const std::string& text);
FluentTerm parse_fluent_term(const std::string& text);

std::string print_domain(const DomainSpec& dom);
std::string print_problem(const ProblemSpec& prob);

struct ColoredBwOptions {
  double goal_reward = 500.0;
  double action_cost = -3.0;
  double success_prob = 0.75;
  // Height of the colour tower the goal asks for (capped by the block count).
  int goal_height = 3;
};

struct GeneratedInstance {
  DomainSpec domain;
  ProblemSpec problem;
  std::string domain_text;
  std::string problem_text;
};

// Colored Blocksworld instance with blocks b1..bB; deterministic in seed.
GeneratedInstance generate_colored_bw(int blocks, int colors, std::uint64_t seed,
                                      const ColoredBwOptions& opts = {});

// Shortest decimal text that parses back to exactly v.
std::string format_number(double v);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& text);

}  // namespace fcplan
