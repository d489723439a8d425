#pragma once

#include <compare>
#include <cstddef>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace probact {

// Base class for everything this library throws.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed document text. `line` is 1-based; -1 when unknown.
class ParseError : public Error {
 public:
  explicit ParseError(const std::string& msg, int line = -1)
      : Error(msg), line_(line) {}
  int line() const noexcept { return line_; }

 private:
  int line_;
};

class IoError : public Error {
 public:
  using Error::Error;
};

// Structurally invalid model, unknown name, or violated precondition.
class ModelError : public Error {
 public:
  using Error::Error;
};

// Zero-probability evidence in a conditional query.
class ZeroEvidenceError : public Error {
 public:
  using Error::Error;
};

// Enumeration oracle asked to visit more joint states than its limit.
class LimitError : public Error {
 public:
  using Error::Error;
};

// Action whose direct effects intersect the environment's bound set.
class IncompatibleError : public Error {
 public:
  using Error::Error;
};

// A named discrete variable with a finite ordered value domain.
struct Distinction {
  std::string name;
  std::vector<std::string> domain;

  bool operator==(const Distinction&) const = default;
};

struct Arc {
  std::string from;
  std::string to;

  auto operator<=>(const Arc&) const = default;
};

// Conditional probability table. Rows are indexed lexicographically over
// the parent value indices with the last listed parent varying fastest;
// each row is a distribution over the child's domain.
struct Cpt {
  std::string child;
  std::vector<std::string> parents;
  std::vector<std::vector<double>> rows;

  bool operator==(const Cpt&) const = default;
};

struct BeliefNetwork {
  std::vector<Distinction> nodes;
  std::vector<Arc> arcs;
  std::vector<Cpt> cpts;
  std::string notes;

  bool operator==(const BeliefNetwork&) const = default;
};

// Maps distinction names to value labels. Total when every node of the
// network at hand is assigned.
using Assignment = std::map<std::string, std::string>;

inline constexpr double kProbTolerance = 1e-9;

// Lookup helpers; return nullptr when absent.
const Distinction* find_node(const BeliefNetwork& bn, const std::string& name);
const Cpt* find_cpt(const BeliefNetwork& bn, const std::string& child);

// Index of `value` in `d.domain`; throws ModelError when absent.
std::size_t domain_index(const Distinction& d, const std::string& value);

// Copy with nodes, arcs, and CPTs sorted by name. CPT parent order (and
// therefore row layout) is semantic and preserved.
BeliefNetwork canonicalized(const BeliefNetwork& bn);

// Set-wise equality: same nodes, arcs, and CPTs regardless of storage order.
bool structurally_equal(const BeliefNetwork& a, const BeliefNetwork& b);

}  // namespace probact
