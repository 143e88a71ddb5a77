#ifndef SLIX_FORMULA_HPP
#define SLIX_FORMULA_HPP

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include "slix/numeric.hpp"

namespace slix {

// Presburger formulas over variables ranging over the naturals.
//
// Variables are plain integer ids. By convention, a formula describing a
// subset of N^k uses ids 0..k-1 for the coordinates; quantified helper
// variables take ids >= k. Terms are integer-valued linear expressions.
//
// The AST is kept in negation normal form: negation is folded into the atoms
// at construction time (a divisibility atom carries a polarity flag, and
// negated comparisons are rewritten over Z).

using VarId = std::uint32_t;

// Hands out fresh variable ids; start it above every id already in use.
struct VarGen {
  VarId next;
  explicit VarGen(VarId start = 0) : next(start) {}
  VarId fresh() { return next++; }
};

// sum coeff_i * x_i + constant
struct LinearTerm {
  std::map<VarId, Int> coeffs;  // nonzero entries only
  Int constant = 0;

  LinearTerm() = default;
  explicit LinearTerm(Int c) : constant(std::move(c)) {}

  static LinearTerm var(VarId v, Int coeff = Int(1)) {
    LinearTerm t;
    if (coeff != 0) t.coeffs[v] = std::move(coeff);
    return t;
  }

  Int coeff_of(VarId v) const {
    auto it = coeffs.find(v);
    return it == coeffs.end() ? Int(0) : it->second;
  }
  bool mentions(VarId v) const { return coeffs.count(v) != 0; }
  bool is_constant() const { return coeffs.empty(); }

  LinearTerm& add(const LinearTerm& o, const Int& scale = Int(1));
  LinearTerm scaled(const Int& s) const;
  LinearTerm negated() const { return scaled(Int(-1)); }
  // Replace v by the given term (v must not occur in it).
  LinearTerm substituted(VarId v, const LinearTerm& repl) const;
  Int evaluate(const std::map<VarId, Int>& env) const;

  bool operator==(const LinearTerm& o) const {
    return constant == o.constant && coeffs == o.coeffs;
  }
  bool operator<(const LinearTerm& o) const;
};

LinearTerm operator+(const LinearTerm& a, const LinearTerm& b);
LinearTerm operator-(const LinearTerm& a, const LinearTerm& b);

enum class FKind : std::uint8_t { True, False, Cmp, Div, And, Or, Exists, Forall };
enum class Rel : std::uint8_t { Eq, Le };  // term = 0, term <= 0

class Formula;

struct FNode {
  FKind kind;
  // Cmp: term rel 0.  Div: modulus | term (or its negation when div_negated).
  LinearTerm term;
  Rel rel = Rel::Eq;
  Int modulus = 0;
  bool div_negated = false;
  std::vector<Formula> kids;  // And / Or
  VarId var = 0;              // Exists / Forall
  std::size_t hash = 0;
};

class Formula {
 public:
  Formula() = default;  // empty handle; only produced by default construction

  FKind kind() const { return node_->kind; }
  const FNode& node() const { return *node_; }
  bool valid() const { return node_ != nullptr; }
  std::size_t hash() const { return node_->hash; }

  bool is_true() const { return node_->kind == FKind::True; }
  bool is_false() const { return node_->kind == FKind::False; }

  bool operator==(const Formula& o) const;
  bool operator!=(const Formula& o) const { return !(*this == o); }

  // --- constructors (normalizing) ---
  static Formula truth(bool b);
  static Formula cmp(LinearTerm t, Rel rel);
  static Formula eq(LinearTerm a, LinearTerm b) { return cmp(a - b, Rel::Eq); }
  static Formula leq(LinearTerm a, LinearTerm b) { return cmp(a - b, Rel::Le); }
  static Formula divides(Int modulus, LinearTerm t, bool negated = false);
  static Formula conj(std::vector<Formula> kids);
  static Formula disj(std::vector<Formula> kids);
  static Formula conj2(Formula a, Formula b) { return conj({std::move(a), std::move(b)}); }
  static Formula disj2(Formula a, Formula b) { return disj({std::move(a), std::move(b)}); }
  static Formula exists(VarId v, Formula body);
  static Formula forall(VarId v, Formula body);
  static Formula exists_many(const std::vector<VarId>& vs, Formula body);
  static Formula forall_many(const std::vector<VarId>& vs, Formula body);

  Formula negated() const;

  // --- queries ---
  void collect_free_vars(std::map<VarId, bool>& out) const;
  std::vector<VarId> free_vars() const;
  bool mentions_free(VarId v) const;
  // One past the largest variable id occurring anywhere (free or bound).
  VarId max_var_bound() const;
  bool quantifier_free() const;
  std::size_t size() const;  // node count

  // Substitute a term for a free variable (capture is impossible as long as
  // repl only mentions free variables of the context, which QE guarantees).
  Formula substituted(VarId v, const LinearTerm& repl) const;
  Formula rename_bound(VarGen& gen) const;

  // Evaluate; quantifier-free formulas only (see qe.hpp for full decide()).
  bool evaluate_qf(const std::map<VarId, Int>& env) const;

 private:
  friend struct FormulaFactory;
  explicit Formula(std::shared_ptr<const FNode> n) : node_(std::move(n)) {}
  std::shared_ptr<const FNode> node_;
};

// --- text form -------------------------------------------------------------
//
// S-expressions: (and ...) (or ...) (not f) (exists (x y) f) (forall (x) f)
// (= t t) (<= t t) (>= t t) (< t t) (> t t) (divides m t)
// terms: integer | name | (+ t ...) | (- t t) | (- t) | (* c t)
//
// Coordinate variables are named by the supplied Coords; other variables
// print as v<N> and bound variables may use any fresh names when parsed.
std::string to_sexpr(const Formula& f, const Coords& coords);
Formula parse_sexpr(const std::string& text, const Coords& coords, VarGen& gen);

}  // namespace slix

#endif
