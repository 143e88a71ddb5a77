#ifndef SLIX_QE_HPP
#define SLIX_QE_HPP

#include "slix/formula.hpp"

namespace slix {

// Quantifier elimination and sentence decision for Presburger arithmetic
// over the naturals. Quantifiers are relativized to x >= 0 internally and
// eliminated Cooper-style; equalities are substituted away directly, which
// keeps the common membership/inclusion sentences cheap.

struct QeBudget {
  // guard on the candidate disjunction |bounds| * lcm built per elimination
  long long max_disjunction = 200000;
  // guard on total work (atom constructions) per top-level call
  long long max_steps = 20000000;
};

// Equivalent quantifier-free formula over the same free variables.
Formula eliminate_quantifiers(const Formula& f, const QeBudget& budget = {});

// Truth value of a closed sentence.
bool decide(const Formula& sentence, const QeBudget& budget = {});

// Truth of f at the given assignment of its free variables (naturals).
bool evaluate(const Formula& f, const std::map<VarId, Int>& env,
              const QeBudget& budget = {});

// decide(forall x. f -> g) where x are the free variables of both.
bool included(const Formula& f, const Formula& g, const QeBudget& budget = {});

// decide(exists x. f), i.e. nonemptiness of the described set.
bool satisfiable(const Formula& f, const QeBudget& budget = {});

bool equivalent(const Formula& f, const Formula& g, const QeBudget& budget = {});

}  // namespace slix

#endif
