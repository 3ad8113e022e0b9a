#pragma once

#include <stdexcept>
#include <string>

namespace chainrep {

// Thrown when an argument violates a documented precondition (wrong ring,
// non-unit where a unit is required, malformed descriptor, ...).
struct SpecError : std::runtime_error {
    explicit SpecError(const std::string& what) : std::runtime_error(what) {}
};

struct NonUnitError : SpecError {
    explicit NonUnitError(const std::string& what) : SpecError(what) {}
};

struct NotInvertibleError : SpecError {
    explicit NotInvertibleError(const std::string& what) : SpecError(what) {}
};

// Residue eigenvalue difference fails to be a unit where blockwise
// decomposition requires it.
struct EigenvalueCollisionError : SpecError {
    explicit EigenvalueCollisionError(const std::string& what) : SpecError(what) {}
};

// A character is not invariant under the group it was asked to extend to.
struct NotInvariantError : SpecError {
    explicit NotInvariantError(const std::string& what) : SpecError(what) {}
};

// No invariant maximal isotropic subspace exists for the supplied action.
struct InvariantChoiceError : SpecError {
    explicit InvariantChoiceError(const std::string& what) : SpecError(what) {}
};

// An enumeration would exceed the configured budget.  Callers must treat this
// as a hard error; results are never silently truncated.
struct BudgetExceededError : std::runtime_error {
    long long requested;
    long long budget;
    BudgetExceededError(long long requested_, long long budget_)
        : std::runtime_error("enumeration of " + std::to_string(requested_) +
                             " elements exceeds budget " + std::to_string(budget_)),
          requested(requested_), budget(budget_) {}
    BudgetExceededError(const std::string& where, long long requested_, long long budget_)
        : std::runtime_error(where + ": enumeration of " + std::to_string(requested_) +
                             " elements exceeds budget " + std::to_string(budget_)),
          requested(requested_), budget(budget_) {}
};

// Default enumeration budget: 2^22 elements.
inline long long default_budget() { return 1LL << 22; }

inline void check_budget(long long requested, long long budget) {
    if (budget <= 0) budget = default_budget();
    if (requested > budget) throw BudgetExceededError(requested, budget);
}

} // namespace chainrep
