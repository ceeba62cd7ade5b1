#pragma once

#include <cstdint>
#include <vector>

#include "cspref/rational.hpp"

namespace cspref {

// Equality-form linear program: minimize c.x subject to A x = b, x >= 0.
struct LinearProgram {
    std::size_t rows = 0;
    std::size_t cols = 0;
    std::vector<std::vector<Rat>> a;  // rows x cols
    std::vector<Rat> b;               // rows
    std::vector<Rat> c;               // cols
};

struct LpSolution {
    Rat objective;
    std::vector<Rat> x;  // primal, size cols
    std::vector<Rat> y;  // row duals, size rows
    std::vector<std::size_t> basis;
    std::size_t exact_pivots = 0;
    bool warm_started = false;  // double presolve basis was exactly optimal or repaired
};

struct LpLimits {
    std::size_t max_cells = 20'000'000;  // rows*cols guard for the dense tableau
};

// Exact solve.  A floating-point simplex proposes a basis first; the basis is
// then verified (feasibility and reduced costs) in rational arithmetic and
// repaired with exact Bland pivots if needed.  Falls back to a full exact
// two-phase tableau simplex when the presolve result is unusable.  Throws
// std::domain_error for infeasible/unbounded programs and std::length_error
// when the tableau would exceed the cell limit.
LpSolution solve_lp(const LinearProgram& lp, const LpLimits& limits = {});

}  // namespace cspref
