#include "cspref/lp.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>

namespace cspref {

namespace {

constexpr double kEps = 1e-9;

// ---- floating-point presolve -------------------------------------------
//
// Plain dense two-phase simplex on doubles.  Only the final basis is used;
// every number that leaves this function is recomputed exactly.

std::optional<std::vector<std::size_t>> double_simplex_basis(const LinearProgram& lp) {
    const std::size_t R = lp.rows, C = lp.cols;
    const std::size_t total = C + R;  // artificials appended
    std::vector<std::vector<double>> t(R, std::vector<double>(total + 1, 0.0));
    std::vector<double> cost(total, 0.0), z(total + 1, 0.0);
    std::vector<std::size_t> basis(R);

    for (std::size_t i = 0; i < R; ++i) {
        double flip = to_double(lp.b[i]) < 0 ? -1.0 : 1.0;
        for (std::size_t j = 0; j < C; ++j) t[i][j] = flip * to_double(lp.a[i][j]);
        t[i][C + i] = 1.0;
        t[i][total] = flip * to_double(lp.b[i]);
        basis[i] = C + i;
    }

    auto run = [&](bool phase1) -> bool {
        for (std::size_t j = 0; j < total; ++j)
            cost[j] = phase1 ? (j >= C ? 1.0 : 0.0) : (j < C ? to_double(lp.c[j]) : 0.0);
        // objective row from scratch
        for (std::size_t j = 0; j <= total; ++j) {
            double acc = j < total ? cost[j] : 0.0;
            for (std::size_t i = 0; i < R; ++i) acc -= cost[basis[i]] * t[i][j];
            z[j] = acc;
        }
        std::size_t iters = 0, cap = 60 * (R + C) + 2000;
        for (;;) {
            if (++iters > cap) return false;
            std::size_t enter = total;
            double best = -kEps;
            for (std::size_t j = 0; j < total; ++j) {
                if (!phase1 && j >= C) continue;  // artificials stay out in phase 2
                if (z[j] < best) { best = z[j]; enter = j; }
            }
            if (enter == total) return true;
            std::size_t leave = R;
            double ratio = 0;
            for (std::size_t i = 0; i < R; ++i) {
                if (t[i][enter] > kEps) {
                    double r = t[i][total] / t[i][enter];
                    if (leave == R || r < ratio - kEps ||
                        (r < ratio + kEps && basis[i] < basis[leave])) {
                        leave = i;
                        ratio = r;
                    }
                }
            }
            if (leave == R) return false;  // unbounded direction (numerically)
            double piv = t[leave][enter];
            for (std::size_t j = 0; j <= total; ++j) t[leave][j] /= piv;
            for (std::size_t i = 0; i < R; ++i) {
                if (i == leave || std::abs(t[i][enter]) < 1e-14) continue;
                double f = t[i][enter];
                for (std::size_t j = 0; j <= total; ++j) t[i][j] -= f * t[leave][j];
            }
            double fz = z[enter];
            for (std::size_t j = 0; j <= total; ++j) z[j] -= fz * t[leave][j];
            basis[leave] = enter;
        }
    };

    if (!run(true)) return std::nullopt;
    double art = 0;
    for (std::size_t i = 0; i < R; ++i)
        if (basis[i] >= C) art += std::abs(t[i][total]);
    if (art > 1e-6) return std::nullopt;  // presolve could not reach feasibility
    // Drive basic artificials out where possible.
    for (std::size_t i = 0; i < R; ++i) {
        if (basis[i] < C) continue;
        std::size_t enter = total;
        for (std::size_t j = 0; j < C; ++j)
            if (std::abs(t[i][j]) > 1e-7) { enter = j; break; }
        if (enter == total) return std::nullopt;  // redundant row; use exact path
        double piv = t[i][enter];
        for (std::size_t j = 0; j <= total; ++j) t[i][j] /= piv;
        for (std::size_t r2 = 0; r2 < R; ++r2) {
            if (r2 == i || std::abs(t[r2][enter]) < 1e-14) continue;
            double f = t[r2][enter];
            for (std::size_t j = 0; j <= total; ++j) t[r2][j] -= f * t[i][j];
        }
        basis[i] = enter;
    }
    if (!run(false)) return std::nullopt;
    for (std::size_t i = 0; i < R; ++i)
        if (basis[i] >= C) return std::nullopt;
    return basis;
}

// ---- exact basis verification ------------------------------------------

// Rational LU with partial (first-nonzero) pivoting of the basis matrix.
class RatLu {
  public:
    // columns: basis column indices into lp.a
    bool factorize(const LinearProgram& lp, const std::vector<std::size_t>& cols) {
        n_ = lp.rows;
        m_.assign(n_, std::vector<Rat>(n_));
        perm_.resize(n_);
        for (std::size_t i = 0; i < n_; ++i) {
            perm_[i] = i;
            for (std::size_t j = 0; j < n_; ++j) m_[i][j] = lp.a[i][cols[j]];
        }
        for (std::size_t col = 0; col < n_; ++col) {
            std::size_t p = col;
            while (p < n_ && m_[p][col] == 0) ++p;
            if (p == n_) return false;  // singular
            std::swap(m_[p], m_[col]);
            std::swap(perm_[p], perm_[col]);
            const Rat& piv = m_[col][col];
            for (std::size_t i = col + 1; i < n_; ++i) {
                if (m_[i][col] == 0) continue;
                Rat f = m_[i][col] / piv;
                m_[i][col] = f;  // store multiplier
                for (std::size_t j = col + 1; j < n_; ++j)
                    if (m_[col][j] != 0) m_[i][j] -= f * m_[col][j];
            }
        }
        return true;
    }

    // Solve B x = rhs (rhs indexed by original row order).
    std::vector<Rat> solve(const std::vector<Rat>& rhs) const {
        std::vector<Rat> x(n_);
        for (std::size_t i = 0; i < n_; ++i) x[i] = rhs[perm_[i]];
        for (std::size_t i = 0; i < n_; ++i)
            for (std::size_t j = 0; j < i; ++j)
                if (m_[i][j] != 0) x[i] -= m_[i][j] * x[j];
        for (std::size_t i = n_; i-- > 0;) {
            for (std::size_t j = i + 1; j < n_; ++j)
                if (m_[i][j] != 0) x[i] -= m_[i][j] * x[j];
            x[i] /= m_[i][i];
        }
        return x;
    }

    // Solve B^T y = rhs; result is indexed by original row order.
    std::vector<Rat> solve_transposed(const std::vector<Rat>& rhs) const {
        // forward with U^T, backward with L^T
        std::vector<Rat> w(rhs);
        for (std::size_t i = 0; i < n_; ++i) {
            for (std::size_t j = 0; j < i; ++j)
                if (m_[j][i] != 0) w[i] -= m_[j][i] * w[j];
            w[i] /= m_[i][i];
        }
        for (std::size_t i = n_; i-- > 0;)
            for (std::size_t j = i + 1; j < n_; ++j)
                if (m_[j][i] != 0) w[i] -= m_[j][i] * w[j];
        std::vector<Rat> y(n_);
        for (std::size_t i = 0; i < n_; ++i) y[perm_[i]] = w[i];
        return y;
    }

  private:
    std::size_t n_ = 0;
    std::vector<std::vector<Rat>> m_;
    std::vector<std::size_t> perm_;
};

Rat dot_column(const LinearProgram& lp, const std::vector<Rat>& y, std::size_t j) {
    Rat acc = 0;
    for (std::size_t i = 0; i < lp.rows; ++i) {
        const Rat& a = lp.a[i][j];
        if (a == 0) continue;
        if (a == 1)
            acc += y[i];
        else if (a == -1)
            acc -= y[i];
        else
            acc += a * y[i];
    }
    return acc;
}

// Verify a candidate basis exactly; repair with Bland pivots if mildly
// suboptimal.  Returns nullopt when the basis is unusable.
std::optional<LpSolution> exact_from_basis(const LinearProgram& lp,
                                           std::vector<std::size_t> basis) {
    const std::size_t R = lp.rows, C = lp.cols;
    for (std::size_t pivots = 0; pivots <= 64; ++pivots) {
        RatLu lu;
        if (!lu.factorize(lp, basis)) return std::nullopt;
        std::vector<Rat> xb = lu.solve(lp.b);
        bool feasible = std::all_of(xb.begin(), xb.end(), [](const Rat& v) { return v >= 0; });
        if (!feasible) return std::nullopt;
        std::vector<Rat> cb(R);
        for (std::size_t i = 0; i < R; ++i) cb[i] = lp.c[basis[i]];
        std::vector<Rat> y = lu.solve_transposed(cb);

        // Bland entering: smallest index with negative reduced cost.
        std::size_t enter = C;
        for (std::size_t j = 0; j < C && enter == C; ++j) {
            if (std::find(basis.begin(), basis.end(), j) != basis.end()) continue;
            if (lp.c[j] - dot_column(lp, y, j) < 0) enter = j;
        }
        if (enter == C) {
            LpSolution sol;
            sol.basis = basis;
            sol.x.assign(C, Rat(0));
            for (std::size_t i = 0; i < R; ++i) sol.x[basis[i]] = xb[i];
            sol.y = std::move(y);
            sol.objective = 0;
            for (std::size_t j = 0; j < C; ++j)
                if (sol.x[j] != 0) sol.objective += lp.c[j] * sol.x[j];
            sol.exact_pivots = pivots;
            sol.warm_started = true;
            return sol;
        }
        // direction through the basis
        std::vector<Rat> col(R);
        for (std::size_t i = 0; i < R; ++i) col[i] = lp.a[i][enter];
        std::vector<Rat> d = lu.solve(col);
        std::size_t leave = R;
        Rat best;
        for (std::size_t i = 0; i < R; ++i) {
            if (d[i] <= 0) continue;
            Rat ratio = xb[i] / d[i];
            if (leave == R || ratio < best ||
                (ratio == best && basis[i] < basis[leave])) {
                best = ratio;
                leave = i;
            }
        }
        if (leave == R) throw std::domain_error("LP is unbounded");
        basis[leave] = enter;
    }
    return std::nullopt;  // too many repairs; use the tableau path
}

// ---- exact two-phase tableau simplex -------------------------------------

class ExactTableau {
  public:
    explicit ExactTableau(const LinearProgram& lp) : lp_(lp), R_(lp.rows), C_(lp.cols) {
        total_ = C_ + R_;
        t_.assign(R_, std::vector<Rat>(total_ + 1));
        basis_.resize(R_);
        flip_.assign(R_, 1);
        for (std::size_t i = 0; i < R_; ++i) {
            int f = lp.b[i] < 0 ? -1 : 1;
            flip_[i] = f;
            for (std::size_t j = 0; j < C_; ++j) t_[i][j] = f == 1 ? lp.a[i][j] : -lp.a[i][j];
            t_[i][C_ + i] = 1;
            t_[i][total_] = f == 1 ? lp.b[i] : -lp.b[i];
            basis_[i] = C_ + i;
        }
    }

    LpSolution solve() {
        run_phase(true);
        for (std::size_t i = 0; i < R_; ++i) {
            if (basis_[i] >= C_ && t_[i][total_] != 0)
                throw std::domain_error("LP is infeasible");
        }
        expel_artificials();
        run_phase(false);

        LpSolution sol;
        sol.basis = basis_;
        sol.x.assign(C_, Rat(0));
        for (std::size_t i = 0; i < R_; ++i)
            if (basis_[i] < C_) sol.x[basis_[i]] = t_[i][total_];
        sol.objective = 0;
        for (std::size_t j = 0; j < C_; ++j)
            if (sol.x[j] != 0) sol.objective += lp_.c[j] * sol.x[j];
        // duals from the artificial (identity) columns: z_{C+i} = -y_i in the
        // row-flipped space
        sol.y.resize(R_);
        for (std::size_t i = 0; i < R_; ++i)
            sol.y[i] = flip_[i] == 1 ? -z_[C_ + i] : z_[C_ + i];
        sol.exact_pivots = pivots_;
        sol.warm_started = false;
        return sol;
    }

  private:
    Rat cost(std::size_t j, bool phase1) const {
        if (phase1) return j >= C_ ? Rat(1) : Rat(0);
        return j < C_ ? lp_.c[j] : Rat(0);
    }

    void recompute_objective_row(bool phase1) {
        z_.assign(total_ + 1, Rat(0));
        for (std::size_t j = 0; j <= total_; ++j) {
            Rat acc = j < total_ ? cost(j, phase1) : Rat(0);
            for (std::size_t i = 0; i < R_; ++i) {
                Rat cb = cost(basis_[i], phase1);
                if (cb != 0 && t_[i][j] != 0) acc -= cb * t_[i][j];
            }
            z_[j] = std::move(acc);
        }
    }

    void run_phase(bool phase1) {
        recompute_objective_row(phase1);
        std::size_t degenerate_streak = 0;
        bool bland = false;
        for (;;) {
            std::size_t enter = total_;
            if (!bland) {
                Rat best(0);
                for (std::size_t j = 0; j < total_; ++j) {
                    if (!phase1 && j >= C_) continue;
                    if (z_[j] < best) { best = z_[j]; enter = j; }
                }
            } else {
                for (std::size_t j = 0; j < total_ && enter == total_; ++j) {
                    if (!phase1 && j >= C_) continue;
                    if (z_[j] < 0) enter = j;
                }
            }
            if (enter == total_) return;  // optimal for this phase
            std::size_t leave = R_;
            Rat best_ratio;
            for (std::size_t i = 0; i < R_; ++i) {
                if (t_[i][enter] <= 0) continue;
                Rat ratio = t_[i][total_] / t_[i][enter];
                if (leave == R_ || ratio < best_ratio ||
                    (ratio == best_ratio && basis_[i] < basis_[leave])) {
                    best_ratio = ratio;
                    leave = i;
                }
            }
            if (leave == R_) throw std::domain_error("LP is unbounded");
            bool degenerate = (t_[leave][total_] == 0);
            degenerate_streak = degenerate ? degenerate_streak + 1 : 0;
            if (degenerate_streak > 2 * (R_ + C_)) bland = true;  // anti-cycling
            pivot(leave, enter);
        }
    }

    void pivot(std::size_t p, std::size_t enter) {
        ++pivots_;
        Rat piv = t_[p][enter];
        for (std::size_t j = 0; j <= total_; ++j)
            if (t_[p][j] != 0) t_[p][j] /= piv;
        for (std::size_t i = 0; i < R_; ++i) {
            if (i == p || t_[i][enter] == 0) continue;
            Rat f = t_[i][enter];
            for (std::size_t j = 0; j <= total_; ++j)
                if (t_[p][j] != 0) t_[i][j] -= f * t_[p][j];
        }
        if (z_[enter] != 0) {
            Rat f = z_[enter];
            for (std::size_t j = 0; j <= total_; ++j)
                if (t_[p][j] != 0) z_[j] -= f * t_[p][j];
        }
        basis_[p] = enter;
    }

    void expel_artificials() {
        for (std::size_t i = 0; i < R_; ++i) {
            if (basis_[i] < C_) continue;
            std::size_t enter = total_;
            for (std::size_t j = 0; j < C_ && enter == total_; ++j)
                if (t_[i][j] != 0) enter = j;
            if (enter == total_)
                throw std::domain_error("LP has a redundant constraint row");
            pivot(i, enter);
        }
    }

    const LinearProgram& lp_;
    std::size_t R_, C_, total_;
    std::vector<std::vector<Rat>> t_;
    std::vector<Rat> z_;
    std::vector<std::size_t> basis_;
    std::vector<int> flip_;
    std::size_t pivots_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& lp, const LpLimits& limits) {
    if (lp.a.size() != lp.rows || lp.b.size() != lp.rows || lp.c.size() != lp.cols)
        throw std::invalid_argument("solve_lp: inconsistent dimensions");
    if (lp.rows == 0 || lp.cols == 0) throw std::invalid_argument("solve_lp: empty program");
    if (lp.rows * lp.cols > limits.max_cells)
        throw std::length_error("solve_lp: tableau exceeds cell limit");

    if (auto basis = double_simplex_basis(lp)) {
        if (auto sol = exact_from_basis(lp, *basis)) return *sol;
    }
    ExactTableau tableau(lp);
    return tableau.solve();
}

}  // namespace cspref
