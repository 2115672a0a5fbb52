#pragma once

#include <cstddef>
#include <limits>
#include <string>
#include <vector>

namespace gridcast {

inline constexpr double lp_inf = std::numeric_limits<double>::infinity();

enum class RowSense { eq, le, ge };
enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

[[nodiscard]] std::string to_string(LpStatus s);

struct LpVariable {
    std::string name;
    double lower = 0;       // >= 0
    double upper = lp_inf;  // >= lower, may be +inf
    double cost = 0;
};

struct LpEntry {
    std::size_t var;
    double coeff;
};

struct LpRow {
    std::string name;
    std::vector<LpEntry> entries;
    RowSense sense = RowSense::eq;
    double rhs = 0;
};

/// Sparse minimization LP.  Rows are built incrementally; validate()
/// checks referential integrity, finiteness, bound ordering, and
/// duplicate (row, column) entries.
class LpProblem {
public:
    std::size_t add_variable(std::string name, double lower, double upper, double cost);
    std::size_t add_row(std::string name, RowSense sense, double rhs);
    /// Appends a coefficient; duplicate (row, var) pairs are rejected at
    /// validate() time.
    void add_entry(std::size_t row, std::size_t var, double coeff);

    [[nodiscard]] const std::vector<LpVariable>& variables() const { return vars_; }
    [[nodiscard]] const std::vector<LpRow>& rows() const { return rows_; }
    [[nodiscard]] std::size_t n_vars() const { return vars_.size(); }
    [[nodiscard]] std::size_t n_rows() const { return rows_.size(); }

    void validate() const;

private:
    std::vector<LpVariable> vars_;
    std::vector<LpRow> rows_;
};

enum class VarStatus { basic, at_lower, at_upper };

/// Dual sign convention: duals[i] = d objective / d rhs_i at the
/// optimum of the minimization.  An equality dual is unrestricted, a <=
/// row has dual <= 0, a >= row has dual >= 0; the dual of a demand
/// equality is the marginal system cost of one extra demand unit.
struct LpSolution {
    LpStatus status = LpStatus::iteration_limit;
    std::vector<double> primal;         // per variable
    std::vector<double> duals;          // per row
    std::vector<double> reduced_costs;  // per variable
    std::vector<VarStatus> var_status;  // per variable
    std::vector<double> row_activity;   // per row
    double objective = 0;
    int iterations = 0;
};

struct SimplexOptions {
    int max_iterations = 200000;
    double feas_tol = 1e-7;
    double pivot_tol = 1e-9;
};

/// Two-phase bounded-variable revised simplex with a dense basis
/// inverse.  Dantzig pricing, switching to Bland's rule during
/// degenerate streaks.  Deterministic.  On optimal the LpSolution
/// satisfies primal feasibility, dual feasibility, complementary
/// slackness, and strong duality within the documented tolerances.
[[nodiscard]] LpSolution solve(const LpProblem& p, const SimplexOptions& opt = {});

}  // namespace gridcast
