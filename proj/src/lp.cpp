#include "gridcast/lp.hpp"

#include <algorithm>
#include <cmath>
#include <unordered_set>

#include "gridcast/errors.hpp"

namespace gridcast {

std::string to_string(LpStatus s) {
    switch (s) {
        case LpStatus::optimal: return "optimal";
        case LpStatus::infeasible: return "infeasible";
        case LpStatus::unbounded: return "unbounded";
        case LpStatus::iteration_limit: return "iteration-limit";
    }
    throw InternalError("bad LpStatus");
}

std::size_t LpProblem::add_variable(std::string name, double lower, double upper, double cost) {
    vars_.push_back({std::move(name), lower, upper, cost});
    return vars_.size() - 1;
}

std::size_t LpProblem::add_row(std::string name, RowSense sense, double rhs) {
    rows_.push_back({std::move(name), {}, sense, rhs});
    return rows_.size() - 1;
}

void LpProblem::add_entry(std::size_t row, std::size_t var, double coeff) {
    if (row >= rows_.size()) throw InternalError("add_entry: row out of range");
    rows_[row].entries.push_back({var, coeff});
}

void LpProblem::validate() const {
    for (const auto& v : vars_) {
        if (v.name.empty()) throw InputError("unnamed variable");
        if (!std::isfinite(v.lower) || v.lower < 0)
            throw InputError("variable '" + v.name + "': lower bound must be finite and >= 0");
        if (std::isnan(v.upper) || v.upper < v.lower)
            throw InputError("variable '" + v.name + "': upper bound below lower bound");
        if (!std::isfinite(v.cost)) throw InputError("variable '" + v.name + "': non-finite cost");
    }
    for (const auto& r : rows_) {
        if (r.name.empty()) throw InputError("unnamed row");
        if (!std::isfinite(r.rhs)) throw InputError("row '" + r.name + "': non-finite rhs");
        std::unordered_set<std::size_t> seen;
        for (const auto& e : r.entries) {
            if (e.var >= vars_.size())
                throw InputError("row '" + r.name + "': entry references unknown variable");
            if (!std::isfinite(e.coeff))
                throw InputError("row '" + r.name + "': non-finite coefficient");
            if (!seen.insert(e.var).second)
                throw InputError("row '" + r.name + "': duplicate entry for variable '" +
                                 vars_[e.var].name + "'");
        }
    }
}

namespace {

/// Internal column-oriented view: structural columns first, then one
/// logical column per row, then any artificial columns appended during
/// phase 1.  Logical columns turn every row into A.x + s = b.
struct Tableau {
    std::size_t n = 0;  // structural
    std::size_t m = 0;  // rows
    std::vector<std::vector<LpEntry>> cols;  // sparse columns, structural only
    std::vector<double> lower, upper, cost;  // per column, all kinds
    std::vector<double> rhs;
    std::vector<signed char> art_sign;  // per artificial, +1/-1
    std::vector<std::size_t> art_row;   // row of each artificial

    [[nodiscard]] std::size_t total() const { return lower.size(); }
    [[nodiscard]] bool is_artificial(std::size_t j) const { return j >= n + m; }

    /// y . column_j
    [[nodiscard]] double dot(const std::vector<double>& y, std::size_t j) const {
        if (j < n) {
            double s = 0;
            for (const auto& e : cols[j]) s += y[e.var] * e.coeff;
            return s;
        }
        if (j < n + m) return y[j - n];
        return art_sign[j - n - m] * y[art_row[j - n - m]];
    }

    /// w = Binv . column_j given row-major Binv.
    void ftran(const std::vector<double>& binv, std::size_t j, std::vector<double>& w) const {
        std::fill(w.begin(), w.end(), 0.0);
        if (j < n) {
            for (const auto& e : cols[j]) {
                double c = e.coeff;
                std::size_t k = e.var;
                for (std::size_t i = 0; i < m; ++i) w[i] += binv[i * m + k] * c;
            }
        } else if (j < n + m) {
            std::size_t k = j - n;
            for (std::size_t i = 0; i < m; ++i) w[i] = binv[i * m + k];
        } else {
            std::size_t a = j - n - m;
            double c = art_sign[a];
            std::size_t k = art_row[a];
            for (std::size_t i = 0; i < m; ++i) w[i] = binv[i * m + k] * c;
        }
    }
};

struct Basis {
    std::vector<std::size_t> head;       // column in basis row position i
    std::vector<VarStatus> status;       // per column
    std::vector<double> x;               // per column; nonbasic pinned at bound
    std::vector<double> binv;            // m x m row-major
    std::vector<double> xb;              // basic values by row position
    std::vector<double> y;               // duals for current costs
};

class Simplex {
public:
    Simplex(const LpProblem& p, const SimplexOptions& opt) : opt_(opt), problem_(&p) { build(p); }

    LpSolution run();

private:
    void build(const LpProblem& p);
    void crash();
    void refactor();
    void compute_duals();
    void compute_basics();
    /// Runs pivots until optimal for current costs; returns false on
    /// iteration limit, sets unbounded_ when a ray is found.
    bool iterate();
    void set_phase1_costs();
    void set_phase2_costs(const LpProblem& p);
    void drive_out_artificials();

    SimplexOptions opt_;
    const LpProblem* problem_;
    Tableau t_;
    Basis b_;
    std::vector<double> cost_;  // active objective
    int iterations_ = 0;
    bool unbounded_ = false;
    bool bland_ = false;
    int degen_streak_ = 0;
    int since_refactor_ = 0;
};

void Simplex::build(const LpProblem& p) {
    t_.n = p.n_vars();
    t_.m = p.n_rows();
    t_.cols.resize(t_.n);
    for (std::size_t i = 0; i < t_.m; ++i)
        for (const auto& e : p.rows()[i].entries)
            if (e.coeff != 0) t_.cols[e.var].push_back({i, e.coeff});
    for (const auto& v : p.variables()) {
        t_.lower.push_back(v.lower);
        t_.upper.push_back(v.upper);
    }
    for (const auto& r : p.rows()) {
        t_.rhs.push_back(r.rhs);
        switch (r.sense) {
            case RowSense::le: t_.lower.push_back(0); t_.upper.push_back(lp_inf); break;
            case RowSense::ge: t_.lower.push_back(-lp_inf); t_.upper.push_back(0); break;
            case RowSense::eq: t_.lower.push_back(0); t_.upper.push_back(0); break;
        }
    }
}

void Simplex::crash() {
    std::size_t n = t_.n, m = t_.m;
    b_.status.assign(n + m, VarStatus::at_lower);
    b_.x.assign(n + m, 0.0);
    for (std::size_t j = 0; j < n; ++j) b_.x[j] = t_.lower[j];

    // Row residual with structurals at lower bound.
    std::vector<double> s(t_.rhs);
    for (std::size_t j = 0; j < n; ++j) {
        if (b_.x[j] == 0) continue;
        for (const auto& e : t_.cols[j]) s[e.var] -= e.coeff * b_.x[j];
    }

    b_.head.clear();
    for (std::size_t i = 0; i < m; ++i) {
        std::size_t lj = n + i;
        if (s[i] >= t_.lower[lj] && s[i] <= t_.upper[lj]) {
            b_.head.push_back(lj);
            b_.status[lj] = VarStatus::basic;
            b_.x[lj] = s[i];
        } else {
            // The logical cannot absorb the residual; park it at its
            // feasible bound (always 0) and add an artificial.
            b_.status[lj] = s[i] > 0 ? VarStatus::at_upper : VarStatus::at_lower;
            b_.x[lj] = 0;
            t_.art_sign.push_back(s[i] > 0 ? 1 : -1);
            t_.art_row.push_back(i);
            t_.lower.push_back(0);
            t_.upper.push_back(lp_inf);
            std::size_t aj = t_.total() - 1;
            b_.status.push_back(VarStatus::basic);
            b_.x.push_back(std::abs(s[i]));
            b_.head.push_back(aj);
        }
    }
    b_.binv.assign(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i)
        b_.binv[i * m + i] = t_.is_artificial(b_.head[i]) ? t_.art_sign[b_.head[i] - n - m] : 1.0;
    b_.xb.resize(m);
    for (std::size_t i = 0; i < m; ++i) b_.xb[i] = b_.x[b_.head[i]];
    b_.y.assign(m, 0.0);
}

void Simplex::refactor() {
    std::size_t m = t_.m;
    if (m == 0) return;
    // Gauss-Jordan inverse of the basis matrix with partial pivoting.
    std::vector<double> a(m * m, 0.0), inv(m * m, 0.0);
    std::vector<double> col(m);
    for (std::size_t i = 0; i < m; ++i) inv[i * m + i] = 1.0;
    std::vector<double> ident(m * m, 0.0);
    for (std::size_t i = 0; i < m; ++i) ident[i * m + i] = 1.0;
    for (std::size_t pos = 0; pos < m; ++pos) {
        t_.ftran(ident, b_.head[pos], col);
        for (std::size_t i = 0; i < m; ++i) a[i * m + pos] = col[i];
    }
    for (std::size_t k = 0; k < m; ++k) {
        std::size_t piv = k;
        for (std::size_t i = k + 1; i < m; ++i)
            if (std::abs(a[i * m + k]) > std::abs(a[piv * m + k])) piv = i;
        if (std::abs(a[piv * m + k]) < 1e-12) throw InternalError("singular basis in refactor");
        if (piv != k) {
            for (std::size_t j = 0; j < m; ++j) {
                std::swap(a[piv * m + j], a[k * m + j]);
                std::swap(inv[piv * m + j], inv[k * m + j]);
            }
        }
        double d = a[k * m + k];
        for (std::size_t j = 0; j < m; ++j) {
            a[k * m + j] /= d;
            inv[k * m + j] /= d;
        }
        for (std::size_t i = 0; i < m; ++i) {
            if (i == k) continue;
            double f = a[i * m + k];
            if (f == 0) continue;
            for (std::size_t j = 0; j < m; ++j) {
                a[i * m + j] -= f * a[k * m + j];
                inv[i * m + j] -= f * inv[k * m + j];
            }
        }
    }
    b_.binv = std::move(inv);
    since_refactor_ = 0;
    compute_basics();
    compute_duals();
}

void Simplex::compute_basics() {
    std::size_t m = t_.m;
    // xb = Binv (b - N x_N)
    std::vector<double> r(t_.rhs);
    for (std::size_t j = 0; j < t_.total(); ++j) {
        if (b_.status[j] == VarStatus::basic || b_.x[j] == 0) continue;
        if (j < t_.n) {
            for (const auto& e : t_.cols[j]) r[e.var] -= e.coeff * b_.x[j];
        } else if (j < t_.n + t_.m) {
            r[j - t_.n] -= b_.x[j];
        } else {
            r[t_.art_row[j - t_.n - t_.m]] -= t_.art_sign[j - t_.n - t_.m] * b_.x[j];
        }
    }
    for (std::size_t i = 0; i < m; ++i) {
        double v = 0;
        for (std::size_t k = 0; k < m; ++k) v += b_.binv[i * m + k] * r[k];
        b_.xb[i] = v;
        b_.x[b_.head[i]] = v;
    }
}

void Simplex::compute_duals() {
    std::size_t m = t_.m;
    std::fill(b_.y.begin(), b_.y.end(), 0.0);
    for (std::size_t i = 0; i < m; ++i) {
        double c = cost_[b_.head[i]];
        if (c == 0) continue;
        for (std::size_t k = 0; k < m; ++k) b_.y[k] += c * b_.binv[i * m + k];
    }
}

void Simplex::set_phase1_costs() {
    cost_.assign(t_.total(), 0.0);
    for (std::size_t a = 0; a < t_.art_row.size(); ++a) cost_[t_.n + t_.m + a] = 1.0;
}

void Simplex::set_phase2_costs(const LpProblem& p) {
    cost_.assign(t_.total(), 0.0);
    for (std::size_t j = 0; j < t_.n; ++j) cost_[j] = p.variables()[j].cost;
}

bool Simplex::iterate() {
    std::size_t m = t_.m;
    std::vector<double> w(m);
    const double dual_tol = opt_.feas_tol;
    const double degen_tol = 1e-10;

    while (true) {
        if (iterations_ >= opt_.max_iterations) return false;

        // Pricing: Dantzig (largest violation) or Bland (lowest index).
        std::size_t entering = t_.total();
        double best = dual_tol;
        int dir = 0;
        for (std::size_t j = 0; j < t_.total(); ++j) {
            if (b_.status[j] == VarStatus::basic) continue;
            if (t_.lower[j] == t_.upper[j]) continue;  // fixed, never enters
            double d = cost_[j] - t_.dot(b_.y, j);
            double viol = 0;
            int sigma = 0;
            if (b_.status[j] == VarStatus::at_lower && d < -dual_tol) {
                viol = -d;
                sigma = +1;
            } else if (b_.status[j] == VarStatus::at_upper && d > dual_tol) {
                viol = d;
                sigma = -1;
            } else {
                continue;
            }
            if (bland_) {
                entering = j;
                dir = sigma;
                break;
            }
            if (viol > best) {
                best = viol;
                entering = j;
                dir = sigma;
            }
        }
        if (entering == t_.total()) return true;  // optimal for current costs

        t_.ftran(b_.binv, entering, w);

        // Ratio test over basic variables plus the entering variable's
        // own opposite bound.
        double limit = t_.upper[entering] - t_.lower[entering];  // may be inf
        double t_star = limit;
        std::size_t leave_pos = m;  // m = bound flip
        double leave_abs_w = 0;
        bool leave_at_upper = false;
        for (std::size_t i = 0; i < m; ++i) {
            double delta = dir * w[i];
            std::size_t bj = b_.head[i];
            double ti;
            bool hits_upper;
            if (delta > opt_.pivot_tol) {
                if (t_.lower[bj] == -lp_inf) continue;
                ti = (b_.xb[i] - t_.lower[bj]) / delta;
                hits_upper = false;
            } else if (delta < -opt_.pivot_tol) {
                if (t_.upper[bj] == lp_inf) continue;
                ti = (t_.upper[bj] - b_.xb[i]) / -delta;
                hits_upper = true;
            } else {
                continue;
            }
            if (ti < 0) ti = 0;  // numerical drift guard
            bool better;
            if (ti < t_star - 1e-12) {
                better = true;
            } else if (ti > t_star + 1e-12) {
                better = false;
            } else if (leave_pos == m) {
                better = t_star == lp_inf ? true : ti < t_star;
            } else if (bland_) {
                better = bj < b_.head[leave_pos];
            } else {
                better = std::abs(w[i]) > leave_abs_w;
            }
            if (better) {
                t_star = ti;
                leave_pos = i;
                leave_abs_w = std::abs(w[i]);
                leave_at_upper = hits_upper;
            }
        }

        if (t_star == lp_inf) {
            unbounded_ = true;
            return true;
        }

        ++iterations_;
        ++since_refactor_;
        if (t_star <= degen_tol) {
            if (++degen_streak_ > 40) bland_ = true;
        } else {
            degen_streak_ = 0;
            bland_ = false;
        }

        if (leave_pos == m) {
            // Bound flip: the entering variable walks to its other
            // bound, the basis is unchanged.
            double step = dir * t_star;
            for (std::size_t i = 0; i < m; ++i) {
                b_.xb[i] -= step * w[i];
                b_.x[b_.head[i]] = b_.xb[i];
            }
            b_.x[entering] += step;
            b_.status[entering] =
                b_.status[entering] == VarStatus::at_lower ? VarStatus::at_upper : VarStatus::at_lower;
            continue;
        }

        double alpha = w[leave_pos];
        double d_entering = cost_[entering] - t_.dot(b_.y, entering);
        std::size_t leaving = b_.head[leave_pos];

        double step = dir * t_star;
        for (std::size_t i = 0; i < m; ++i) b_.xb[i] -= step * w[i];
        double enter_value = b_.x[entering] + step;
        b_.x[leaving] = leave_at_upper ? t_.upper[leaving] : t_.lower[leaving];
        b_.status[leaving] = leave_at_upper ? VarStatus::at_upper : VarStatus::at_lower;

        // Dual update before touching Binv: y += (d_q / alpha) * row_r.
        double mu = d_entering / alpha;
        for (std::size_t k = 0; k < m; ++k) b_.y[k] += mu * b_.binv[leave_pos * m + k];

        // Elementary row operations keep Binv equal to the inverse of
        // the new basis.
        double* prow = &b_.binv[leave_pos * m];
        for (std::size_t k = 0; k < m; ++k) prow[k] /= alpha;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == leave_pos) continue;
            double f = w[i];
            if (f == 0) continue;
            double* row = &b_.binv[i * m];
            for (std::size_t k = 0; k < m; ++k) row[k] -= f * prow[k];
        }

        b_.head[leave_pos] = entering;
        b_.status[entering] = VarStatus::basic;
        b_.xb[leave_pos] = enter_value;
        b_.x[entering] = enter_value;

        if (since_refactor_ >= 500) refactor();
    }
}

void Simplex::drive_out_artificials() {
    std::size_t m = t_.m, n = t_.n;
    std::vector<double> row(m), w(m);
    for (std::size_t pos = 0; pos < m; ++pos) {
        if (!t_.is_artificial(b_.head[pos])) continue;
        for (std::size_t k = 0; k < m; ++k) row[k] = b_.binv[pos * m + k];
        std::size_t pivot_col = t_.total();
        for (std::size_t j = 0; j < n + m; ++j) {
            if (b_.status[j] == VarStatus::basic) continue;
            if (t_.lower[j] == t_.upper[j]) continue;
            if (std::abs(t_.dot(row, j)) > 1e-7) {
                pivot_col = j;
                break;
            }
        }
        if (pivot_col == t_.total()) continue;  // redundant row, artificial stays at 0

        t_.ftran(b_.binv, pivot_col, w);
        double alpha = w[pos];
        std::size_t art = b_.head[pos];
        b_.x[art] = 0;
        b_.status[art] = VarStatus::at_lower;

        double* prow = &b_.binv[pos * m];
        for (std::size_t k = 0; k < m; ++k) prow[k] /= alpha;
        for (std::size_t i = 0; i < m; ++i) {
            if (i == pos) continue;
            double f = w[i];
            if (f == 0) continue;
            double* r = &b_.binv[i * m];
            for (std::size_t k = 0; k < m; ++k) r[k] -= f * prow[k];
        }
        b_.head[pos] = pivot_col;
        b_.status[pivot_col] = VarStatus::basic;
    }
    compute_basics();
}

LpSolution Simplex::run() {
    LpSolution sol;
    std::size_t n = t_.n, m = t_.m;
    sol.primal.assign(n, 0.0);
    sol.duals.assign(m, 0.0);
    sol.reduced_costs.assign(n, 0.0);
    sol.var_status.assign(n, VarStatus::at_lower);
    sol.row_activity.assign(m, 0.0);

    crash();

    double rhs_scale = 1.0;
    for (double b : t_.rhs) rhs_scale = std::max(rhs_scale, std::abs(b));

    if (!t_.art_row.empty()) {
        set_phase1_costs();
        compute_duals();
        if (!iterate()) {
            sol.iterations = iterations_;
            return sol;  // iteration limit
        }
        if (unbounded_) throw InternalError("phase 1 reported an unbounded direction");
        double infeas = 0;
        for (std::size_t i = 0; i < m; ++i)
            if (t_.is_artificial(b_.head[i])) infeas += std::abs(b_.xb[i]);
        if (infeas > opt_.feas_tol * rhs_scale) {
            sol.status = LpStatus::infeasible;
            sol.iterations = iterations_;
            return sol;
        }
        drive_out_artificials();
        // No artificial may move again.
        for (std::size_t a = 0; a < t_.art_row.size(); ++a) t_.upper[n + m + a] = 0.0;
        bland_ = false;
        degen_streak_ = 0;
    }

    set_phase2_costs(*problem_);
    compute_duals();
    if (!iterate()) {
        sol.iterations = iterations_;
        return sol;
    }
    if (unbounded_) {
        sol.status = LpStatus::unbounded;
        sol.iterations = iterations_;
        return sol;
    }

    // Fresh inverse before extraction unless the basis never moved:
    // duals feed price series, so accumulated update error is not
    // acceptable here.
    if (since_refactor_ > 0) refactor();
    compute_basics();
    compute_duals();

    sol.status = LpStatus::optimal;
    sol.iterations = iterations_;
    double obj = 0;
    for (std::size_t j = 0; j < n; ++j) {
        sol.primal[j] = b_.x[j];
        sol.var_status[j] = b_.status[j];
        obj += cost_[j] * b_.x[j];
    }
    sol.objective = obj;
    for (std::size_t i = 0; i < m; ++i) sol.duals[i] = b_.y[i];
    for (std::size_t j = 0; j < n; ++j) sol.reduced_costs[j] = cost_[j] - t_.dot(b_.y, j);
    for (std::size_t j = 0; j < n; ++j) {
        if (sol.primal[j] == 0) continue;
        for (const auto& e : t_.cols[j]) sol.row_activity[e.var] += e.coeff * sol.primal[j];
    }
    return sol;
}

}  // namespace

LpSolution solve(const LpProblem& p, const SimplexOptions& opt) {
    p.validate();
    Simplex s(p, opt);
    return s.run();
}

}  // namespace gridcast
