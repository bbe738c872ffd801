#include "fairassign/simplex.hpp"

#include "fairassign/error.hpp"

#include <stdexcept>

namespace fairassign {

namespace {

enum class ColumnKind { structural, slack, artificial };

class Tableau {
public:
    Tableau(const LinearProgram& program) : structural_(program.variable_count) {
        const std::size_t rows = program.constraints.size();
        sign_.assign(rows, 1);
        std::vector<Sense> sense(rows);
        for (std::size_t r = 0; r < rows; ++r) {
            const auto& c = program.constraints[r];
            if (static_cast<int>(c.coefficients.size()) != structural_) {
                throw InputError("constraint width differs from the variable count");
            }
            sense[r] = c.sense;
            if (c.rhs < 0) {
                sign_[r] = -1;
                if (c.sense == Sense::less_equal) {
                    sense[r] = Sense::greater_equal;
                } else if (c.sense == Sense::greater_equal) {
                    sense[r] = Sense::less_equal;
                }
            }
        }
        kinds_.assign(structural_, ColumnKind::structural);
        row_slack_.assign(rows, -1);
        row_artificial_.assign(rows, -1);
        for (std::size_t r = 0; r < rows; ++r) {
            if (sense[r] != Sense::equal) {
                row_slack_[r] = static_cast<int>(kinds_.size());
                kinds_.push_back(ColumnKind::slack);
            }
        }
        for (std::size_t r = 0; r < rows; ++r) {
            if (sense[r] != Sense::less_equal) {
                row_artificial_[r] = static_cast<int>(kinds_.size());
                kinds_.push_back(ColumnKind::artificial);
            }
        }
        const int width = static_cast<int>(kinds_.size());
        rows_.assign(rows, std::vector<Rational>(width + 1, Rational(0)));
        basis_.assign(rows, -1);
        for (std::size_t r = 0; r < rows; ++r) {
            const auto& c = program.constraints[r];
            for (int j = 0; j < structural_; ++j) {
                rows_[r][j] = sign_[r] * c.coefficients[j];
            }
            rows_[r][width] = sign_[r] * c.rhs;
            if (row_slack_[r] >= 0) {
                rows_[r][row_slack_[r]] = sense[r] == Sense::less_equal ? 1 : -1;
            }
            basis_[r] = row_artificial_[r] >= 0 ? row_artificial_[r] : row_slack_[r];
            rows_[r][basis_[r]] = 1;
        }
        active_.assign(rows, 1);
    }

    int width() const { return static_cast<int>(kinds_.size()); }

    // Maximizes cost . x over the columns where `allowed` holds. Returns false
    // when unbounded.
    bool maximize(const std::vector<Rational>& cost, const std::vector<char>& allowed) {
        const int w = width();
        objective_.assign(w + 1, Rational(0));
        for (int j = 0; j < w; ++j) {
            objective_[j] = cost[j];
        }
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (!active_[r] || cost[basis_[r]] == 0) {
                continue;
            }
            const Rational cb = cost[basis_[r]];
            for (int j = 0; j <= w; ++j) {
                objective_[j] -= cb * rows_[r][j];
            }
        }
        while (true) {
            int entering = -1;
            for (int j = 0; j < w; ++j) {
                if (allowed[j] && objective_[j] > 0) {
                    entering = j;
                    break;
                }
            }
            if (entering < 0) {
                return true;
            }
            int leaving = -1;
            Rational best, ratio;
            for (std::size_t r = 0; r < rows_.size(); ++r) {
                if (!active_[r] || rows_[r][entering] <= 0) {
                    continue;
                }
                ratio = rows_[r][w] / rows_[r][entering];
                if (leaving < 0 || ratio < best || (ratio == best && basis_[r] < basis_[leaving])) {
                    leaving = static_cast<int>(r);
                    best = ratio;
                }
            }
            if (leaving < 0) {
                return false;
            }
            pivot(leaving, entering);
        }
    }

    void pivot(int row, int column) {
        const int w = width();
        auto& pr = rows_[row];
        const Rational scale = pr[column];
        for (int j = 0; j <= w; ++j) {
            pr[j] /= scale;
        }
        Rational factor;
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (static_cast<int>(r) == row || rows_[r][column] == 0) {
                continue;
            }
            factor = rows_[r][column];
            for (int j = 0; j <= w; ++j) {
                if (pr[j] != 0) {
                    rows_[r][j] -= factor * pr[j];
                }
            }
        }
        if (!objective_.empty() && objective_[column] != 0) {
            factor = objective_[column];
            for (int j = 0; j <= w; ++j) {
                if (pr[j] != 0) {
                    objective_[j] -= factor * pr[j];
                }
            }
        }
        basis_[row] = column;
        ++pivots_;
    }

    // Pivots zero-valued artificial variables out of the basis; rows where
    // that is impossible are redundant and get deactivated.
    void expel_artificials() {
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (!active_[r] || kinds_[basis_[r]] != ColumnKind::artificial) {
                continue;
            }
            int column = -1;
            for (int j = 0; j < width(); ++j) {
                if (kinds_[j] != ColumnKind::artificial && rows_[r][j] != 0) {
                    column = j;
                    break;
                }
            }
            if (column < 0) {
                active_[r] = 0;
            } else {
                pivot(static_cast<int>(r), column);
            }
        }
    }

    Rational objective_value() const { return -objective_.back(); }

    std::vector<Rational> structural_values() const {
        std::vector<Rational> x(structural_, Rational(0));
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            if (active_[r] && basis_[r] < structural_) {
                x[basis_[r]] = rows_[r].back();
            }
        }
        return x;
    }

    // Multipliers for the original rows read off the phase-one reduced costs.
    std::vector<Rational> phase_one_farkas() const {
        std::vector<Rational> y(rows_.size());
        for (std::size_t r = 0; r < rows_.size(); ++r) {
            // Normalized dual y'_r: from the artificial column (cost -1) when
            // present, otherwise from the slack column (cost 0).
            Rational dual = row_artificial_[r] >= 0 ? Rational(-1 - objective_[row_artificial_[r]])
                                                    : Rational(-objective_[row_slack_[r]]);
            y[r] = -dual * sign_[r];
        }
        return y;
    }

    std::vector<char> mask(bool include_artificial) const {
        std::vector<char> allowed(width(), 1);
        for (int j = 0; j < width(); ++j) {
            if (!include_artificial && kinds_[j] == ColumnKind::artificial) {
                allowed[j] = 0;
            }
        }
        return allowed;
    }

    ColumnKind kind(int j) const { return kinds_[j]; }
    long pivots() const { return pivots_; }

private:
    int structural_;
    std::vector<ColumnKind> kinds_;
    std::vector<int> sign_;
    std::vector<int> row_slack_;
    std::vector<int> row_artificial_;
    Matrix rows_;
    std::vector<int> basis_;
    std::vector<char> active_;
    std::vector<Rational> objective_;
    long pivots_ = 0;
};

}  // namespace

LpSolution solve_lp(const LinearProgram& program) {
    Tableau tableau(program);
    const int w = tableau.width();
    std::vector<Rational> phase_one(w, Rational(0));
    for (int j = 0; j < w; ++j) {
        if (tableau.kind(j) == ColumnKind::artificial) {
            phase_one[j] = -1;
        }
    }
    tableau.maximize(phase_one, tableau.mask(true));

    LpSolution solution;
    if (tableau.objective_value() < 0) {
        solution.status = LpStatus::infeasible;
        solution.farkas = tableau.phase_one_farkas();
        solution.pivots = tableau.pivots();
        if (!verify_farkas(program, solution.farkas)) {
            throw std::logic_error("simplex produced an invalid infeasibility certificate");
        }
        return solution;
    }

    tableau.expel_artificials();
    solution.status = LpStatus::optimal;
    if (!program.objective.empty()) {
        if (static_cast<int>(program.objective.size()) != program.variable_count) {
            throw InputError("objective width differs from the variable count");
        }
        std::vector<Rational> cost(w, Rational(0));
        for (int j = 0; j < program.variable_count; ++j) {
            cost[j] = program.objective[j];
        }
        if (!tableau.maximize(cost, tableau.mask(false))) {
            solution.status = LpStatus::unbounded;
        }
    }
    solution.x = tableau.structural_values();
    solution.objective = 0;
    for (int j = 0; j < static_cast<int>(program.objective.size()); ++j) {
        solution.objective += program.objective[j] * solution.x[j];
    }
    solution.pivots = tableau.pivots();
    return solution;
}

bool verify_farkas(const LinearProgram& program, const std::vector<Rational>& y) {
    if (y.size() != program.constraints.size()) {
        return false;
    }
    std::vector<Rational> combined(program.variable_count, Rational(0));
    Rational rhs = 0;
    for (std::size_t r = 0; r < y.size(); ++r) {
        const auto& c = program.constraints[r];
        if ((c.sense == Sense::greater_equal && y[r] < 0) || (c.sense == Sense::less_equal && y[r] > 0)) {
            return false;
        }
        if (y[r] == 0) {
            continue;
        }
        for (int j = 0; j < program.variable_count; ++j) {
            combined[j] += y[r] * c.coefficients[j];
        }
        rhs += y[r] * c.rhs;
    }
    for (const auto& v : combined) {
        if (v > 0) {
            return false;
        }
    }
    return rhs > 0;
}

bool is_feasible_point(const LinearProgram& program, const std::vector<Rational>& x) {
    if (static_cast<int>(x.size()) != program.variable_count) {
        return false;
    }
    for (const auto& v : x) {
        if (v < 0) {
            return false;
        }
    }
    for (const auto& c : program.constraints) {
        Rational lhs = 0;
        for (int j = 0; j < program.variable_count; ++j) {
            lhs += c.coefficients[j] * x[j];
        }
        const bool ok = c.sense == Sense::equal ? lhs == c.rhs
                        : c.sense == Sense::less_equal ? lhs <= c.rhs
                                                        : lhs >= c.rhs;
        if (!ok) {
            return false;
        }
    }
    return true;
}

}  // namespace fairassign
