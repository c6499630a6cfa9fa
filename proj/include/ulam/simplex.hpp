#pragma once

// Dense two-phase primal simplex on a full tableau.
//
// Pivoting: most negative reduced cost, ties to the lowest column index; the
// ratio test breaks ties by the lowest basic-variable index. After a run of
// degenerate pivots the solver switches to Bland's rule (lowest eligible
// index on both sides) until the objective moves again, which rules out
// cycling.

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <utility>
#include <vector>

#include "ulam/errors.hpp"

namespace ulam {

enum class RowSense { less_equal, equal, greater_equal };

struct LpRow {
  std::vector<std::pair<int, double>> coeffs;  // (variable, coefficient)
  RowSense sense = RowSense::equal;
  double rhs = 0;
};

/// minimize c^T x subject to the rows and x >= 0.
struct LinearProgram {
  int num_vars = 0;
  std::vector<double> objective;
  std::vector<LpRow> rows;

  int add_var(double cost) {
    objective.push_back(cost);
    return num_vars++;
  }
  void add_row(std::vector<std::pair<int, double>> coeffs, RowSense sense, double rhs) {
    rows.push_back({std::move(coeffs), sense, rhs});
  }
};

enum class LpStatus { optimal, infeasible, unbounded, iteration_limit };

inline std::string to_string(LpStatus s) {
  switch (s) {
    case LpStatus::optimal: return "optimal";
    case LpStatus::infeasible: return "infeasible";
    case LpStatus::unbounded: return "unbounded";
    case LpStatus::iteration_limit: return "iteration_limit";
  }
  return "unknown";
}

struct LpResult {
  LpStatus status = LpStatus::iteration_limit;
  double value = 0;
  std::vector<double> x;
  int pivots = 0;
  int bland_pivots = 0;
};

namespace detail {

class Tableau {
 public:
  using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  Tableau(Matrix a, Eigen::VectorXd b, std::vector<int> basis)
      : a_(std::move(a)), b_(std::move(b)), basis_(std::move(basis)) {}

  /// Minimizes cost over the current basis. `allowed` masks columns that may
  /// enter.
  LpStatus optimize(const Eigen::VectorXd& cost, const std::vector<char>& allowed, int max_pivots,
                    int& pivots, int& bland_pivots) {
    const int m = static_cast<int>(a_.rows());
    const int n = static_cast<int>(a_.cols());
    // reduced costs r = c - c_B^T B^-1 A, kept in sync with pivots
    Eigen::VectorXd r = cost;
    double z = 0;
    for (int i = 0; i < m; ++i) {
      const double cb = cost(basis_[i]);
      if (cb != 0) {
        r -= cb * a_.row(i).transpose();
        z += cb * b_(i);
      }
    }
    int degenerate_run = 0;
    bool bland = false;
    while (pivots < max_pivots) {
      int enter = -1;
      double best = -kEps;
      for (int j = 0; j < n; ++j) {
        if (!allowed[j] || r(j) >= -kEps) continue;
        if (bland) {
          enter = j;
          break;
        }
        if (r(j) < best) {
          best = r(j);
          enter = j;
        }
      }
      if (enter < 0) return LpStatus::optimal;

      int leave = -1;
      double ratio = std::numeric_limits<double>::infinity();
      for (int i = 0; i < m; ++i) {
        const double aij = a_(i, enter);
        if (aij <= kPivotEps) continue;
        const double t = b_(i) / aij;
        if (leave < 0 || t < ratio - kEps) {
          ratio = t;
          leave = i;
        } else if (t <= ratio + kEps && basis_[i] < basis_[leave]) {
          ratio = std::min(ratio, t);
          leave = i;
        }
      }
      if (leave < 0) return LpStatus::unbounded;

      if (ratio <= kEps) {
        if (++degenerate_run > kDegenerateRun) bland = true;
      } else {
        degenerate_run = 0;
        bland = false;
      }
      if (bland) ++bland_pivots;
      pivot(leave, enter, r, z);
      ++pivots;
    }
    return LpStatus::iteration_limit;
  }

  void pivot(int row, int col, Eigen::VectorXd& r, double& z) {
    const double p = a_(row, col);
    a_.row(row) /= p;
    b_(row) /= p;
    for (int i = 0; i < a_.rows(); ++i) {
      if (i == row) continue;
      const double f = a_(i, col);
      if (f == 0) continue;
      a_.row(i) -= f * a_.row(row);
      b_(i) -= f * b_(row);
      if (b_(i) < 0 && b_(i) > -1e-9) b_(i) = 0;
    }
    const double f = r(col);
    if (f != 0) {
      r -= f * a_.row(row).transpose();
      z += f * b_(row);
    }
    basis_[row] = col;
  }

  /// Pivots basic artificial columns (index >= first_artificial) out of the
  /// basis where possible; rows that are identically zero outside the
  /// artificial block are left with their artificial at level 0.
  void drive_out_artificials(int first_artificial) {
    Eigen::VectorXd dummy = Eigen::VectorXd::Zero(a_.cols());
    double z = 0;
    for (int i = 0; i < a_.rows(); ++i) {
      if (basis_[i] < first_artificial) continue;
      for (int j = 0; j < first_artificial; ++j) {
        if (std::abs(a_(i, j)) > kPivotEps) {
          pivot(i, j, dummy, z);
          break;
        }
      }
    }
  }

  const Matrix& a() const { return a_; }
  const Eigen::VectorXd& b() const { return b_; }
  const std::vector<int>& basis() const { return basis_; }

  static constexpr double kEps = 1e-10;
  static constexpr double kPivotEps = 1e-9;
  static constexpr int kDegenerateRun = 50;

 private:
  Matrix a_;
  Eigen::VectorXd b_;
  std::vector<int> basis_;
};

}  // namespace detail

inline LpResult solve_lp(const LinearProgram& lp, int max_pivots = 200000) {
  if (static_cast<int>(lp.objective.size()) != lp.num_vars)
    throw InvalidInput("objective length does not match variable count");
  const int m = static_cast<int>(lp.rows.size());
  const int nv = lp.num_vars;
  int n_slack = 0;
  for (const auto& row : lp.rows)
    if (row.sense != RowSense::equal) ++n_slack;

  // Columns: [structural | slack | artificial]. Rows are flipped so b >= 0;
  // a row whose slack ends up with +1 takes the slack as its initial basic
  // variable, every other row gets an artificial.
  std::vector<int> slack_col(m, -1);
  std::vector<double> sign(m, 1.0);
  std::vector<char> needs_artificial(m, 1);
  int s = nv;
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    if (row.rhs < 0) sign[i] = -1.0;
    if (row.sense != RowSense::equal) {
      slack_col[i] = s++;
      const double slack_coeff = (row.sense == RowSense::less_equal ? 1.0 : -1.0) * sign[i];
      if (slack_coeff > 0) needs_artificial[i] = 0;
    }
  }
  int n_art = 0;
  for (int i = 0; i < m; ++i) n_art += needs_artificial[i];
  const int first_art = nv + n_slack;
  const int n = first_art + n_art;

  detail::Tableau::Matrix a = detail::Tableau::Matrix::Zero(m, n);
  Eigen::VectorXd b(m);
  std::vector<int> basis(m);
  int art = first_art;
  for (int i = 0; i < m; ++i) {
    const auto& row = lp.rows[i];
    for (const auto& [j, v] : row.coeffs) {
      if (j < 0 || j >= nv) throw InvalidInput("LP row references an unknown variable");
      a(i, j) += sign[i] * v;
    }
    if (slack_col[i] >= 0)
      a(i, slack_col[i]) = (row.sense == RowSense::less_equal ? 1.0 : -1.0) * sign[i];
    b(i) = sign[i] * row.rhs;
    if (needs_artificial[i]) {
      a(i, art) = 1.0;
      basis[i] = art++;
    } else {
      basis[i] = slack_col[i];
    }
  }

  detail::Tableau tab(std::move(a), std::move(b), std::move(basis));
  LpResult res;
  std::vector<char> allowed(n, 1);
  if (n_art > 0) {
    Eigen::VectorXd phase1 = Eigen::VectorXd::Zero(n);
    for (int j = first_art; j < n; ++j) phase1(j) = 1.0;
    const auto st = tab.optimize(phase1, allowed, max_pivots, res.pivots, res.bland_pivots);
    if (st == LpStatus::iteration_limit) {
      res.status = st;
      return res;
    }
    double infeas = 0;
    for (int i = 0; i < m; ++i)
      if (tab.basis()[i] >= first_art) infeas += tab.b()(i);
    if (infeas > 1e-9) {
      res.status = LpStatus::infeasible;
      return res;
    }
    tab.drive_out_artificials(first_art);
    for (int j = first_art; j < n; ++j) allowed[j] = 0;
  }
  Eigen::VectorXd cost = Eigen::VectorXd::Zero(n);
  for (int j = 0; j < nv; ++j) cost(j) = lp.objective[j];
  res.status = tab.optimize(cost, allowed, max_pivots, res.pivots, res.bland_pivots);
  res.x.assign(nv, 0.0);
  for (int i = 0; i < m; ++i)
    if (tab.basis()[i] < nv) res.x[tab.basis()[i]] = tab.b()(i);
  res.value = 0;
  for (int j = 0; j < nv; ++j) res.value += lp.objective[j] * res.x[j];
  return res;
}

}  // namespace ulam
