#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <vector>

#include <Eigen/Core>

namespace coflow {

enum class ConstraintSense { kLessEqual, kGreaterEqual, kEqual };

/// minimize c'x  subject to  A.row(r) x (<=|>=|=) b[r],  x >= 0.
template <typename Scalar>
struct LinearProgram {
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  using Vector = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;

  Matrix constraints;
  Vector rhs;
  Vector cost;
  std::vector<ConstraintSense> sense;

  Eigen::Index num_variables() const { return constraints.cols(); }
  Eigen::Index num_constraints() const { return constraints.rows(); }
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit };

template <typename Scalar>
struct LpSolution {
  LpStatus status = LpStatus::kInfeasible;
  Scalar objective = Scalar(0);
  Eigen::Matrix<Scalar, Eigen::Dynamic, 1> x;
  std::size_t pivots = 0;
};

struct SimplexOptions {
  double pivot_tolerance = 1e-9;
  double feasibility_tolerance = 1e-7;
  std::size_t max_pivots = 1'000'000;
};

namespace detail {

// Dense two-phase tableau simplex with Bland's smallest-index rule.
template <typename Scalar>
class Tableau {
 public:
  using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
  using RowVector = Eigen::Matrix<Scalar, 1, Eigen::Dynamic>;

  Tableau(const LinearProgram<Scalar>& lp, const SimplexOptions& options)
      : options_(options), rows_(lp.num_constraints()), structural_(lp.num_variables()) {
    Eigen::Index slacks = 0;
    Eigen::Index artificials = 0;
    std::vector<ConstraintSense> sense(lp.sense);
    std::vector<bool> flip(static_cast<std::size_t>(rows_), false);
    for (Eigen::Index r = 0; r < rows_; ++r) {
      auto& s = sense[static_cast<std::size_t>(r)];
      if (lp.rhs[r] < Scalar(0)) {
        flip[static_cast<std::size_t>(r)] = true;
        if (s == ConstraintSense::kLessEqual) {
          s = ConstraintSense::kGreaterEqual;
        } else if (s == ConstraintSense::kGreaterEqual) {
          s = ConstraintSense::kLessEqual;
        }
      }
      if (s != ConstraintSense::kEqual) ++slacks;
      if (s != ConstraintSense::kLessEqual) ++artificials;
    }
    first_artificial_ = structural_ + slacks;
    cols_ = first_artificial_ + artificials;
    table_ = Matrix::Zero(rows_ + 1, cols_ + 1);
    basis_.assign(static_cast<std::size_t>(rows_), -1);

    Eigen::Index next_slack = structural_;
    Eigen::Index next_artificial = first_artificial_;
    for (Eigen::Index r = 0; r < rows_; ++r) {
      const Scalar sign = flip[static_cast<std::size_t>(r)] ? Scalar(-1) : Scalar(1);
      table_.row(r).head(structural_) = sign * lp.constraints.row(r);
      table_(r, cols_) = sign * lp.rhs[r];
      switch (sense[static_cast<std::size_t>(r)]) {
        case ConstraintSense::kLessEqual:
          table_(r, next_slack) = Scalar(1);
          basis_[static_cast<std::size_t>(r)] = next_slack++;
          break;
        case ConstraintSense::kGreaterEqual:
          table_(r, next_slack++) = Scalar(-1);
          table_(r, next_artificial) = Scalar(1);
          basis_[static_cast<std::size_t>(r)] = next_artificial++;
          break;
        case ConstraintSense::kEqual:
          table_(r, next_artificial) = Scalar(1);
          basis_[static_cast<std::size_t>(r)] = next_artificial++;
          break;
      }
    }
    active_row_.assign(static_cast<std::size_t>(rows_), true);
  }

  LpSolution<Scalar> solve(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& cost) {
    LpSolution<Scalar> solution;

    // Phase 1: minimize the sum of artificials.
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> phase1 = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(cols_);
    phase1.tail(cols_ - first_artificial_).setOnes();
    load_objective(phase1);
    LpStatus status = iterate(cols_, solution.pivots);
    if (status == LpStatus::kIterationLimit) {
      solution.status = status;
      return solution;
    }
    if (-table_(rows_, cols_) > Scalar(options_.feasibility_tolerance)) {
      solution.status = LpStatus::kInfeasible;
      return solution;
    }
    drive_out_artificials(solution.pivots);

    // Phase 2 on the original cost; artificial columns may no longer enter.
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> phase2 = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(cols_);
    phase2.head(structural_) = cost;
    load_objective(phase2);
    status = iterate(first_artificial_, solution.pivots);
    solution.status = status;
    if (status != LpStatus::kOptimal) return solution;

    solution.x = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>::Zero(structural_);
    for (Eigen::Index r = 0; r < rows_; ++r) {
      const Eigen::Index b = basis_[static_cast<std::size_t>(r)];
      if (active_row_[static_cast<std::size_t>(r)] && b < structural_) solution.x[b] = table_(r, cols_);
    }
    solution.objective = cost.dot(solution.x);
    return solution;
  }

 private:
  void load_objective(const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>& cost) {
    table_.row(rows_).setZero();
    table_.row(rows_).head(cols_) = cost.transpose();
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (!active_row_[static_cast<std::size_t>(r)]) continue;
      const Scalar cb = cost[basis_[static_cast<std::size_t>(r)]];
      if (cb != Scalar(0)) table_.row(rows_) -= cb * table_.row(r);
    }
  }

  // Runs pivots until optimal; only columns < `enter_limit` may enter.
  LpStatus iterate(Eigen::Index enter_limit, std::size_t& pivots) {
    const Scalar eps(options_.pivot_tolerance);
    while (true) {
      Eigen::Index entering = -1;
      for (Eigen::Index j = 0; j < enter_limit; ++j) {
        if (table_(rows_, j) < -eps) {
          entering = j;
          break;
        }
      }
      if (entering < 0) return LpStatus::kOptimal;

      Eigen::Index leaving = -1;
      Scalar best_ratio = std::numeric_limits<Scalar>::infinity();
      for (Eigen::Index r = 0; r < rows_; ++r) {
        if (!active_row_[static_cast<std::size_t>(r)]) continue;
        const Scalar a = table_(r, entering);
        if (a <= eps) continue;
        const Scalar ratio = table_(r, cols_) / a;
        if (ratio < best_ratio ||
            (ratio == best_ratio && basis_[static_cast<std::size_t>(r)] <
                                        basis_[static_cast<std::size_t>(leaving)])) {
          best_ratio = ratio;
          leaving = r;
        }
      }
      if (leaving < 0) return LpStatus::kUnbounded;
      if (pivots >= options_.max_pivots) return LpStatus::kIterationLimit;
      pivot(leaving, entering);
      ++pivots;
    }
  }

  void pivot(Eigen::Index row, Eigen::Index col) {
    table_.row(row) /= table_(row, col);
    const RowVector pivot_row = table_.row(row);
    for (Eigen::Index r = 0; r <= rows_; ++r) {
      if (r == row) continue;
      const Scalar factor = table_(r, col);
      if (factor != Scalar(0)) table_.row(r) -= factor * pivot_row;
    }
    basis_[static_cast<std::size_t>(row)] = col;
  }

  void drive_out_artificials(std::size_t& pivots) {
    const Scalar eps(options_.pivot_tolerance);
    for (Eigen::Index r = 0; r < rows_; ++r) {
      if (basis_[static_cast<std::size_t>(r)] < first_artificial_) continue;
      Eigen::Index replacement = -1;
      for (Eigen::Index j = 0; j < first_artificial_; ++j) {
        if (std::abs(table_(r, j)) > eps) {
          replacement = j;
          break;
        }
      }
      if (replacement >= 0) {
        pivot(r, replacement);
        ++pivots;
      } else {
        active_row_[static_cast<std::size_t>(r)] = false;  // redundant constraint
      }
    }
  }

  SimplexOptions options_;
  Eigen::Index rows_;
  Eigen::Index structural_;
  Eigen::Index first_artificial_ = 0;
  Eigen::Index cols_ = 0;
  Matrix table_;
  std::vector<Eigen::Index> basis_;
  std::vector<bool> active_row_;
};

}  // namespace detail

/// Exact (up to floating point) optimum of a small dense LP.
template <typename Scalar>
LpSolution<Scalar> solve_lp(const LinearProgram<Scalar>& lp, const SimplexOptions& options = {}) {
  detail::Tableau<Scalar> tableau(lp, options);
  return tableau.solve(lp.cost);
}

}  // namespace coflow
