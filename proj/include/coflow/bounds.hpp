#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "coflow/engine.hpp"
#include "coflow/model.hpp"

namespace coflow {

// ---------------------------------------------------------------------------
// Dual certificate built from a run on the 4p speed-up switch.
//
// On a segment where the indicator set is constant, with n_k the number of
// unfinished flows of coflow k (1 once k is done):
//   gamma_ijk = w_k / n_k            for every unfinished flow of k, else 0
//   theta_i   = 1/(4 c_in[i])  * sum_{j,k} gamma_ijk
//   phi_j     = 1/(4 c_out[j]) * sum_{i,k} gamma_ijk
//   alpha_k   = w_k * T_k   (integral of w_k over [0, T_k))
// Capacities are those of the original switch, not the sped-up one.
// ---------------------------------------------------------------------------

struct CertificateFlow {
  FlowKey key;
  std::size_t coflow_index = 0;
  double demand = 0.0;
};

struct CertificateSegment {
  double t_start = 0.0;
  double t_end = 0.0;
  Vector theta;  // per input port
  Vector phi;    // per output port
  // gamma value shared by every unfinished flow of coflow k (instance order).
  Vector gamma_per_coflow;
  std::vector<std::uint32_t> unfinished;  // indices into DualCertificate::flows

  double length() const { return t_end - t_start; }
};

struct Violation {
  std::string family;  // "alpha" (per-coflow constraint) or "gamma" (per-flow constraint)
  FlowKey key;         // port fields are -1 for the per-coflow family
  double time = 0.0;
  double slack = 0.0;  // relative: (rhs - lhs) / max(1, |rhs|)
};

struct FeasibilityReport {
  bool feasible = true;
  // Worst relative slack of each constraint family; +inf when vacuous.
  double worst_slack_alpha = std::numeric_limits<double>::infinity();
  double worst_slack_gamma = std::numeric_limits<double>::infinity();
  std::size_t checks = 0;
  std::vector<Violation> violations;  // capped at 100 entries
};

struct DualCertificate {
  int p = 1;
  Vector alpha;  // per coflow, instance order
  std::vector<CertificateFlow> flows;
  std::vector<CertificateSegment> segments;
  double objective = 0.0;
  double j_aug = 0.0;
  std::optional<FeasibilityReport> feasibility;  // set by check_dual_feasibility

  /// gamma of `flow` on `segment` (zero once the flow is finished).
  double gamma(std::size_t segment, std::uint32_t flow) const;
};

/// Needs a result of the `augmented` scheduler run at capacity multiplier 4p
/// with at least indicator-level timeline detail.
DualCertificate build_dual_certificate(const SimulationResult& aug_result, const Instance& instance,
                                       int p);

/// Checks both dual constraint families at both ends of every segment with
/// t >= R_k. Both sides are piecewise linear between events, so endpoints
/// suffice. Stores the report in `cert` and returns a copy.
FeasibilityReport check_dual_feasibility(DualCertificate& cert, const Instance& instance,
                                         double tolerance = 1e-9);

/// The certified lower bound on the optimal weighted completion time.
/// Throws InvariantViolation unless the certificate was checked and feasible.
double dual_objective_lower_bound(const DualCertificate& cert);

/// Augmented run + certificate + feasibility check in one call.
DualCertificate certify_instance(const Instance& instance, double tolerance = 1e-9);

nlohmann::json certificate_report_json(const DualCertificate& cert);

// ---------------------------------------------------------------------------
// Time-slotted fractional LP. Slot t = 1..H covers [(t-1)D, tD); coflow k may
// use slot t when (t-1)D >= R_k. Variables: rate x_ijkt of each flow in each
// usable slot, and f_kt, the fraction of k finishing in slot t.
//   minimize   sum_k w_k sum_t (t D) f_kt
//   s.t.       sum_{s<=t} f_ks <= sum_{s<=t} x_ijks D / d_ijk    every flow, slot
//              sum_t f_kt >= 1                                    every coflow
//              port loads of x <= capacities                      every port, slot
// ---------------------------------------------------------------------------

struct FlpProblem {
  double slot_length = 1.0;
  int horizon = 1;
  std::size_t num_variables = 0;
  std::size_t num_constraints = 0;
};

struct FlpSolution {
  double optimum = 0.0;
  FlpProblem problem;
  // x[flow][slot-1] (0 for unusable slots) and f[coflow][slot-1].
  Eigen::MatrixXd rates;
  Eigen::MatrixXd fractions;
  std::size_t pivots = 0;
};

inline constexpr std::size_t kFlpVariableLimit = 20000;

/// Throws ValidationError if the LP exceeds kFlpVariableLimit variables, a
/// release is off the slot grid, or the horizon is too short to serve every
/// demand; InvariantViolation if the pivot cap is hit.
FlpSolution solve_flp(const Instance& instance, double slot_length, int horizon_slots);

/// A horizon that always admits full service: slots up to the last release
/// plus enough to push all demand through the slowest port sequentially.
int sufficient_flp_horizon(const Instance& instance, double slot_length);

// ---------------------------------------------------------------------------
// Combinatorial bounds.
// ---------------------------------------------------------------------------

/// Max over ports of the single-machine optimum (Smith's rule) where each
/// coflow's job length is its total load on that port divided by capacity.
/// Only for instances whose releases are all zero.
double smith_port_lower_bound(const Instance& instance);

struct CosOptimum {
  double value = 0.0;
  std::vector<int> order;  // coflow ids, first served first
};

inline constexpr std::size_t kCosBruteForceLimit = 9;

/// Exhaustive search over coflow permutations of a concurrent-open-shop
/// instance with zero releases. Assumes (as is known for this problem) that
/// some permutation schedule is optimal.
CosOptimum cos_brute_force_opt(const Instance& instance);

}  // namespace coflow
