#include "coflow/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "coflow/schedulers.hpp"

namespace coflow {

namespace {

constexpr std::size_t kMaxReportedViolations = 100;

double relative_slack(double lhs, double rhs) { return (rhs - lhs) / std::max(1.0, std::abs(rhs)); }

void record(FeasibilityReport& report, double& worst, double slack, double tolerance,
            const char* family, const FlowKey& key, double t) {
  ++report.checks;
  worst = std::min(worst, slack);
  if (slack < -tolerance) {
    report.feasible = false;
    if (report.violations.size() < kMaxReportedViolations) {
      report.violations.push_back({family, key, t, slack});
    }
  }
}

}  // namespace

double DualCertificate::gamma(std::size_t segment, std::uint32_t flow) const {
  const auto& seg = segments.at(segment);
  if (!std::binary_search(seg.unfinished.begin(), seg.unfinished.end(), flow)) return 0.0;
  return seg.gamma_per_coflow[static_cast<Eigen::Index>(flows.at(flow).coflow_index)];
}

DualCertificate build_dual_certificate(const SimulationResult& aug_result, const Instance& instance,
                                       int p) {
  if (aug_result.algorithm != "augmented") {
    throw ValidationError("dual certificate needs an augmented run, got '" + aug_result.algorithm + "'");
  }
  if (std::abs(aug_result.capacity_multiplier - 4.0 * p) > 1e-12 * 4.0 * p) {
    std::ostringstream msg;
    msg << "dual certificate needs capacity multiplier 4p = " << 4 * p << ", run used "
        << aug_result.capacity_multiplier;
    throw ValidationError(msg.str());
  }
  if (!aug_result.flows.empty() && aug_result.detail == TimelineDetail::kNone) {
    throw ValidationError("dual certificate needs the run's timeline (simulate with timeline detail)");
  }
  if (aug_result.coflow_ids.size() != instance.coflows.size()) {
    throw ValidationError("augmented run does not belong to this instance");
  }

  const auto& sw = instance.switch_config;
  const auto n = static_cast<Eigen::Index>(instance.coflows.size());

  DualCertificate cert;
  cert.p = p;
  cert.j_aug = aug_result.weighted_total;
  cert.alpha = Vector::Zero(n);
  cert.flows.reserve(aug_result.flows.size());
  for (const auto& rec : aug_result.flows) cert.flows.push_back({rec.key, rec.coflow_index, rec.demand});

  Vector weights(n);
  for (Eigen::Index k = 0; k < n; ++k) weights[k] = instance.coflows[static_cast<std::size_t>(k)].weight;

  double theta_cost = 0.0;
  double phi_cost = 0.0;
  Eigen::VectorXi open(n);
  cert.segments.reserve(aug_result.timeline.size());
  for (const auto& seg : aug_result.timeline) {
    CertificateSegment cs;
    cs.t_start = seg.t_start;
    cs.t_end = seg.t_end;
    cs.unfinished = seg.unfinished;
    std::sort(cs.unfinished.begin(), cs.unfinished.end());

    open.setZero();
    for (auto f : cs.unfinished) ++open[static_cast<Eigen::Index>(cert.flows[f].coflow_index)];
    // n_k is taken as 1 for finished coflows; the indicator zeroes it anyway.
    cs.gamma_per_coflow = weights.array() / open.cast<double>().array().max(1.0);

    cs.theta = Vector::Zero(sw.num_input_ports());
    cs.phi = Vector::Zero(sw.num_output_ports());
    for (auto f : cs.unfinished) {
      const auto& flow = cert.flows[f];
      const double g = cs.gamma_per_coflow[static_cast<Eigen::Index>(flow.coflow_index)];
      cs.theta[flow.key.input_port] += g;
      cs.phi[flow.key.output_port] += g;
    }
    cs.theta.array() /= 4.0 * sw.input_capacities.array();
    cs.phi.array() /= 4.0 * sw.output_capacities.array();

    const double len = cs.length();
    for (Eigen::Index k = 0; k < n; ++k) {
      if (open[k] > 0) cert.alpha[k] += weights[k] * len;
    }
    theta_cost += len * sw.input_capacities.dot(cs.theta);
    phi_cost += len * sw.output_capacities.dot(cs.phi);
    cert.segments.push_back(std::move(cs));
  }
  cert.objective = cert.alpha.sum() - phi_cost - theta_cost;
  return cert;
}

FeasibilityReport check_dual_feasibility(DualCertificate& cert, const Instance& instance,
                                         double tolerance) {
  FeasibilityReport report;
  const auto n = instance.coflows.size();
  const std::size_t num_segments = cert.segments.size();
  if (cert.alpha.size() != static_cast<Eigen::Index>(n)) {
    throw ValidationError("certificate does not belong to this instance");
  }

  // Nonnegativity of every dual variable.
  for (const auto& seg : cert.segments) {
    if ((seg.theta.array() < 0).any() || (seg.phi.array() < 0).any() ||
        (seg.gamma_per_coflow.array() < 0).any()) {
      report.feasible = false;
      report.violations.push_back({"nonnegativity", {}, seg.t_start, -1.0});
    }
  }

  // Per-coflow family: alpha_k <= t w_k + sum_ij int_{s>=t} gamma_ijks ds, t >= R_k.
  std::vector<double> boundaries;
  boundaries.reserve(num_segments + 1);
  for (const auto& seg : cert.segments) boundaries.push_back(seg.t_start);
  if (num_segments > 0) boundaries.push_back(cert.segments.back().t_end);

  Eigen::MatrixXd rate_sum = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n),
                                                   static_cast<Eigen::Index>(num_segments));
  for (std::size_t s = 0; s < num_segments; ++s) {
    const auto& seg = cert.segments[s];
    for (auto f : seg.unfinished) {
      const auto k = static_cast<Eigen::Index>(cert.flows[f].coflow_index);
      rate_sum(k, static_cast<Eigen::Index>(s)) += seg.gamma_per_coflow[k];
    }
  }
  std::vector<double> suffix(num_segments + 1);
  for (std::size_t k = 0; k < n; ++k) {
    const auto& coflow = instance.coflows[k];
    const auto kk = static_cast<Eigen::Index>(k);
    suffix[num_segments] = 0.0;
    for (std::size_t s = num_segments; s-- > 0;) {
      suffix[s] = suffix[s + 1] + cert.segments[s].length() * rate_sum(kk, static_cast<Eigen::Index>(s));
    }
    const double release = coflow.release_time;
    const double tol_t = 1e-12 * std::max(1.0, release);
    const FlowKey key{coflow.id, -1, -1};
    for (std::size_t b = 0; b < boundaries.size(); ++b) {
      const double t = boundaries[b];
      if (t < release - tol_t) {
        // The release may fall strictly inside this segment.
        if (b + 1 < boundaries.size() && boundaries[b + 1] > release + tol_t) {
          const double g = suffix[b + 1] + (boundaries[b + 1] - release) * rate_sum(kk, static_cast<Eigen::Index>(b));
          const double rhs = release * coflow.weight + g;
          record(report, report.worst_slack_alpha, relative_slack(cert.alpha[kk], rhs), tolerance,
                 "alpha", key, release);
        }
        continue;
      }
      const double rhs = t * coflow.weight + suffix[b];
      record(report, report.worst_slack_alpha, relative_slack(cert.alpha[kk], rhs), tolerance,
             "alpha", key, t);
    }
  }

  // Per-flow family: int_{s>=t} gamma_ijks ds / d_ijk <= phi_jt + theta_it, t >= R_k.
  // Backward pass; `tail[f]` is the integral of gamma over [end of segment, inf).
  std::vector<double> tail(cert.flows.size(), 0.0);
  for (std::size_t s = num_segments; s-- > 0;) {
    const auto& seg = cert.segments[s];
    for (auto f : seg.unfinished) {
      const auto& flow = cert.flows[f];
      const auto& coflow = instance.coflows[flow.coflow_index];
      const double g = seg.gamma_per_coflow[static_cast<Eigen::Index>(flow.coflow_index)];
      const double rhs = seg.phi[flow.key.output_port] + seg.theta[flow.key.input_port];
      const double at_end = tail[f];
      const double at_start = at_end + seg.length() * g;
      const double release = coflow.release_time;
      const double tol_t = 1e-12 * std::max(1.0, release);
      if (seg.t_start >= release - tol_t) {
        record(report, report.worst_slack_gamma, relative_slack(at_start / flow.demand, rhs),
               tolerance, "gamma", flow.key, seg.t_start);
      } else if (seg.t_end > release + tol_t) {
        const double at_release = at_end + (seg.t_end - release) * g;
        record(report, report.worst_slack_gamma, relative_slack(at_release / flow.demand, rhs),
               tolerance, "gamma", flow.key, release);
      }
      if (seg.t_end >= release - tol_t) {
        record(report, report.worst_slack_gamma, relative_slack(at_end / flow.demand, rhs),
               tolerance, "gamma", flow.key, seg.t_end);
      }
      tail[f] = at_start;
    }
  }

  cert.feasibility = report;
  return report;
}

double dual_objective_lower_bound(const DualCertificate& cert) {
  if (!cert.feasibility) {
    throw InvariantViolation("dual certificate has not been checked for feasibility");
  }
  if (!cert.feasibility->feasible) {
    throw InvariantViolation("dual certificate is infeasible; it certifies no lower bound");
  }
  return cert.objective;
}

DualCertificate certify_instance(const Instance& instance, double tolerance) {
  if (instance.coflows.empty()) {
    DualCertificate cert;
    cert.feasibility = FeasibilityReport{};
    return cert;
  }
  const int p = compute_p(instance);
  const SimulationResult aug = run_algorithm(instance, "augmented", TimelineDetail::kIndicators);
  DualCertificate cert = build_dual_certificate(aug, instance, p);
  check_dual_feasibility(cert, instance, tolerance);
  return cert;
}

nlohmann::json certificate_report_json(const DualCertificate& cert) {
  using nlohmann::json;
  auto finite_or_null = [](double v) { return std::isfinite(v) ? json(v) : json(nullptr); };
  json doc;
  doc["objective"] = cert.objective;
  doc["j_aug"] = cert.j_aug;
  doc["p"] = cert.p;
  const bool checked = cert.feasibility.has_value();
  doc["feasible"] = checked && cert.feasibility->feasible;
  doc["worst_slack_14"] = checked ? finite_or_null(cert.feasibility->worst_slack_alpha) : json(nullptr);
  doc["worst_slack_15"] = checked ? finite_or_null(cert.feasibility->worst_slack_gamma) : json(nullptr);
  json violations = json::array();
  if (checked) {
    for (const auto& v : cert.feasibility->violations) {
      violations.push_back({{"family", v.family},
                            {"coflow", v.key.coflow},
                            {"in", v.key.input_port},
                            {"out", v.key.output_port},
                            {"t", v.time},
                            {"slack", v.slack}});
    }
  }
  doc["violations"] = std::move(violations);
  return doc;
}

}  // namespace coflow
