#include "coflow/engine.hpp"

#include <cmath>

namespace coflow {

using nlohmann::json;

namespace {

std::string to_string(TimelineDetail detail) {
  switch (detail) {
    case TimelineDetail::kNone:
      return "none";
    case TimelineDetail::kIndicators:
      return "indicators";
    case TimelineDetail::kFull:
      return "full";
  }
  return "none";
}

json key_json(const FlowKey& key) {
  return {{"coflow", key.coflow}, {"in", key.input_port}, {"out", key.output_port}};
}

}  // namespace

json result_to_json(const SimulationResult& result, bool include_timeline) {
  json doc;
  doc["algorithm"] = result.algorithm;
  doc["mode"] = to_string(result.mode);
  doc["capacity_multiplier"] = result.capacity_multiplier;
  doc["weighted_total"] = result.weighted_total;
  // JSON has no infinity; an empty run reports null.
  doc["feasibility_margin"] =
      std::isfinite(result.feasibility_margin) ? json(result.feasibility_margin) : json(nullptr);
  doc["num_events"] = result.num_events;
  doc["makespan"] = result.makespan();

  json coflows = json::array();
  for (std::size_t k = 0; k < result.coflow_ids.size(); ++k) {
    coflows.push_back({{"id", result.coflow_ids[k]},
                       {"completion", result.coflow_completion[static_cast<Eigen::Index>(k)]}});
  }
  doc["coflows"] = std::move(coflows);

  if (include_timeline) {
    json flows = json::array();
    for (const auto& rec : result.flows) {
      json f = key_json(rec.key);
      f["demand"] = rec.demand;
      f["completion"] = rec.completion;
      flows.push_back(std::move(f));
    }
    doc["flows"] = std::move(flows);
    doc["timeline_detail"] = to_string(result.detail);
    json timeline = json::array();
    for (const auto& seg : result.timeline) {
      json s{{"t_start", seg.t_start}, {"t_end", seg.t_end}, {"unfinished", seg.unfinished}};
      json rates = json::array();
      for (const auto& r : seg.rates) rates.push_back({{"flow", r.flow}, {"rate", r.rate}});
      s["rates"] = std::move(rates);
      timeline.push_back(std::move(s));
    }
    doc["timeline"] = std::move(timeline);
  }
  return doc;
}

}  // namespace coflow
