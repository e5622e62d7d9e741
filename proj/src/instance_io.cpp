#include "coflow/instance_io.hpp"

#include <fstream>
#include <initializer_list>
#include <sstream>

namespace coflow {

using nlohmann::json;

namespace {

void reject_unknown(const json& object, std::initializer_list<const char*> allowed,
                    const std::string& path) {
  if (!object.is_object()) throw ValidationError(path + ": expected an object");
  for (const auto& item : object.items()) {
    bool known = false;
    for (const char* name : allowed) known = known || item.key() == name;
    if (!known) throw ValidationError(path + ": unknown field '" + item.key() + "'");
  }
}

const json& require(const json& object, const char* key, const std::string& path) {
  auto it = object.find(key);
  if (it == object.end()) throw ValidationError(path + ": missing field '" + key + "'");
  return *it;
}

double number(const json& value, const std::string& path) {
  if (!value.is_number()) throw ValidationError(path + ": expected a number");
  return value.get<double>();
}

int integer(const json& value, const std::string& path) {
  if (!value.is_number_integer()) throw ValidationError(path + ": expected an integer");
  return value.get<int>();
}

Vector capacities(const json& value, const std::string& path) {
  if (!value.is_array()) throw ValidationError(path + ": expected an array");
  Vector out(static_cast<Eigen::Index>(value.size()));
  for (std::size_t i = 0; i < value.size(); ++i) {
    out[static_cast<Eigen::Index>(i)] = number(value[i], path + "[" + std::to_string(i) + "]");
  }
  return out;
}

json to_array(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

}  // namespace

json instance_to_json(const Instance& instance) {
  json doc;
  doc["switch"] = {{"input_capacities", to_array(instance.switch_config.input_capacities)},
                   {"output_capacities", to_array(instance.switch_config.output_capacities)}};
  json coflows = json::array();
  for (const auto& coflow : instance.coflows) {
    json flows = json::array();
    for (const auto& flow : coflow.flows) {
      flows.push_back({{"in", flow.input_port}, {"out", flow.output_port}, {"demand", flow.demand}});
    }
    coflows.push_back({{"id", coflow.id},
                       {"weight", coflow.weight},
                       {"release_time", coflow.release_time},
                       {"flows", std::move(flows)}});
  }
  doc["coflows"] = std::move(coflows);
  doc["kind"] = to_string(instance.kind);
  if (!instance.metadata.empty()) doc["metadata"] = instance.metadata;
  return doc;
}

Instance instance_from_json(const json& doc) {
  reject_unknown(doc, {"switch", "coflows", "kind", "metadata"}, "$");
  Instance instance;

  const json& sw = require(doc, "switch", "$");
  reject_unknown(sw, {"input_capacities", "output_capacities"}, "$.switch");
  instance.switch_config.input_capacities =
      capacities(require(sw, "input_capacities", "$.switch"), "$.switch.input_capacities");
  instance.switch_config.output_capacities =
      capacities(require(sw, "output_capacities", "$.switch"), "$.switch.output_capacities");

  const json& kind = require(doc, "kind", "$");
  if (!kind.is_string()) throw ValidationError("$.kind: expected a string");
  instance.kind = instance_kind_from_string(kind.get<std::string>());

  if (auto meta = doc.find("metadata"); meta != doc.end()) {
    if (!meta->is_object()) throw ValidationError("$.metadata: expected an object");
    for (const auto& item : meta->items()) {
      if (!item.value().is_string()) {
        throw ValidationError("$.metadata." + item.key() + ": expected a string");
      }
      instance.metadata[item.key()] = item.value().get<std::string>();
    }
  }

  const json& coflows = require(doc, "coflows", "$");
  if (!coflows.is_array()) throw ValidationError("$.coflows: expected an array");
  for (std::size_t k = 0; k < coflows.size(); ++k) {
    const std::string path = "$.coflows[" + std::to_string(k) + "]";
    const json& c = coflows[k];
    reject_unknown(c, {"id", "weight", "release_time", "flows"}, path);
    CoflowSpec coflow;
    coflow.id = integer(require(c, "id", path), path + ".id");
    coflow.weight = number(require(c, "weight", path), path + ".weight");
    coflow.release_time = number(require(c, "release_time", path), path + ".release_time");
    const json& flows = require(c, "flows", path);
    if (!flows.is_array()) throw ValidationError(path + ".flows: expected an array");
    for (std::size_t f = 0; f < flows.size(); ++f) {
      const std::string fpath = path + ".flows[" + std::to_string(f) + "]";
      reject_unknown(flows[f], {"in", "out", "demand"}, fpath);
      FlowSpec flow;
      flow.input_port = integer(require(flows[f], "in", fpath), fpath + ".in");
      flow.output_port = integer(require(flows[f], "out", fpath), fpath + ".out");
      flow.demand = number(require(flows[f], "demand", fpath), fpath + ".demand");
      coflow.flows.push_back(flow);
    }
    instance.coflows.push_back(std::move(coflow));
  }
  return validate_instance(std::move(instance));
}

Instance parse_instance(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("instance parse error: ") + e.what());
  }
  return instance_from_json(doc);
}

std::string dump_instance(const Instance& instance) {
  return instance_to_json(instance).dump(2) + "\n";
}

Instance read_instance(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open instance file " + path.string());
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return parse_instance(buffer.str());
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
}

void write_instance(const Instance& instance, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot write instance file " + path.string());
  out << dump_instance(instance);
}

}  // namespace coflow
