#include "coflow/workloads.hpp"

#include <fstream>
#include <map>
#include <sstream>

namespace coflow {

namespace {

class LineError {
 public:
  LineError(std::string source, std::size_t line) : source_(std::move(source)), line_(line) {}
  [[noreturn]] void fail(const std::string& what) const {
    throw ValidationError(source_ + ":" + std::to_string(line_) + ": " + what);
  }

 private:
  std::string source_;
  std::size_t line_;
};

template <typename T>
T next_token(std::istringstream& in, const LineError& err, const char* what) {
  std::string token;
  if (!(in >> token)) err.fail(std::string("missing ") + what);
  std::istringstream parse(token);
  T value{};
  if (!(parse >> value) || !parse.eof()) err.fail(std::string("malformed ") + what + " '" + token + "'");
  return value;
}

}  // namespace

Instance parse_trace(std::istream& in, const TraceOptions& options, const std::string& source_name) {
  if (!(options.capacity_mbps > 0.0)) throw ValidationError("trace capacity must be positive");

  std::string line;
  std::size_t line_no = 0;
  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++line_no;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw ValidationError(source_name + ": empty trace");
  std::istringstream header(line);
  const LineError header_err(source_name, line_no);
  const auto num_ports = next_token<long long>(header, header_err, "port count");
  const auto num_coflows = next_token<long long>(header, header_err, "coflow count");
  std::string extra;
  if (header >> extra) header_err.fail("unexpected token '" + extra + "' in header");
  if (num_ports < 1) header_err.fail("port count must be positive");
  if (num_coflows < 0) header_err.fail("coflow count must be nonnegative");

  Instance instance;
  instance.switch_config = SwitchConfig::uniform(static_cast<int>(num_ports), options.capacity_mbps);
  instance.metadata = {{"generator", "trace"}, {"source", source_name}};

  const auto wanted = options.first ? std::min<long long>(num_coflows, static_cast<long long>(*options.first))
                                    : num_coflows;
  for (long long c = 0; c < wanted; ++c) {
    if (!next_line()) {
      throw ValidationError(source_name + ": header announces " + std::to_string(num_coflows) +
                            " coflows but the file ends after " + std::to_string(c));
    }
    std::istringstream tokens(line);
    const LineError err(source_name, line_no);

    CoflowSpec coflow;
    coflow.id = next_token<int>(tokens, err, "coflow id");
    const auto arrival_ms = next_token<double>(tokens, err, "arrival time");
    if (!(arrival_ms >= 0.0)) err.fail("arrival time must be nonnegative");
    coflow.release_time = arrival_ms / 1000.0;
    coflow.weight = 1.0;

    const auto mappers = next_token<long long>(tokens, err, "mapper count");
    if (mappers < 1) err.fail("mapper count must be positive");
    std::vector<int> mapper_ports;
    for (long long i = 0; i < mappers; ++i) {
      const auto port = next_token<long long>(tokens, err, "mapper location");
      if (port < 0 || port >= num_ports) {
        err.fail("mapper location " + std::to_string(port) + " outside [0, " + std::to_string(num_ports) + ")");
      }
      mapper_ports.push_back(static_cast<int>(port));
    }

    const auto reducers = next_token<long long>(tokens, err, "reducer count");
    if (reducers < 1) err.fail("reducer count must be positive");
    std::map<std::pair<int, int>, double> volume;
    for (long long r = 0; r < reducers; ++r) {
      std::string token;
      if (!(tokens >> token)) err.fail("missing reducer entry");
      const auto colon = token.find(':');
      if (colon == std::string::npos) err.fail("reducer entry '" + token + "' is not <location>:<MB>");
      std::istringstream loc_in(token.substr(0, colon));
      std::istringstream mb_in(token.substr(colon + 1));
      long long port = 0;
      double mb = 0.0;
      if (!(loc_in >> port) || !loc_in.eof() || !(mb_in >> mb) || !mb_in.eof()) {
        err.fail("reducer entry '" + token + "' is not <location>:<MB>");
      }
      if (port < 0 || port >= num_ports) {
        err.fail("reducer location " + std::to_string(port) + " outside [0, " + std::to_string(num_ports) + ")");
      }
      if (!(mb > 0.0)) err.fail("shuffle size must be positive in '" + token + "'");
      const double share = mb / static_cast<double>(mappers);
      for (int mapper : mapper_ports) volume[{mapper, static_cast<int>(port)}] += share;
    }
    if (tokens >> extra) err.fail("unexpected trailing token '" + extra + "'");

    for (const auto& [pair, demand] : volume) coflow.flows.push_back({pair.first, pair.second, demand});
    instance.coflows.push_back(std::move(coflow));
  }

  if (!options.first && next_line()) {
    throw ValidationError(source_name + ":" + std::to_string(line_no) + ": more coflow lines than the " +
                          std::to_string(num_coflows) + " announced in the header");
  }

  try {
    return validate_instance(std::move(instance));
  } catch (const ValidationError& e) {
    throw ValidationError(source_name + ": " + e.what());
  }
}

Instance import_trace(const std::filesystem::path& path, const TraceOptions& options) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open trace file " + path.string());
  return parse_trace(in, options, path.string());
}

}  // namespace coflow
