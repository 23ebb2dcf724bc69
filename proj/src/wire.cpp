#include "dqlstm/wire.hpp"

#include <json.hpp>

#include "dqlstm/error.hpp"

namespace dqlstm::wire {

namespace {

using Json = nlohmann::ordered_json;

Json parse(std::string_view frame) {
  try {
    Json j = Json::parse(frame);
    if (!j.is_object()) throw ProtocolError("frame is not a JSON object");
    return j;
  } catch (const Json::exception& e) {
    throw ProtocolError(std::string("malformed JSON: ") + e.what());
  }
}

const Json& field(const Json& j, const char* name) {
  const auto it = j.find(name);
  if (it == j.end()) throw ProtocolError(std::string("missing field '") + name + "'");
  return *it;
}

std::int64_t integer(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_number_integer()) throw ProtocolError(std::string("field '") + name + "' is not an integer");
  return v.get<std::int64_t>();
}

std::uint64_t unsigned_integer(const Json& j, const char* name) {
  const std::int64_t v = integer(j, name);
  if (v < 0) throw ProtocolError(std::string("field '") + name + "' is negative");
  return static_cast<std::uint64_t>(v);
}

std::string string_field(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_string()) throw ProtocolError(std::string("field '") + name + "' is not a string");
  return v.get<std::string>();
}

std::vector<double> numbers(const Json& j, const char* name) {
  const Json& v = field(j, name);
  if (!v.is_array()) throw ProtocolError(std::string("field '") + name + "' is not an array");
  std::vector<double> out;
  out.reserve(v.size());
  for (const Json& x : v) {
    if (!x.is_number()) throw ProtocolError(std::string("field '") + name + "' holds a non-number");
    out.push_back(x.get<double>());
  }
  return out;
}

int small_int(const Json& j, const char* name) {
  const std::int64_t v = integer(j, name);
  if (v < -1'000'000 || v > 1'000'000) throw ProtocolError(std::string("field '") + name + "' out of range");
  return static_cast<int>(v);
}

}  // namespace

std::string encode_request(const dispatch::JobRequest& job) {
  Json j;
  j["job_id"] = job.job_id;
  j["kind"] = dispatch::to_string(job.kind);
  j["num_qubits"] = job.config.num_qubits;
  j["depth"] = job.config.depth;
  j["input_dim"] = job.config.input_dim;
  j["output_dim"] = job.config.output_dim;
  j["hadamard"] = job.config.hadamard_layer;
  j["params"] = job.params;
  j["features"] = job.features;
  return j.dump();
}

std::string encode_response(const dispatch::JobResult& result) {
  Json j;
  j["job_id"] = result.job_id;
  j["status"] = result.ok ? "ok" : "error";
  j["payload"] = result.payload.data();
  j["rows"] = result.payload.rows();
  j["cols"] = result.payload.cols();
  j["message"] = result.message;
  return j.dump();
}

dispatch::JobRequest decode_request(std::string_view frame) {
  const Json j = parse(frame);
  dispatch::JobRequest job;
  job.job_id = unsigned_integer(j, "job_id");
  try {
    job.kind = dispatch::job_kind_from_string(string_field(j, "kind"));
  } catch (const ValidationError& e) {
    throw ProtocolError(e.what());
  }
  job.config.num_qubits = small_int(j, "num_qubits");
  job.config.depth = small_int(j, "depth");
  job.config.input_dim = small_int(j, "input_dim");
  job.config.output_dim = small_int(j, "output_dim");
  const Json& hadamard = field(j, "hadamard");
  if (!hadamard.is_boolean()) throw ProtocolError("field 'hadamard' is not a boolean");
  job.config.hadamard_layer = hadamard.get<bool>();
  job.params = numbers(j, "params");
  job.features = numbers(j, "features");
  return job;
}

dispatch::JobResult decode_response(std::string_view frame) {
  const Json j = parse(frame);
  dispatch::JobResult result;
  result.job_id = unsigned_integer(j, "job_id");
  const std::string status = string_field(j, "status");
  if (status != "ok" && status != "error") throw ProtocolError("unknown status '" + status + "'");
  result.ok = status == "ok";
  result.message = string_field(j, "message");
  const auto rows = unsigned_integer(j, "rows");
  const auto cols = unsigned_integer(j, "cols");
  auto payload = numbers(j, "payload");
  if (payload.size() != rows * cols) throw ProtocolError("payload size does not match rows x cols");
  result.payload = Matrix(rows, cols, std::move(payload));
  return result;
}

}  // namespace dqlstm::wire
