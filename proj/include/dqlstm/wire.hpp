#pragma once

// Newline-delimited JSON frames exchanged between a WorkerPool and a remote
// worker. One object per line, no embedded newlines.
//
// request:  {"job_id","kind","num_qubits","depth","input_dim","output_dim",
//            "hadamard","params":[...],"features":[...]}
// response: {"job_id","status","payload":[...],"rows","cols","message"}
//
// kind is one of "evaluate", "param_shift_gradient", "input_jacobian"; status is
// "ok" or "error". Doubles are written in shortest round-trip form, so a decoded
// payload is bit-identical to the worker's result.

#include <string>
#include <string_view>

#include "dqlstm/dispatch.hpp"

namespace dqlstm::wire {

std::string encode_request(const dispatch::JobRequest& job);
std::string encode_response(const dispatch::JobResult& result);

/// Throws ProtocolError on malformed frames.
dispatch::JobRequest decode_request(std::string_view frame);
dispatch::JobResult decode_response(std::string_view frame);

}  // namespace dqlstm::wire
