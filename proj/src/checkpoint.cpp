#include "dqlstm/checkpoint.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "dqlstm/error.hpp"

namespace dqlstm::checkpoint {

namespace {

std::string join_doubles(std::span<const double> values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) s += ' ';
    s += tasks::format_double(values[i]);
  }
  return s;
}

std::string join_ints(const std::vector<int>& values) {
  std::string s;
  for (std::size_t i = 0; i < values.size(); ++i) s += (i ? " " : "") + std::to_string(values[i]);
  return s;
}

using KeyValues = std::map<std::string, std::string>;

const std::string& require(const KeyValues& kv, const std::string& key) {
  const auto it = kv.find(key);
  if (it == kv.end()) throw ValidationError("checkpoint lacks key '" + key + "'");
  return it->second;
}

template <typename T>
T parse_number(const std::string& text, const std::string& key) {
  T value{};
  const auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw ValidationError("checkpoint key '" + key + "' holds '" + text + "'");
  }
  return value;
}

template <typename T>
std::vector<T> parse_list(const std::string& text, const std::string& key) {
  std::vector<T> out;
  std::istringstream in(text);
  std::string token;
  while (in >> token) out.push_back(parse_number<T>(token, key));
  return out;
}

}  // namespace

void ModelSpec::validate() const {
  if (input_dim < 1 || hidden_dim < 1) throw ValidationError("model dimensions must be >= 1");
  if (kind == ModelKind::Qlstm) {
    if (depth < 0) throw ValidationError("depth must be >= 0");
    plan.validate(input_dim, hidden_dim);
  }
}

std::vector<std::pair<std::string, std::size_t>> param_blocks(const ModelSpec& spec) {
  spec.validate();
  std::vector<std::pair<std::string, std::size_t>> blocks;
  const auto h = static_cast<std::size_t>(spec.hidden_dim);
  if (spec.kind == ModelKind::Qlstm) {
    for (auto g : qlstm::kGates) {
      for (std::size_t m = 0; m < spec.plan.num_partitions(); ++m) {
        const auto p = 2 * static_cast<std::size_t>(spec.plan.qubits[m]) * static_cast<std::size_t>(spec.depth);
        blocks.emplace_back(std::string("theta_") + qlstm::gate_name(g) + "." + std::to_string(m), p);
      }
    }
  } else {
    const auto d = static_cast<std::size_t>(spec.input_dim + spec.hidden_dim);
    for (auto g : qlstm::kGates) blocks.emplace_back(std::string("W_") + qlstm::gate_name(g), h * d);
    for (auto g : qlstm::kGates) blocks.emplace_back(std::string("b_") + qlstm::gate_name(g), h);
  }
  blocks.emplace_back("readout.weights", h);
  blocks.emplace_back("readout.bias", 1);
  return blocks;
}

void save(const std::string& path, const Checkpoint& ck) {
  const auto blocks = param_blocks(ck.model);
  std::size_t total = 0;
  for (const auto& b : blocks) total += b.second;
  if (total != ck.params.size()) throw ShapeError("checkpoint parameter count does not match the model");

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write checkpoint '" + path + "'");
  const bool quantum = ck.model.kind == ModelKind::Qlstm;
  out << "format = dqlstm-checkpoint\n";
  out << "version = " << kVersion << '\n';
  out << "seed = " << ck.seed << '\n';
  out << "model.kind = " << (quantum ? "qlstm" : "classical") << '\n';
  out << "model.input_dim = " << ck.model.input_dim << '\n';
  out << "model.hidden_dim = " << ck.model.hidden_dim << '\n';
  out << "model.depth = " << ck.model.depth << '\n';
  out << "model.hadamard = " << (ck.model.hadamard ? 1 : 0) << '\n';
  if (quantum) {
    out << "plan.input_splits = " << join_ints(ck.model.plan.input_splits) << '\n';
    out << "plan.output_splits = " << join_ints(ck.model.plan.output_splits) << '\n';
    out << "plan.qubits = " << join_ints(ck.model.plan.qubits) << '\n';
  }
  out << "data.task = " << ck.data.task << '\n';
  out << "data.column = " << ck.data.column << '\n';
  out << "data.window = " << ck.data.window << '\n';
  out << "data.split = " << ck.data.split << '\n';
  out << "data.sequence_length = " << ck.data.sequence_length << '\n';
  out << "data.normalization = " << tasks::to_string(ck.data.normalization.mode) << '\n';
  out << "data.norm_first = " << tasks::format_double(ck.data.normalization.first) << '\n';
  out << "data.norm_second = " << tasks::format_double(ck.data.normalization.second) << '\n';
  std::size_t off = 0;
  for (const auto& [name, size] : blocks) {
    out << "params." << name << " = " << join_doubles(std::span(ck.params).subspan(off, size)) << '\n';
    off += size;
  }
}

Checkpoint load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open checkpoint '" + path + "'");
  KeyValues kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find(" = ");
    if (eq == std::string::npos) {
      const auto bare = line.find(" =");
      if (bare != std::string::npos && bare + 2 == line.size()) {
        kv[line.substr(0, bare)] = "";
        continue;
      }
      throw ValidationError("checkpoint line '" + line + "' is not key = value");
    }
    kv[line.substr(0, eq)] = line.substr(eq + 3);
  }
  if (require(kv, "format") != "dqlstm-checkpoint") throw ValidationError("not a dqlstm checkpoint");
  const int version = parse_number<int>(require(kv, "version"), "version");
  if (version != kVersion) throw ValidationError("unsupported checkpoint version " + std::to_string(version));

  Checkpoint ck;
  ck.seed = parse_number<std::uint64_t>(require(kv, "seed"), "seed");
  const std::string& kind = require(kv, "model.kind");
  if (kind == "qlstm") {
    ck.model.kind = ModelKind::Qlstm;
  } else if (kind == "classical") {
    ck.model.kind = ModelKind::Classical;
  } else {
    throw ValidationError("unknown model kind '" + kind + "'");
  }
  ck.model.input_dim = parse_number<int>(require(kv, "model.input_dim"), "model.input_dim");
  ck.model.hidden_dim = parse_number<int>(require(kv, "model.hidden_dim"), "model.hidden_dim");
  ck.model.depth = parse_number<int>(require(kv, "model.depth"), "model.depth");
  ck.model.hadamard = parse_number<int>(require(kv, "model.hadamard"), "model.hadamard") != 0;
  if (ck.model.kind == ModelKind::Qlstm) {
    ck.model.plan.input_splits = parse_list<int>(require(kv, "plan.input_splits"), "plan.input_splits");
    ck.model.plan.output_splits = parse_list<int>(require(kv, "plan.output_splits"), "plan.output_splits");
    ck.model.plan.qubits = parse_list<int>(require(kv, "plan.qubits"), "plan.qubits");
  }
  ck.data.task = require(kv, "data.task");
  ck.data.column = require(kv, "data.column");
  ck.data.window = parse_number<std::size_t>(require(kv, "data.window"), "data.window");
  ck.data.split = parse_number<std::size_t>(require(kv, "data.split"), "data.split");
  ck.data.sequence_length = parse_number<std::size_t>(require(kv, "data.sequence_length"), "data.sequence_length");
  ck.data.normalization.mode = tasks::normalization_from_string(require(kv, "data.normalization"));
  ck.data.normalization.first = parse_number<double>(require(kv, "data.norm_first"), "data.norm_first");
  ck.data.normalization.second = parse_number<double>(require(kv, "data.norm_second"), "data.norm_second");

  for (const auto& [name, size] : param_blocks(ck.model)) {
    const std::string key = "params." + name;
    const auto values = parse_list<double>(require(kv, key), key);
    if (values.size() != size) {
      throw ValidationError("checkpoint block '" + name + "' holds " + std::to_string(values.size()) +
                            " values, expected " + std::to_string(size));
    }
    ck.params.insert(ck.params.end(), values.begin(), values.end());
  }
  return ck;
}

std::unique_ptr<train::SequenceModel> build_model(const ModelSpec& spec, dispatch::Executor& executor,
                                                  std::mt19937_64& rng) {
  spec.validate();
  if (spec.kind == ModelKind::Qlstm) {
    qlstm::QlstmCell cell(spec.input_dim, spec.hidden_dim, spec.plan, spec.depth, spec.hadamard);
    cell.init_params(rng);
    auto readout = train::ReadoutInit::random(spec.hidden_dim, rng);
    return std::make_unique<train::QlstmModel>(std::move(cell), std::move(readout), executor);
  }
  train::ClassicalLstmCell cell(spec.input_dim, spec.hidden_dim);
  cell.init_params(rng);
  auto readout = train::ReadoutInit::random(spec.hidden_dim, rng);
  return std::make_unique<train::ClassicalLstmModel>(std::move(cell), std::move(readout));
}

std::unique_ptr<train::SequenceModel> restore_model(const Checkpoint& ck, dispatch::Executor& executor) {
  std::mt19937_64 rng(ck.seed);
  auto model = build_model(ck.model, executor, rng);
  model->set_params(ck.params);
  return model;
}

}  // namespace dqlstm::checkpoint
