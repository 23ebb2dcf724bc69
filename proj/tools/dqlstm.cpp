// dqlstm: dataset generation, training, evaluation, resource estimation and
// remote workers for the (distributed) quantum LSTM.
//
// Exit codes: 0 success, 2 validation error, 3 runtime or divergence error,
// 4 worker-pool failure.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <system_error>
#include <vector>

#include <spdlog/spdlog.h>

#include "dqlstm/checkpoint.hpp"
#include "dqlstm/dispatch.hpp"
#include "dqlstm/error.hpp"
#include "dqlstm/qlstm.hpp"
#include "dqlstm/tasks.hpp"
#include "dqlstm/train.hpp"
#include "dqlstm/worker.hpp"

namespace fs = std::filesystem;
using namespace dqlstm;

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitRuntime = 3;
constexpr int kExitPool = 4;

struct TaskOptions {
  std::string task;
  tasks::PendulumParams pendulum;
  tasks::OscillatorParams oscillator;
  tasks::NarmaParams narma;
  std::string narma_input = "trig";
  std::vector<double> narma_coefficients = {0.4, 0.4, 0.6, 0.1};
  std::optional<double> dt;
  std::optional<int> steps;
};

void add_task_options(CLI::App* app, TaskOptions& o, bool required) {
  auto* task = app->add_option("--task", o.task, "pendulum | oscillator | narma")
                   ->check(CLI::IsMember({"pendulum", "oscillator", "narma"}));
  if (required) task->required();
  app->add_option("--dt", o.dt, "integration step for pendulum/oscillator (s)");
  app->add_option("--steps", o.steps, "integration steps for pendulum/oscillator");
  app->add_option("--damping", o.pendulum.damping, "pendulum damping b (kg/s)")->capture_default_str();
  app->add_option("--mass", o.pendulum.mass, "pendulum mass m (kg)")->capture_default_str();
  app->add_option("--gravity", o.pendulum.gravity, "gravity g (m/s^2)")->capture_default_str();
  app->add_option("--pendulum-length", o.pendulum.length, "pendulum length (m)")->capture_default_str();
  app->add_option("--theta0", o.pendulum.theta0, "initial angle (rad)")->capture_default_str();
  app->add_option("--omega0", o.pendulum.omega0, "initial angular velocity (rad/s)")->capture_default_str();
  app->add_option("--natural-frequency", o.oscillator.natural_frequency, "oscillator w0 (rad/s)")
      ->capture_default_str();
  app->add_option("--zeta", o.oscillator.damping_ratio, "oscillator damping ratio")->capture_default_str();
  app->add_option("--x0", o.oscillator.x0, "oscillator initial displacement")->capture_default_str();
  app->add_option("--v0", o.oscillator.v0, "oscillator initial velocity")->capture_default_str();
  app->add_option("--order", o.narma.order, "NARMA order n")->capture_default_str();
  app->add_option("--length", o.narma.length, "NARMA sequence length")->capture_default_str();
  app->add_option("--input", o.narma_input, "NARMA input stream: trig | uniform")
      ->check(CLI::IsMember({"trig", "uniform"}))
      ->capture_default_str();
  app->add_option("--period", o.narma.period, "trigonometric input period T_u")->capture_default_str();
  app->add_option("--coefficients", o.narma_coefficients, "NARMA coefficients a b c d")->expected(4);
}

void finalize_task(TaskOptions& o, std::uint64_t seed) {
  if (o.dt) o.pendulum.dt = o.oscillator.dt = *o.dt;
  if (o.steps) o.pendulum.num_steps = o.oscillator.num_steps = *o.steps;
  o.narma.input = o.narma_input == "uniform" ? tasks::NarmaInput::Uniform : tasks::NarmaInput::Trigonometric;
  o.narma.a = o.narma_coefficients.at(0);
  o.narma.b = o.narma_coefficients.at(1);
  o.narma.c = o.narma_coefficients.at(2);
  o.narma.d = o.narma_coefficients.at(3);
  o.narma.seed = seed;
  if (o.task == "pendulum") o.pendulum.validate();
  if (o.task == "oscillator") o.oscillator.validate();
  if (o.task == "narma") o.narma.validate();
}

std::string target_column(const std::string& task) {
  if (task == "pendulum") return "omega";
  if (task == "oscillator") return "v";
  return "y";
}

std::map<std::string, std::string> task_metadata(const TaskOptions& o) {
  std::map<std::string, std::string> m;
  m["task"] = o.task;
  if (o.task == "pendulum") {
    const auto& p = o.pendulum;
    m["damping"] = tasks::format_double(p.damping);
    m["mass"] = tasks::format_double(p.mass);
    m["gravity"] = tasks::format_double(p.gravity);
    m["length"] = tasks::format_double(p.length);
    m["theta0"] = tasks::format_double(p.theta0);
    m["omega0"] = tasks::format_double(p.omega0);
    m["dt"] = tasks::format_double(p.dt);
    m["steps"] = std::to_string(p.num_steps);
    m["integrator"] = "rk4";
  } else if (o.task == "oscillator") {
    const auto& p = o.oscillator;
    m["natural_frequency"] = tasks::format_double(p.natural_frequency);
    m["damping_ratio"] = tasks::format_double(p.damping_ratio);
    m["x0"] = tasks::format_double(p.x0);
    m["v0"] = tasks::format_double(p.v0);
    m["dt"] = tasks::format_double(p.dt);
    m["steps"] = std::to_string(p.num_steps);
    m["integrator"] = "rk4";
  } else {
    const auto& p = o.narma;
    m["order"] = std::to_string(p.order);
    m["coefficients"] = tasks::format_double(p.a) + " " + tasks::format_double(p.b) + " " +
                        tasks::format_double(p.c) + " " + tasks::format_double(p.d);
    m["input"] = p.input == tasks::NarmaInput::Uniform ? "uniform" : "trig";
    m["period"] = std::to_string(p.period);
    m["length"] = std::to_string(p.length);
    m["seed"] = std::to_string(p.seed);
  }
  return m;
}

/// Generates the task series and writes it (with its metadata sidecar) to `path`.
void write_task_csv(const TaskOptions& o, const std::string& path) {
  if (o.task == "pendulum") {
    tasks::write_phase_csv(path, tasks::simulate_pendulum(o.pendulum), "theta", "omega");
  } else if (o.task == "oscillator") {
    tasks::write_phase_csv(path, tasks::simulate_oscillator(o.oscillator), "x", "v");
  } else {
    tasks::write_narma_csv(path, tasks::generate_narma(o.narma));
  }
  tasks::write_metadata(path + ".meta", task_metadata(o));
}

std::string model_kind_of(const checkpoint::ModelSpec& spec) {
  return spec.kind == checkpoint::ModelKind::Classical ? "classical" : "qlstm";
}

struct PoolOptions {
  std::string pool_file;
  int workers = 1;
};

void add_pool_options(CLI::App* app, PoolOptions& o) {
  app->add_option("--pool", o.pool_file, "pool file listing one endpoint per line");
  app->add_option("--workers", o.workers, "in-process workers when no pool file is given")->capture_default_str();
}

std::vector<dispatch::WorkerEndpoint> resolve_pool(const PoolOptions& o) {
  if (!o.pool_file.empty()) {
    if (!fs::exists(o.pool_file)) throw ValidationError("pool file '" + o.pool_file + "' does not exist");
    return dispatch::read_pool_file(o.pool_file);
  }
  return dispatch::in_process_endpoints(o.workers);
}

std::unique_ptr<dispatch::Executor> make_executor(const std::vector<dispatch::WorkerEndpoint>& pool) {
  if (pool.size() == 1 && pool[0].in_process() && pool[0].capacity == 1) {
    return std::make_unique<dispatch::SequentialExecutor>();
  }
  return std::make_unique<dispatch::WorkerPool>(pool);
}

void ensure_output_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw ValidationError("cannot create output directory '" + dir + "'");
}

std::vector<double> read_times(const std::string& path) {
  try {
    return tasks::read_csv_column(path, "t");
  } catch (const ValidationError&) {
    return {};
  }
}

/// Writes `t,target,prediction` rows in physical units for the test windows.
void write_predictions(const std::string& path, const tasks::TimeSeriesDataset& ds, std::span<const double> times,
                       std::span<const double> predictions) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << "t,target,prediction\n";
  const auto test = ds.test();
  for (std::size_t i = 0; i < test.size(); ++i) {
    const std::size_t idx = test[i].start + ds.window;
    const double t = idx < times.size() ? times[idx] : static_cast<double>(idx);
    out << tasks::format_double(t) << ',' << tasks::format_double(ds.normalization.invert(test[i].target)) << ','
        << tasks::format_double(ds.normalization.invert(predictions[i])) << '\n';
  }
}

// generate ---------------------------------------------------------------------

struct GenerateOptions {
  TaskOptions task;
  std::string out;
  std::uint64_t seed = 0;
  bool force = false;
};

int run_generate(GenerateOptions& o) {
  finalize_task(o.task, o.seed);
  if (o.out.empty()) o.out = o.task.task + ".csv";
  if (fs::exists(o.out) && !o.force) {
    throw ValidationError("'" + o.out + "' exists; pass --force to overwrite");
  }
  if (const auto parent = fs::path(o.out).parent_path(); !parent.empty()) ensure_output_dir(parent.string());
  write_task_csv(o.task, o.out);
  std::cout << "wrote " << o.out << '\n';
  return 0;
}

// train ------------------------------------------------------------------------

struct TrainOptions {
  TaskOptions task;
  PoolOptions pool;
  std::string data;
  std::string out;
  std::string model = "qlstm";
  int partitions = 1;
  int qubits = 0;
  int hidden = 3;
  int window = 3;
  int depth = 2;
  bool no_hadamard = false;
  std::vector<int> input_splits;
  std::vector<int> output_splits;
  int epochs = 100;
  double lr = 0.01;
  std::string optimizer = "rmsprop";
  double rho = 0.9;
  double eps = 1e-8;
  std::size_t batch_size = 0;
  std::size_t sequence_length = 8;
  std::string gradient = "shift";
  std::string bptt = "full";
  int bptt_k = 1;
  double train_fraction = 0.67;
  std::string normalization = "minmax";
  std::uint64_t seed = 0;
};

checkpoint::ModelSpec model_spec(const TrainOptions& o) {
  checkpoint::ModelSpec spec;
  spec.kind = o.model == "classical" ? checkpoint::ModelKind::Classical : checkpoint::ModelKind::Qlstm;
  spec.input_dim = o.window;
  spec.hidden_dim = o.hidden;
  spec.depth = o.depth;
  spec.hadamard = !o.no_hadamard;
  if (spec.kind == checkpoint::ModelKind::Qlstm) {
    if (o.partitions < 1) throw ValidationError("--partitions must be >= 1");
    const int d = o.window + o.hidden;
    const int fit = std::max((d + o.partitions - 1) / o.partitions, (o.hidden + o.partitions - 1) / o.partitions);
    const int q = o.qubits > 0 ? o.qubits : fit;
    spec.plan = qlstm::PartitionPlan::even(o.window, o.hidden, o.partitions, q);
    if (!o.input_splits.empty()) spec.plan.input_splits = o.input_splits;
    if (!o.output_splits.empty()) spec.plan.output_splits = o.output_splits;
    if (spec.plan.input_splits.size() != spec.plan.qubits.size() ||
        spec.plan.output_splits.size() != spec.plan.qubits.size()) {
      throw ValidationError("explicit splits must list one entry per partition");
    }
  }
  spec.validate();
  return spec;
}

train::TrainingConfig training_config(const TrainOptions& o) {
  train::TrainingConfig c;
  c.epochs = o.epochs;
  c.optimizer.kind = train::optimizer_from_string(o.optimizer);
  c.optimizer.learning_rate = o.lr;
  c.optimizer.rho = o.rho;
  c.optimizer.epsilon = o.eps;
  c.batch_size = o.batch_size;
  c.sequence_length = o.sequence_length;
  c.gradient_mode = o.gradient == "fd" ? vqc::GradientMode::FiniteDifference : vqc::GradientMode::ParameterShift;
  c.bptt = o.bptt == "full" ? train::BpttMode::full() : train::BpttMode::truncated(o.bptt_k);
  c.seed = o.seed;
  c.validate();
  return c;
}

int run_train(TrainOptions& o) {
  // Validate everything before any simulation.
  if (o.data.empty() && o.task.task.empty()) throw ValidationError("train needs --task or --data");
  if (!o.data.empty() && !fs::exists(o.data)) throw ValidationError("dataset '" + o.data + "' does not exist");
  if (!o.data.empty() && o.task.task.empty()) throw ValidationError("--data needs --task to pick the target column");
  finalize_task(o.task, o.seed);
  const auto spec = model_spec(o);
  const auto config = training_config(o);
  const auto normalization = tasks::normalization_from_string(o.normalization);
  if (!(o.train_fraction > 0.0 && o.train_fraction < 1.0)) throw ValidationError("--train-fraction must lie in (0, 1)");
  const auto pool = resolve_pool(o.pool);
  ensure_output_dir(o.out);

  const fs::path out(o.out);
  std::string data_path = o.data;
  if (data_path.empty()) {
    data_path = (out / "data.csv").string();
    write_task_csv(o.task, data_path);
  }
  const std::string column = target_column(o.task.task);
  const auto series = tasks::read_csv_column(data_path, column);
  const auto times = read_times(data_path);
  const auto dataset =
      tasks::make_dataset(series, static_cast<std::size_t>(o.window), o.train_fraction, normalization);

  auto executor = make_executor(pool);
  std::mt19937_64 rng(o.seed);
  auto model = checkpoint::build_model(spec, *executor, rng);
  spdlog::info("training {} ({} parameters) on {} train / {} test windows", model->label(), model->num_params(),
               dataset.train().size(), dataset.test().size());

  std::ofstream metrics((out / "metrics.csv").string(), std::ios::binary);
  metrics << "epoch,train_loss,test_loss\n";
  const auto record = train::train_loop(*model, dataset, config, [&](int epoch, double tr, double te) {
    metrics << epoch << ',' << tasks::format_double(tr) << ',' << tasks::format_double(te) << '\n';
    metrics.flush();
    spdlog::info("epoch {:4d}  train {:.6g}  test {:.6g}", epoch, tr, te);
  });

  write_predictions((out / "predictions.csv").string(), dataset, times, record.test_predictions);

  checkpoint::Checkpoint ck;
  ck.model = spec;
  ck.seed = o.seed;
  ck.params = model->params();
  ck.data.task = o.task.task;
  ck.data.column = column;
  ck.data.window = dataset.window;
  ck.data.split = dataset.split;
  ck.data.sequence_length = config.sequence_length;
  ck.data.normalization = dataset.normalization;
  checkpoint::save((out / "checkpoint.txt").string(), ck);

  std::printf("Model | R-square | Testing Epoch Convergence\n");
  const auto converged = record.convergence_epoch == 0 ? std::string("-") : std::to_string(record.convergence_epoch);
  std::printf("%s | %.4f | %s\n", model->label().c_str(), record.r2, converged.c_str());
  return 0;
}

// eval -------------------------------------------------------------------------

struct EvalOptions {
  PoolOptions pool;
  std::string checkpoint;
  std::string data;
  std::string out;
  std::optional<int> window;
  std::optional<int> hidden;
};

int run_eval(EvalOptions& o) {
  if (!fs::exists(o.checkpoint)) throw ValidationError("checkpoint '" + o.checkpoint + "' does not exist");
  if (!fs::exists(o.data)) throw ValidationError("dataset '" + o.data + "' does not exist");
  const auto ck = checkpoint::load(o.checkpoint);
  if (o.window && *o.window != ck.model.input_dim) {
    throw ValidationError("--window " + std::to_string(*o.window) + " does not match checkpoint input_dim " +
                          std::to_string(ck.model.input_dim));
  }
  if (o.hidden && *o.hidden != ck.model.hidden_dim) {
    throw ValidationError("--hidden " + std::to_string(*o.hidden) + " does not match checkpoint hidden_dim " +
                          std::to_string(ck.model.hidden_dim));
  }
  if (ck.data.window != static_cast<std::size_t>(ck.model.input_dim)) {
    throw ValidationError("checkpoint window and model input_dim disagree");
  }
  const auto pool = resolve_pool(o.pool);
  ensure_output_dir(o.out);

  const auto series = tasks::read_csv_column(o.data, ck.data.column);
  const auto times = read_times(o.data);
  if (series.size() <= ck.data.window + 1 || ck.data.split >= series.size() - ck.data.window) {
    throw ValidationError("dataset too short for the checkpoint's split");
  }
  const auto dataset = tasks::make_dataset_with(series, ck.data.window, ck.data.split, ck.data.normalization);

  auto executor = make_executor(pool);
  auto model = checkpoint::restore_model(ck, *executor);
  const auto sequences = train::make_sequences(dataset.test(), ck.data.sequence_length);
  const auto predictions = train::predict(*model, sequences);
  const auto targets = train::targets_of(sequences);
  const double r2 = train::r_squared(predictions, targets);
  write_predictions((fs::path(o.out) / "predictions.csv").string(), dataset, times, predictions);
  std::printf("%s | R-square %.4f | test MSE %.6g\n", model->label().c_str(), r2, train::mse_loss(predictions, targets));
  return 0;
}

// resources / worker -----------------------------------------------------------

struct ResourceOptions {
  int dx = 3;
  int dh = 3;
  int partitions = 1;
  int depth = 2;
  int qubits = 6;
  int n_extra = 0;
};

int run_resources(const ResourceOptions& o) {
  const auto r = qlstm::estimate_resources(o.dx, o.dh, o.partitions, o.depth, o.qubits, o.n_extra);
  std::printf("p_vqc = %lld\np_gates = %lld\np_total = %lld\ntotal_qubits = %lld\nper_qpu_qubits = %lld\nn_extra = %d\n",
              r.p_vqc, r.p_gates, r.p_total, r.total_qubits, r.per_qpu_qubits, r.n_extra);
  return 0;
}

struct WorkerOptions {
  std::string bind = "127.0.0.1:7070";
  int max_qubits = 10;
  std::string verbosity = "info";
};

int run_worker(const WorkerOptions& o) {
  spdlog::set_level(spdlog::level::from_str(o.verbosity));
  worker::serve_worker(o.bind, o.max_qubits);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Distributed quantum LSTM toolkit"};
  app.set_config("--config", "", "TOML/INI configuration file; command-line flags take precedence");
  app.require_subcommand(1);
  app.fallthrough();
  app.allow_config_extras(CLI::config_extras_mode::error);
  std::string log_level = "warn";
  app.add_option("--log-level", log_level, "trace | debug | info | warn | error | off")->capture_default_str();

  GenerateOptions gen;
  auto* generate = app.add_subcommand("generate", "write a benchmark series as CSV");
  add_task_options(generate, gen.task, true);
  generate->add_option("--out", gen.out, "CSV path (default <task>.csv)");
  generate->add_option("--seed", gen.seed, "seed for random input streams")->capture_default_str();
  generate->add_flag("--force", gen.force, "overwrite an existing file");

  TrainOptions tr;
  auto* train_cmd = app.add_subcommand("train", "train a QLSTM or classical LSTM and report R^2");
  add_task_options(train_cmd, tr.task, false);
  add_pool_options(train_cmd, tr.pool);
  train_cmd->add_option("--data", tr.data, "existing CSV instead of generating the task series");
  train_cmd->add_option("--out", tr.out, "output directory")->required();
  train_cmd->add_option("--model", tr.model, "qlstm | classical")
      ->check(CLI::IsMember({"qlstm", "classical"}))
      ->capture_default_str();
  train_cmd->add_option("--partitions", tr.partitions, "sub-circuits per gate (M)")->capture_default_str();
  train_cmd->add_option("--qubits", tr.qubits, "qubits per partition (default: smallest that fits)");
  train_cmd->add_option("--hidden", tr.hidden, "hidden size d_h")->capture_default_str();
  train_cmd->add_option("--window", tr.window, "input window d_x")->capture_default_str();
  train_cmd->add_option("--depth", tr.depth, "ansatz layers L")->capture_default_str();
  train_cmd->add_flag("--no-hadamard", tr.no_hadamard, "skip the initial Hadamard layer");
  train_cmd->add_option("--input-splits", tr.input_splits, "explicit D_m per partition");
  train_cmd->add_option("--output-splits", tr.output_splits, "explicit d_h^(m) per partition");
  train_cmd->add_option("--epochs", tr.epochs)->capture_default_str();
  train_cmd->add_option("--lr", tr.lr, "learning rate")->capture_default_str();
  train_cmd->add_option("--optimizer", tr.optimizer, "sgd | rmsprop")
      ->check(CLI::IsMember({"sgd", "rmsprop"}))
      ->capture_default_str();
  train_cmd->add_option("--rho", tr.rho, "RMSProp decay")->capture_default_str();
  train_cmd->add_option("--eps", tr.eps, "RMSProp epsilon")->capture_default_str();
  train_cmd->add_option("--batch-size", tr.batch_size, "sequences per update, 0 = full batch")->capture_default_str();
  train_cmd->add_option("--sequence-length", tr.sequence_length, "windows per training sequence")
      ->capture_default_str();
  train_cmd->add_option("--gradient", tr.gradient, "shift | fd")
      ->check(CLI::IsMember({"shift", "fd"}))
      ->capture_default_str();
  train_cmd->add_option("--bptt", tr.bptt, "full | truncated")
      ->check(CLI::IsMember({"full", "truncated"}))
      ->capture_default_str();
  train_cmd->add_option("--bptt-k", tr.bptt_k, "truncation depth")->capture_default_str();
  train_cmd->add_option("--train-fraction", tr.train_fraction)->capture_default_str();
  train_cmd->add_option("--normalization", tr.normalization, "minmax | zscore | none")->capture_default_str();
  train_cmd->add_option("--seed", tr.seed)->capture_default_str();

  EvalOptions ev;
  auto* eval = app.add_subcommand("eval", "score a checkpoint on a dataset's test split");
  add_pool_options(eval, ev.pool);
  eval->add_option("--checkpoint", ev.checkpoint)->required();
  eval->add_option("--data", ev.data, "CSV the checkpoint was trained on")->required();
  eval->add_option("--out", ev.out, "output directory")->required();
  eval->add_option("--window", ev.window, "expected input window (checked against the checkpoint)");
  eval->add_option("--hidden", ev.hidden, "expected hidden size (checked against the checkpoint)");

  ResourceOptions res;
  auto* resources = app.add_subcommand("resources", "print parameter and qubit counts");
  resources->add_option("--dx", res.dx)->capture_default_str();
  resources->add_option("--dh", res.dh)->capture_default_str();
  resources->add_option("--partitions", res.partitions, "M")->capture_default_str();
  resources->add_option("--depth", res.depth, "L")->capture_default_str();
  resources->add_option("--qubits", res.qubits, "q per partition")->capture_default_str();
  resources->add_option("--n-extra", res.n_extra, "extra quantum blocks")->capture_default_str();

  WorkerOptions wk;
  auto* worker_cmd = app.add_subcommand("worker", "serve sub-circuit jobs over TCP");
  worker_cmd->add_option("--bind", wk.bind, "host:port")->capture_default_str();
  worker_cmd->add_option("--max-qubits", wk.max_qubits)->capture_default_str();
  worker_cmd->add_option("--verbosity", wk.verbosity, "log level")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  spdlog::set_level(spdlog::level::from_str(log_level));
  try {
    if (*generate) return run_generate(gen);
    if (*train_cmd) return run_train(tr);
    if (*eval) return run_eval(ev);
    if (*resources) return run_resources(res);
    if (*worker_cmd) return run_worker(wk);
  } catch (const JobFailure& e) {
    std::cerr << "worker pool failure: " << e.what() << '\n';
    return kExitPool;
  } catch (const DivergenceError& e) {
    std::cerr << "diverged: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const GenerationError& e) {
    std::cerr << "generation failed: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const ValidationError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  } catch (const UsageError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  } catch (const MetricError& e) {
    std::cerr << "invalid configuration: " << e.what() << '\n';
    return kExitValidation;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitRuntime;
  } catch (const std::system_error& e) {
    std::cerr << "system error: " << e.what() << '\n';
    return kExitRuntime;
  }
  return 0;
}
