// Acceptance suite: prints one PASS/FAIL line per criterion and exits nonzero
// if any criterion fails. Detail lines are indented.
#include <sys/wait.h>

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <mutex>
#include <numbers>
#include <random>
#include <sstream>
#include <string>
#include <thread>

#include "dqlstm/checkpoint.hpp"
#include "dqlstm/dispatch.hpp"
#include "dqlstm/qlstm.hpp"
#include "dqlstm/qsim.hpp"
#include "dqlstm/tasks.hpp"
#include "dqlstm/train.hpp"
#include "dqlstm/vqc.hpp"
#include "dqlstm/worker.hpp"
#include "net.hpp"
#include "oracles.hpp"

using namespace dqlstm;
using Clock = std::chrono::steady_clock;

namespace {

int failures = 0;

void detail(const char* fmt, auto... args) {
  std::printf("    ");
  std::printf(fmt, args...);
  std::printf("\n");
  std::fflush(stdout);
}

void verdict(int id, const char* name, bool ok, double seconds) {
  std::printf("%s criterion %d: %s (%.1f s)\n", ok ? "PASS" : "FAIL", id, name, seconds);
  std::fflush(stdout);
  if (!ok) ++failures;
}

void criterion(int id, const char* name, const std::function<bool()>& body) {
  const auto t0 = Clock::now();
  bool ok = false;
  try {
    ok = body();
  } catch (const std::exception& e) {
    detail("exception: %s", e.what());
  }
  verdict(id, name, ok, std::chrono::duration<double>(Clock::now() - t0).count());
}

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

class LiveWorker {
 public:
  LiveWorker() : server_("127.0.0.1:0", 10), thread_([this] { server_.serve(); }) {}
  ~LiveWorker() {
    server_.stop();
    thread_.join();
  }
  std::string address() const { return server_.address(); }
  std::uint64_t jobs_handled() const { return server_.jobs_handled(); }

 private:
  worker::WorkerServer server_;
  std::thread thread_;
};

std::string dead_address() {
  net::Socket s = net::listen_on("127.0.0.1:0");
  const int port = net::local_port(s);
  s.reset();
  return "127.0.0.1:" + std::to_string(port);
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

// Central differences of every VQC output with respect to one coordinate.
std::vector<double> central(const std::function<std::vector<double>(const std::vector<double>&)>& f,
                            std::vector<double> x, std::size_t i, double h = 1e-5) {
  x[i] += h;
  const auto up = f(x);
  x[i] -= 2 * h;
  const auto down = f(x);
  std::vector<double> d(up.size());
  for (std::size_t k = 0; k < d.size(); ++k) d[k] = (up[k] - down[k]) / (2 * h);
  return d;
}

bool gradient_oracle() {
  std::mt19937_64 rng(101);
  std::uniform_real_distribution<double> u(-std::numbers::pi, std::numbers::pi);
  std::uniform_real_distribution<double> feat(-1.5, 1.5);
  double worst = 0.0;
  int configs = 0;
  for (int trial = 0; trial < 30; ++trial, ++configs) {
    const int q = 1 + trial % 3;
    const int depth = (trial / 3) % 3;
    const int k = 1 + trial % q;
    const vqc::VqcConfig c{q, depth, q, k, trial % 2 == 0};
    std::vector<double> params(c.num_params()), x(static_cast<std::size_t>(q));
    for (auto& p : params) p = u(rng);
    for (auto& v : x) v = feat(rng);
    const auto g = vqc::param_shift_gradient(c, params, x);
    for (std::size_t p = 0; p < params.size(); ++p) {
      const auto fd = central([&](const std::vector<double>& t) { return vqc::evaluate(c, t, x); }, params, p);
      for (int o = 0; o < k; ++o) worst = std::max(worst, std::abs(g(o, p) - fd[o]));
    }
    const auto jx = vqc::input_jacobian(c, params, x);
    for (std::size_t j = 0; j < x.size(); ++j) {
      const auto fd = central([&](const std::vector<double>& t) { return vqc::evaluate(c, params, t); }, x, j);
      for (int o = 0; o < k; ++o) worst = std::max(worst, std::abs(jx(o, j) - fd[o]));
    }
  }
  detail("%d random circuits (q <= 3, L <= 2), max |shift - fd| = %.3g", configs, worst);
  return worst <= 1e-6;
}

bool simulator_oracle() {
  std::mt19937_64 rng(202);
  std::uniform_real_distribution<double> angle(-std::numbers::pi, std::numbers::pi);
  double worst = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int nq = 1 + trial % 3;
    const auto spec = oracle::random_circuit(rng, nq, 25, 4, 6);
    std::vector<double> enc(4), params(6);
    for (auto& x : enc) x = angle(rng);
    for (auto& x : params) x = angle(rng);
    const auto got = qsim::run_circuit(spec, enc, params);
    const auto want = oracle::run(spec, enc, params);
    for (std::size_t i = 0; i < want.size(); ++i) worst = std::max(worst, std::abs(got.amplitudes()[i] - want[i]));
  }
  detail("100 random circuits (q <= 3), max amplitude error = %.3g", worst);
  return worst <= 1e-12;
}

std::unique_ptr<train::SequenceModel> make_model(const checkpoint::ModelSpec& spec, dispatch::Executor& exec,
                                                 std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  return checkpoint::build_model(spec, exec, rng);
}

checkpoint::ModelSpec qlstm_spec(int d_x, int d_h, int partitions, int qubits, int depth) {
  checkpoint::ModelSpec s;
  s.input_dim = d_x;
  s.hidden_dim = d_h;
  s.depth = depth;
  s.plan = qlstm::PartitionPlan::even(d_x, d_h, partitions, qubits);
  return s;
}

double batch_loss(train::SequenceModel& m, std::span<const train::Sequence> batch) {
  return train::mse_loss(train::predict(m, batch), train::targets_of(batch));
}

bool bptt_oracle() {
  dispatch::SequentialExecutor exec;
  double worst = 0.0;
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    auto model = make_model(qlstm_spec(1, 1, 1, 2, 1), exec, seed);
    std::mt19937_64 rng(500 + seed);
    std::uniform_real_distribution<double> u(-1.0, 1.0);
    train::Sequence s;
    for (int t = 0; t < 3; ++t) {
      s.inputs.push_back({u(rng)});
      s.targets.push_back(u(rng));
    }
    const std::vector<train::Sequence> batch{s};
    const auto bg = train::bptt_gradients(*model, batch, train::BpttMode::full());
    auto p = model->params();
    for (std::size_t i = 0; i < p.size(); ++i) {
      const double x = p[i];
      p[i] = x + 1e-5;
      model->set_params(p);
      const double up = batch_loss(*model, batch);
      p[i] = x - 1e-5;
      model->set_params(p);
      const double down = batch_loss(*model, batch);
      p[i] = x;
      model->set_params(p);
      worst = std::max(worst, std::abs(bg.grads[i] - (up - down) / 2e-5));
    }
  }
  detail("20 seeds, q=2 L=1 M=1, 3 steps, max |bptt - fd| = %.3g", worst);
  return worst <= 1e-5;
}

std::vector<double> pendulum_series(int steps) {
  tasks::PendulumParams p;
  p.num_steps = steps;
  std::vector<double> out;
  for (const auto& s : tasks::simulate_pendulum(p)) out.push_back(s.velocity);
  return out;
}

std::vector<double> narma_series() {
  std::vector<double> out;
  for (const auto& s : tasks::generate_narma(tasks::NarmaParams{})) out.push_back(s.y);
  return out;
}

train::MetricsRecord smoke_run(dispatch::Executor& exec) {
  const auto series = pendulum_series(300);
  const auto ds = tasks::make_dataset(series, 3, 0.67, tasks::Normalization::MinMax);
  auto model = make_model(qlstm_spec(3, 3, 2, 3, 2), exec, 4);
  train::TrainingConfig c;
  c.epochs = 5;
  c.batch_size = 4;
  c.seed = 4;
  return train::train_loop(*model, ds, c);
}

bool equivalence() {
  dispatch::SequentialExecutor seq;
  dispatch::WorkerPool pool(dispatch::in_process_endpoints(2));
  const auto a = smoke_run(seq);
  const auto b = smoke_run(pool);
  const bool identical = a.train_loss == b.train_loss && a.test_loss == b.test_loss;
  detail("in-process 2-worker pool vs sequential, 5 epochs: %s", identical ? "bit-identical" : "DIFFERENT");
  LiveWorker w1, w2;
  dispatch::WorkerPool tcp({{w1.address(), 1}, {w2.address(), 1}});
  const auto t = smoke_run(tcp);
  double worst = 0.0;
  for (std::size_t e = 0; e < a.train_loss.size(); ++e) {
    worst = std::max(worst, std::abs(a.train_loss[e] - t.train_loss[e]));
    worst = std::max(worst, std::abs(a.test_loss[e] - t.test_loss[e]));
  }
  detail("TCP workers vs sequential: max loss difference %.3g (%llu + %llu jobs)", worst,
         static_cast<unsigned long long>(w1.jobs_handled()), static_cast<unsigned long long>(w2.jobs_handled()));
  return identical && worst <= 1e-12;
}

struct ThresholdRun {
  double final_r2 = 0.0;
  double best_r2 = -1e300;
  int first_epoch = 0;  ///< first epoch whose test R^2 met the threshold; 0 if never
};

// Test R^2 after every epoch, from the epoch's test MSE and the test target variance.
ThresholdRun threshold_run(const char* label, const std::vector<double>& series, std::size_t window,
                           const checkpoint::ModelSpec& spec, int epochs, double threshold) {
  const auto ds = tasks::make_dataset(series, window, 0.67, tasks::Normalization::MinMax);
  double mean = 0.0;
  for (const auto& w : ds.test()) mean += w.target;
  mean /= static_cast<double>(ds.test().size());
  double var = 0.0;
  for (const auto& w : ds.test()) var += (w.target - mean) * (w.target - mean);
  var /= static_cast<double>(ds.test().size());

  dispatch::SequentialExecutor exec;
  auto model = make_model(spec, exec, 0);
  train::TrainingConfig c;
  c.epochs = epochs;
  c.batch_size = 1;
  c.sequence_length = 8;
  c.seed = 0;
  detail("%s: %zu windows (w=%zu, %zu train), d_h=%d, L=%d, RMSProp lr=%.3g, batch 1 sequence of %zu, %d epochs",
         label, ds.windows.size(), window, ds.split, spec.hidden_dim, spec.depth, c.optimizer.learning_rate,
         c.sequence_length, epochs);
  ThresholdRun r;
  const auto t0 = Clock::now();
  const auto rec = train::train_loop(*model, ds, c, [&](int epoch, double, double test_loss) {
    const double r2 = 1.0 - test_loss / var;
    r.best_r2 = std::max(r.best_r2, r2);
    if (r.first_epoch == 0 && r2 >= threshold) r.first_epoch = epoch;
    if (epoch % 10 == 0) detail("  epoch %3d  test R^2 %.4f  (%.0f s)", epoch, r2, seconds_since(t0));
  });
  r.final_r2 = rec.r2;
  detail("%s: first epoch with R^2 >= %.2f: %d; best %.4f; final %.4f", label, threshold, r.first_epoch, r.best_r2,
         r.final_r2);
  return r;
}

bool pendulum_threshold() {
  const auto series = pendulum_series(2000);
  const auto dist = threshold_run("distributed M=2 q=3", series, 3, qlstm_spec(3, 3, 2, 3, 2), 100, 0.95);
  const auto cent = threshold_run("centric q=4", series, 2, qlstm_spec(2, 2, 1, 4, 2), 100, 0.95);
  return dist.first_epoch > 0 && cent.first_epoch > 0;
}

bool narma_threshold() {
  const auto r = threshold_run("distributed M=2 q=3", narma_series(), 3, qlstm_spec(3, 3, 2, 3, 2), 50, 0.5);
  return r.first_epoch > 0;
}

bool resource_identities() {
  int checked = 0, bad = 0;
  for (int q = 1; q <= 6; ++q) {
    for (int depth = 0; depth <= 4; ++depth) {
      for (int m = 1; m <= 4; ++m) {
        for (int extra = 0; extra <= 2; ++extra) {
          const auto r = qlstm::estimate_resources(q, q, m, depth, q, extra);
          const long long p_vqc = 2LL * q * depth;
          ++checked;
          if (r.p_vqc != p_vqc || r.p_gates != 4LL * m * p_vqc || r.p_total != (4LL + extra) * m * p_vqc ||
              r.total_qubits != static_cast<long long>(m) * q)
            ++bad;
        }
      }
    }
  }
  detail("%d (q, L, M, N_extra) combinations, %d mismatches", checked, bad);
  return bad == 0;
}

bool generator_oracles() {
  // x'' + 2 zeta w0 x' + w0^2 x = 0 with x(0) = 1, x'(0) = 0, underdamped.
  auto closed = [](double w0, double zeta, double t) {
    const double wd = w0 * std::sqrt(1.0 - zeta * zeta);
    return std::exp(-zeta * w0 * t) * (std::cos(wd * t) + zeta * w0 / wd * std::sin(wd * t));
  };
  auto max_err = [&](double dt, int steps) {
    tasks::OscillatorParams p;
    p.dt = dt;
    p.num_steps = steps;
    double err = 0.0;
    for (const auto& s : tasks::simulate_oscillator(p))
      err = std::max(err, std::abs(s.position - closed(p.natural_frequency, p.damping_ratio, s.t)));
    return err;
  };
  const double rk4_err = max_err(0.01, 2000);
  const double order = std::log2(max_err(0.1, 100) / max_err(0.05, 200));
  const std::vector<double> zeros(201, 0.0);
  const auto ys = tasks::generate_narma(tasks::NarmaParams{}, zeros);
  const double fixed = (0.6 - std::sqrt(0.2)) / 0.8;
  const double narma_err = std::abs(ys[200].y - fixed);
  detail("RK4 vs closed form: max error %.3g; convergence order %.3f", rk4_err, order);
  detail("NARMA-2 zero input: y_200 = %.12f, fixed point %.12f, error %.3g", ys[200].y, fixed, narma_err);
  return rk4_err <= 1e-6 && order >= 3.5 && order <= 4.5 && narma_err <= 1e-9;
}

std::vector<dispatch::JobRequest> mixed_jobs(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> u(-1.5, 1.5);
  std::vector<dispatch::JobRequest> jobs;
  for (std::size_t i = 0; i < n; ++i) {
    dispatch::JobRequest j;
    j.job_id = 1000 + i;
    j.kind = static_cast<dispatch::JobKind>(i % 3);
    const int q = 1 + static_cast<int>(i % 3);
    j.config = {q, 2, q, q, true};
    j.params.resize(j.config.num_params());
    for (auto& p : j.params) p = u(rng);
    j.features.resize(static_cast<std::size_t>(q));
    for (auto& f : j.features) f = u(rng);
    jobs.push_back(j);
  }
  return jobs;
}

bool dispatch_properties() {
  std::mt19937_64 rng(909);
  const auto jobs = mixed_jobs(rng, 12);
  dispatch::SequentialExecutor seq;
  const auto want = seq.submit_batch(jobs);

  std::mutex mu;
  std::mt19937_64 delays(910);
  dispatch::WorkerPool::Hooks hooks;
  hooks.before_execute = [&](const dispatch::JobRequest&, std::size_t) {
    int us;
    {
      std::lock_guard lock(mu);
      us = std::uniform_int_distribution<int>(0, 1500)(delays);
    }
    std::this_thread::sleep_for(std::chrono::microseconds(us));
  };
  int ordered = 0;
  {
    dispatch::WorkerPool pool(dispatch::in_process_endpoints(3), hooks);
    for (int trial = 0; trial < 100; ++trial) {
      const auto got = pool.submit_batch(jobs);
      bool same = got.size() == want.size();
      for (std::size_t i = 0; same && i < got.size(); ++i)
        same = got[i].job_id == want[i].job_id && got[i].payload == want[i].payload;
      ordered += same ? 1 : 0;
    }
  }
  detail("order preservation under random delays: %d/100 trials", ordered);

  // Fault injection: one endpoint is unreachable, so its jobs are retried elsewhere.
  LiveWorker a, b;
  dispatch::WorkerPool faulty({{dead_address(), 1}, {a.address(), 1}, {b.address(), 1}});
  const auto got = faulty.submit_batch(jobs);
  bool all_ok = got.size() == jobs.size();
  for (std::size_t i = 0; all_ok && i < got.size(); ++i) all_ok = got[i].ok && got[i].payload == want[i].payload;
  const auto executed = a.jobs_handled() + b.jobs_handled();
  const bool exactly_once = all_ok && executed == jobs.size();
  detail("fault injection (1 dead + 2 live endpoints): %zu jobs, all results correct: %s, executions %llu",
         jobs.size(), all_ok ? "yes" : "no", static_cast<unsigned long long>(executed));

  // CPU-bound jobs: parameter-shift gradients of an 8-qubit, depth-4 circuit.
  std::vector<dispatch::JobRequest> heavy;
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int i = 0; i < 8; ++i) {
    dispatch::JobRequest j;
    j.job_id = static_cast<std::uint64_t>(i);
    j.kind = dispatch::JobKind::ParamShiftGradient;
    j.config = {8, 4, 8, 8, true};
    j.params.resize(j.config.num_params());
    for (auto& p : j.params) p = u(rng);
    j.features.resize(8);
    for (auto& f : j.features) f = u(rng);
    heavy.push_back(j);
  }
  seq.submit_batch(heavy);  // warm-up
  auto t0 = Clock::now();
  seq.submit_batch(heavy);
  const double t_seq = seconds_since(t0);
  dispatch::WorkerPool two(dispatch::in_process_endpoints(2));
  two.submit_batch(heavy);  // warm-up
  t0 = Clock::now();
  two.submit_batch(heavy);
  const double t_pool = seconds_since(t0);
  const double speedup = t_seq / t_pool;
  detail("speedup: %zu jobs of %.1f ms each, sequential %.3f s, 2 workers %.3f s, speedup %.2fx "
         "(hardware threads: %u)",
         heavy.size(), 1000.0 * t_seq / static_cast<double>(heavy.size()), t_seq, t_pool, speedup,
         std::thread::hardware_concurrency());
  const bool heavy_enough = t_seq / static_cast<double>(heavy.size()) >= 0.010;
  return ordered == 100 && exactly_once && heavy_enough && speedup >= 1.4;
}

int run_cli(const std::string& args) {
  const std::string cmd = std::string(DQLSTM_CLI) + " " + args + " > /dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

bool determinism() {
  const auto dir = std::filesystem::temp_directory_path() / "dqlstm_acceptance_determinism";
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  const std::string base = "train --task pendulum --partitions 2 --epochs 3 --batch-size 1 --seed 17 --out ";
  const int ca = run_cli(base + (dir / "a").string());
  const int cb = run_cli(base + (dir / "b").string());
  const auto ma = slurp((dir / "a" / "metrics.csv").string());
  const auto mb = slurp((dir / "b" / "metrics.csv").string());
  detail("two seeded train runs: exit codes %d %d, metrics.csv %zu bytes, %s", ca, cb, ma.size(),
         ma == mb ? "byte-identical" : "DIFFERENT");
  std::filesystem::remove_all(dir);
  return ca == 0 && cb == 0 && !ma.empty() && ma == mb;
}

}  // namespace

int main() {
  criterion(1, "parameter-shift gradients and input jacobians match finite differences", gradient_oracle);
  criterion(2, "statevector simulator matches dense matrix oracle", simulator_oracle);
  criterion(3, "full BPTT gradient matches finite differences", bptt_oracle);
  criterion(4, "distributed pool runs reproduce sequential loss curves", equivalence);
  criterion(5, "pendulum test R^2 >= 0.95 within 100 epochs (distributed and centric)", pendulum_threshold);
  criterion(6, "NARMA-2 test R^2 >= 0.5 within 50 epochs", narma_threshold);
  criterion(7, "resource count identities", resource_identities);
  criterion(8, "task generator oracles", generator_oracles);
  criterion(9, "dispatch order, exactly-once and speedup", dispatch_properties);
  criterion(10, "seeded train runs write byte-identical metrics", determinism);
  std::printf("%d of 10 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
