#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "dqlstm/error.hpp"
#include "dqlstm/tasks.hpp"

using namespace dqlstm;
using namespace dqlstm::tasks;
using std::numbers::pi;

namespace {

double pendulum_energy(const PendulumParams& p, const PhaseSample& s) {
  return 0.5 * p.mass * p.length * p.length * s.velocity * s.velocity +
         p.mass * p.gravity * p.length * (1.0 - std::cos(s.position));
}

// Upward zero crossings of the position, linearly interpolated.
std::vector<double> upward_crossings(const std::vector<PhaseSample>& xs) {
  std::vector<double> out;
  for (std::size_t i = 1; i < xs.size(); ++i) {
    if (xs[i - 1].position < 0.0 && xs[i].position >= 0.0) {
      const double f = -xs[i - 1].position / (xs[i].position - xs[i - 1].position);
      out.push_back(xs[i - 1].t + f * (xs[i].t - xs[i - 1].t));
    }
  }
  return out;
}

double max_error_against_closed_form(const OscillatorParams& p) {
  double err = 0.0;
  for (const auto& s : simulate_oscillator(p)) err = std::max(err, std::abs(s.position - oscillator_closed_form(p, s.t)));
  return err;
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace

TEST(Pendulum, EnergyConservedWithoutDamping) {
  PendulumParams p;
  p.damping = 0.0;
  p.theta0 = 0.01;
  p.omega0 = 0.0;
  p.dt = 0.001;
  p.num_steps = 10000;
  const auto xs = simulate_pendulum(p);
  ASSERT_EQ(xs.size(), 10001u);
  const double e0 = pendulum_energy(p, xs.front());
  double drift = 0.0;
  for (const auto& s : xs) drift = std::max(drift, std::abs(pendulum_energy(p, s) - e0) / e0);
  EXPECT_LT(drift, 1e-6);
}

TEST(Pendulum, SmallAnglePeriod) {
  PendulumParams p;
  p.damping = 0.0;
  p.theta0 = 0.01;
  p.omega0 = 0.0;
  p.dt = 0.001;
  p.num_steps = 20000;
  const auto crossings = upward_crossings(simulate_pendulum(p));
  ASSERT_GE(crossings.size(), 3u);
  const double measured = (crossings.back() - crossings.front()) / static_cast<double>(crossings.size() - 1);
  const double expected = 2.0 * pi * std::sqrt(p.length / p.gravity);
  EXPECT_LT(std::abs(measured - expected) / expected, 1e-3);
}

TEST(Pendulum, DefaultTrajectoryDecays) {
  const PendulumParams p;  // theta0 = 0, omega0 = 3 rad/s, b = 0.3
  const auto xs = simulate_pendulum(p);
  EXPECT_EQ(xs.front().position, 0.0);
  EXPECT_EQ(xs.front().velocity, 3.0);
  std::vector<double> peaks;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    const double a = std::abs(xs[i - 1].velocity), b = std::abs(xs[i].velocity), c = std::abs(xs[i + 1].velocity);
    if (b > a && b >= c) peaks.push_back(b);
  }
  ASSERT_GE(peaks.size(), 4u);
  for (std::size_t i = 1; i < peaks.size(); ++i) EXPECT_LT(peaks[i], peaks[i - 1]);
  EXPECT_THROW(simulate_pendulum(PendulumParams{.mass = 0.0}), ValidationError);
}

TEST(Oscillator, UndampedMatchesCosine) {
  OscillatorParams p;
  p.natural_frequency = 2.0;
  p.damping_ratio = 0.0;
  const double period = 2.0 * pi / p.natural_frequency;
  p.dt = period / 1000.0;
  p.num_steps = 10000;
  const auto xs = simulate_oscillator(p);
  for (const auto& s : xs) ASSERT_NEAR(s.position, std::cos(p.natural_frequency * s.t), 1e-6);
  // Samples fall on the same phase every period, so successive maxima agree.
  std::vector<double> maxima;
  for (std::size_t i = 1; i + 1 < xs.size(); ++i) {
    if (xs[i].position > xs[i - 1].position && xs[i].position >= xs[i + 1].position) maxima.push_back(xs[i].position);
  }
  ASSERT_GE(maxima.size(), 9u);
  for (double m : maxima) EXPECT_NEAR(m, maxima.front(), 1e-6);
}

TEST(Oscillator, DampedMatchesClosedForm) {
  OscillatorParams p;  // w0 = 1, zeta = 0.1, x0 = 1, v0 = 0
  const double wd = std::sqrt(1.0 - 0.01);
  for (const auto& s : simulate_oscillator(p)) {
    const double x = std::exp(-0.1 * s.t) * (std::cos(wd * s.t) + 0.1 / wd * std::sin(wd * s.t));
    ASSERT_NEAR(s.position, x, 1e-6) << "t=" << s.t;
  }
}

TEST(Oscillator, Rk4ConvergenceOrder) {
  OscillatorParams p;
  p.dt = 0.1;
  p.num_steps = 100;
  const double coarse = max_error_against_closed_form(p);
  p.dt = 0.05;
  p.num_steps = 200;
  const double fine = max_error_against_closed_form(p);
  const double order = std::log2(coarse / fine);
  EXPECT_GE(order, 3.5);
  EXPECT_LE(order, 4.5);
}

TEST(Narma, ZeroInputFirstStepAndFixedPoint) {
  const NarmaParams p;
  const std::vector<double> zeros(201, 0.0);
  const auto ys = generate_narma(p, zeros);
  EXPECT_EQ(ys[0].y, 0.0);
  EXPECT_DOUBLE_EQ(ys[1].y, 0.1);
  const double fixed = (0.6 - std::sqrt(0.20)) / 0.8;
  EXPECT_NEAR(fixed, 0.19098, 1e-5);
  EXPECT_NEAR(ys[200].y, fixed, 1e-9);
}

TEST(Narma, ConstantInputFixedPoint) {
  const NarmaParams p;
  const std::vector<double> half(400, 0.5);
  const auto ys = generate_narma(p, half);
  // y = 0.4 y + 0.4 y^2 + 0.6 * 0.125 + 0.1  <=>  0.4 y^2 - 0.6 y + 0.175 = 0
  const double fixed = (0.6 - std::sqrt(0.36 - 4 * 0.4 * 0.175)) / 0.8;
  double y = 0.0;
  for (int i = 0; i < 400; ++i) y = 0.4 * y + 0.4 * y * y + 0.6 * 0.125 + 0.1;
  EXPECT_NEAR(y, fixed, 1e-12);
  EXPECT_NEAR(ys.back().y, fixed, 1e-9);
}

TEST(Narma, TrigonometricInputAndDeterminism) {
  NarmaParams p;
  p.length = 300;
  const auto u = narma_input(p);
  ASSERT_EQ(u.size(), 300u);
  EXPECT_DOUBLE_EQ(u[0], 0.25);
  EXPECT_DOUBLE_EQ(u[25], 0.5 * std::sin(2 * pi * 25 / 100.0) * std::cos(2 * pi * 25 / 200.0) + 0.25);
  p.input = NarmaInput::Uniform;
  p.seed = 7;
  const auto a = generate_narma(p);
  const auto b = generate_narma(p);
  for (std::size_t i = 0; i < a.size(); ++i) {
    EXPECT_EQ(a[i].u, b[i].u);
    EXPECT_EQ(a[i].y, b[i].y);
    EXPECT_GE(a[i].u, 0.0);
    EXPECT_LE(a[i].u, 0.5);
  }
  p.seed = 8;
  EXPECT_NE(generate_narma(p)[5].u, a[5].u);
}

TEST(Narma, HigherOrderAndErrors) {
  NarmaParams p;
  p.order = 5;
  p.a = 0.3;
  p.b = 0.05;
  p.c = 1.5;
  p.length = 400;
  const auto ys = generate_narma(p);
  for (const auto& s : ys) EXPECT_TRUE(std::isfinite(s.y));
  // y_{t+1} = a y_t + b y_t (y_{t-1} + ... + y_{t-4}) + c u_t^2 u_{t-3} + d
  const std::size_t t = 100;
  double memory = 0.0;
  for (int i = 1; i < 5; ++i) memory += ys[t - i].y;
  EXPECT_NEAR(ys[t + 1].y, 0.3 * ys[t].y + 0.05 * ys[t].y * memory + 1.5 * ys[t].u * ys[t].u * ys[t - 3].u + 0.1,
              1e-15);

  p = NarmaParams{};
  p.order = 1;
  EXPECT_THROW(generate_narma(p), ValidationError);
  p = NarmaParams{};
  p.a = 3.0;
  EXPECT_THROW(generate_narma(p), GenerationError);
}

TEST(Dataset, SlidingWindows) {
  const std::vector<double> s{1, 2, 3, 4, 5};
  const auto ds = make_dataset(s, 2, 1.0, Normalization::None);
  ASSERT_EQ(ds.windows.size(), 3u);
  EXPECT_EQ(ds.windows[0].inputs, (std::vector<double>{1, 2}));
  EXPECT_EQ(ds.windows[0].target, 3.0);
  EXPECT_EQ(ds.windows[2].inputs, (std::vector<double>{3, 4}));
  EXPECT_EQ(ds.windows[2].target, 5.0);
  EXPECT_THROW(make_dataset(std::vector<double>{1, 2, 3}, 2, 0.5, Normalization::None), UsageError);
}

TEST(Dataset, NoLeakageAndTrainOnlyStatistics) {
  std::vector<double> s;
  for (int i = 0; i < 100; ++i) s.push_back(static_cast<double>(i));
  const auto ds = make_dataset(s, 3, 0.67, Normalization::MinMax);
  const auto train = ds.train();
  const auto test = ds.test();
  ASSERT_FALSE(test.empty());
  EXPECT_LT(train.back().start, test.front().start);
  // Train windows touch series[0, split + window); their min and max set the scale.
  EXPECT_EQ(ds.normalization.first, 0.0);
  EXPECT_EQ(ds.normalization.second, static_cast<double>(ds.split + 2));
  EXPECT_DOUBLE_EQ(train.front().inputs[0], -1.0);
  EXPECT_DOUBLE_EQ(train.back().target, 1.0);
  EXPECT_GT(test.back().target, 1.0);
}

TEST(Normalization, ErrorsAndRoundTrip) {
  const std::vector<double> flat(10, 2.5);
  EXPECT_THROW(make_dataset(flat, 2, 0.5, Normalization::ZScore), MetricError);
  EXPECT_THROW(make_dataset(flat, 2, 0.5, Normalization::MinMax), MetricError);
  try {
    NormalizationStats::fit(Normalization::ZScore, flat);
  } catch (const MetricError& e) {
    EXPECT_NE(std::string(e.what()).find("zero variance"), std::string::npos);
  }
  const std::vector<double> xs{-3.2, 0.7, 11.9, 4.4, 2.0};
  for (auto mode : {Normalization::MinMax, Normalization::ZScore, Normalization::None}) {
    const auto st = NormalizationStats::fit(mode, xs);
    for (double x : xs) EXPECT_NEAR(st.invert(st.apply(x)), x, 1e-12);
  }
  const auto mm = NormalizationStats::fit(Normalization::MinMax, xs);
  EXPECT_DOUBLE_EQ(mm.apply(-3.2), -1.0);
  EXPECT_DOUBLE_EQ(mm.apply(11.9), 1.0);
  EXPECT_EQ(normalization_from_string("zscore"), Normalization::ZScore);
  EXPECT_THROW(normalization_from_string("log"), ValidationError);
}

TEST(Csv, WriteReadAndDeterministicBytes) {
  const auto dir = std::filesystem::temp_directory_path() / "dqlstm_test_tasks";
  std::filesystem::create_directories(dir);
  const auto a = (dir / "a.csv").string(), b = (dir / "b.csv").string();
  NarmaParams p;
  p.length = 50;
  write_narma_csv(a, generate_narma(p));
  write_narma_csv(b, generate_narma(p));
  EXPECT_EQ(slurp(a), slurp(b));
  const auto y = read_csv_column(a, "y");
  ASSERT_EQ(y.size(), 50u);
  EXPECT_EQ(y[1], generate_narma(p)[1].y);
  EXPECT_THROW(read_csv_column(a, "missing"), ValidationError);
  EXPECT_EQ(format_double(0.1), "0.1");
  std::filesystem::remove_all(dir);
}
