#pragma once

// Benchmark series and their supervised windowed framing.

#include <array>
#include <cstdint>
#include <functional>
#include <map>
#include <span>
#include <string>
#include <vector>

namespace dqlstm::tasks {

/// theta'' + (b/m) theta' + (g/L) sin(theta) = 0
struct PendulumParams {
  double damping = 0.3;  ///< b, kg/s
  double mass = 1.0;     ///< kg
  double gravity = 9.81;
  double length = 1.0;   ///< m
  double theta0 = 0.0;   ///< rad
  double omega0 = 3.0;   ///< rad/s
  double dt = 0.01;
  int num_steps = 2000;

  void validate() const;
};

/// x'' + 2 zeta w0 x' + w0^2 x = 0
struct OscillatorParams {
  double natural_frequency = 1.0;
  double damping_ratio = 0.1;
  double x0 = 1.0;
  double v0 = 0.0;
  double dt = 0.01;
  int num_steps = 2000;

  void validate() const;
};

enum class NarmaInput { Trigonometric, Uniform };

/// Order 2 follows y_{t+1} = a y_t + b y_t y_{t-1} + c u_t^3 + d. Order n > 2 uses
/// y_{t+1} = a y_t + b y_t (y_{t-1} + ... + y_{t-n+1}) + c u_t^2 u_{t-n+2} + d,
/// which reduces to the order-2 relation at n = 2.
struct NarmaParams {
  int order = 2;
  double a = 0.4;
  double b = 0.4;
  double c = 0.6;
  double d = 0.1;
  NarmaInput input = NarmaInput::Trigonometric;
  int period = 100;  ///< T_u of the trigonometric stream
  int length = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

struct PhaseSample {
  double t = 0.0;
  double position = 0.0;  ///< theta or x
  double velocity = 0.0;  ///< theta' or x'
};

struct NarmaSample {
  double t = 0.0;
  double u = 0.0;
  double y = 0.0;
};

/// One classic RK4 step of y' = f(y) for a two-component state.
using State2 = std::array<double, 2>;
State2 rk4_step(const std::function<State2(const State2&)>& f, const State2& y, double dt);

/// num_steps + 1 samples, the first being the initial condition.
std::vector<PhaseSample> simulate_pendulum(const PendulumParams& params);
std::vector<PhaseSample> simulate_oscillator(const OscillatorParams& params);

/// Closed-form underdamped (or undamped) oscillator displacement.
double oscillator_closed_form(const OscillatorParams& params, double t);

/// Input stream u_t for t = 0..length-1.
std::vector<double> narma_input(const NarmaParams& params);

/// `length` samples with y_0 = 0 and zero history before t = 0. Throws
/// GenerationError naming the step when |y| exceeds 10.
std::vector<NarmaSample> generate_narma(const NarmaParams& params);
/// Same recurrence driven by an explicit input stream; params.length and the
/// input settings are ignored.
std::vector<NarmaSample> generate_narma(const NarmaParams& params, std::span<const double> input);

enum class Normalization { None, MinMax, ZScore };

const char* to_string(Normalization mode);
Normalization normalization_from_string(const std::string& name);

/// Affine map fitted on training data. MinMax maps [min, max] to [-1, 1];
/// ZScore subtracts the mean and divides by the standard deviation.
struct NormalizationStats {
  Normalization mode = Normalization::None;
  double first = 0.0;   ///< min or mean
  double second = 0.0;  ///< max or std

  static NormalizationStats fit(Normalization mode, std::span<const double> values);
  double apply(double x) const;
  double invert(double z) const;
};

struct Window {
  std::vector<double> inputs;
  double target = 0.0;
  std::size_t start = 0;  ///< index of inputs[0] in the source series
};

struct TimeSeriesDataset {
  std::vector<Window> windows;
  NormalizationStats normalization;
  std::size_t split = 0;  ///< windows[0, split) train, [split, end) test
  std::size_t window = 0;

  std::span<const Window> train() const { return std::span(windows).first(split); }
  std::span<const Window> test() const { return std::span(windows).subspan(split); }
};

/// Sliding windows of `window` values predicting the next one. Statistics come
/// from the values train windows touch. Throws UsageError for short series and
/// MetricError for degenerate statistics.
TimeSeriesDataset make_dataset(std::span<const double> series, std::size_t window, double train_fraction,
                               Normalization mode);

/// Refits nothing: applies `stats` and the given split point.
TimeSeriesDataset make_dataset_with(std::span<const double> series, std::size_t window, std::size_t split,
                                    const NormalizationStats& stats);

// CSV -------------------------------------------------------------------------

/// Shortest round-trip decimal form of a double.
std::string format_double(double x);

void write_phase_csv(const std::string& path, std::span<const PhaseSample> samples, const std::string& position,
                     const std::string& velocity);
void write_narma_csv(const std::string& path, std::span<const NarmaSample> samples);

/// Column `name` of a headed CSV file. Throws ValidationError.
std::vector<double> read_csv_column(const std::string& path, const std::string& name);

/// `key = value` lines, keys sorted.
void write_metadata(const std::string& path, const std::map<std::string, std::string>& values);

}  // namespace dqlstm::tasks
