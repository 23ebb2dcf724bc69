#include "dqlstm/tasks.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

#include "dqlstm/error.hpp"

namespace dqlstm::tasks {

void PendulumParams::validate() const {
  if (!(mass > 0) || !(length > 0) || !(gravity > 0) || !(damping >= 0) || !(dt > 0)) {
    throw ValidationError("pendulum needs m > 0, L > 0, g > 0, b >= 0, dt > 0");
  }
  if (num_steps < 1) throw ValidationError("pendulum needs at least one step");
}

void OscillatorParams::validate() const {
  if (!(natural_frequency > 0) || !(damping_ratio >= 0) || !(dt > 0)) {
    throw ValidationError("oscillator needs w0 > 0, zeta >= 0, dt > 0");
  }
  if (num_steps < 1) throw ValidationError("oscillator needs at least one step");
}

void NarmaParams::validate() const {
  if (order < 2) throw ValidationError("NARMA order must be >= 2, got " + std::to_string(order));
  if (length <= order) throw ValidationError("NARMA length must exceed the order");
  if (input == NarmaInput::Trigonometric && period < 1) throw ValidationError("NARMA period must be >= 1");
}

State2 rk4_step(const std::function<State2(const State2&)>& f, const State2& y, double dt) {
  auto axpy = [](const State2& base, double h, const State2& k) {
    return State2{base[0] + h * k[0], base[1] + h * k[1]};
  };
  const State2 k1 = f(y);
  const State2 k2 = f(axpy(y, dt / 2, k1));
  const State2 k3 = f(axpy(y, dt / 2, k2));
  const State2 k4 = f(axpy(y, dt, k3));
  return {y[0] + dt / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0]),
          y[1] + dt / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])};
}

namespace {

std::vector<PhaseSample> integrate(const std::function<State2(const State2&)>& f, State2 y, double dt,
                                   int steps) {
  std::vector<PhaseSample> out;
  out.reserve(static_cast<std::size_t>(steps) + 1);
  out.push_back({0.0, y[0], y[1]});
  for (int n = 1; n <= steps; ++n) {
    y = rk4_step(f, y, dt);
    out.push_back({n * dt, y[0], y[1]});
  }
  return out;
}

}  // namespace

std::vector<PhaseSample> simulate_pendulum(const PendulumParams& p) {
  p.validate();
  const double friction = p.damping / p.mass;
  const double stiffness = p.gravity / p.length;
  return integrate(
      [&](const State2& s) {
        return State2{s[1], -friction * s[1] - stiffness * std::sin(s[0])};
      },
      {p.theta0, p.omega0}, p.dt, p.num_steps);
}

std::vector<PhaseSample> simulate_oscillator(const OscillatorParams& p) {
  p.validate();
  const double w0 = p.natural_frequency;
  const double zeta = p.damping_ratio;
  return integrate(
      [&](const State2& s) {
        return State2{s[1], -2.0 * zeta * w0 * s[1] - w0 * w0 * s[0]};
      },
      {p.x0, p.v0}, p.dt, p.num_steps);
}

double oscillator_closed_form(const OscillatorParams& p, double t) {
  const double w0 = p.natural_frequency;
  const double zeta = p.damping_ratio;
  if (zeta >= 1.0) throw UsageError("closed form implemented for zeta < 1 only");
  const double wd = w0 * std::sqrt(1.0 - zeta * zeta);
  const double decay = zeta * w0;
  // x(t) = e^{-decay t} [x0 cos(wd t) + (v0 + decay x0)/wd sin(wd t)]
  return std::exp(-decay * t) * (p.x0 * std::cos(wd * t) + (p.v0 + decay * p.x0) / wd * std::sin(wd * t));
}

std::vector<double> narma_input(const NarmaParams& p) {
  p.validate();
  std::vector<double> u(static_cast<std::size_t>(p.length));
  if (p.input == NarmaInput::Trigonometric) {
    const double w = 2.0 * std::numbers::pi / p.period;
    for (std::size_t t = 0; t < u.size(); ++t) {
      const double td = static_cast<double>(t);
      u[t] = 0.5 * std::sin(w * td) * std::cos(w * td / 2.0) + 0.25;
    }
  } else {
    std::mt19937_64 rng(p.seed);
    std::uniform_real_distribution<double> dist(0.0, 0.5);
    for (double& x : u) x = dist(rng);
  }
  return u;
}

std::vector<NarmaSample> generate_narma(const NarmaParams& p) { return generate_narma(p, narma_input(p)); }

std::vector<NarmaSample> generate_narma(const NarmaParams& p, std::span<const double> u) {
  p.validate();
  const auto len = u.size();
  std::vector<double> y(len, 0.0);
  auto y_at = [&](long i) { return i < 0 ? 0.0 : y[static_cast<std::size_t>(i)]; };
  auto u_at = [&](long i) { return i < 0 ? 0.0 : u[static_cast<std::size_t>(i)]; };
  for (std::size_t t = 0; t + 1 < len; ++t) {
    const long ti = static_cast<long>(t);
    double memory = 0.0;
    for (int i = 1; i < p.order; ++i) memory += y_at(ti - i);
    const double next = p.a * y[t] + p.b * y[t] * memory + p.c * u[t] * u[t] * u_at(ti - p.order + 2) + p.d;
    if (!std::isfinite(next) || std::abs(next) > 10.0) {
      throw GenerationError("NARMA-" + std::to_string(p.order) + " diverged at step " + std::to_string(t + 1));
    }
    y[t + 1] = next;
  }
  std::vector<NarmaSample> out(len);
  for (std::size_t t = 0; t < len; ++t) out[t] = {static_cast<double>(t), u[t], y[t]};
  return out;
}

const char* to_string(Normalization mode) {
  switch (mode) {
    case Normalization::None:
      return "none";
    case Normalization::MinMax:
      return "minmax";
    case Normalization::ZScore:
      return "zscore";
  }
  return "none";
}

Normalization normalization_from_string(const std::string& name) {
  if (name == "none") return Normalization::None;
  if (name == "minmax") return Normalization::MinMax;
  if (name == "zscore") return Normalization::ZScore;
  throw ValidationError("unknown normalization '" + name + "'");
}

NormalizationStats NormalizationStats::fit(Normalization mode, std::span<const double> values) {
  NormalizationStats s;
  s.mode = mode;
  if (mode == Normalization::None) return s;
  if (values.empty()) throw MetricError("cannot fit normalization on no data");
  if (mode == Normalization::MinMax) {
    const auto [lo, hi] = std::minmax_element(values.begin(), values.end());
    if (!(*hi > *lo)) throw MetricError("zero range");
    s.first = *lo;
    s.second = *hi;
    return s;
  }
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  if (!(var > 0.0)) throw MetricError("zero variance");
  s.first = mean;
  s.second = std::sqrt(var);
  return s;
}

double NormalizationStats::apply(double x) const {
  switch (mode) {
    case Normalization::MinMax:
      return 2.0 * (x - first) / (second - first) - 1.0;
    case Normalization::ZScore:
      return (x - first) / second;
    case Normalization::None:
      break;
  }
  return x;
}

double NormalizationStats::invert(double z) const {
  switch (mode) {
    case Normalization::MinMax:
      return (z + 1.0) / 2.0 * (second - first) + first;
    case Normalization::ZScore:
      return z * second + first;
    case Normalization::None:
      break;
  }
  return z;
}

TimeSeriesDataset make_dataset_with(std::span<const double> series, std::size_t window, std::size_t split,
                                    const NormalizationStats& stats) {
  if (window < 1) throw UsageError("window must be >= 1");
  if (series.size() <= window + 1) {
    throw UsageError("series of length " + std::to_string(series.size()) + " too short for window " +
                     std::to_string(window));
  }
  const std::size_t count = series.size() - window;
  if (split > count) throw UsageError("split beyond the last window");
  TimeSeriesDataset ds;
  ds.window = window;
  ds.split = split;
  ds.normalization = stats;
  ds.windows.reserve(count);
  for (std::size_t s = 0; s < count; ++s) {
    Window w;
    w.start = s;
    w.inputs.reserve(window);
    for (std::size_t k = 0; k < window; ++k) w.inputs.push_back(stats.apply(series[s + k]));
    w.target = stats.apply(series[s + window]);
    ds.windows.push_back(std::move(w));
  }
  return ds;
}

TimeSeriesDataset make_dataset(std::span<const double> series, std::size_t window, double train_fraction,
                               Normalization mode) {
  if (window < 1) throw UsageError("window must be >= 1");
  if (series.size() <= window + 1) {
    throw UsageError("series of length " + std::to_string(series.size()) + " too short for window " +
                     std::to_string(window));
  }
  if (!(train_fraction > 0.0) || !(train_fraction <= 1.0)) {
    throw UsageError("train fraction must lie in (0, 1]");
  }
  const std::size_t count = series.size() - window;
  const auto split = static_cast<std::size_t>(std::floor(train_fraction * static_cast<double>(count)));
  if (split == 0) throw UsageError("train fraction leaves no training windows");
  // Train windows touch series[0, split + window).
  const auto stats = NormalizationStats::fit(mode, series.first(split + window));
  return make_dataset_with(series, window, split, stats);
}

std::string format_double(double x) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, x);
  return std::string(buf, ptr);
}

void write_phase_csv(const std::string& path, std::span<const PhaseSample> samples, const std::string& position,
                     const std::string& velocity) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << "t," << position << ',' << velocity << '\n';
  for (const auto& s : samples) {
    out << format_double(s.t) << ',' << format_double(s.position) << ',' << format_double(s.velocity) << '\n';
  }
}

void write_narma_csv(const std::string& path, std::span<const NarmaSample> samples) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  out << "t,u,y\n";
  for (const auto& s : samples) {
    out << format_double(s.t) << ',' << format_double(s.u) << ',' << format_double(s.y) << '\n';
  }
}

std::vector<double> read_csv_column(const std::string& path, const std::string& name) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open dataset '" + path + "'");
  std::string line;
  if (!std::getline(in, line)) throw ValidationError("dataset '" + path + "' is empty");
  std::size_t column = 0;
  bool found = false;
  {
    std::istringstream header(line);
    std::string cell;
    for (std::size_t i = 0; std::getline(header, cell, ','); ++i) {
      if (!cell.empty() && cell.back() == '\r') cell.pop_back();
      if (cell == name) {
        column = i;
        found = true;
        break;
      }
    }
  }
  if (!found) throw ValidationError("dataset '" + path + "' has no column '" + name + "'");
  std::vector<double> values;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream row(line);
    std::string cell;
    for (std::size_t i = 0; i <= column; ++i) {
      if (!std::getline(row, cell, ',')) {
        throw ValidationError("dataset '" + path + "' line " + std::to_string(line_no) + " is short");
      }
    }
    double v = 0.0;
    const auto [ptr, ec] = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (ec != std::errc{}) {
      throw ValidationError("dataset '" + path + "' line " + std::to_string(line_no) + ": bad number");
    }
    values.push_back(v);
  }
  return values;
}

void write_metadata(const std::string& path, const std::map<std::string, std::string>& values) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write '" + path + "'");
  for (const auto& [k, v] : values) out << k << " = " << v << '\n';
}

}  // namespace dqlstm::tasks
