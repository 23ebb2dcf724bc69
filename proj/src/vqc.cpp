#include "dqlstm/vqc.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "dqlstm/error.hpp"

namespace dqlstm::vqc {

namespace {

constexpr double kShift = std::numbers::pi / 2.0;

void check_inputs(const VqcConfig& config, std::span<const double> params,
                  std::span<const double> features) {
  if (params.size() != config.num_params()) {
    throw ShapeError("expected " + std::to_string(config.num_params()) + " parameters, got " +
                     std::to_string(params.size()));
  }
  if (features.size() != static_cast<std::size_t>(config.input_dim)) {
    throw ShapeError("expected " + std::to_string(config.input_dim) + " features, got " +
                     std::to_string(features.size()));
  }
}

std::vector<double> run(const qsim::CircuitSpec& spec, std::span<const double> angles,
                        std::span<const double> params) {
  return qsim::measure_observables(spec, qsim::run_circuit(spec, angles, params));
}

}  // namespace

void VqcConfig::validate(int max_qubits) const {
  if (num_qubits < 1 || num_qubits > max_qubits) {
    throw ValidationError("num_qubits " + std::to_string(num_qubits) + " outside [1, " +
                          std::to_string(max_qubits) + "]");
  }
  if (depth < 0) throw ValidationError("depth must be >= 0");
  if (input_dim < 0 || input_dim > num_qubits) {
    throw ValidationError("input_dim " + std::to_string(input_dim) + " exceeds " +
                          std::to_string(num_qubits) + " qubits");
  }
  if (output_dim < 1 || output_dim > num_qubits) {
    throw ValidationError("output_dim " + std::to_string(output_dim) + " outside [1, " +
                          std::to_string(num_qubits) + "]");
  }
}

qsim::CircuitSpec build_circuit(const VqcConfig& config) {
  config.validate();
  using qsim::AngleSource;
  using qsim::Gate;
  const int q = config.num_qubits;

  qsim::CircuitSpec spec;
  spec.num_qubits = q;
  spec.num_encoding_angles = config.num_encoding_angles();
  spec.num_variational_params = config.num_params();

  if (config.hadamard_layer) {
    for (int j = 0; j < q; ++j) spec.gates.push_back(Gate::h(j));
  }
  for (int j = 0; j < config.input_dim; ++j) {
    const auto base = 2 * static_cast<std::size_t>(j);
    spec.gates.push_back(Gate::ry(j, AngleSource::encoding(base)));
    spec.gates.push_back(Gate::rz(j, AngleSource::encoding(base + 1)));
  }
  std::size_t p = 0;
  for (int layer = 0; layer < config.depth; ++layer) {
    if (q > 1) {
      for (int i = 0; i < q; ++i) spec.gates.push_back(Gate::cnot(i, (i + 1) % q));
    }
    for (int j = 0; j < q; ++j) {
      spec.gates.push_back(Gate::ry(j, AngleSource::variational(p++)));
      spec.gates.push_back(Gate::rz(j, AngleSource::variational(p++)));
    }
  }
  for (int k = 0; k < config.output_dim; ++k) spec.observables.push_back(k);
  return spec;
}

std::vector<double> encode_features(std::span<const double> features) {
  std::vector<double> angles;
  angles.reserve(2 * features.size());
  for (std::size_t j = 0; j < features.size(); ++j) {
    const double x = features[j];
    if (!std::isfinite(x)) throw EncodingError("feature " + std::to_string(j) + " is not finite");
    angles.push_back(std::atan(x));
    angles.push_back(std::atan(x * x));
  }
  return angles;
}

VqcParams init_params(const VqcConfig& config, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> dist(-0.1, 0.1);
  VqcParams params(config.num_params());
  for (double& p : params) p = dist(rng);
  return params;
}

std::vector<double> evaluate(const VqcConfig& config, std::span<const double> params,
                             std::span<const double> features) {
  check_inputs(config, params, features);
  const auto spec = build_circuit(config);
  const auto angles = encode_features(features);
  return run(spec, angles, params);
}

Matrix param_shift_gradient(const VqcConfig& config, std::span<const double> params,
                            std::span<const double> features) {
  check_inputs(config, params, features);
  const auto spec = build_circuit(config);
  const auto angles = encode_features(features);
  const std::size_t outputs = spec.observables.size();

  Matrix jac(outputs, params.size());
  std::vector<double> shifted(params.begin(), params.end());
  for (std::size_t p = 0; p < params.size(); ++p) {
    shifted[p] = params[p] + kShift;
    const auto plus = run(spec, angles, shifted);
    shifted[p] = params[p] - kShift;
    const auto minus = run(spec, angles, shifted);
    shifted[p] = params[p];
    for (std::size_t k = 0; k < outputs; ++k) jac(k, p) = 0.5 * (plus[k] - minus[k]);
  }
  return jac;
}

Matrix input_jacobian(const VqcConfig& config, std::span<const double> params,
                      std::span<const double> features) {
  check_inputs(config, params, features);
  const auto spec = build_circuit(config);
  const auto angles = encode_features(features);
  const std::size_t outputs = spec.observables.size();

  Matrix jac(outputs, features.size());
  std::vector<double> shifted = angles;
  for (std::size_t j = 0; j < features.size(); ++j) {
    const double x = features[j];
    // d(arctan x)/dx and d(arctan x^2)/dx
    const double chain[2] = {1.0 / (1.0 + x * x), 2.0 * x / (1.0 + x * x * x * x)};
    for (std::size_t which = 0; which < 2; ++which) {
      const std::size_t a = 2 * j + which;
      shifted[a] = angles[a] + kShift;
      const auto plus = run(spec, shifted, params);
      shifted[a] = angles[a] - kShift;
      const auto minus = run(spec, shifted, params);
      shifted[a] = angles[a];
      for (std::size_t k = 0; k < outputs; ++k) {
        jac(k, j) += 0.5 * (plus[k] - minus[k]) * chain[which];
      }
    }
  }
  return jac;
}

Matrix finite_difference_gradient(const VqcConfig& config, std::span<const double> params,
                                  std::span<const double> features, double h) {
  check_inputs(config, params, features);
  const auto spec = build_circuit(config);
  const auto angles = encode_features(features);
  const std::size_t outputs = spec.observables.size();

  Matrix jac(outputs, params.size());
  std::vector<double> shifted(params.begin(), params.end());
  for (std::size_t p = 0; p < params.size(); ++p) {
    shifted[p] = params[p] + h;
    const auto plus = run(spec, angles, shifted);
    shifted[p] = params[p] - h;
    const auto minus = run(spec, angles, shifted);
    shifted[p] = params[p];
    for (std::size_t k = 0; k < outputs; ++k) jac(k, p) = (plus[k] - minus[k]) / (2.0 * h);
  }
  return jac;
}

Matrix finite_difference_input_jacobian(const VqcConfig& config, std::span<const double> params,
                                        std::span<const double> features, double h) {
  check_inputs(config, params, features);
  const std::size_t outputs = static_cast<std::size_t>(config.output_dim);
  Matrix jac(outputs, features.size());
  std::vector<double> shifted(features.begin(), features.end());
  for (std::size_t j = 0; j < features.size(); ++j) {
    shifted[j] = features[j] + h;
    const auto plus = evaluate(config, params, shifted);
    shifted[j] = features[j] - h;
    const auto minus = evaluate(config, params, shifted);
    shifted[j] = features[j];
    for (std::size_t k = 0; k < outputs; ++k) jac(k, j) = (plus[k] - minus[k]) / (2.0 * h);
  }
  return jac;
}

Matrix param_gradient(GradientMode mode, const VqcConfig& config, std::span<const double> params,
                      std::span<const double> features) {
  return mode == GradientMode::ParameterShift ? param_shift_gradient(config, params, features)
                                              : finite_difference_gradient(config, params, features);
}

Matrix feature_gradient(GradientMode mode, const VqcConfig& config,
                        std::span<const double> params, std::span<const double> features) {
  return mode == GradientMode::ParameterShift
             ? input_jacobian(config, params, features)
             : finite_difference_input_jacobian(config, params, features);
}

}  // namespace dqlstm::vqc
