#pragma once

// Variational quantum circuits: angle encoding, hardware-efficient ansatz,
// Pauli-Z read-out and exact gradients.
//
// Circuit layout for a config (q qubits, depth L, input_dim d, output_dim k):
//   [H on every qubit]                       (hadamard_layer)
//   RY(arctan x_j) RZ(arctan x_j^2) on qubit j, j < d
//   L x { CNOT ring i -> (i+1) mod q (omitted for q = 1);
//         RY(theta) RZ(theta) on every qubit }
//   <Z> on qubits 0..k-1
// Parameter 2*(layer*q + j) drives the RY of qubit j in that layer, the next
// index drives its RZ.

#include <cstddef>
#include <random>
#include <span>
#include <vector>

#include "dqlstm/matrix.hpp"
#include "dqlstm/qsim.hpp"

namespace dqlstm::vqc {

struct VqcConfig {
  int num_qubits = 1;
  int depth = 1;
  int input_dim = 1;
  int output_dim = 1;
  bool hadamard_layer = true;

  std::size_t num_params() const {
    return 2 * static_cast<std::size_t>(num_qubits) * static_cast<std::size_t>(depth);
  }
  std::size_t num_encoding_angles() const { return 2 * static_cast<std::size_t>(input_dim); }

  /// Throws ValidationError when dims do not fit the register.
  void validate(int max_qubits = qsim::kDefaultMaxQubits) const;

  bool operator==(const VqcConfig&) const = default;
};

/// Trainable angles of one circuit, length 2*q*L.
using VqcParams = std::vector<double>;

enum class GradientMode { ParameterShift, FiniteDifference };

qsim::CircuitSpec build_circuit(const VqcConfig& config);

/// Angle pair (arctan x, arctan x^2) per feature. Throws EncodingError on non-finite input.
std::vector<double> encode_features(std::span<const double> features);

/// Uniform in [-0.1, 0.1].
VqcParams init_params(const VqcConfig& config, std::mt19937_64& rng);

std::vector<double> evaluate(const VqcConfig& config, std::span<const double> params,
                             std::span<const double> features);

/// d<Z_k>/d theta_p via the two-term shift rule; output_dim x num_params.
Matrix param_shift_gradient(const VqcConfig& config, std::span<const double> params,
                            std::span<const double> features);

/// d<Z_k>/d x_j: shift rule on both encoding angles of feature j, chained through
/// the arctan encoding; output_dim x input_dim.
Matrix input_jacobian(const VqcConfig& config, std::span<const double> params,
                      std::span<const double> features);

/// Central-difference counterparts, step `h`.
Matrix finite_difference_gradient(const VqcConfig& config, std::span<const double> params,
                                  std::span<const double> features, double h = 1e-5);
Matrix finite_difference_input_jacobian(const VqcConfig& config, std::span<const double> params,
                                        std::span<const double> features, double h = 1e-5);

Matrix param_gradient(GradientMode mode, const VqcConfig& config, std::span<const double> params,
                      std::span<const double> features);
Matrix feature_gradient(GradientMode mode, const VqcConfig& config,
                        std::span<const double> params, std::span<const double> features);

}  // namespace dqlstm::vqc
