#pragma once

// Dense statevector simulation of small qubit registers.
//
// Bit order: qubit 0 is the least-significant bit of the amplitude index, so
// |q1 q0> = |10> lives at index 2.

#include <complex>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace dqlstm::qsim {

using Amplitude = std::complex<double>;

inline constexpr int kDefaultMaxQubits = 24;

class Statevector {
 public:
  /// |0...0> on `num_qubits` qubits. Throws SizeError outside [1, max_qubits].
  explicit Statevector(int num_qubits, int max_qubits = kDefaultMaxQubits);

  /// Wraps an arbitrary amplitude vector; length must be a power of two >= 2.
  static Statevector from_amplitudes(std::vector<Amplitude> amplitudes);

  int num_qubits() const noexcept { return num_qubits_; }
  std::size_t size() const noexcept { return amplitudes_.size(); }
  std::span<const Amplitude> amplitudes() const noexcept { return amplitudes_; }

  double norm() const;

  /// Applies the 2x2 matrix [[m00, m01], [m10, m11]] to `target`.
  void apply_single(int target, Amplitude m00, Amplitude m01, Amplitude m10, Amplitude m11);
  void apply_cnot(int control, int target);

 private:
  Statevector() = default;
  void check_qubit(int qubit) const;

  int num_qubits_ = 0;
  std::vector<Amplitude> amplitudes_;
};

enum class GateKind { H, RX, RY, RZ, CNOT };

/// Where a rotation gate takes its angle from.
struct AngleSource {
  enum class Kind { Literal, Encoding, Variational };

  Kind kind = Kind::Literal;
  double literal = 0.0;
  std::size_t index = 0;

  static AngleSource fixed(double radians) { return {Kind::Literal, radians, 0}; }
  static AngleSource encoding(std::size_t i) { return {Kind::Encoding, 0.0, i}; }
  static AngleSource variational(std::size_t i) { return {Kind::Variational, 0.0, i}; }
};

struct Gate {
  GateKind kind = GateKind::H;
  int target = 0;
  std::optional<int> control;
  std::optional<AngleSource> angle;

  static Gate h(int target) { return {GateKind::H, target, std::nullopt, std::nullopt}; }
  static Gate rx(int target, AngleSource a) { return {GateKind::RX, target, std::nullopt, a}; }
  static Gate ry(int target, AngleSource a) { return {GateKind::RY, target, std::nullopt, a}; }
  static Gate rz(int target, AngleSource a) { return {GateKind::RZ, target, std::nullopt, a}; }
  static Gate cnot(int control, int target) { return {GateKind::CNOT, target, control, std::nullopt}; }
};

struct CircuitSpec {
  int num_qubits = 1;
  std::vector<Gate> gates;
  std::size_t num_encoding_angles = 0;
  std::size_t num_variational_params = 0;
  /// Qubits measured as single-qubit Pauli-Z expectations, in output order.
  std::vector<int> observables;

  /// Checks gate indices, angle-source indices and observables. Throws IndexError.
  void validate() const;
};

Statevector new_statevector(int num_qubits, int max_qubits = kDefaultMaxQubits);

/// Resolves the angle a rotation gate uses. Throws IndexError on a bad index.
double resolve_angle(const AngleSource& source, std::span<const double> encoding_angles,
                     std::span<const double> params);

void apply_gate(Statevector& state, const Gate& gate, std::span<const double> encoding_angles = {},
                std::span<const double> params = {});

/// U(params) U_enc(angles) |0...0>. Throws ShapeError when vector lengths differ from
/// the counts declared in `spec`.
Statevector run_circuit(const CircuitSpec& spec, std::span<const double> encoding_angles,
                        std::span<const double> params, int max_qubits = kDefaultMaxQubits);

double expectation_z(const Statevector& state, int qubit);

/// <Z_k> for every observable of `spec`, in order.
std::vector<double> measure_observables(const CircuitSpec& spec, const Statevector& state);

}  // namespace dqlstm::qsim
