#include "dqlstm/qsim.hpp"

#include <bit>
#include <cmath>
#include <string>

#include "dqlstm/error.hpp"

namespace dqlstm::qsim {

namespace {

const Amplitude kI{0.0, 1.0};

std::string qubit_message(int qubit, int num_qubits) {
  return "qubit index " + std::to_string(qubit) + " out of range for " +
         std::to_string(num_qubits) + "-qubit register";
}

}  // namespace

Statevector::Statevector(int num_qubits, int max_qubits) : num_qubits_(num_qubits) {
  if (num_qubits < 1 || num_qubits > max_qubits) {
    throw SizeError("qubit count " + std::to_string(num_qubits) + " outside [1, " +
                    std::to_string(max_qubits) + "]");
  }
  amplitudes_.assign(std::size_t{1} << num_qubits, Amplitude{0.0, 0.0});
  amplitudes_[0] = 1.0;
}

Statevector Statevector::from_amplitudes(std::vector<Amplitude> amplitudes) {
  if (amplitudes.size() < 2 || !std::has_single_bit(amplitudes.size())) {
    throw SizeError("amplitude count must be a power of two >= 2");
  }
  Statevector s;
  s.num_qubits_ = std::countr_zero(amplitudes.size());
  s.amplitudes_ = std::move(amplitudes);
  return s;
}

double Statevector::norm() const {
  double sum = 0.0;
  for (const auto& a : amplitudes_) sum += std::norm(a);
  return std::sqrt(sum);
}

void Statevector::check_qubit(int qubit) const {
  if (qubit < 0 || qubit >= num_qubits_) throw IndexError(qubit_message(qubit, num_qubits_));
}

void Statevector::apply_single(int target, Amplitude m00, Amplitude m01, Amplitude m10,
                               Amplitude m11) {
  check_qubit(target);
  const std::size_t stride = std::size_t{1} << target;
  const std::size_t n = amplitudes_.size();
  for (std::size_t base = 0; base < n; base += 2 * stride) {
    for (std::size_t k = base; k < base + stride; ++k) {
      const Amplitude a0 = amplitudes_[k];
      const Amplitude a1 = amplitudes_[k + stride];
      amplitudes_[k] = m00 * a0 + m01 * a1;
      amplitudes_[k + stride] = m10 * a0 + m11 * a1;
    }
  }
}

void Statevector::apply_cnot(int control, int target) {
  check_qubit(control);
  check_qubit(target);
  if (control == target) throw IndexError("CNOT control equals target");
  const std::size_t cmask = std::size_t{1} << control;
  const std::size_t tmask = std::size_t{1} << target;
  for (std::size_t k = 0; k < amplitudes_.size(); ++k) {
    // Visit each swapped pair once, from its target-bit-0 member.
    if ((k & cmask) && !(k & tmask)) std::swap(amplitudes_[k], amplitudes_[k | tmask]);
  }
}

void CircuitSpec::validate() const {
  for (const Gate& g : gates) {
    if (g.target < 0 || g.target >= num_qubits) throw IndexError(qubit_message(g.target, num_qubits));
    const bool is_rotation = g.kind == GateKind::RX || g.kind == GateKind::RY || g.kind == GateKind::RZ;
    if (g.kind == GateKind::CNOT) {
      if (!g.control) throw IndexError("CNOT without control qubit");
      if (*g.control < 0 || *g.control >= num_qubits) {
        throw IndexError(qubit_message(*g.control, num_qubits));
      }
      if (*g.control == g.target) throw IndexError("CNOT control equals target");
    } else if (g.control) {
      throw IndexError("only CNOT takes a control qubit");
    }
    if (is_rotation != g.angle.has_value()) {
      throw IndexError("angle source present on a non-rotation gate or missing on a rotation");
    }
    if (g.angle) {
      if (g.angle->kind == AngleSource::Kind::Encoding && g.angle->index >= num_encoding_angles) {
        throw IndexError("encoding angle index " + std::to_string(g.angle->index) + " out of range");
      }
      if (g.angle->kind == AngleSource::Kind::Variational &&
          g.angle->index >= num_variational_params) {
        throw IndexError("variational parameter index " + std::to_string(g.angle->index) +
                         " out of range");
      }
    }
  }
  for (std::size_t i = 0; i < observables.size(); ++i) {
    const int q = observables[i];
    if (q < 0 || q >= num_qubits) throw IndexError(qubit_message(q, num_qubits));
    for (std::size_t j = 0; j < i; ++j) {
      if (observables[j] == q) throw IndexError("duplicate observable qubit " + std::to_string(q));
    }
  }
}

Statevector new_statevector(int num_qubits, int max_qubits) {
  return Statevector(num_qubits, max_qubits);
}

double resolve_angle(const AngleSource& source, std::span<const double> encoding_angles,
                     std::span<const double> params) {
  switch (source.kind) {
    case AngleSource::Kind::Literal:
      return source.literal;
    case AngleSource::Kind::Encoding:
      if (source.index >= encoding_angles.size()) {
        throw IndexError("encoding angle index " + std::to_string(source.index) + " out of range");
      }
      return encoding_angles[source.index];
    case AngleSource::Kind::Variational:
      if (source.index >= params.size()) {
        throw IndexError("variational parameter index " + std::to_string(source.index) +
                         " out of range");
      }
      return params[source.index];
  }
  throw IndexError("unknown angle source");
}

void apply_gate(Statevector& state, const Gate& gate, std::span<const double> encoding_angles,
                std::span<const double> params) {
  switch (gate.kind) {
    case GateKind::H: {
      const double r = 1.0 / std::sqrt(2.0);
      state.apply_single(gate.target, r, r, r, -r);
      return;
    }
    case GateKind::CNOT:
      if (!gate.control) throw IndexError("CNOT without control qubit");
      state.apply_cnot(*gate.control, gate.target);
      return;
    case GateKind::RX:
    case GateKind::RY:
    case GateKind::RZ:
      break;
  }
  if (!gate.angle) throw IndexError("rotation gate without angle source");
  const double theta = resolve_angle(*gate.angle, encoding_angles, params);
  const double c = std::cos(theta / 2.0);
  const double s = std::sin(theta / 2.0);
  switch (gate.kind) {
    case GateKind::RX:
      state.apply_single(gate.target, c, -kI * s, -kI * s, c);
      break;
    case GateKind::RY:
      state.apply_single(gate.target, c, -s, s, c);
      break;
    case GateKind::RZ:
      state.apply_single(gate.target, Amplitude{c, -s}, 0.0, 0.0, Amplitude{c, s});
      break;
    default:
      break;
  }
}

Statevector run_circuit(const CircuitSpec& spec, std::span<const double> encoding_angles,
                        std::span<const double> params, int max_qubits) {
  if (encoding_angles.size() != spec.num_encoding_angles) {
    throw ShapeError("expected " + std::to_string(spec.num_encoding_angles) +
                     " encoding angles, got " + std::to_string(encoding_angles.size()));
  }
  if (params.size() != spec.num_variational_params) {
    throw ShapeError("expected " + std::to_string(spec.num_variational_params) +
                     " variational parameters, got " + std::to_string(params.size()));
  }
  Statevector state(spec.num_qubits, max_qubits);
  for (const Gate& g : spec.gates) apply_gate(state, g, encoding_angles, params);
  return state;
}

double expectation_z(const Statevector& state, int qubit) {
  if (qubit < 0 || qubit >= state.num_qubits()) {
    throw IndexError(qubit_message(qubit, state.num_qubits()));
  }
  const std::size_t mask = std::size_t{1} << qubit;
  const auto amps = state.amplitudes();
  double sum = 0.0;
  for (std::size_t k = 0; k < amps.size(); ++k) {
    const double p = std::norm(amps[k]);
    sum += (k & mask) ? -p : p;
  }
  return sum;
}

std::vector<double> measure_observables(const CircuitSpec& spec, const Statevector& state) {
  std::vector<double> out;
  out.reserve(spec.observables.size());
  for (int q : spec.observables) out.push_back(expectation_z(state, q));
  return out;
}

}  // namespace dqlstm::qsim
