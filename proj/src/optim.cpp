#include "dqlstm/optim.hpp"

#include <cmath>

#include "dqlstm/error.hpp"

namespace dqlstm::train {

void sgd_step(std::span<double> params, std::span<const double> grads, double lr) {
  if (params.size() != grads.size()) throw ShapeError("parameter and gradient counts differ");
  for (std::size_t i = 0; i < params.size(); ++i) params[i] -= lr * grads[i];
}

void rmsprop_step(std::span<double> params, std::span<const double> grads, RmspropState& state, double lr,
                  double rho, double eps) {
  if (params.size() != grads.size()) throw ShapeError("parameter and gradient counts differ");
  if (state.mean_square.empty()) state.mean_square.assign(params.size(), 0.0);
  if (state.mean_square.size() != params.size()) throw ShapeError("RMSProp state has the wrong size");
  for (std::size_t i = 0; i < params.size(); ++i) {
    double& s = state.mean_square[i];
    s = rho * s + (1.0 - rho) * grads[i] * grads[i];
    params[i] -= lr * grads[i] / (std::sqrt(s) + eps);
  }
}

const char* to_string(OptimizerKind kind) { return kind == OptimizerKind::Sgd ? "sgd" : "rmsprop"; }

OptimizerKind optimizer_from_string(const std::string& name) {
  if (name == "sgd") return OptimizerKind::Sgd;
  if (name == "rmsprop") return OptimizerKind::RmsProp;
  throw ValidationError("unknown optimizer '" + name + "'");
}

void OptimizerConfig::validate() const {
  if (!(learning_rate >= 0.0)) throw ValidationError("learning rate must be >= 0");
  if (kind == OptimizerKind::RmsProp) {
    if (!(rho > 0.0 && rho < 1.0)) throw ValidationError("RMSProp decay must lie in (0, 1)");
    if (!(epsilon > 0.0)) throw ValidationError("RMSProp epsilon must be > 0");
  }
}

Optimizer::Optimizer(OptimizerConfig config) : config_(config) { config_.validate(); }

void Optimizer::step(std::span<double> params, std::span<const double> grads) {
  if (config_.kind == OptimizerKind::Sgd) {
    sgd_step(params, grads, config_.learning_rate);
  } else {
    rmsprop_step(params, grads, rmsprop_, config_.learning_rate, config_.rho, config_.epsilon);
  }
}

}  // namespace dqlstm::train
