#pragma once

#include <span>
#include <string>
#include <vector>

namespace dqlstm::train {

/// theta <- theta - lr * g
void sgd_step(std::span<double> params, std::span<const double> grads, double lr);

struct RmspropState {
  std::vector<double> mean_square;
};

/// s <- rho s + (1 - rho) g^2;  theta <- theta - lr g / (sqrt(s) + eps).
/// An empty state is zero-initialized to the parameter count.
void rmsprop_step(std::span<double> params, std::span<const double> grads, RmspropState& state, double lr,
                  double rho, double eps);

enum class OptimizerKind { Sgd, RmsProp };

const char* to_string(OptimizerKind kind);
OptimizerKind optimizer_from_string(const std::string& name);

struct OptimizerConfig {
  OptimizerKind kind = OptimizerKind::RmsProp;
  double learning_rate = 0.01;
  double rho = 0.9;
  double epsilon = 1e-8;

  void validate() const;
};

class Optimizer {
 public:
  explicit Optimizer(OptimizerConfig config);

  void step(std::span<double> params, std::span<const double> grads);
  const OptimizerConfig& config() const { return config_; }

 private:
  OptimizerConfig config_;
  RmspropState rmsprop_;
};

}  // namespace dqlstm::train
