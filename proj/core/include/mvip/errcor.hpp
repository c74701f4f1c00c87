#pragma once

#include <vector>

#include <Eigen/Core>

#include "mvip/rbf_network.hpp"

namespace mvip {

struct TrainingConfig {
  int max_iterations = 30;      ///< S, inner updates per inserted neuron
  double desired_rmse = 1e-5;   ///< e_d
  int max_neurons = 20;         ///< N
  double mu_initial = 0.01;     ///< LM damping at each insertion
  double mu_factor = 10.0;      ///< divide on acceptance, multiply on rejection
  double mu_max = 1e10;
  double min_radius = 1e-6;     ///< steps producing a smaller radius are rejected
  double progress_factor = 0.999;  ///< best RMSE must drop below factor * previous best

  void validate() const;  ///< throws ConfigError
};

struct TrainingResult {
  RbfNetwork network;                 ///< best network seen, identity normalization
  double rmse = 0.0;                  ///< of the returned network
  std::vector<double> best_history;   ///< best RMSE after each insertion
  int inner_iterations = 0;           ///< accepted updates in total
  bool converged = false;             ///< rmse <= desired_rmse
  bool stalled = false;               ///< no progress over two consecutive insertions
};

/// Gauss-Newton terms of 1/2 sum of squared errors with respect to the
/// packed parameters [c_i, sigma_i, w_i] of every neuron.
struct LmTerms {
  Eigen::MatrixXd quasi_hessian;  ///< J'J
  Eigen::VectorXd gradient;       ///< J'e
  double sse = 0.0;
};

Eigen::VectorXd pack_parameters(const RbfNetwork& net);
void unpack_parameters(RbfNetwork& net, const Eigen::VectorXd& theta);

/// Inputs and targets are in normalized coordinates (one sample per row).
LmTerms lm_terms(const RbfNetwork& net, const Eigen::MatrixXd& inputs,
                 const Eigen::MatrixXd& targets);

/// Error-correction self-construction: insert a neuron at the worst sample,
/// refine all parameters by damped Gauss-Newton steps, repeat until the
/// RMSE target or the neuron cap is reached.
TrainingResult errcor_train(const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets,
                            const TrainingConfig& config);

}  // namespace mvip
