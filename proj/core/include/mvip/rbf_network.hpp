#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>
#include <nlohmann/json.hpp>

namespace mvip {

/// Per-dimension affine map of [min, max] onto [-1, 1]. An empty map is the
/// identity.
struct Normalization {
  Eigen::VectorXd min;
  Eigen::VectorXd max;

  bool empty() const { return min.size() == 0; }
  Eigen::Index size() const { return min.size(); }
  Eigen::VectorXd apply(const Eigen::VectorXd& x) const;
  Eigen::VectorXd invert(const Eigen::VectorXd& xn) const;
  /// Row-wise versions for sample matrices (one sample per row).
  Eigen::MatrixXd apply_rows(const Eigen::MatrixXd& x) const;
  Eigen::MatrixXd invert_rows(const Eigen::MatrixXd& xn) const;

  /// Column ranges of `data`. Throws ConfigError naming the first constant
  /// column (by `names` when given).
  static Normalization fit(const Eigen::MatrixXd& data, const std::vector<std::string>& names = {});
};

/// Gaussian RBF network with linear output layer. Centers and radii live in
/// the normalized input space.
struct RbfNetwork {
  int input_dim = 12;
  int output_dim = 6;
  Eigen::MatrixXd centers;  ///< p x input_dim
  Eigen::VectorXd radii;    ///< p
  Eigen::MatrixXd weights;  ///< p x output_dim
  Normalization input_norm;
  Normalization output_norm;

  RbfNetwork() = default;
  RbfNetwork(int in_dim, int out_dim)
      : input_dim(in_dim), output_dim(out_dim), centers(0, in_dim), radii(0), weights(0, out_dim) {}

  int neurons() const { return static_cast<int>(radii.size()); }
  /// Throws ConfigError if shapes disagree or a radius is not positive.
  void validate() const;

  /// Network output in normalized coordinates for a normalized input.
  Eigen::VectorXd forward_normalized(const Eigen::VectorXd& xn) const;
  /// Row-wise normalized evaluation.
  Eigen::MatrixXd forward_normalized_rows(const Eigen::MatrixXd& xn) const;

  void add_neuron(const Eigen::VectorXd& center, double radius, const Eigen::VectorXd& weight);
};

/// y_j = sum_i w_ij exp(-|x - c_i|^2 / (2 sigma_i^2)) on normalized inputs,
/// returned in physical output units.
Eigen::VectorXd rbf_forward(const RbfNetwork& net, const Eigen::VectorXd& x);

/// Mean over samples of the per-sample root-mean-square output error,
/// measured in the network's normalized output space. Throws ConfigError on
/// empty or mismatched data.
double rmse(const RbfNetwork& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets);

/// Same quantity for outputs already computed.
double rmse_of(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& targets);

inline constexpr const char* kRbfSchema = "mvip.rbf/1";

nlohmann::json network_to_json(const RbfNetwork& net);
RbfNetwork network_from_json(const nlohmann::json& j);
void save_network(const RbfNetwork& net, const std::filesystem::path& path);
/// Throws MissingArtifactError if the file does not exist.
RbfNetwork load_network(const std::filesystem::path& path);

nlohmann::json normalization_to_json(const Normalization& n);
Normalization normalization_from_json(const nlohmann::json& j);

}  // namespace mvip
