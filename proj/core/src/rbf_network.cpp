#include "mvip/rbf_network.hpp"

#include <cmath>
#include <fstream>

#include "mvip/errors.hpp"

namespace mvip {
namespace {

Eigen::VectorXd to_vector(const nlohmann::json& j, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string("network json: '") + what + "' must be an array");
  Eigen::VectorXd v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) v[static_cast<Eigen::Index>(i)] = j[i].get<double>();
  return v;
}

Eigen::MatrixXd to_matrix(const nlohmann::json& j, Eigen::Index cols, const char* what) {
  if (!j.is_array()) throw ConfigError(std::string("network json: '") + what + "' must be an array");
  Eigen::MatrixXd m(static_cast<Eigen::Index>(j.size()), cols);
  for (std::size_t r = 0; r < j.size(); ++r) {
    if (!j[r].is_array() || static_cast<Eigen::Index>(j[r].size()) != cols) {
      throw ConfigError(std::string("network json: row ") + std::to_string(r) + " of '" + what +
                        "' must have " + std::to_string(cols) + " entries");
    }
    for (Eigen::Index c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), c) = j[r][static_cast<std::size_t>(c)].get<double>();
    }
  }
  return m;
}

nlohmann::json from_vector(const Eigen::VectorXd& v) {
  return nlohmann::json(std::vector<double>(v.data(), v.data() + v.size()));
}

nlohmann::json from_matrix(const Eigen::MatrixXd& m) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    const Eigen::VectorXd row = m.row(r).transpose();
    out.push_back(from_vector(row));
  }
  return out;
}

}  // namespace

Eigen::VectorXd Normalization::apply(const Eigen::VectorXd& x) const {
  if (empty()) return x;
  return ((2.0 * x - max - min).array() / (max - min).array()).matrix();
}

Eigen::VectorXd Normalization::invert(const Eigen::VectorXd& xn) const {
  if (empty()) return xn;
  return (0.5 * (xn.array() * (max - min).array() + (max + min).array())).matrix();
}

Eigen::MatrixXd Normalization::apply_rows(const Eigen::MatrixXd& x) const {
  if (empty()) return x;
  Eigen::MatrixXd out(x.rows(), x.cols());
  for (Eigen::Index c = 0; c < x.cols(); ++c) {
    out.col(c) = (2.0 * x.col(c).array() - max[c] - min[c]) / (max[c] - min[c]);
  }
  return out;
}

Eigen::MatrixXd Normalization::invert_rows(const Eigen::MatrixXd& xn) const {
  if (empty()) return xn;
  Eigen::MatrixXd out(xn.rows(), xn.cols());
  for (Eigen::Index c = 0; c < xn.cols(); ++c) {
    out.col(c) = 0.5 * (xn.col(c).array() * (max[c] - min[c]) + max[c] + min[c]);
  }
  return out;
}

Normalization Normalization::fit(const Eigen::MatrixXd& data, const std::vector<std::string>& names) {
  if (data.rows() == 0) throw ConfigError("normalize: empty data");
  Normalization n;
  n.min = data.colwise().minCoeff().transpose();
  n.max = data.colwise().maxCoeff().transpose();
  for (Eigen::Index c = 0; c < data.cols(); ++c) {
    if (!(n.max[c] > n.min[c])) {
      const std::string name = static_cast<std::size_t>(c) < names.size()
                                   ? names[static_cast<std::size_t>(c)]
                                   : "column " + std::to_string(c);
      throw ConfigError("normalize: dimension '" + name + "' is constant");
    }
  }
  return n;
}

void RbfNetwork::validate() const {
  const Eigen::Index p = radii.size();
  if (centers.rows() != p || weights.rows() != p) {
    throw ConfigError("rbf network: centers, radii and weights disagree on neuron count");
  }
  if (centers.cols() != input_dim || weights.cols() != output_dim) {
    throw ConfigError("rbf network: centers or weights have the wrong dimension");
  }
  if (p > 0 && !(radii.array() > 0.0).all()) {
    throw ConfigError("rbf network: all radii must be positive");
  }
  if (!input_norm.empty() && input_norm.size() != input_dim) {
    throw ConfigError("rbf network: input normalization has the wrong size");
  }
  if (!output_norm.empty() && output_norm.size() != output_dim) {
    throw ConfigError("rbf network: output normalization has the wrong size");
  }
}

Eigen::VectorXd RbfNetwork::forward_normalized(const Eigen::VectorXd& xn) const {
  Eigen::VectorXd y = Eigen::VectorXd::Zero(output_dim);
  for (Eigen::Index i = 0; i < radii.size(); ++i) {
    const double d2 = (xn - centers.row(i).transpose()).squaredNorm();
    const double phi = std::exp(-d2 / (2.0 * radii[i] * radii[i]));
    y += phi * weights.row(i).transpose();
  }
  return y;
}

Eigen::MatrixXd RbfNetwork::forward_normalized_rows(const Eigen::MatrixXd& xn) const {
  Eigen::MatrixXd phi(xn.rows(), radii.size());
  for (Eigen::Index i = 0; i < radii.size(); ++i) {
    const Eigen::VectorXd d2 = (xn.rowwise() - centers.row(i)).rowwise().squaredNorm();
    phi.col(i) = (-d2.array() / (2.0 * radii[i] * radii[i])).exp();
  }
  return phi * weights;
}

void RbfNetwork::add_neuron(const Eigen::VectorXd& center, double radius,
                            const Eigen::VectorXd& weight) {
  const Eigen::Index p = radii.size();
  centers.conservativeResize(p + 1, input_dim);
  centers.row(p) = center.transpose();
  radii.conservativeResize(p + 1);
  radii[p] = radius;
  weights.conservativeResize(p + 1, output_dim);
  weights.row(p) = weight.transpose();
}

Eigen::VectorXd rbf_forward(const RbfNetwork& net, const Eigen::VectorXd& x) {
  if (x.size() != net.input_dim) throw ConfigError("rbf_forward: input has the wrong dimension");
  return net.output_norm.invert(net.forward_normalized(net.input_norm.apply(x)));
}

double rmse_of(const Eigen::MatrixXd& outputs, const Eigen::MatrixXd& targets) {
  if (targets.rows() == 0) throw ConfigError("rmse: empty dataset");
  if (outputs.rows() != targets.rows() || outputs.cols() != targets.cols()) {
    throw ConfigError("rmse: outputs and targets disagree in shape");
  }
  const double m = static_cast<double>(targets.cols());
  const Eigen::VectorXd per_sample = ((targets - outputs).rowwise().squaredNorm() / m).cwiseSqrt();
  return per_sample.mean();
}

double rmse(const RbfNetwork& net, const Eigen::MatrixXd& inputs, const Eigen::MatrixXd& targets) {
  if (inputs.rows() == 0) throw ConfigError("rmse: empty dataset");
  if (inputs.rows() != targets.rows() || inputs.cols() != net.input_dim ||
      targets.cols() != net.output_dim) {
    throw ConfigError("rmse: dataset does not match the network dimensions");
  }
  const Eigen::MatrixXd y = net.forward_normalized_rows(net.input_norm.apply_rows(inputs));
  return rmse_of(y, net.output_norm.apply_rows(targets));
}

nlohmann::json normalization_to_json(const Normalization& n) {
  return {{"min", from_vector(n.min)}, {"max", from_vector(n.max)}};
}

Normalization normalization_from_json(const nlohmann::json& j) {
  Normalization n;
  n.min = to_vector(j.at("min"), "min");
  n.max = to_vector(j.at("max"), "max");
  if (n.min.size() != n.max.size()) throw ConfigError("normalization: min/max sizes differ");
  return n;
}

nlohmann::json network_to_json(const RbfNetwork& net) {
  nlohmann::json j;
  j["schema"] = kRbfSchema;
  j["input_dim"] = net.input_dim;
  j["output_dim"] = net.output_dim;
  j["centers"] = from_matrix(net.centers);
  j["radii"] = from_vector(net.radii);
  j["weights"] = from_matrix(net.weights);
  j["normalization"] = {{"input", normalization_to_json(net.input_norm)},
                        {"output", normalization_to_json(net.output_norm)}};
  return j;
}

RbfNetwork network_from_json(const nlohmann::json& j) {
  try {
    if (j.value("schema", std::string{}) != kRbfSchema) {
      throw ConfigError(std::string("network json: schema must be '") + kRbfSchema + "'");
    }
    RbfNetwork net(j.at("input_dim").get<int>(), j.at("output_dim").get<int>());
    net.centers = to_matrix(j.at("centers"), net.input_dim, "centers");
    net.radii = to_vector(j.at("radii"), "radii");
    net.weights = to_matrix(j.at("weights"), net.output_dim, "weights");
    const auto& norm = j.at("normalization");
    net.input_norm = normalization_from_json(norm.at("input"));
    net.output_norm = normalization_from_json(norm.at("output"));
    net.validate();
    return net;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError(std::string("network json: ") + e.what());
  }
}

void save_network(const RbfNetwork& net, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw ConfigError("cannot write network file " + path.string());
  out << network_to_json(net).dump(2) << '\n';
}

RbfNetwork load_network(const std::filesystem::path& path) {
  if (!std::filesystem::exists(path)) {
    throw MissingArtifactError("network file not found: " + path.string());
  }
  std::ifstream in(path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ConfigError("network file " + path.string() + " is not valid JSON: " + e.what());
  }
  return network_from_json(j);
}

}  // namespace mvip
