#pragma once

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "mvip/excitation.hpp"
#include "mvip/plant.hpp"
#include "mvip/rbf_network.hpp"

namespace mvip {

/// Per-channel PID acting on position error, output in acceleration units.
struct PidGains {
  double kp = 1421.2;  ///< 1/s^2
  double ki = 1000.0;  ///< 1/s^3
  double kd = 52.78;   ///< 1/s
};

/// Samples of [pose, output acceleration] -> wrench, one per row.
struct TrainingDataset {
  Eigen::VectorXd time;
  Eigen::MatrixXd inputs;   ///< n x 12
  Eigen::MatrixXd targets;  ///< n x 6
  double sample_period = 0.002;
  ExcitationKind excitation = ExcitationKind::RGS;

  Eigen::Index size() const { return inputs.rows(); }
  double duration() const { return static_cast<double>(size()) * sample_period; }
  TrainingDataset slice(Eigen::Index start, Eigen::Index count) const;
};

struct CollectConfig {
  PlatformParams plant = default_platform();    ///< the platform actually flown
  PlatformParams nominal = default_platform();  ///< bare-floater model used by the PID inverse
  ExcitationParams excitation;
  PidGains pid;
  double duration = 240.0;           ///< s
  double record_rate = 500.0;        ///< Hz
  double control_rate = 2000.0;      ///< Hz
  int plant_substeps = 5;
  double accel_noise = 0.0;          ///< std of additive acceleration noise
  std::uint64_t noise_seed = 7;
};

/// Closed-loop excitation run. Throws DivergenceError or CollisionError
/// with the time and pose of the failure.
TrainingDataset collect_dataset(const CollectConfig& config);

/// Contiguous split: the first `train_fraction` of samples train, the rest validate.
std::pair<TrainingDataset, TrainingDataset> split_dataset(const TrainingDataset& data,
                                                          double train_fraction = 2.0 / 3.0);

struct DatasetNormalization {
  Normalization input;
  Normalization output;
};

/// Fits the normalization on `data`. Throws ConfigError naming a constant column.
DatasetNormalization fit_normalization(const TrainingDataset& data);
TrainingDataset apply_normalization(const TrainingDataset& data, const DatasetNormalization& n);
TrainingDataset invert_normalization(const TrainingDataset& data, const DatasetNormalization& n);

inline constexpr const char* kDatasetSchema = "mvip.dataset/1";
const std::vector<std::string>& dataset_columns();  ///< time, 12 inputs, 6 targets

void write_dataset_csv(const TrainingDataset& data, const std::filesystem::path& path);
/// Throws MissingArtifactError for a missing file and ConfigError naming
/// the offending columns for a header mismatch.
TrainingDataset read_dataset_csv(const std::filesystem::path& path);

}  // namespace mvip
