#pragma once

#include <Eigen/Core>
#include <functional>
#include <vector>

#include "allocsim/policy.hpp"

namespace allocsim {

// Gene vector -> regression features: one-hot per categorical gene,
// min-max scaled numeric genes.
class FeatureEncoder {
 public:
  FeatureEncoder();
  int dim() const { return dim_; }
  Eigen::VectorXd encode(const PolicyVector& v) const;
  Eigen::MatrixXd encode_rows(const std::vector<PolicyVector>& vs) const;

 private:
  int dim_ = 0;
};

struct Predictor {
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  double lambda = 1.0;
  FeatureEncoder encoder;

  double predict_features(const Eigen::VectorXd& x) const;
  double predict(const PolicyVector& v) const;
};

// Closed-form ridge: beta = (X'X + lambda I)^-1 X'y, intercept unpenalized
// via column centering when fit_intercept. Throws ValidationError on a
// singular system with lambda == 0.
Predictor fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                    bool fit_intercept = true);

struct FitnessDataset {
  std::vector<PolicyVector> vectors;
  std::vector<double> fitness;
  double test_fraction = 0.25;

  // Rejects a duplicate vector carrying a conflicting fitness; silently
  // ignores an exact duplicate row.
  void add(const PolicyVector& v, double f);
  size_t size() const { return vectors.size(); }
  // Deterministic split: every 4th row (by insertion index) is test.
  void split(std::vector<int>& train_idx, std::vector<int>& test_idx) const;
};

struct TrainResult {
  Predictor predictor;
  FitnessDataset dataset;
  double test_mae = 0.0;
  bool threshold_reached = false;  // warning flag inverse
  int batches = 0;
};

using FitnessOracle = std::function<double(const PolicyVector&)>;

// Grows the dataset batch-by-batch from the oracle and refits until the
// held-out MAE drops to mae_threshold or max_samples is reached (then the
// best predictor is returned with threshold_reached = false).
TrainResult train_predictor_incremental(const FitnessOracle& oracle,
                                        double mae_threshold,
                                        int batch,
                                        int max_samples,
                                        uint64_t seed,
                                        double lambda = 1.0);

}  // namespace allocsim
