#include "allocsim/optimizer/ridge.hpp"

#include <Eigen/Cholesky>
#include <Eigen/LU>
#include <cmath>

#include "allocsim/errors.hpp"

namespace allocsim {

FeatureEncoder::FeatureEncoder() {
  dim_ = 0;
  for (const auto& d : gene_domains()) {
    dim_ += d.kind == GeneKind::Categorical ? static_cast<int>(d.categories.size()) : 1;
  }
}

Eigen::VectorXd FeatureEncoder::encode(const PolicyVector& v) const {
  const auto& domains = gene_domains();
  if (v.genes.size() != static_cast<Eigen::Index>(domains.size()))
    throw ValidationError("encode: policy vector length mismatch");
  Eigen::VectorXd x = Eigen::VectorXd::Zero(dim_);
  int col = 0;
  for (size_t g = 0; g < domains.size(); ++g) {
    const auto& d = domains[g];
    const double raw = v.genes(static_cast<Eigen::Index>(g));
    if (d.kind == GeneKind::Categorical) {
      const int n = static_cast<int>(d.categories.size());
      int idx = static_cast<int>(std::round(raw));
      idx = std::min(n - 1, std::max(0, idx));
      x(col + idx) = 1.0;
      col += n;
    } else {
      const double span = d.hi - d.lo;
      x(col) = span > 0.0 ? (raw - d.lo) / span : 0.0;
      ++col;
    }
  }
  return x;
}

Eigen::MatrixXd FeatureEncoder::encode_rows(const std::vector<PolicyVector>& vs) const {
  Eigen::MatrixXd X(static_cast<Eigen::Index>(vs.size()), dim_);
  for (size_t i = 0; i < vs.size(); ++i) X.row(static_cast<Eigen::Index>(i)) = encode(vs[i]);
  return X;
}

double Predictor::predict_features(const Eigen::VectorXd& x) const {
  return coefficients.dot(x) + intercept;
}

double Predictor::predict(const PolicyVector& v) const {
  return predict_features(encoder.encode(v));
}

Predictor fit_ridge(const Eigen::MatrixXd& X, const Eigen::VectorXd& y, double lambda,
                    bool fit_intercept) {
  if (X.rows() < 1 || X.rows() != y.size())
    throw ValidationError("fit_ridge: X rows and y length must match and be >= 1");
  if (lambda < 0.0) throw ValidationError("fit_ridge: lambda must be >= 0");

  Eigen::MatrixXd Xc = X;
  Eigen::VectorXd yc = y;
  Eigen::RowVectorXd x_mean = Eigen::RowVectorXd::Zero(X.cols());
  double y_mean = 0.0;
  if (fit_intercept) {
    x_mean = X.colwise().mean();
    y_mean = y.mean();
    Xc.rowwise() -= x_mean;
    yc.array() -= y_mean;
  }

  Eigen::MatrixXd gram = Xc.transpose() * Xc;
  gram.diagonal().array() += lambda;
  Eigen::VectorXd rhs = Xc.transpose() * yc;

  Eigen::VectorXd beta;
  if (lambda == 0.0) {
    Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
    if (!lu.isInvertible())
      throw ValidationError("fit_ridge: singular system with lambda = 0; use lambda > 0");
    beta = lu.solve(rhs);
  } else {
    beta = Eigen::LDLT<Eigen::MatrixXd>(gram).solve(rhs);
  }

  Predictor p;
  p.coefficients = beta;
  p.lambda = lambda;
  p.intercept = fit_intercept ? y_mean - x_mean.dot(beta) : 0.0;
  return p;
}

void FitnessDataset::add(const PolicyVector& v, double f) {
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].genes == v.genes) {
      if (std::abs(fitness[i] - f) > 1e-9)
        throw ValidationError("FitnessDataset: duplicate vector with conflicting fitness");
      return;
    }
  }
  vectors.push_back(v);
  fitness.push_back(f);
}

void FitnessDataset::split(std::vector<int>& train_idx, std::vector<int>& test_idx) const {
  train_idx.clear();
  test_idx.clear();
  for (size_t i = 0; i < vectors.size(); ++i) {
    if (i % 4 == 3) {
      test_idx.push_back(static_cast<int>(i));
    } else {
      train_idx.push_back(static_cast<int>(i));
    }
  }
}

TrainResult train_predictor_incremental(const FitnessOracle& oracle,
                                        double mae_threshold,
                                        int batch,
                                        int max_samples,
                                        uint64_t seed,
                                        double lambda) {
  if (mae_threshold <= 0.0 && mae_threshold != 0.0)
    throw ValidationError("train_predictor_incremental: mae_threshold must be >= 0");
  if (batch < 1) throw ValidationError("train_predictor_incremental: batch must be >= 1");
  Rng rng(mix64(seed ^ 0x7ra1nULL));

  TrainResult result;
  result.predictor.encoder = FeatureEncoder();

  while (static_cast<int>(result.dataset.size()) < max_samples) {
    for (int i = 0; i < batch && static_cast<int>(result.dataset.size()) < max_samples; ++i) {
      const PolicyVector v = random_policy_vector(rng);
      result.dataset.add(v, oracle(v));
    }
    ++result.batches;

    std::vector<int> train_idx, test_idx;
    result.dataset.split(train_idx, test_idx);
    if (train_idx.empty() || test_idx.empty()) continue;

    std::vector<PolicyVector> train_vs;
    Eigen::VectorXd train_y(static_cast<Eigen::Index>(train_idx.size()));
    for (size_t i = 0; i < train_idx.size(); ++i) {
      train_vs.push_back(result.dataset.vectors[static_cast<size_t>(train_idx[i])]);
      train_y(static_cast<Eigen::Index>(i)) =
          result.dataset.fitness[static_cast<size_t>(train_idx[i])];
    }
    FeatureEncoder encoder;
    Predictor p = fit_ridge(encoder.encode_rows(train_vs), train_y, lambda, true);
    p.encoder = encoder;

    double mae = 0.0;
    for (int idx : test_idx) {
      const double predicted = p.predict(result.dataset.vectors[static_cast<size_t>(idx)]);
      mae += std::abs(predicted - result.dataset.fitness[static_cast<size_t>(idx)]);
    }
    mae /= static_cast<double>(test_idx.size());

    result.predictor = p;
    result.test_mae = mae;
    if (mae <= mae_threshold) {
      result.threshold_reached = true;
      return result;
    }
  }
  return result;  // threshold_reached == false: caller treats as a warning
}

}  // namespace allocsim
