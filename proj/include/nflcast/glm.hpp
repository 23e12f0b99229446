#pragma once

#include <Eigen/Dense>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "nflcast/types.hpp"

namespace nflcast::glm {

enum class Penalty { L2, L1 };

inline const char* penalty_name(Penalty p) { return p == Penalty::L2 ? "L2" : "L1"; }

struct TrainOptions {
  Penalty penalty = Penalty::L2;
  double lambda = 0.0;
  double tol = 1e-9;     // relative objective change
  int max_iter = 10000;
};

// Row-major sparse design matrix with binary labels.
struct Dataset {
  int n_features = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> cols;
  std::vector<double> vals;
  std::vector<int> labels;

  int n_rows() const { return static_cast<int>(labels.size()); }
  void add_row(std::span<const std::pair<int, double>> features, int label);
};

// Mean negative log-likelihood plus the penalty term (lambda * sum w^2 for
// L2, lambda * sum |w| for L1); the intercept is unpenalized.
double objective_value(const Dataset& data, const Eigen::VectorXd& w, double intercept,
                       Penalty penalty, double lambda);

// Gradient of the smooth part (mean NLL, plus the L2 term when penalty==L2).
void smooth_gradient(const Dataset& data, const Eigen::VectorXd& w, double intercept,
                     Penalty penalty, double lambda, Eigen::VectorXd* grad_w,
                     double* grad_intercept);

struct TrainStats {
  int iterations = 0;
  bool converged = false;
  std::vector<double> objective_trace;  // one entry per accepted iterate
};

struct FitResult {
  Eigen::VectorXd weights;
  double intercept = 0.0;
  TrainStats stats;
};

// Deterministic full-batch proximal gradient descent (FISTA acceleration with
// a monotone restart guard). Exact zeros under L1. Internally preconditions
// by column RMS via an exact reparametrization; the returned weights solve
// the stated objective on the raw features.
FitResult fit(const Dataset& data, const TrainOptions& options);

struct ModelWeights {
  std::map<std::string, double> coef;
  double intercept = 0.0;
  Penalty penalty = Penalty::L2;
  double lambda = 0.0;
};

struct TrainResult {
  ModelWeights model;
  TrainStats stats;
};

using Instance = std::pair<FeatureVector, int>;

TrainResult train(std::span<const Instance> instances, const TrainOptions& options);

// Sigmoid of intercept + dot product; missing features contribute 0.
double predict_prob(const ModelWeights& model, const FeatureVector& x);

// 1 iff probability >= 0.5.
int predict_label(const ModelWeights& model, const FeatureVector& x);

using RankedFeature = std::pair<std::string, double>;

// (most positive, most negative), each of size <= n; ties broken by
// feature identifier.
std::pair<std::vector<RankedFeature>, std::vector<RankedFeature>> top_features(
    const ModelWeights& model, size_t n);

// Weight dump sorted by |coefficient| descending.
void save_weights(const std::string& path, const ModelWeights& model);

double sigmoid(double z);

}  // namespace nflcast::glm
