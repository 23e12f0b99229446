#include "nflcast/glm.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>

namespace nflcast::glm {

double sigmoid(double z) {
  if (z > 40.0) z = 40.0;
  if (z < -40.0) z = -40.0;
  return 1.0 / (1.0 + std::exp(-z));
}

namespace {

// log(1 + exp(z)) without overflow
double log1pexp(double z) {
  if (z > 0) return z + std::log1p(std::exp(-z));
  return std::log1p(std::exp(z));
}

}  // namespace

void Dataset::add_row(std::span<const std::pair<int, double>> features, int label) {
  for (const auto& [c, v] : features) {
    if (c < 0 || c >= n_features) throw ParamError("dataset: column out of range");
    if (!std::isfinite(v)) throw ParamError("dataset: non-finite feature value");
    cols.push_back(c);
    vals.push_back(v);
  }
  row_ptr.push_back(static_cast<int>(cols.size()));
  if (label != 0 && label != 1) throw ParamError("dataset: label must be 0 or 1");
  labels.push_back(label);
}

namespace {

// z = X w + b
void linear_scores(const Dataset& d, const std::vector<double>& vals,
                   const Eigen::VectorXd& w, double b, Eigen::VectorXd* z) {
  const int n = d.n_rows();
  z->resize(n);
  for (int i = 0; i < n; ++i) {
    double s = b;
    for (int k = d.row_ptr[i]; k < d.row_ptr[i + 1]; ++k) s += vals[k] * w[d.cols[k]];
    (*z)[i] = s;
  }
}

double mean_nll_from_scores(const Dataset& d, const Eigen::VectorXd& z) {
  const int n = d.n_rows();
  double sum = 0;
  for (int i = 0; i < n; ++i) sum += log1pexp(z[i]) - d.labels[i] * z[i];
  return sum / n;
}

// grad_w = X^T (sigma(z) - y) / n, grad_b = mean(sigma(z) - y)
void nll_gradient_from_scores(const Dataset& d, const std::vector<double>& vals,
                              const Eigen::VectorXd& z, Eigen::VectorXd* gw,
                              double* gb) {
  const int n = d.n_rows();
  gw->setZero();
  double sb = 0;
  for (int i = 0; i < n; ++i) {
    const double r = sigmoid(z[i]) - d.labels[i];
    sb += r;
    for (int k = d.row_ptr[i]; k < d.row_ptr[i + 1]; ++k)
      (*gw)[d.cols[k]] += vals[k] * r;
  }
  *gw /= n;
  *gb = sb / n;
}

}  // namespace

double objective_value(const Dataset& data, const Eigen::VectorXd& w, double intercept,
                       Penalty penalty, double lambda) {
  Eigen::VectorXd z;
  linear_scores(data, data.vals, w, intercept, &z);
  double obj = mean_nll_from_scores(data, z);
  if (lambda > 0) {
    if (penalty == Penalty::L2)
      obj += lambda * w.squaredNorm();
    else
      obj += lambda * w.lpNorm<1>();
  }
  return obj;
}

void smooth_gradient(const Dataset& data, const Eigen::VectorXd& w, double intercept,
                     Penalty penalty, double lambda, Eigen::VectorXd* grad_w,
                     double* grad_intercept) {
  Eigen::VectorXd z;
  linear_scores(data, data.vals, w, intercept, &z);
  grad_w->resize(data.n_features);
  nll_gradient_from_scores(data, data.vals, z, grad_w, grad_intercept);
  if (penalty == Penalty::L2 && lambda > 0) *grad_w += 2.0 * lambda * w;
}

FitResult fit(const Dataset& data, const TrainOptions& options) {
  const int n = data.n_rows();
  const int m = data.n_features;
  if (n == 0) throw ParamError("fit: empty dataset");
  if (options.lambda < 0) throw ParamError("fit: lambda must be >= 0");

  bool any0 = false, any1 = false;
  for (int y : data.labels) (y ? any1 : any0) = true;
  if (options.lambda == 0.0 && (!any0 || !any1))
    throw ParamError("fit: single-class data with lambda=0 is unbounded");

  // Preconditioner: scale each column by its RMS. With weights w = D u the
  // penalty carries over exactly (per-coordinate thresholds for L1, scaled
  // quadratic for L2), so the optimum is unchanged.
  Eigen::VectorXd rms = Eigen::VectorXd::Zero(m);
  for (size_t k = 0; k < data.vals.size(); ++k)
    rms[data.cols[k]] += data.vals[k] * data.vals[k];
  Eigen::VectorXd scale(m);
  for (int j = 0; j < m; ++j) {
    const double r = std::sqrt(rms[j] / n);
    scale[j] = r > 1e-12 ? 1.0 / r : 1.0;
  }
  std::vector<double> svals(data.vals.size());
  for (size_t k = 0; k < data.vals.size(); ++k)
    svals[k] = data.vals[k] * scale[data.cols[k]];

  const double lambda = options.lambda;
  const bool l1 = options.penalty == Penalty::L1;
  // L2 factor and L1 threshold in u-space
  Eigen::VectorXd l2_diag = Eigen::VectorXd::Zero(m);
  Eigen::VectorXd l1_weight = Eigen::VectorXd::Zero(m);
  if (lambda > 0) {
    for (int j = 0; j < m; ++j) {
      if (l1)
        l1_weight[j] = lambda * scale[j];
      else
        l2_diag[j] = 2.0 * lambda * scale[j] * scale[j];
    }
  }

  auto smooth_value = [&](const Eigen::VectorXd& u, double b, Eigen::VectorXd* z) {
    linear_scores(data, svals, u, b, z);
    double f = mean_nll_from_scores(data, *z);
    if (!l1 && lambda > 0) f += 0.5 * l2_diag.dot(u.cwiseProduct(u));
    return f;
  };
  auto smooth_grad = [&](const Eigen::VectorXd& u, const Eigen::VectorXd& z,
                         Eigen::VectorXd* gu, double* gb) {
    gu->resize(m);
    nll_gradient_from_scores(data, svals, z, gu, gb);
    if (!l1 && lambda > 0) *gu += l2_diag.cwiseProduct(u);
  };
  auto penalty_value = [&](const Eigen::VectorXd& u) {
    if (!l1 || lambda == 0) return 0.0;
    return l1_weight.dot(u.cwiseAbs());
  };
  auto prox = [&](const Eigen::VectorXd& v, double step, Eigen::VectorXd* out) {
    if (!l1 || lambda == 0) {
      *out = v;
      return;
    }
    out->resize(m);
    for (int j = 0; j < m; ++j) {
      const double t = step * l1_weight[j];
      const double x = v[j];
      (*out)[j] = x > t ? x - t : (x < -t ? x + t : 0.0);
    }
  };

  Eigen::VectorXd u = Eigen::VectorXd::Zero(m);
  double b = 0.0;
  Eigen::VectorXd u_prev = u;
  double b_prev = b;
  Eigen::VectorXd z;
  double f_u = smooth_value(u, b, &z);
  double F_u = f_u + penalty_value(u);

  FitResult result;
  result.stats.objective_trace.push_back(F_u);

  double lip = 1.0;  // Lipschitz estimate, adapted by backtracking
  double t_momentum = 1.0;
  Eigen::VectorXd y_u, y_grad, cand, zy, zc;
  double y_b, y_gb;

  int iter = 0;
  for (; iter < options.max_iter; ++iter) {
    const double beta = (t_momentum - 1.0) /
                        (0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum)) * 2.0 - 1.0);
    // standard FISTA momentum sequence
    const double t_next = 0.5 * (1.0 + std::sqrt(1.0 + 4.0 * t_momentum * t_momentum));
    const double mom = (t_momentum - 1.0) / t_next;
    (void)beta;

    bool accepted = false;
    double F_new = F_u, f_cand = 0, b_cand = 0;
    for (int attempt = 0; attempt < 2 && !accepted; ++attempt) {
      if (attempt == 0 && iter > 0) {
        y_u = u + mom * (u - u_prev);
        y_b = b + mom * (b - b_prev);
      } else {
        y_u = u;  // plain proximal step (monotone fallback)
        y_b = b;
      }
      const double f_y = smooth_value(y_u, y_b, &zy);
      smooth_grad(y_u, zy, &y_grad, &y_gb);

      // backtracking line search on the majorization
      for (int bt = 0; bt < 60; ++bt) {
        const double step = 1.0 / lip;
        prox(y_u - step * y_grad, step, &cand);
        b_cand = y_b - step * y_gb;
        f_cand = smooth_value(cand, b_cand, &zc);
        const Eigen::VectorXd diff = cand - y_u;
        const double db = b_cand - y_b;
        const double quad = f_y + y_grad.dot(diff) + y_gb * db +
                            0.5 * lip * (diff.squaredNorm() + db * db);
        if (f_cand <= quad + 1e-15 * std::abs(quad)) break;
        lip *= 2.0;
      }
      F_new = f_cand + penalty_value(cand);
      if (F_new <= F_u || attempt == 1) accepted = true;
    }

    if (F_new > F_u) {
      // plain step could not decrease: numerically converged
      result.stats.converged = true;
      break;
    }
    u_prev = u;
    b_prev = b;
    u = cand;
    b = b_cand;
    const double drop = F_u - F_new;
    F_u = F_new;
    t_momentum = t_next;
    result.stats.objective_trace.push_back(F_u);
    lip = std::max(lip * 0.9, 1e-8);

    if (drop <= options.tol * std::max(1.0, std::abs(F_u))) {
      result.stats.converged = true;
      ++iter;
      break;
    }
  }

  result.stats.iterations = iter;
  result.weights = scale.cwiseProduct(u);
  result.intercept = b;
  return result;
}

TrainResult train(std::span<const Instance> instances, const TrainOptions& options) {
  std::map<std::string, int> index;
  for (const auto& [fv, label] : instances) {
    for (const auto& [id, v] : fv) index.emplace(id, 0);
  }
  int next = 0;
  for (auto& [id, col] : index) col = next++;

  Dataset data;
  data.n_features = next;
  std::vector<std::pair<int, double>> row;
  for (const auto& [fv, label] : instances) {
    row.clear();
    for (const auto& [id, v] : fv) row.emplace_back(index[id], v);
    data.add_row(row, label);
  }

  FitResult fitres = fit(data, options);
  TrainResult out;
  out.stats = std::move(fitres.stats);
  out.model.intercept = fitres.intercept;
  out.model.penalty = options.penalty;
  out.model.lambda = options.lambda;
  for (const auto& [id, col] : index) out.model.coef[id] = fitres.weights[col];
  return out;
}

double predict_prob(const ModelWeights& model, const FeatureVector& x) {
  double z = model.intercept;
  for (const auto& [id, v] : x) {
    auto it = model.coef.find(id);
    if (it != model.coef.end()) z += it->second * v;
  }
  return sigmoid(z);
}

int predict_label(const ModelWeights& model, const FeatureVector& x) {
  return predict_prob(model, x) >= 0.5 ? 1 : 0;
}

std::pair<std::vector<RankedFeature>, std::vector<RankedFeature>> top_features(
    const ModelWeights& model, size_t n) {
  std::vector<RankedFeature> all(model.coef.begin(), model.coef.end());
  auto desc = [](const RankedFeature& a, const RankedFeature& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  };
  auto asc = [](const RankedFeature& a, const RankedFeature& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first < b.first;
  };
  std::vector<RankedFeature> top = all, bottom = all;
  std::sort(top.begin(), top.end(), desc);
  std::sort(bottom.begin(), bottom.end(), asc);
  if (top.size() > n) top.resize(n);
  if (bottom.size() > n) bottom.resize(n);
  return {top, bottom};
}

void save_weights(const std::string& path, const ModelWeights& model) {
  std::vector<RankedFeature> all(model.coef.begin(), model.coef.end());
  std::sort(all.begin(), all.end(), [](const RankedFeature& a, const RankedFeature& b) {
    const double ma = std::abs(a.second), mb = std::abs(b.second);
    if (ma != mb) return ma > mb;
    return a.first < b.first;
  });
  std::ofstream out(path);
  if (!out) throw DataError("cannot write file: " + path);
  out.precision(17);
  out << "feature\tcoefficient\n";
  out << "(intercept)\t" << model.intercept << "\n";
  for (const auto& [id, w] : all) out << id << '\t' << w << '\n';
}

}  // namespace nflcast::glm
