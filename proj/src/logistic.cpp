#include "hategraph/logistic.hpp"

#include <cmath>
#include <stdexcept>

#include "hategraph/sgns.hpp"

namespace hategraph {

double logistic_loss_grad(const Matrix& X, const std::vector<int>& y, double l2,
                          const std::vector<double>& params, std::vector<double>* grad) {
  const std::int64_t n = X.rows, d = X.cols;
  if (static_cast<std::int64_t>(params.size()) != d + 1)
    throw std::invalid_argument("params must hold d weights plus bias");
  if (grad) grad->assign(d + 1, 0.0);
  double loss = 0.0;
  for (std::int64_t i = 0; i < n; ++i) {
    double z = params[d] + dot(X.row(i), params.data(), d);
    double p = sigmoid(z);
    double label = static_cast<double>(y[i]);
    loss -= label * std::log(p) + (1.0 - label) * std::log(1.0 - p);
    if (grad) {
      double g = (p - label) / static_cast<double>(n);
      for (std::int64_t j = 0; j < d; ++j) (*grad)[j] += g * X(i, j);
      (*grad)[d] += g;
    }
  }
  loss /= static_cast<double>(n);
  for (std::int64_t j = 0; j < d; ++j) {
    loss += 0.5 * l2 * params[j] * params[j];
    if (grad) (*grad)[j] += l2 * params[j];
  }
  return loss;
}

LogisticModel train_logistic(const Matrix& X, const std::vector<int>& y,
                             const LogisticConfig& cfg) {
  if (static_cast<std::int64_t>(y.size()) != X.rows)
    throw std::invalid_argument("label count mismatch");
  for (int v : y)
    if (v != 0 && v != 1) throw std::invalid_argument("labels must be 0 or 1");
  for (double v : X.a)
    if (!std::isfinite(v)) throw std::invalid_argument("non-finite feature");

  const std::int64_t d = X.cols;
  std::vector<double> params(d + 1, 0.0);
  std::vector<double> grad;
  LogisticModel model;
  model.l2 = cfg.l2;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    double loss = logistic_loss_grad(X, y, cfg.l2, params, &grad);
    model.epoch_loss.push_back(loss);
    for (std::int64_t j = 0; j <= d; ++j) params[j] -= cfg.lr * grad[j];
  }
  model.w.assign(params.begin(), params.begin() + d);
  model.bias = params[d];
  return model;
}

std::vector<double> predict_logistic(const LogisticModel& m, const Matrix& X) {
  if (static_cast<std::int64_t>(m.w.size()) != X.cols)
    throw std::invalid_argument("feature dimension mismatch");
  std::vector<double> out(X.rows);
  for (std::int64_t i = 0; i < X.rows; ++i)
    out[i] = sigmoid(m.bias + dot(X.row(i), m.w.data(), X.cols));
  return out;
}

}  // namespace hategraph
