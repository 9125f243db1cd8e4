#pragma once

#include <cstdint>
#include <vector>

#include "hategraph/matrix.hpp"

namespace hategraph {

struct LogisticConfig {
  double l2 = 1e-4;
  int epochs = 3000;
  double lr = 1.0;
  std::uint64_t seed = 1;
};

struct LogisticModel {
  std::vector<double> w;
  double bias = 0.0;
  double l2 = 0.0;
  std::vector<double> epoch_loss;
};

// Full-batch gradient descent on L2-regularized binary cross-entropy.
LogisticModel train_logistic(const Matrix& X, const std::vector<int>& y,
                             const LogisticConfig& cfg);

std::vector<double> predict_logistic(const LogisticModel& m, const Matrix& X);

// Mean loss and its gradient at the given parameters (last entry is the bias).
double logistic_loss_grad(const Matrix& X, const std::vector<int>& y, double l2,
                          const std::vector<double>& params, std::vector<double>* grad);

}  // namespace hategraph
