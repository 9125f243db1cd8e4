#include "hategraph/sgns.hpp"

#include <cmath>

namespace hategraph {

double sigmoid(double x) {
  if (x > 36.0) return 1.0 - 1e-16;
  if (x < -36.0) return 1e-16;
  return 1.0 / (1.0 + std::exp(-x));
}

double sgns_step(double* in, std::int64_t dim, Matrix& out, std::int32_t target,
                 const std::vector<std::int32_t>& negatives, double lr,
                 std::vector<double>& grad_in_buf, bool update_out) {
  grad_in_buf.assign(dim, 0.0);
  double loss = 0.0;
  auto update_pair = [&](std::int32_t idx, double label) {
    double* o = out.row(idx);
    double s = dot(in, o, dim);
    double p = sigmoid(s);
    double g = p - label;  // d loss / d s
    loss -= label > 0.5 ? std::log(p) : std::log(1.0 - p);
    for (std::int64_t j = 0; j < dim; ++j) grad_in_buf[j] += g * o[j];
    if (update_out)
      for (std::int64_t j = 0; j < dim; ++j) o[j] -= lr * g * in[j];
  };
  update_pair(target, 1.0);
  for (std::int32_t neg : negatives) update_pair(neg, 0.0);
  for (std::int64_t j = 0; j < dim; ++j) in[j] -= lr * grad_in_buf[j];
  return loss;
}

AliasTable make_noise_table(const std::vector<std::int64_t>& counts, double power) {
  std::vector<double> weights(counts.size());
  for (std::size_t i = 0; i < counts.size(); ++i)
    weights[i] = counts[i] > 0 ? std::pow(static_cast<double>(counts[i]), power) : 0.0;
  return AliasTable(weights);
}

void draw_negatives(const AliasTable& noise, Rng& rng, std::int32_t target, int k,
                    std::vector<std::int32_t>& out) {
  out.clear();
  for (int i = 0; i < k; ++i) {
    std::int32_t cand = static_cast<std::int32_t>(noise.sample(rng));
    if (cand == target) continue;
    out.push_back(cand);
  }
}

}  // namespace hategraph
