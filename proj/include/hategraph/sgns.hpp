#pragma once

#include <cstdint>
#include <vector>

#include "hategraph/matrix.hpp"
#include "hategraph/rng.hpp"

namespace hategraph {

double sigmoid(double x);

// One skip-gram-with-negative-sampling update: pulls `in` toward the target's
// output row and away from each negative's. Output rows update against the
// pre-step input vector; the input updates last (word2vec order). Returns the
// step loss -log s(in.out_t) - sum_neg log s(-in.out_n).
double sgns_step(double* in, std::int64_t dim, Matrix& out, std::int32_t target,
                 const std::vector<std::int32_t>& negatives, double lr,
                 std::vector<double>& grad_in_buf, bool update_out = true);

// Unigram^power noise distribution (zero-count entries excluded by weight 0).
AliasTable make_noise_table(const std::vector<std::int64_t>& counts, double power = 0.75);

// Draws up to k negatives, skipping collisions with the target.
void draw_negatives(const AliasTable& noise, Rng& rng, std::int32_t target, int k,
                    std::vector<std::int32_t>& out);

}  // namespace hategraph
