#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "hategraph/matrix.hpp"

namespace hategraph {

// Pretrained word vectors loaded from "word v1 ... vd" text lines.
struct WordEmbeddings {
  int dim = 0;
  std::vector<std::string> words;
  std::unordered_map<std::string, std::int64_t> index;
  Matrix vectors;  // words x dim
};

WordEmbeddings load_word_embeddings(const std::string& path);

// Mean of in-vocabulary token vectors; all-OOV documents map to zero.
std::vector<double> mean_pool(const std::vector<std::string>& tokens,
                              const WordEmbeddings& we);

}  // namespace hategraph
