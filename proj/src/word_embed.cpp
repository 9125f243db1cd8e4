#include "hategraph/word_embed.hpp"

#include <stdexcept>

#include "hategraph/io.hpp"

namespace hategraph {

WordEmbeddings load_word_embeddings(const std::string& path) {
  WordEmbeddings we;
  std::vector<std::vector<double>> rows;
  for (const std::string& line : read_lines(path)) {
    if (line.empty()) continue;
    auto fields = split(line, ' ');
    if (fields.size() < 2) throw std::runtime_error(path + ": malformed embedding line");
    int dim = static_cast<int>(fields.size()) - 1;
    if (we.dim == 0) we.dim = dim;
    else if (dim != we.dim)
      throw std::runtime_error(path + ": inconsistent embedding dimension");
    std::vector<double> v(dim);
    for (int j = 0; j < dim; ++j) {
      try {
        v[j] = std::stod(std::string(fields[j + 1]));
      } catch (const std::exception&) {
        throw std::runtime_error(path + ": bad float in embedding line");
      }
    }
    we.index.emplace(std::string(fields[0]), static_cast<std::int64_t>(we.words.size()));
    we.words.emplace_back(fields[0]);
    rows.push_back(std::move(v));
  }
  we.vectors = Matrix(static_cast<std::int64_t>(rows.size()), we.dim);
  for (std::size_t i = 0; i < rows.size(); ++i)
    for (int j = 0; j < we.dim; ++j) we.vectors(static_cast<std::int64_t>(i), j) = rows[i][j];
  return we;
}

std::vector<double> mean_pool(const std::vector<std::string>& tokens,
                              const WordEmbeddings& we) {
  std::vector<double> out(we.dim, 0.0);
  std::int64_t hits = 0;
  for (const std::string& t : tokens) {
    auto it = we.index.find(t);
    if (it == we.index.end()) continue;
    const double* row = we.vectors.row(it->second);
    for (int j = 0; j < we.dim; ++j) out[j] += row[j];
    ++hits;
  }
  if (hits > 0)
    for (double& v : out) v /= static_cast<double>(hits);
  return out;
}

}  // namespace hategraph
