#pragma once

#include <string>
#include <unordered_map>
#include <vector>

#include "dgner/corpus.hpp"

namespace dgner {

// Pretrained word vectors read from the text format: optional "<count> <dim>"
// header, then one token plus dim floats per line.
struct EmbeddingTable {
  int dim = 0;
  std::unordered_map<std::string, std::vector<double>> vectors;
  int duplicate_count = 0;  // later rows for an already-seen token (kept first)

  // Exact match, then an ASCII-lowercase retry; nullptr on miss.
  const std::vector<double>* find(const std::string& token) const;
};

EmbeddingTable load_embeddings(const std::string& path, int dim);

// Per-token precomputed context vectors, one block of lines per sentence in
// corpus order. Alignment with the corpus is checked hard.
struct ContextVectors {
  int dim = 0;
  std::vector<std::vector<std::vector<double>>> sentences;
};

ContextVectors load_context_vectors(const std::string& path,
                                    const std::vector<Sentence>& corpus);

}  // namespace dgner
