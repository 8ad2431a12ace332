#pragma once

// Shared test fixtures: random dependency-tree corpora with random entity
// annotations, used by the statistics, repair, and model test groups.

#include <sstream>
#include <string>
#include <vector>

#include "dgner/corpus.hpp"
#include "dgner/iobes.hpp"
#include "dgner/rng.hpp"

namespace dgner::testutil {

inline std::vector<Sentence> parse_text(const std::string& text) {
  std::istringstream in(text);
  return parse_corpus(in);
}

// Uniform random recursive tree: token i attaches to one of the previously
// placed tokens (or is the root when first).
inline Sentence random_tree_sentence(Rng& rng, int n) {
  static const char* kRels[] = {"nsubj", "dobj", "amod", "prep",
                                "pobj",  "det",  "nn"};
  static const char* kTypes[] = {"PER", "ORG", "GPE", "MISC"};

  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  // random placement order so the root is not always token 1
  for (int i = n - 1; i > 0; --i) {
    const int j = static_cast<int>(rng.below(i + 1));
    std::swap(order[i], order[j]);
  }

  Sentence s;
  s.tokens.resize(n);
  std::vector<int> placed;
  for (int k = 0; k < n; ++k) {
    const int tok = order[k];
    Token& t = s.tokens[tok];
    t.form = "w" + std::to_string(rng.below(50));
    if (k == 0) {
      t.head = 0;
      t.relation = "root";
    } else {
      t.head = placed[rng.below(placed.size())] + 1;
      t.relation = kRels[rng.below(7)];
    }
    placed.push_back(tok);
  }

  // random non-overlapping spans
  std::vector<Span> spans;
  int pos = 1;
  while (pos <= n) {
    pos += static_cast<int>(rng.below(3));
    if (pos > n) break;
    int len = 1 + static_cast<int>(rng.below(4));
    if (len > n - pos + 1) len = n - pos + 1;
    spans.push_back({pos, pos + len - 1, kTypes[rng.below(4)]});
    pos += len;
  }
  auto tags = to_iobes(spans, n);
  for (int i = 0; i < n; ++i) s.tokens[i].tag = tags[i];
  return s;
}

inline std::vector<Sentence> random_corpus(Rng& rng, int count, int max_len) {
  std::vector<Sentence> corpus;
  corpus.reserve(count);
  for (int i = 0; i < count; ++i)
    corpus.push_back(
        random_tree_sentence(rng, 1 + static_cast<int>(rng.below(max_len))));
  return corpus;
}

}  // namespace dgner::testutil
