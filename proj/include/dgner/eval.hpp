#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dgner/corpus.hpp"
#include "dgner/embeddings.hpp"
#include "dgner/model.hpp"

namespace dgner {

// Span exact-match counts; percentages derived on demand.
struct PRF {
  std::size_t tp = 0;
  std::size_t gold = 0;
  std::size_t pred = 0;

  double precision() const { return pred ? 100.0 * tp / pred : 0.0; }
  double recall() const { return gold ? 100.0 * tp / gold : 0.0; }
  double f1() const {
    const double p = precision(), r = recall();
    return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }
};

struct EvalReport {
  PRF overall;
  std::map<std::string, PRF> per_type;
  std::map<std::string, PRF> per_length;  // buckets "1".."5", ">=6"
};

using TagCorpus = std::vector<std::vector<std::string>>;

std::string length_bucket(int len);

// Exact span+type matching, micro-averaged; prediction tags may be ill-formed
// (spans are extracted with repair).
EvalReport evaluate_tags(const TagCorpus& gold, const TagCorpus& pred);
EvalReport evaluate(const std::vector<Sentence>& gold, const TagCorpus& pred);

// Just the per-length buckets of evaluate_tags.
std::map<std::string, PRF> f1_by_length(const TagCorpus& gold,
                                        const TagCorpus& pred);

// Viterbi-decodes every sentence. The model is only read; the parallel
// variant fans sentences out across threads.
TagCorpus decode_corpus(Model& m, const std::vector<Sentence>& corpus,
                        const ContextVectors* ctx = nullptr);
TagCorpus decode_corpus_serial(Model& m, const std::vector<Sentence>& corpus,
                               const ContextVectors* ctx = nullptr);

void render_report(const EvalReport& r, std::ostream& out);      // readable block
void render_report_tsv(const EvalReport& r, std::ostream& out);  // machine form

}  // namespace dgner
