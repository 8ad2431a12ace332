#include "dgner/bootstrap.hpp"

#include <set>
#include <vector>

#include "dgner/errors.hpp"
#include "dgner/iobes.hpp"
#include "dgner/rng.hpp"

namespace dgner {

namespace {

struct SentenceCounts {
  std::size_t gold = 0;
  std::size_t pred_a = 0, tp_a = 0;
  std::size_t pred_b = 0, tp_b = 0;
};

double f1_percent(std::size_t tp, std::size_t gold, std::size_t pred) {
  const double p = pred ? 100.0 * tp / pred : 0.0;
  const double r = gold ? 100.0 * tp / gold : 0.0;
  return p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
}

std::vector<SentenceCounts> count_sentences(const TagCorpus& gold,
                                            const TagCorpus& a,
                                            const TagCorpus& b) {
  if (gold.size() != a.size() || gold.size() != b.size())
    throw DataError("bootstrap corpora differ in sentence count");
  std::vector<SentenceCounts> counts(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].size() != a[i].size() || gold[i].size() != b[i].size())
      throw DataError("bootstrap corpora differ at sentence " +
                      std::to_string(i + 1));
    const std::vector<Span> gs = extract_spans_repair(gold[i]);
    const std::set<Span> gset(gs.begin(), gs.end());
    SentenceCounts& c = counts[i];
    c.gold = gs.size();
    for (const Span& s : extract_spans_repair(a[i])) {
      ++c.pred_a;
      if (gset.count(s)) ++c.tp_a;
    }
    for (const Span& s : extract_spans_repair(b[i])) {
      ++c.pred_b;
      if (gset.count(s)) ++c.tp_b;
    }
  }
  return counts;
}

double resample_delta(const std::vector<SentenceCounts>& counts,
                      std::uint64_t seed, int resample_index) {
  Rng rng(Rng::derive(seed, static_cast<std::uint64_t>(resample_index) + 1));
  SentenceCounts sum;
  const std::size_t n = counts.size();
  for (std::size_t k = 0; k < n; ++k) {
    const SentenceCounts& c = counts[rng.below(n)];
    sum.gold += c.gold;
    sum.pred_a += c.pred_a;
    sum.tp_a += c.tp_a;
    sum.pred_b += c.pred_b;
    sum.tp_b += c.tp_b;
  }
  return f1_percent(sum.tp_a, sum.gold, sum.pred_a) -
         f1_percent(sum.tp_b, sum.gold, sum.pred_b);
}

template <bool Parallel>
SignificanceResult run_bootstrap(const TagCorpus& gold, const TagCorpus& a,
                                 const TagCorpus& b, int resamples,
                                 std::uint64_t seed) {
  if (resamples < 1) throw ConfigError("bootstrap needs at least one resample");
  const std::vector<SentenceCounts> counts = count_sentences(gold, a, b);
  SentenceCounts total;
  for (const SentenceCounts& c : counts) {
    total.gold += c.gold;
    total.pred_a += c.pred_a;
    total.tp_a += c.tp_a;
    total.pred_b += c.pred_b;
    total.tp_b += c.tp_b;
  }
  SignificanceResult r;
  r.resamples = resamples;
  r.seed = seed;
  r.delta = f1_percent(total.tp_a, total.gold, total.pred_a) -
            f1_percent(total.tp_b, total.gold, total.pred_b);
  if (r.delta == 0.0) {
    r.p_value = 1.0;  // nothing to test
    return r;
  }
  const double threshold = 2.0 * r.delta;
  std::int64_t hits = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(static) reduction(+ : hits) if (Parallel)
#endif
  for (int i = 0; i < resamples; ++i) {
    const double d = resample_delta(counts, seed, i);
    const bool beyond = r.delta > 0.0 ? d > threshold : d < threshold;
    if (beyond) ++hits;
  }
  r.p_value = static_cast<double>(hits) / resamples;
  return r;
}

}  // namespace

SignificanceResult bootstrap_test(const TagCorpus& gold, const TagCorpus& a,
                                  const TagCorpus& b, int resamples,
                                  std::uint64_t seed) {
  return run_bootstrap<true>(gold, a, b, resamples, seed);
}

SignificanceResult bootstrap_test_serial(const TagCorpus& gold,
                                         const TagCorpus& a, const TagCorpus& b,
                                         int resamples, std::uint64_t seed) {
  return run_bootstrap<false>(gold, a, b, resamples, seed);
}

}  // namespace dgner
