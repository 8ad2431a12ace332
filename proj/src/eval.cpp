#include "dgner/eval.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <set>

#include "dgner/errors.hpp"
#include "dgner/iobes.hpp"

namespace dgner {

std::string length_bucket(int len) {
  return len >= 6 ? ">=6" : std::to_string(len);
}

namespace {

void check_aligned(const TagCorpus& gold, const TagCorpus& pred) {
  if (gold.size() != pred.size())
    throw DataError("corpora differ in sentence count (" +
                    std::to_string(gold.size()) + " vs " +
                    std::to_string(pred.size()) + ")");
  for (std::size_t i = 0; i < gold.size(); ++i)
    if (gold[i].size() != pred[i].size())
      throw DataError("sentence " + std::to_string(i + 1) +
                      " differs in length between corpora");
}

}  // namespace

EvalReport evaluate_tags(const TagCorpus& gold, const TagCorpus& pred) {
  check_aligned(gold, pred);
  EvalReport r;
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const std::vector<Span> gs = extract_spans_repair(gold[i]);
    const std::vector<Span> ps = extract_spans_repair(pred[i]);
    const std::set<Span> gset(gs.begin(), gs.end());
    for (const Span& s : gs) {
      ++r.overall.gold;
      ++r.per_type[s.type].gold;
      ++r.per_length[length_bucket(s.end - s.start + 1)].gold;
    }
    for (const Span& s : ps) {
      ++r.overall.pred;
      ++r.per_type[s.type].pred;
      ++r.per_length[length_bucket(s.end - s.start + 1)].pred;
      if (gset.count(s)) {
        ++r.overall.tp;
        ++r.per_type[s.type].tp;
        ++r.per_length[length_bucket(s.end - s.start + 1)].tp;
      }
    }
  }
  return r;
}

EvalReport evaluate(const std::vector<Sentence>& gold, const TagCorpus& pred) {
  TagCorpus gold_tags;
  gold_tags.reserve(gold.size());
  for (const Sentence& s : gold) gold_tags.push_back(s.tags());
  return evaluate_tags(gold_tags, pred);
}

std::map<std::string, PRF> f1_by_length(const TagCorpus& gold,
                                        const TagCorpus& pred) {
  return evaluate_tags(gold, pred).per_length;
}

namespace {

std::vector<std::string> decode_sentence(Model& m, const Sentence& s,
                                         const std::vector<std::vector<double>>* ctx) {
  Graph g;
  const std::vector<Var> emissions = encode(g, m, s, false, nullptr, ctx);
  std::vector<std::vector<double>> f(emissions.size());
  for (std::size_t i = 0; i < emissions.size(); ++i) f[i] = g.value(emissions[i]);
  const ViterbiResult v = crf_viterbi(f, m.store.at("crf/a"), m.mask_ptr());
  std::vector<std::string> tags(v.labels.size());
  for (std::size_t i = 0; i < v.labels.size(); ++i)
    tags[i] = m.vocab.label(v.labels[i]);
  return tags;
}

const std::vector<std::vector<double>>* ctx_for(const ContextVectors* ctx,
                                                std::size_t i) {
  return ctx ? &ctx->sentences[i] : nullptr;
}

void check_ctx(const ContextVectors* ctx, std::size_t n) {
  if (ctx && ctx->sentences.size() != n)
    throw DataError("context vectors cover " +
                    std::to_string(ctx->sentences.size()) + " sentences, corpus has " +
                    std::to_string(n));
}

}  // namespace

TagCorpus decode_corpus(Model& m, const std::vector<Sentence>& corpus,
                        const ContextVectors* ctx) {
  check_ctx(ctx, corpus.size());
  TagCorpus out(corpus.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(corpus.size()); ++i)
    out[i] = decode_sentence(m, corpus[i], ctx_for(ctx, i));
  return out;
}

TagCorpus decode_corpus_serial(Model& m, const std::vector<Sentence>& corpus,
                               const ContextVectors* ctx) {
  check_ctx(ctx, corpus.size());
  TagCorpus out(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i)
    out[i] = decode_sentence(m, corpus[i], ctx_for(ctx, i));
  return out;
}

namespace {

void print_prf_row(std::ostream& out, const std::string& label, const PRF& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf,
                "%-12s P %6.2f  R %6.2f  F1 %6.2f  (tp %zu, gold %zu, pred %zu)",
                label.c_str(), c.precision(), c.recall(), c.f1(), c.tp, c.gold,
                c.pred);
  out << buf << '\n';
}

void print_tsv_row(std::ostream& out, const std::string& section,
                   const std::string& label, const PRF& c) {
  char buf[160];
  std::snprintf(buf, sizeof buf, "%.4f\t%.4f\t%.4f", c.precision(), c.recall(),
                c.f1());
  out << section << '\t' << label << '\t' << c.tp << '\t' << c.gold << '\t'
      << c.pred << '\t' << buf << '\n';
}

}  // namespace

void render_report(const EvalReport& r, std::ostream& out) {
  print_prf_row(out, "overall", r.overall);
  if (!r.per_type.empty()) {
    out << "by type:\n";
    for (const auto& [type, c] : r.per_type) print_prf_row(out, "  " + type, c);
  }
  if (!r.per_length.empty()) {
    out << "by length:\n";
    for (const auto& [bucket, c] : r.per_length)
      print_prf_row(out, "  " + bucket, c);
  }
}

void render_report_tsv(const EvalReport& r, std::ostream& out) {
  out << "section\tlabel\ttp\tgold\tpred\tprecision\trecall\tf1\n";
  print_tsv_row(out, "overall", "all", r.overall);
  for (const auto& [type, c] : r.per_type) print_tsv_row(out, "type", type, c);
  for (const auto& [bucket, c] : r.per_length)
    print_tsv_row(out, "length", bucket, c);
}

}  // namespace dgner
