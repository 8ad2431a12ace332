// Times each multithreaded kernel against its serial reference on a
// synthetic corpus and checks that the two produce identical results.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <limits>
#include <string>
#include <vector>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "CLI11.hpp"
#include "dgner/bootstrap.hpp"
#include "dgner/eval.hpp"
#include "dgner/model.hpp"
#include "dgner/rng.hpp"
#include "dgner/stats.hpp"
#include "dgner/vocab.hpp"
#include "helpers.hpp"

using namespace dgner;

namespace {

template <class F>
double best_ms(int repeats, F&& fn) {
  double best = std::numeric_limits<double>::infinity();
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    const auto t1 = std::chrono::steady_clock::now();
    best = std::min(
        best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void row(const char* name, double serial_ms, double parallel_ms, bool agree) {
  std::printf("%-22s %11.2f %11.2f %8.2fx  %s\n", name, serial_ms, parallel_ms,
              serial_ms / parallel_ms, agree ? "match" : "MISMATCH");
}

bool same_stats(const DatasetStats& a, const DatasetStats& b) {
  return a.sentence_count == b.sentence_count &&
         a.entity_count == b.entity_count &&
         a.counted_entities == b.counted_entities &&
         a.st_ratio == b.st_ratio && a.gd_ratio == b.gd_ratio &&
         a.empty_selection == b.empty_selection &&
         a.length_histogram == b.length_histogram;
}

bool same_matrix(const CorrelationMatrix& a, const CorrelationMatrix& b) {
  return a.row_labels == b.row_labels && a.col_labels == b.col_labels &&
         a.entries == b.entries;
}

}  // namespace

int main(int argc, char** argv) {
  int sentences = 4000;
  int max_len = 25;
  int decode_sentences = 500;
  int resamples = 2000;
  int repeats = 3;
  std::uint64_t seed = 2024;

  CLI::App app{"serial vs multithreaded kernel timings"};
  app.add_option("--sentences", sentences, "corpus size for the tree kernels");
  app.add_option("--max-len", max_len, "maximum sentence length");
  app.add_option("--decode-sentences", decode_sentences,
                 "corpus size for decoding");
  app.add_option("--resamples", resamples, "bootstrap resample count");
  app.add_option("--repeats", repeats, "timed runs per kernel; best is kept");
  app.add_option("--seed", seed, "corpus generator seed");
  CLI11_PARSE(app, argc, argv);

  Rng rng(seed);
  const std::vector<Sentence> corpus =
      testutil::random_corpus(rng, sentences, max_len);

#ifdef _OPENMP
  std::printf("threads: %d\n", omp_get_max_threads());
#else
  std::printf("threads: 1 (built without OpenMP)\n");
#endif
  std::printf("corpus: %d sentences, max length %d, seed %llu\n\n", sentences,
              max_len, static_cast<unsigned long long>(seed));
  std::printf("%-22s %11s %11s %9s\n", "kernel", "serial ms", "parallel ms",
              "speedup");

  {
    const auto ref = dataset_stats_serial(corpus);
    const bool agree = same_stats(ref, dataset_stats(corpus));
    row("dataset_stats",
        best_ms(repeats, [&] { dataset_stats_serial(corpus); }),
        best_ms(repeats, [&] { dataset_stats(corpus); }), agree);
  }
  {
    const auto ref = entity_relation_matrix_serial(corpus);
    const bool agree = same_matrix(ref, entity_relation_matrix(corpus));
    row("entity_relation_matrix",
        best_ms(repeats, [&] { entity_relation_matrix_serial(corpus); }),
        best_ms(repeats, [&] { entity_relation_matrix(corpus); }), agree);
  }
  {
    const auto ref = grandchild_pair_matrix_serial(corpus);
    const bool agree = same_matrix(ref, grandchild_pair_matrix(corpus));
    row("grandchild_pair_matrix",
        best_ms(repeats, [&] { grandchild_pair_matrix_serial(corpus); }),
        best_ms(repeats, [&] { grandchild_pair_matrix(corpus); }), agree);
  }
  {
    const bool agree = repair_trees_serial(corpus) == repair_trees(corpus);
    row("repair_trees",
        best_ms(repeats, [&] { repair_trees_serial(corpus); }),
        best_ms(repeats, [&] { repair_trees(corpus); }), agree);
  }
  {
    TagCorpus gold;
    gold.reserve(corpus.size());
    for (const Sentence& s : corpus) gold.push_back(s.tags());
    TagCorpus blank;
    blank.reserve(corpus.size());
    for (const Sentence& s : corpus)
      blank.emplace_back(s.n(), std::string("O"));
    const auto ref = bootstrap_test_serial(gold, gold, blank, resamples);
    const auto par = bootstrap_test(gold, gold, blank, resamples);
    const bool agree = ref.p_value == par.p_value && ref.delta == par.delta;
    row("bootstrap_test",
        best_ms(repeats,
                [&] { bootstrap_test_serial(gold, gold, blank, resamples); }),
        best_ms(repeats, [&] { bootstrap_test(gold, gold, blank, resamples); }),
        agree);
  }
  {
    const std::vector<Sentence> small(
        corpus.begin(),
        corpus.begin() + std::min<std::size_t>(decode_sentences, corpus.size()));
    ModelConfig cfg;
    cfg.layers = 2;
    cfg.interaction = Interaction::mlp;
    cfg.hidden = 50;
    cfg.word_dim = 16;
    cfg.char_emb_dim = 8;
    cfg.char_hidden = 10;
    cfg.rel_dim = 8;
    cfg.dropout = 0.0;
    Model m = build_model(cfg, build_vocab(small, false), 7);
    const bool agree = decode_corpus_serial(m, small) == decode_corpus(m, small);
    row("decode_corpus", best_ms(repeats, [&] { decode_corpus_serial(m, small); }),
        best_ms(repeats, [&] { decode_corpus(m, small); }), agree);
  }
  return 0;
}
