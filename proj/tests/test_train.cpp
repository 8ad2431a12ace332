#include <cmath>
#include <limits>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "dgner/crf.hpp"
#include "dgner/errors.hpp"
#include "dgner/eval.hpp"
#include "dgner/model.hpp"
#include "dgner/train.hpp"
#include "dgner/vocab.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace dgner;
using testutil::parse_text;

namespace {

ModelConfig tiny_config() {
  ModelConfig c;
  c.arch = Arch::dglstm;
  c.layers = 1;
  c.hidden = 4;
  c.word_dim = 4;
  c.char_emb_dim = 2;
  c.char_hidden = 2;
  c.rel_dim = 2;
  c.dropout = 0.0;
  return c;
}

std::vector<Sentence> tiny_corpus() {
  return parse_text(
      "1\tanna\t2\tnsubj\tS-PER\n"
      "2\tvisited\t0\troot\tO\n"
      "3\tparis\t2\tdobj\tS-GPE\n"
      "\n"
      "1\tomega\t3\tnn\tB-ORG\n"
      "2\tcorp\t3\tnn\tI-ORG\n"
      "3\tgroup\t4\tnsubj\tE-ORG\n"
      "4\tmerged\t0\troot\tO\n");
}

}  // namespace

TEST_CASE("training configuration is validated") {
  TrainConfig tc;
  tc.lr = 0.0;
  CHECK_THROWS_AS(tc.validate(), ConfigError);
  tc = {};
  tc.batch = 0;
  CHECK_THROWS_AS(tc.validate(), ConfigError);
  tc = {};
  tc.epochs = 0;
  CHECK_THROWS_AS(tc.validate(), ConfigError);
  tc = {};
  tc.clip = -1.0;
  CHECK_THROWS_AS(tc.validate(), ConfigError);
  tc = {};
  tc.l2 = -1e-9;
  CHECK_THROWS_AS(tc.validate(), ConfigError);

  auto corpus = tiny_corpus();
  Model m = build_model(tiny_config(), build_vocab(corpus), 1);
  CHECK_THROWS_AS(train(m, {}, {}, corpus), DataError);
  CHECK_THROWS_AS(train(m, {}, corpus, {}), DataError);
}

TEST_CASE("a vanishing learning rate keeps the earliest of tied epochs") {
  auto corpus = tiny_corpus();
  Model m = build_model(tiny_config(), build_vocab(corpus), 5);
  TrainConfig tc;
  tc.lr = 1e-12;  // moves nothing the decoder can see
  tc.epochs = 3;
  tc.batch = 2;
  const TrainResult r = train(m, tc, corpus, corpus);
  REQUIRE(r.log.size() == 3);
  CHECK(r.log[0].dev_f1 == r.log[1].dev_f1);
  CHECK(r.log[1].dev_f1 == r.log[2].dev_f1);
  CHECK(r.best_epoch == 1);
}

TEST_CASE("the loss descends on a memorizable corpus") {
  auto corpus = tiny_corpus();
  Model m = build_model(tiny_config(), build_vocab(corpus), 7);
  TrainConfig tc;
  tc.lr = 0.05;
  tc.epochs = 6;
  tc.batch = 2;
  tc.seed = 7;
  const TrainResult r = train(m, tc, corpus, corpus);
  REQUIRE(r.log.size() == 6);
  CHECK(r.log.back().train_loss < r.log.front().train_loss);
  CHECK(r.best_f1 >= r.log.front().dev_f1);
}

TEST_CASE("one batch applies exactly one first-order update") {
  auto corpus = parse_text(
      "1\tanna\t2\tnsubj\tS-PER\n"
      "2\tvisited\t0\troot\tO\n"
      "3\tparis\t2\tdobj\tS-GPE\n");
  const Vocabulary vocab = build_vocab(corpus);
  const double lr = 0.5;

  // expected values: evaluate the loss once by hand and step manually
  Model hand = build_model(tiny_config(), vocab, 21);
  std::vector<int> gold;
  for (const Token& t : corpus[0].tokens)
    gold.push_back(vocab.label_id(t.tag));
  {
    Graph g;
    const std::vector<Var> em = encode(g, hand, corpus[0]);
    const Var nll = crf_nll_graph(g, em, hand.store.at("crf/a"), gold);
    g.backward(nll);
  }
  std::map<std::string, std::vector<double>> expected;
  for (const auto& [name, t] : hand.store.params()) {
    std::vector<double> v = t.values;
    for (std::size_t i = 0; i < v.size(); ++i) v[i] -= lr * t.grad[i];
    expected[name] = v;
  }

  Model fresh = build_model(tiny_config(), vocab, 21);
  TrainConfig tc;
  tc.lr = lr;
  tc.l2 = 0.0;
  tc.batch = 1;
  tc.epochs = 1;
  const TrainResult r = train(fresh, tc, corpus, corpus);
  for (const auto& [name, v] : expected)
    CHECK(r.model.store.at(name).values == v);
}

TEST_CASE("training is reproducible run to run") {
  auto corpus = tiny_corpus();
  TrainConfig tc;
  tc.lr = 0.05;
  tc.epochs = 4;
  tc.batch = 2;
  tc.seed = 99;

  const Vocabulary vocab = build_vocab(corpus);
  auto cfg = tiny_config();
  cfg.dropout = 0.3;  // exercise the seeded dropout stream too
  const TrainResult r1 =
      train(build_model(cfg, vocab, 33), tc, corpus, corpus);
  const TrainResult r2 =
      train(build_model(cfg, vocab, 33), tc, corpus, corpus);

  std::ostringstream l1, l2;
  write_epoch_log(r1.log, l1);
  write_epoch_log(r2.log, l2);
  CHECK(l1.str() == l2.str());
  CHECK(r1.best_epoch == r2.best_epoch);
  for (const auto& [name, t] : r1.model.store.params())
    CHECK(t.values == r2.model.store.at(name).values);
}

TEST_CASE("the chosen snapshot reproduces its recorded dev score") {
  auto corpus = tiny_corpus();
  Model m = build_model(tiny_config(), build_vocab(corpus), 55);
  TrainConfig tc;
  tc.lr = 0.1;
  tc.epochs = 10;
  tc.batch = 2;
  TrainResult r = train(m, tc, corpus, corpus);

  double best = -1.0;
  int first_best = 0;
  for (const EpochLog& e : r.log)
    if (e.dev_f1 > best) {
      best = e.dev_f1;
      first_best = e.epoch;
    }
  CHECK(r.best_f1 == best);
  CHECK(r.best_epoch == first_best);

  const EvalReport check = evaluate(corpus, decode_corpus(r.model, corpus));
  CHECK(check.overall.f1() == doctest::Approx(r.best_f1));
}

TEST_CASE("epoch log rows are tab-separated with fixed precision") {
  std::vector<EpochLog> log(2);
  log[0] = {1, 12.25, 50.0, 25.0, 100.0 / 3.0};
  log[1] = {2, 3.5, 100.0, 100.0, 100.0};
  std::ostringstream out;
  write_epoch_log(log, out);
  CHECK(out.str() ==
        "epoch\ttrain_loss\tdev_p\tdev_r\tdev_f1\n"
        "1\t12.250000\t50.0000\t25.0000\t33.3333\n"
        "2\t3.500000\t100.0000\t100.0000\t100.0000\n");
}

TEST_CASE("a non-finite loss names the epoch and batch") {
  auto corpus = tiny_corpus();
  Model m = build_model(tiny_config(), build_vocab(corpus), 61);
  m.store.at("emit/b").values[0] = std::numeric_limits<double>::quiet_NaN();
  TrainConfig tc;
  tc.epochs = 2;
  tc.shuffle = false;
  CHECK_THROWS_WITH_AS(train(m, tc, corpus, corpus),
                       "epoch 1 batch 1: non-finite loss", NumericError);
}

TEST_CASE("context vectors ride along when configured") {
  auto corpus = tiny_corpus();
  auto cfg = tiny_config();
  cfg.arch = Arch::bilstm;
  cfg.use_context_vectors = true;
  cfg.context_dim = 3;
  const Vocabulary vocab = build_vocab(corpus);

  ContextVectors ctx;
  ctx.dim = 3;
  for (const Sentence& s : corpus)
    ctx.sentences.emplace_back(s.tokens.size(),
                               std::vector<double>{0.1, -0.2, 0.3});
  TrainConfig tc;
  tc.epochs = 2;
  tc.batch = 2;
  const TrainResult r =
      train(build_model(cfg, vocab, 71), tc, corpus, corpus, &ctx, &ctx);
  CHECK(r.log.size() == 2);

  ContextVectors misaligned = ctx;
  misaligned.sentences.pop_back();
  CHECK_THROWS_AS(train(build_model(cfg, vocab, 71), tc, corpus, corpus,
                        &misaligned, &misaligned),
                  DataError);
}
