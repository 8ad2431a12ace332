#include "dgner/train.hpp"

#include <cmath>
#include <cstdio>
#include <numeric>
#include <ostream>
#include <utility>

#include "dgner/crf.hpp"
#include "dgner/errors.hpp"
#include "dgner/eval.hpp"

namespace dgner {

void TrainConfig::validate() const {
  if (lr <= 0.0) throw ConfigError("lr must be positive");
  if (batch < 1) throw ConfigError("batch must be positive");
  if (epochs < 1) throw ConfigError("epochs must be positive");
  if (l2 < 0.0) throw ConfigError("l2 must be non-negative");
  if (clip < 0.0) throw ConfigError("clip must be non-negative (0 = off)");
}

namespace {

// Stream ids for per-epoch RNGs, clear of the stream-0 initializer draw.
constexpr std::uint64_t kEpochStreamBase = 1ULL << 32;

std::vector<int> gold_ids(const Model& m, const Sentence& s) {
  std::vector<int> ids;
  ids.reserve(s.tokens.size());
  for (const Token& t : s.tokens) ids.push_back(m.vocab.label_id(t.tag));
  return ids;
}

}  // namespace

TrainResult train(Model m, const TrainConfig& tc,
                  const std::vector<Sentence>& train_set,
                  const std::vector<Sentence>& dev_set,
                  const ContextVectors* train_ctx, const ContextVectors* dev_ctx,
                  std::ostream* progress) {
  tc.validate();
  if (train_set.empty() || dev_set.empty())
    throw DataError("training needs non-empty train and dev sets");
  if (train_ctx && train_ctx->sentences.size() != train_set.size())
    throw DataError("train context vectors misaligned with corpus");

  std::vector<std::vector<int>> gold(train_set.size());
  for (std::size_t i = 0; i < train_set.size(); ++i)
    gold[i] = gold_ids(m, train_set[i]);

  Tensor& a = m.store.at("crf/a");
  const CrfMask* mask = m.mask_ptr();

  TrainResult result{m, 0, -1.0, {}};
  std::vector<std::size_t> order(train_set.size());
  std::iota(order.begin(), order.end(), 0);

  for (int epoch = 1; epoch <= tc.epochs; ++epoch) {
    if (tc.shuffle) {
      Rng shuffle_rng(Rng::derive(tc.seed, kEpochStreamBase + 2 * epoch));
      for (std::size_t i = 0; i + 1 < order.size(); ++i) {
        const std::size_t j = i + shuffle_rng.below(order.size() - i);
        std::swap(order[i], order[j]);
      }
    }
    Rng dropout_rng(Rng::derive(tc.seed, kEpochStreamBase + 2 * epoch + 1));

    double epoch_loss = 0.0;
    for (std::size_t batch_start = 0; batch_start < order.size();
         batch_start += tc.batch) {
      const std::size_t batch_end =
          std::min(order.size(), batch_start + tc.batch);
      const int batch_no = static_cast<int>(batch_start / tc.batch) + 1;
      Graph g;
      std::vector<Var> losses;
      losses.reserve(batch_end - batch_start);
      for (std::size_t k = batch_start; k < batch_end; ++k) {
        const std::size_t idx = order[k];
        const std::vector<Var> emissions =
            encode(g, m, train_set[idx], true, &dropout_rng,
                   train_ctx ? &train_ctx->sentences[idx] : nullptr);
        losses.push_back(crf_nll_graph(g, emissions, a, gold[idx], mask));
      }
      const Var loss = g.sum(losses);
      const double loss_value = g.scalar(loss);
      if (!std::isfinite(loss_value))
        throw NumericError("epoch " + std::to_string(epoch) + " batch " +
                           std::to_string(batch_no) + ": non-finite loss");
      epoch_loss += loss_value;
      g.backward(loss);
      try {
        m.store.sgd_step(tc.lr, tc.l2, tc.clip);
      } catch (const NumericError& e) {
        throw NumericError("epoch " + std::to_string(epoch) + " batch " +
                           std::to_string(batch_no) + ": " + e.what());
      }
    }

    const TagCorpus dev_pred = decode_corpus(m, dev_set, dev_ctx);
    const EvalReport report = evaluate(dev_set, dev_pred);
    EpochLog entry;
    entry.epoch = epoch;
    entry.train_loss = epoch_loss;
    entry.dev_p = report.overall.precision();
    entry.dev_r = report.overall.recall();
    entry.dev_f1 = report.overall.f1();
    result.log.push_back(entry);
    if (entry.dev_f1 > result.best_f1) {
      result.best_f1 = entry.dev_f1;
      result.best_epoch = epoch;
      result.model = m;  // snapshot
    }
    if (progress) {
      char buf[160];
      std::snprintf(buf, sizeof buf,
                    "epoch %d  loss %.4f  dev P %.2f R %.2f F1 %.2f", epoch,
                    entry.train_loss, entry.dev_p, entry.dev_r, entry.dev_f1);
      *progress << buf << '\n';
    }
  }
  return result;
}

void write_epoch_log(const std::vector<EpochLog>& log, std::ostream& out) {
  out << "epoch\ttrain_loss\tdev_p\tdev_r\tdev_f1\n";
  char buf[160];
  for (const EpochLog& e : log) {
    std::snprintf(buf, sizeof buf, "%d\t%.6f\t%.4f\t%.4f\t%.4f", e.epoch,
                  e.train_loss, e.dev_p, e.dev_r, e.dev_f1);
    out << buf << '\n';
  }
}

}  // namespace dgner
