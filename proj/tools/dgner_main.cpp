// Command-line front end: train / eval / predict / compare / stats / repair /
// subsample / gradcheck over the sequence-labeling library.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dgner/bootstrap.hpp"
#include "dgner/checkpoint.hpp"
#include "dgner/corpus.hpp"
#include "dgner/crf.hpp"
#include "dgner/embeddings.hpp"
#include "dgner/errors.hpp"
#include "dgner/eval.hpp"
#include "dgner/gradcheck.hpp"
#include "dgner/graph.hpp"
#include "dgner/model.hpp"
#include "dgner/runconfig.hpp"
#include "dgner/stats.hpp"
#include "dgner/train.hpp"

namespace fs = std::filesystem;
using namespace dgner;

namespace {

RunConfig make_run_config(const std::string& config_path,
                          const std::vector<std::string>& sets) {
  KeyValues kv;
  if (!config_path.empty()) kv = read_config_file(config_path);
  apply_overrides(kv, sets);
  return resolve_config(kv);
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open '" + path + "' for writing");
  return out;
}

// Context vectors are optional per run but mandatory for models configured
// to use them; dimensions must line up with what the model was built for.
ContextVectors require_context(const std::string& path,
                               const std::vector<Sentence>& corpus,
                               int expected_dim) {
  if (path.empty())
    throw ConfigError(
        "this model uses context vectors; pass the matching vector file");
  ContextVectors ctx = load_context_vectors(path, corpus);
  if (expected_dim > 0 && ctx.dim != expected_dim)
    throw DataError("context vectors have dimension " +
                    std::to_string(ctx.dim) + " but the model expects " +
                    std::to_string(expected_dim));
  return ctx;
}

int cmd_train(const std::string& config_path,
              const std::vector<std::string>& sets) {
  RunConfig rc = make_run_config(config_path, sets);
  if (rc.train_corpus.empty()) throw ConfigError("train_corpus is required");
  if (rc.dev_corpus.empty()) throw ConfigError("dev_corpus is required");
  if (rc.output_dir.empty()) throw ConfigError("output_dir is required");

  std::vector<Sentence> train_set = load_corpus(rc.train_corpus);
  std::vector<Sentence> dev_set = load_corpus(rc.dev_corpus);
  std::vector<Sentence> vocab_source = train_set;
  vocab_source.insert(vocab_source.end(), dev_set.begin(), dev_set.end());
  if (!rc.test_corpus.empty()) {
    std::vector<Sentence> test_set = load_corpus(rc.test_corpus);
    vocab_source.insert(vocab_source.end(), test_set.begin(), test_set.end());
  }

  std::unique_ptr<ContextVectors> train_ctx, dev_ctx;
  if (rc.model.use_context_vectors) {
    if (rc.context_train.empty() || rc.context_dev.empty())
      throw ConfigError(
          "use_context_vectors requires context_train and context_dev");
    train_ctx = std::make_unique<ContextVectors>(
        load_context_vectors(rc.context_train, train_set));
    dev_ctx = std::make_unique<ContextVectors>(
        load_context_vectors(rc.context_dev, dev_set));
    if (train_ctx->dim != dev_ctx->dim)
      throw DataError("context vector files disagree on dimension");
    rc.model.context_dim = train_ctx->dim;
  }

  std::unique_ptr<EmbeddingTable> pretrained;
  if (!rc.embeddings.empty())
    pretrained = std::make_unique<EmbeddingTable>(
        load_embeddings(rc.embeddings, rc.model.word_dim));

  Vocabulary vocab = build_vocab(vocab_source, rc.model.mask_transitions);
  Model model = build_model(rc.model, vocab, rc.seed, pretrained.get());

  fs::create_directories(rc.output_dir);
  {
    auto out = open_out((fs::path(rc.output_dir) / "config.echo").string());
    echo_config(rc, out);
  }

  TrainResult result = train(std::move(model), rc.trainer, train_set, dev_set,
                             train_ctx.get(), dev_ctx.get(), &std::cout);

  {
    auto out = open_out((fs::path(rc.output_dir) / "epochs.tsv").string());
    write_epoch_log(result.log, out);
  }
  std::string ckpt = (fs::path(rc.output_dir) / "checkpoint.bin").string();
  save_model(result.model, ckpt);
  std::printf("best epoch %d  dev F1 %.2f\ncheckpoint written to %s\n",
              result.best_epoch, result.best_f1, ckpt.c_str());
  return 0;
}

int cmd_eval(const std::string& ckpt, const std::string& corpus_path,
             const std::string& ctx_path, const std::string& tsv_path) {
  Model m = load_model(ckpt);
  std::vector<Sentence> corpus = load_corpus(corpus_path);
  std::unique_ptr<ContextVectors> ctx;
  if (m.config.use_context_vectors)
    ctx = std::make_unique<ContextVectors>(
        require_context(ctx_path, corpus, m.config.context_dim));
  TagCorpus pred = decode_corpus(m, corpus, ctx.get());
  EvalReport report = evaluate(corpus, pred);
  render_report(report, std::cout);
  if (!tsv_path.empty()) {
    auto out = open_out(tsv_path);
    render_report_tsv(report, out);
  }
  return 0;
}

int cmd_predict(const std::string& ckpt, const std::string& corpus_path,
                const std::string& ctx_path, const std::string& out_path) {
  Model m = load_model(ckpt);
  std::vector<Sentence> corpus = load_corpus(corpus_path);
  std::unique_ptr<ContextVectors> ctx;
  if (m.config.use_context_vectors)
    ctx = std::make_unique<ContextVectors>(
        require_context(ctx_path, corpus, m.config.context_dim));
  TagCorpus pred = decode_corpus(m, corpus, ctx.get());
  if (out_path.empty()) {
    serialize_with_extra(corpus, pred, std::cout);
  } else {
    auto out = open_out(out_path);
    serialize_with_extra(corpus, pred, out);
  }
  return 0;
}

int cmd_compare(const std::string& ckpt_a, const std::string& ckpt_b,
                const std::string& corpus_path, const std::string& ctx_path,
                int resamples, std::uint64_t seed) {
  Model a = load_model(ckpt_a);
  Model b = load_model(ckpt_b);
  std::vector<Sentence> corpus = load_corpus(corpus_path);
  auto decode_with = [&](Model& m) {
    std::unique_ptr<ContextVectors> ctx;
    if (m.config.use_context_vectors)
      ctx = std::make_unique<ContextVectors>(
          require_context(ctx_path, corpus, m.config.context_dim));
    return decode_corpus(m, corpus, ctx.get());
  };
  TagCorpus pred_a = decode_with(a);
  TagCorpus pred_b = decode_with(b);
  TagCorpus gold;
  gold.reserve(corpus.size());
  for (const Sentence& s : corpus) gold.push_back(s.tags());

  EvalReport ra = evaluate_tags(gold, pred_a);
  EvalReport rb = evaluate_tags(gold, pred_b);
  SignificanceResult sig =
      bootstrap_test(gold, pred_a, pred_b, resamples, seed);
  std::printf("F1 a %.2f  F1 b %.2f  delta %.4f\n", ra.overall.f1(),
              rb.overall.f1(), sig.delta);
  std::printf("p-value %.6f  (%d resamples, seed %llu)\n", sig.p_value,
              sig.resamples, static_cast<unsigned long long>(sig.seed));
  return 0;
}

int cmd_stats(const std::string& corpus_path, const std::string& which,
              int min_len, bool connected, bool raw) {
  if (min_len < 1) throw ConfigError("--min-len must be at least 1");
  std::vector<Sentence> corpus = load_corpus(corpus_path);
  std::ostream& out = std::cout;
  if (which == "relmatrix" || which == "pairmatrix") {
    CorrelationMatrix m = which == "relmatrix"
                              ? entity_relation_matrix(corpus)
                              : grandchild_pair_matrix(corpus);
    if (raw)
      render_matrix_raw(m, out);
    else
      render_matrix(m, out);
    return 0;
  }
  Subtree kind = connected ? Subtree::connected : Subtree::complete;
  DatasetStats ds = dataset_stats(corpus, min_len, kind);
  double ratio = which == "st" ? ds.st_ratio : ds.gd_ratio;
  const char* ratio_key = which == "st" ? "subtree" : "grandchild";
  out << "sentences\t" << ds.sentence_count << "\n";
  out << "entities\t" << ds.entity_count << "\n";
  out << "counted\t" << ds.counted_entities << "\n";
  char buf[64];
  if (raw)
    std::snprintf(buf, sizeof buf, "%.*g",
                  std::numeric_limits<double>::max_digits10, ratio);
  else
    std::snprintf(buf, sizeof buf, "%.1f", ratio);
  out << ratio_key << "\t" << buf << "\n";
  out << "empty\t" << (ds.empty_selection ? 1 : 0) << "\n";
  for (const auto& [len, n] : ds.length_histogram)
    out << "len_" << len << "\t" << n << "\n";
  return 0;
}

int cmd_repair(const std::string& in_path, const std::string& out_path) {
  std::vector<Sentence> corpus = load_corpus(in_path);
  std::vector<Sentence> repaired = repair_trees(corpus);
  if (out_path.empty()) {
    serialize_corpus(repaired, std::cout);
  } else {
    save_corpus(repaired, out_path);
  }
  return 0;
}

int cmd_subsample(const std::string& corpus_path, std::size_t n,
                  std::uint64_t seed, const std::string& out_path) {
  std::vector<Sentence> corpus = load_corpus(corpus_path);
  std::vector<Sentence> picked = subsample(corpus, n, seed);
  if (out_path.empty()) {
    serialize_corpus(picked, std::cout);
  } else {
    save_corpus(picked, out_path);
  }
  return 0;
}

int cmd_gradcheck(const std::string& config_path,
                  const std::vector<std::string>& sets) {
  RunConfig rc = make_run_config(config_path, sets);
  if (rc.train_corpus.empty()) throw ConfigError("train_corpus is required");
  std::vector<Sentence> corpus = load_corpus(rc.train_corpus);
  if (corpus.size() > 3) corpus.resize(3);
  rc.model.dropout = 0.0;  // finite differences need a deterministic loss

  Vocabulary vocab = build_vocab(corpus, rc.model.mask_transitions);
  Model m = build_model(rc.model, vocab, rc.seed);

  std::vector<std::vector<int>> gold;
  for (const Sentence& s : corpus) {
    std::vector<int> ids;
    for (const Token& t : s.tokens) ids.push_back(vocab.label_id(t.tag));
    gold.push_back(std::move(ids));
  }

  auto loss_fn = [&]() {
    Graph g;
    std::vector<Var> parts;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      std::vector<Var> emissions = encode(g, m, corpus[i]);
      parts.push_back(crf_nll_graph(g, emissions, m.store.at("crf/a"),
                                    gold[i], m.mask_ptr()));
    }
    Var loss = g.sum(parts);
    g.backward(loss);
    return g.scalar(loss);
  };

  GradCheckReport report = grad_check(loss_fn, m.store);
  std::printf("max relative error %.3e  (%s[%zu]: analytic %.6e, numeric %.6e)\n",
              report.max_rel_err, report.worst_param.c_str(),
              report.worst_index, report.analytic, report.numeric);
  if (report.max_rel_err > 1e-4) {
    std::fprintf(stderr, "gradient check FAILED\n");
    return 4;
  }
  std::printf("gradient check passed\n");
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"dependency-guided named-entity tagger"};
  app.require_subcommand(1);

  std::string config_path;
  std::vector<std::string> sets;
  std::string ckpt, ckpt_b, corpus_path, ctx_path, out_path, tsv_path;
  std::string which = "st";
  int min_len = 3;
  bool connected = false, raw = false;
  std::size_t sample_n = 0;
  std::uint64_t seed = 42;
  int resamples = 10000;

  CLI::App* train_cmd = app.add_subcommand("train", "train a model");
  train_cmd->add_option("-c,--config", config_path, "key = value config file");
  train_cmd->add_option("--set", sets, "override, key=value (repeatable)");

  CLI::App* eval_cmd =
      app.add_subcommand("eval", "score a checkpoint against a tagged corpus");
  eval_cmd->add_option("--checkpoint", ckpt)->required();
  eval_cmd->add_option("--corpus", corpus_path)->required();
  eval_cmd->add_option("--context", ctx_path, "context-vector file");
  eval_cmd->add_option("--tsv", tsv_path, "also write the machine-readable report here");

  CLI::App* predict_cmd =
      app.add_subcommand("predict", "tag a corpus, emitting a sixth column");
  predict_cmd->add_option("--checkpoint", ckpt)->required();
  predict_cmd->add_option("--corpus", corpus_path)->required();
  predict_cmd->add_option("--context", ctx_path, "context-vector file");
  predict_cmd->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* compare_cmd = app.add_subcommand(
      "compare", "paired bootstrap significance test between two checkpoints");
  compare_cmd->add_option("--checkpoint-a", ckpt)->required();
  compare_cmd->add_option("--checkpoint-b", ckpt_b)->required();
  compare_cmd->add_option("--corpus", corpus_path)->required();
  compare_cmd->add_option("--context", ctx_path, "context-vector file");
  compare_cmd->add_option("--resamples", resamples, "bootstrap resamples");
  compare_cmd->add_option("--seed", seed, "resampling seed");

  CLI::App* stats_cmd =
      app.add_subcommand("stats", "dependency/entity statistics of a corpus");
  stats_cmd->add_option("--corpus", corpus_path)->required();
  stats_cmd->add_option("--which", which, "st | gd | relmatrix | pairmatrix")
      ->check(CLI::IsMember({"st", "gd", "relmatrix", "pairmatrix"}));
  stats_cmd->add_option("--min-len", min_len, "entity length cutoff (default 3)");
  stats_cmd->add_flag("--connected", connected,
                      "single-attachment criterion instead of full subtree");
  stats_cmd->add_flag("--raw", raw, "full precision, no column dropping");

  CLI::App* repair_cmd = app.add_subcommand(
      "repair", "reattach entity-internal dependencies to one anchor");
  repair_cmd->add_option("--in", corpus_path)->required();
  repair_cmd->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* subsample_cmd =
      app.add_subcommand("subsample", "seeded sentence sample without replacement");
  subsample_cmd->add_option("--corpus", corpus_path)->required();
  subsample_cmd->add_option("-n,--n", sample_n, "sentences to keep")->required();
  subsample_cmd->add_option("--seed", seed, "sampling seed");
  subsample_cmd->add_option("--out", out_path, "output file (default stdout)");

  CLI::App* gradcheck_cmd = app.add_subcommand(
      "gradcheck", "finite-difference check of every trainable parameter");
  gradcheck_cmd->add_option("-c,--config", config_path, "key = value config file");
  gradcheck_cmd->add_option("--set", sets, "override, key=value (repeatable)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (train_cmd->parsed()) return cmd_train(config_path, sets);
    if (eval_cmd->parsed())
      return cmd_eval(ckpt, corpus_path, ctx_path, tsv_path);
    if (predict_cmd->parsed())
      return cmd_predict(ckpt, corpus_path, ctx_path, out_path);
    if (compare_cmd->parsed())
      return cmd_compare(ckpt, ckpt_b, corpus_path, ctx_path, resamples, seed);
    if (stats_cmd->parsed())
      return cmd_stats(corpus_path, which, min_len, connected, raw);
    if (repair_cmd->parsed()) return cmd_repair(corpus_path, out_path);
    if (subsample_cmd->parsed())
      return cmd_subsample(corpus_path, sample_n, seed, out_path);
    if (gradcheck_cmd->parsed()) return cmd_gradcheck(config_path, sets);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DataError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 3;
  } catch (const NumericError& e) {
    std::cerr << "numeric error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
