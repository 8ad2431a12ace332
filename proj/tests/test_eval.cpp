#include <sstream>
#include <string>
#include <vector>

#include "dgner/errors.hpp"
#include "dgner/eval.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace dgner;

namespace {

std::vector<std::string> tags(std::initializer_list<const char*> ts) {
  return {ts.begin(), ts.end()};
}

}  // namespace

TEST_CASE("precision, recall and F1 follow the span counts") {
  // one true positive, two predictions, three gold spans
  const TagCorpus gold{tags({"S-PER", "B-ORG", "E-ORG", "O", "S-GPE"})};
  const TagCorpus pred{tags({"S-PER", "S-ORG", "O", "O", "O"})};
  const EvalReport r = evaluate_tags(gold, pred);
  CHECK(r.overall.tp == 1);
  CHECK(r.overall.pred == 2);
  CHECK(r.overall.gold == 3);
  CHECK(r.overall.precision() == doctest::Approx(50.0));
  CHECK(r.overall.recall() == doctest::Approx(100.0 / 3.0));
  CHECK(r.overall.f1() == doctest::Approx(40.0));

  CHECK(r.per_type.at("PER").tp == 1);
  CHECK(r.per_type.at("PER").f1() == doctest::Approx(100.0));
  CHECK(r.per_type.at("ORG").tp == 0);
  CHECK(r.per_type.at("ORG").pred == 1);
  CHECK(r.per_type.at("ORG").gold == 1);
  CHECK(r.per_type.at("GPE").pred == 0);
  CHECK(r.per_type.at("GPE").recall() == 0.0);
}

TEST_CASE("perfect predictions score 100 everywhere") {
  const TagCorpus gold{tags({"B-PER", "E-PER", "O"}),
                       tags({"S-GPE", "O", "B-ORG", "I-ORG", "E-ORG"})};
  const EvalReport r = evaluate_tags(gold, gold);
  CHECK(r.overall.precision() == 100.0);
  CHECK(r.overall.recall() == 100.0);
  CHECK(r.overall.f1() == 100.0);
  for (const auto& [type, c] : r.per_type) CHECK(c.f1() == 100.0);
  for (const auto& [bucket, c] : r.per_length) CHECK(c.f1() == 100.0);
}

TEST_CASE("zero counts never divide by zero") {
  PRF empty;
  CHECK(empty.precision() == 0.0);
  CHECK(empty.recall() == 0.0);
  CHECK(empty.f1() == 0.0);

  const TagCorpus all_o{tags({"O", "O"})};
  const EvalReport r = evaluate_tags(all_o, all_o);
  CHECK(r.overall.f1() == 0.0);
  CHECK(r.per_type.empty());
}

TEST_CASE("a boundary or type mismatch is not a hit") {
  const TagCorpus gold{tags({"B-PER", "E-PER", "O"})};
  // right span, wrong type
  CHECK(evaluate_tags(gold, {tags({"B-ORG", "E-ORG", "O"})}).overall.tp == 0);
  // right type, boundary off by one
  CHECK(evaluate_tags(gold, {tags({"B-PER", "I-PER", "E-PER"})}).overall.tp ==
        0);
  CHECK(evaluate_tags(gold, {tags({"S-PER", "O", "O"})}).overall.tp == 0);
}

TEST_CASE("length buckets cap at six or more") {
  CHECK(length_bucket(1) == "1");
  CHECK(length_bucket(5) == "5");
  CHECK(length_bucket(6) == ">=6");
  CHECK(length_bucket(11) == ">=6");

  // a 7-token entity and a 1-token entity land in different buckets
  const TagCorpus gold{tags({"B-EV", "I-EV", "I-EV", "I-EV", "I-EV", "I-EV",
                             "E-EV", "O", "S-PER"})};
  const auto by_len = f1_by_length(gold, gold);
  REQUIRE(by_len.count("1") == 1);
  REQUIRE(by_len.count(">=6") == 1);
  CHECK(by_len.at("1").gold == 1);
  CHECK(by_len.at(">=6").gold == 1);
  CHECK(by_len.count("3") == 0);
}

TEST_CASE("swapping gold and prediction swaps precision with recall") {
  const TagCorpus a{tags({"S-PER", "B-ORG", "E-ORG", "O", "S-GPE"})};
  const TagCorpus b{tags({"S-PER", "S-ORG", "O", "O", "O"})};
  const EvalReport ab = evaluate_tags(a, b);
  const EvalReport ba = evaluate_tags(b, a);
  CHECK(ab.overall.tp == ba.overall.tp);
  CHECK(ab.overall.precision() == doctest::Approx(ba.overall.recall()));
  CHECK(ab.overall.recall() == doctest::Approx(ba.overall.precision()));
  CHECK(ab.overall.f1() == doctest::Approx(ba.overall.f1()));
}

TEST_CASE("misaligned corpora are rejected") {
  const TagCorpus two{tags({"O"}), tags({"O"})};
  const TagCorpus one{tags({"O"})};
  CHECK_THROWS_AS(evaluate_tags(two, one), DataError);
  const TagCorpus longer{tags({"O", "O"})};
  CHECK_THROWS_AS(evaluate_tags(one, longer), DataError);
  CHECK_THROWS_WITH(evaluate_tags(one, longer),
                    "sentence 1 differs in length between corpora");
}

TEST_CASE("ill-formed predictions are scored through span repair") {
  const TagCorpus gold{tags({"B-PER", "E-PER", "O"})};
  // stray inside tags open a span; the sentence end closes it
  const TagCorpus pred{tags({"I-PER", "I-PER", "O"})};
  const EvalReport r = evaluate_tags(gold, pred);
  CHECK(r.overall.tp == 1);
  CHECK(r.overall.f1() == 100.0);

  // a dangling begin closes at the last token: span covers all three -> miss
  const TagCorpus dangling{tags({"B-PER", "I-PER", "I-PER"})};
  CHECK(evaluate_tags(gold, dangling).overall.tp == 0);
}

TEST_CASE("evaluating sentences equals evaluating their tag rows") {
  Rng rng(777);
  auto corpus = testutil::random_corpus(rng, 30, 10);
  TagCorpus gold_tags;
  for (const Sentence& s : corpus) gold_tags.push_back(s.tags());
  // perturb a copy into a prediction
  TagCorpus pred = gold_tags;
  for (std::size_t i = 0; i < pred.size(); i += 3)
    for (auto& t : pred[i]) t = "O";
  const EvalReport a = evaluate(corpus, pred);
  const EvalReport b = evaluate_tags(gold_tags, pred);
  CHECK(a.overall.tp == b.overall.tp);
  CHECK(a.overall.gold == b.overall.gold);
  CHECK(a.overall.pred == b.overall.pred);
}

TEST_CASE("report rendering includes every section") {
  const TagCorpus gold{tags({"S-PER", "B-ORG", "E-ORG", "O", "S-GPE"})};
  const TagCorpus pred{tags({"S-PER", "S-ORG", "O", "O", "O"})};
  const EvalReport r = evaluate_tags(gold, pred);

  std::ostringstream readable;
  render_report(r, readable);
  const std::string text = readable.str();
  CHECK(text.find("overall") != std::string::npos);
  CHECK(text.find("by type:") != std::string::npos);
  CHECK(text.find("by length:") != std::string::npos);
  CHECK(text.find("PER") != std::string::npos);
  CHECK(text.find("F1  40.00") != std::string::npos);

  std::ostringstream tsv;
  render_report_tsv(r, tsv);
  const std::string table = tsv.str();
  CHECK(table.rfind("section\tlabel\ttp\tgold\tpred\tprecision\trecall\tf1\n",
                    0) == 0);
  CHECK(table.find("overall\tall\t1\t3\t2\t50.0000\t33.3333\t40.0000") !=
        std::string::npos);
  CHECK(table.find("type\tPER") != std::string::npos);
  CHECK(table.find("length\t1") != std::string::npos);
}
