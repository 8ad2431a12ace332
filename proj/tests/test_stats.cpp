#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "dgner/corpus.hpp"
#include "dgner/iobes.hpp"
#include "dgner/stats.hpp"
#include "doctest.h"
#include "helpers.hpp"

using namespace dgner;
using testutil::parse_text;

namespace {

// Independent oracle built on parent-chain walks instead of child DFS:
// a token belongs to the closure of anchor a iff following heads from it
// reaches a.
bool oracle_complete(const Sentence& s, const Span& span) {
  std::set<int> in_span;  // 1-based
  for (int i = span.start; i <= span.end; ++i) in_span.insert(i);
  std::vector<int> outside_attached;
  for (int i : in_span) {
    const int h = s.tokens[i - 1].head;
    if (h == 0 || !in_span.count(h)) outside_attached.push_back(i);
  }
  if (outside_attached.size() != 1) return false;
  const int anchor = outside_attached[0];

  auto reaches_anchor = [&](int tok) {
    int cur = tok;
    for (int steps = 0; steps <= s.n(); ++steps) {
      if (cur == anchor) return true;
      cur = s.tokens[cur - 1].head;
      if (cur == 0) return false;
    }
    return false;
  };
  // closure(anchor) == span: every span token reaches the anchor, and no
  // outside token does.
  for (int i : in_span)
    if (!reaches_anchor(i)) return false;
  for (int i = 1; i <= s.n(); ++i)
    if (!in_span.count(i) && reaches_anchor(i)) return false;
  return true;
}

bool oracle_connected(const Sentence& s, const Span& span) {
  int outside = 0;
  for (int i = span.start; i <= span.end; ++i) {
    const int h = s.tokens[i - 1].head;
    if (h == 0 || h < span.start || h > span.end) ++outside;
  }
  return outside == 1;
}

// Triple enumeration: any (c, b, a) all inside with head(c)=b, head(b)=a.
bool oracle_grandchild(const Sentence& s, const Span& span) {
  for (int c = span.start; c <= span.end; ++c)
    for (int b = span.start; b <= span.end; ++b)
      for (int a = span.start; a <= span.end; ++a) {
        if (c == b || b == a || c == a) continue;
        if (s.tokens[c - 1].head == b && s.tokens[b - 1].head == a) return true;
      }
  return false;
}

// Two sentences modeled on the running examples: a single-clause sentence
// with two one-token entities, and a long nominal whose nine-token entity is
// exactly the closure of its head noun.
const char* kAccidentSentence =
    "1\tAbramov\t2\tnsubj\tS-PER\n"
    "2\thad\t0\troot\tO\n"
    "3\tan\t4\tdet\tO\n"
    "4\taccident\t2\tdobj\tO\n"
    "5\tin\t2\tprep\tO\n"
    "6\tMoscow\t5\tpobj\tS-GPE\n"
    "7\t.\t2\tpunct\tO\n";

const char* kSeminarSentence =
    "1\tThe\t2\tdet\tB-EVENT\n"
    "2\tseminar\t11\tnsubjpass\tI-EVENT\n"
    "3\ton\t2\tprep\tI-EVENT\n"
    "4\tauxiliary\t5\tamod\tI-EVENT\n"
    "5\tmaterials\t3\tpobj\tI-EVENT\n"
    "6\tfor\t5\tprep\tI-EVENT\n"
    "7\tthe\t9\tdet\tI-EVENT\n"
    "8\ttax\t9\tnn\tI-EVENT\n"
    "9\treform\t6\tpobj\tE-EVENT\n"
    "10\twas\t11\tauxpass\tO\n"
    "11\theld\t0\troot\tO\n"
    "12\tin\t11\tprep\tO\n"
    "13\tPrague\t12\tpobj\tS-GPE\n"
    "14\t.\t11\tpunct\tO\n";

}  // namespace

TEST_CASE("complete vs connected on hand-built shapes") {
  // chain entity: head noun, preposition, object
  auto chain = parse_text(
      "1\tBank\t4\tnsubj\tB-ORG\n"
      "2\tof\t1\tprep\tI-ORG\n"
      "3\tEngland\t2\tpobj\tE-ORG\n"
      "4\traised\t0\troot\tO\n"
      "5\trates\t4\tdobj\tO\n");
  Span sp{1, 3, "ORG"};
  CHECK(entity_is_subtree(chain[0], sp, Subtree::complete));
  CHECK(entity_is_subtree(chain[0], sp, Subtree::connected));
  CHECK(entity_has_grandchild_dep(chain[0], sp));

  // flat entity: all tokens hang off the last one
  auto flat = parse_text(
      "1\tUnited\t3\tnn\tB-ORG\n"
      "2\tArab\t3\tnn\tI-ORG\n"
      "3\tEmirates\t4\tnn\tE-ORG\n"
      "4\topened\t0\troot\tO\n");
  CHECK(entity_is_subtree(flat[0], {1, 3, "ORG"}, Subtree::complete));
  CHECK(!entity_has_grandchild_dep(flat[0], {1, 3, "ORG"}));

  // two outside attachments: connected fails already
  auto split = parse_text(
      "1\tred\t4\tamod\tB-MISC\n"
      "2\tgreen\t4\tamod\tI-MISC\n"
      "3\tblue\t4\tamod\tE-MISC\n"
      "4\tbirds\t5\tnsubj\tO\n"
      "5\tflew\t0\troot\tO\n");
  CHECK(!entity_is_subtree(split[0], {1, 3, "MISC"}, Subtree::connected));
  CHECK(!entity_is_subtree(split[0], {1, 3, "MISC"}, Subtree::complete));

  // connected but not complete: an outside token hangs below the anchor
  auto dangling = parse_text(
      "1\tNew\t2\tnn\tB-GPE\n"
      "2\tYork\t3\tnsubj\tE-GPE\n"
      "3\tcalled\t0\troot\tO\n"
      "4\ttwice\t2\tadvmod\tO\n");  // 4 attaches under the entity head
  CHECK(entity_is_subtree(dangling[0], {1, 2, "GPE"}, Subtree::connected));
  CHECK(!entity_is_subtree(dangling[0], {1, 2, "GPE"}, Subtree::complete));

  // a root-anchored entity can still be complete if it covers everything
  auto whole = parse_text(
      "1\tAcme\t2\tnn\tB-ORG\n"
      "2\tCorp\t0\troot\tE-ORG\n");
  CHECK(entity_is_subtree(whole[0], {1, 2, "ORG"}, Subtree::complete));
  CHECK(entity_is_subtree(whole[0], {1, 2, "ORG"}, Subtree::connected));
}

TEST_CASE("fuzzed agreement with the closure oracle") {
  Rng rng(424242);
  auto corpus = testutil::random_corpus(rng, 200, 12);
  int spans_checked = 0, complete_seen = 0, connected_seen = 0, gd_seen = 0;
  for (const Sentence& s : corpus) {
    for (const Span& span : from_iobes(s.tags())) {
      ++spans_checked;
      const bool comp = entity_is_subtree(s, span, Subtree::complete);
      const bool conn = entity_is_subtree(s, span, Subtree::connected);
      const bool gd = entity_has_grandchild_dep(s, span);
      CHECK(comp == oracle_complete(s, span));
      CHECK(conn == oracle_connected(s, span));
      CHECK(gd == oracle_grandchild(s, span));
      if (comp) {
        ++complete_seen;
        CHECK(conn);  // complete implies connected
      }
      if (conn) ++connected_seen;
      if (gd) ++gd_seen;
    }
  }
  // the fuzz corpus must actually exercise all outcomes
  CHECK(spans_checked > 300);
  CHECK(complete_seen > 10);
  CHECK(connected_seen > complete_seen);
  CHECK(gd_seen > 10);
}

TEST_CASE("corpus statistics on a hand-counted corpus") {
  // 10 entities of length >= 3: four chain-shaped (complete subtree with a
  // two-edge chain), three flat (complete subtree, no chain), three split
  // across two heads (not a subtree at all): 70% subtrees, 40% chains.
  std::ostringstream text;
  for (int i = 0; i < 4; ++i)
    text << "1\ta" << i << "\t4\tnsubj\tB-ORG\n"
         << "2\tb" << i << "\t1\tprep\tI-ORG\n"
         << "3\tc" << i << "\t2\tpobj\tE-ORG\n"
         << "4\td" << i << "\t0\troot\tO\n\n";
  for (int i = 0; i < 3; ++i)
    text << "1\te" << i << "\t3\tnn\tB-GPE\n"
         << "2\tf" << i << "\t3\tnn\tI-GPE\n"
         << "3\tg" << i << "\t4\tnn\tE-GPE\n"
         << "4\th" << i << "\t0\troot\tO\n\n";
  for (int i = 0; i < 3; ++i)
    text << "1\tp" << i << "\t4\tamod\tB-MISC\n"
         << "2\tq" << i << "\t4\tamod\tI-MISC\n"
         << "3\tr" << i << "\t4\tamod\tE-MISC\n"
         << "4\ts" << i << "\t5\tdobj\tO\n"
         << "5\tt" << i << "\t0\troot\tO\n\n";
  auto corpus = parse_text(text.str());
  REQUIRE(corpus.size() == 10);

  DatasetStats ds = dataset_stats(corpus, 3, Subtree::complete);
  CHECK(ds.sentence_count == 10);
  CHECK(ds.entity_count == 10);
  CHECK(ds.counted_entities == 10);
  CHECK(ds.st_ratio == doctest::Approx(70.0));
  CHECK(ds.gd_ratio == doctest::Approx(40.0));
  CHECK(!ds.empty_selection);
  CHECK(ds.length_histogram.at(3) == 10);

  // under the single-attachment criterion the split entities still fail
  DatasetStats conn = dataset_stats(corpus, 3, Subtree::connected);
  CHECK(conn.st_ratio == doctest::Approx(70.0));
}

TEST_CASE("example sentences behave as described") {
  auto acc = parse_text(kAccidentSentence);
  DatasetStats ds = dataset_stats(acc, 1);
  CHECK(ds.entity_count == 2);
  CHECK(ds.st_ratio == doctest::Approx(100.0));  // both singletons, leaves
  CHECK(ds.gd_ratio == doctest::Approx(0.0));
  CHECK(ds.length_histogram.at(1) == 2);

  auto sem = parse_text(kSeminarSentence);
  auto spans = from_iobes(sem[0].tags());
  REQUIRE(spans.size() == 2);
  CHECK(spans[0] == Span{1, 9, "EVENT"});
  CHECK(entity_is_subtree(sem[0], spans[0], Subtree::complete));
  CHECK(entity_has_grandchild_dep(sem[0], spans[0]));
  DatasetStats ds2 = dataset_stats(sem, 3);
  CHECK(ds2.counted_entities == 1);
  CHECK(ds2.st_ratio == doctest::Approx(100.0));
  CHECK(ds2.gd_ratio == doctest::Approx(100.0));
}

TEST_CASE("length cutoff and empty selection") {
  auto corpus = parse_text(kAccidentSentence);
  DatasetStats ds = dataset_stats(corpus, 3);
  CHECK(ds.entity_count == 2);
  CHECK(ds.counted_entities == 0);
  CHECK(ds.empty_selection);
  CHECK(ds.st_ratio == 0.0);
  CHECK(ds.gd_ratio == 0.0);
}

TEST_CASE("relation matrix rows are percentages that sum to 100") {
  auto corpus = load_corpus(std::string(DGNER_DATA_DIR) + "/toy.conll");
  CorrelationMatrix m = entity_relation_matrix(corpus);
  REQUIRE(m.row_labels == std::vector<std::string>{"GPE", "MISC", "ORG", "PER"});

  auto col = [&](const std::string& label) {
    for (std::size_t j = 0; j < m.col_labels.size(); ++j)
      if (m.col_labels[j] == label) return j;
    REQUIRE(false);
    return std::size_t(0);
  };
  auto entry = [&](std::size_t r, const std::string& c) {
    return m.entries[r][col(c)];
  };

  for (std::size_t r = 0; r < m.row_labels.size(); ++r) {
    double sum = 0.0;
    for (double v : m.entries[r]) sum += v;
    CHECK(sum == doctest::Approx(100.0).epsilon(1e-9));
  }

  // GPE tokens: Moscow/pobj, New/nn, York/nn, City/dobj, Germany/nsubj,
  // Argentina/dobj -> nn 2/6, dobj 2/6, pobj 1/6, nsubj 1/6.
  CHECK(entry(0, "nn") == doctest::Approx(100.0 / 3));
  CHECK(entry(0, "dobj") == doctest::Approx(100.0 / 3));
  CHECK(entry(0, "pobj") == doctest::Approx(100.0 / 6));
  CHECK(entry(0, "nsubj") == doctest::Approx(100.0 / 6));
  // PER tokens: Abramov/nsubj, John/nn, Smith/nsubj, Paris/dobj, Hilton/nn.
  CHECK(entry(3, "nsubj") == doctest::Approx(40.0));
  CHECK(entry(3, "nn") == doctest::Approx(40.0));
  CHECK(entry(3, "dobj") == doctest::Approx(20.0));
}

TEST_CASE("grandchild pair matrix counts entities, not chains") {
  auto corpus = load_corpus(std::string(DGNER_DATA_DIR) + "/toy.conll");
  CorrelationMatrix m = grandchild_pair_matrix(corpus);
  // Only types with at least one length >= 3 entity get a row.
  REQUIRE(m.row_labels == std::vector<std::string>{"GPE", "MISC", "ORG"});
  REQUIRE(m.col_labels == std::vector<std::string>{"pobj,det", "prep,pobj"});

  auto entry = [&](std::size_t r, std::size_t c) { return m.entries[r][c]; };
  // GPE's one long entity (New York City) is flat: no chains at all.
  CHECK(entry(0, 0) == doctest::Approx(0.0));
  CHECK(entry(0, 1) == doctest::Approx(0.0));
  // MISC: War of the Roses has both chain flavors.
  CHECK(entry(1, 0) == doctest::Approx(100.0));
  CHECK(entry(1, 1) == doctest::Approx(100.0));
  // ORG: Bank of England has prep->pobj; United Arab Emirates has none.
  CHECK(entry(2, 0) == doctest::Approx(0.0));
  CHECK(entry(2, 1) == doctest::Approx(50.0));
}

TEST_CASE("matrix rendering drops weak columns unless raw") {
  CorrelationMatrix m;
  m.row_labels = {"X", "Y"};
  m.col_labels = {"strong", "border", "weak"};
  m.entries = {{60.0, 5.0, 4.9}, {10.0, 2.0, 1.0}};

  std::ostringstream pretty;
  render_matrix(m, pretty);
  CHECK(pretty.str().find("strong") != std::string::npos);
  CHECK(pretty.str().find("border") != std::string::npos);  // max == 5.0 stays
  CHECK(pretty.str().find("weak") == std::string::npos);    // max 4.9 dropped
  CHECK(pretty.str().find("60.0") != std::string::npos);

  std::ostringstream raw;
  render_matrix_raw(m, raw);
  CHECK(raw.str().find("weak") != std::string::npos);
  CHECK(raw.str().find("4.9") != std::string::npos);
}

TEST_CASE("serial and parallel statistics agree exactly") {
  Rng rng(777);
  auto corpus = testutil::random_corpus(rng, 300, 15);

  for (auto kind : {Subtree::complete, Subtree::connected}) {
    DatasetStats a = dataset_stats(corpus, 2, kind);
    DatasetStats b = dataset_stats_serial(corpus, 2, kind);
    CHECK(a.sentence_count == b.sentence_count);
    CHECK(a.entity_count == b.entity_count);
    CHECK(a.counted_entities == b.counted_entities);
    CHECK(a.st_ratio == b.st_ratio);  // bitwise
    CHECK(a.gd_ratio == b.gd_ratio);
    CHECK(a.length_histogram == b.length_histogram);
  }

  CorrelationMatrix m1 = entity_relation_matrix(corpus);
  CorrelationMatrix m2 = entity_relation_matrix_serial(corpus);
  CHECK(m1.row_labels == m2.row_labels);
  CHECK(m1.col_labels == m2.col_labels);
  CHECK(m1.entries == m2.entries);  // bitwise

  CorrelationMatrix p1 = grandchild_pair_matrix(corpus);
  CorrelationMatrix p2 = grandchild_pair_matrix_serial(corpus);
  CHECK(p1.row_labels == p2.row_labels);
  CHECK(p1.col_labels == p2.col_labels);
  CHECK(p1.entries == p2.entries);
}
