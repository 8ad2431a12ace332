#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include "dgner/corpus.hpp"
#include "dgner/iobes.hpp"

namespace dgner {

// Two notions of "the entity is a subtree":
//   complete  — the span has a single head token whose descendant closure
//               equals the span exactly;
//   connected — single head token, every other span token attaches inside
//               the span; outside tokens may still hang below span tokens.
enum class Subtree { complete, connected };

bool entity_is_subtree(const Sentence& s, const Span& span, Subtree kind);

// True iff some two-edge chain a -> b -> c lies entirely inside the span.
bool entity_has_grandchild_dep(const Sentence& s, const Span& span);

struct DatasetStats {
  std::size_t sentence_count = 0;
  std::size_t entity_count = 0;
  std::size_t counted_entities = 0;  // entities with length >= min_entity_len
  double st_ratio = 0.0;             // percent of counted entities
  double gd_ratio = 0.0;
  bool empty_selection = false;      // no entity met the length cutoff
  std::map<int, std::size_t> length_histogram;
};

DatasetStats dataset_stats(const std::vector<Sentence>& corpus,
                           int min_entity_len = 3,
                           Subtree kind = Subtree::complete);
DatasetStats dataset_stats_serial(const std::vector<Sentence>& corpus,
                                  int min_entity_len = 3,
                                  Subtree kind = Subtree::complete);

// Percentage matrix with labeled rows (entity types) and columns.
struct CorrelationMatrix {
  std::vector<std::string> row_labels;
  std::vector<std::string> col_labels;
  std::vector<std::vector<double>> entries;  // [row][col], percent
};

// entry[type][relation] = share of that type's entity words whose incoming
// dependency carries the relation. Raw rows sum to 100.
CorrelationMatrix entity_relation_matrix(const std::vector<Sentence>& corpus);
CorrelationMatrix entity_relation_matrix_serial(
    const std::vector<Sentence>& corpus);

// entry[type]["upper,lower"] = share of that type's entities (length >= 3)
// containing an in-span chain a -> b -> c with relation(b)=upper,
// relation(c)=lower. Each entity counts once per pair.
CorrelationMatrix grandchild_pair_matrix(const std::vector<Sentence>& corpus);
CorrelationMatrix grandchild_pair_matrix_serial(
    const std::vector<Sentence>& corpus);

// One decimal place; columns whose best entry is below drop_below are
// omitted. Pass 0 to keep everything.
void render_matrix(const CorrelationMatrix& m, std::ostream& out,
                   double drop_below = 5.0);
// Full precision, all columns.
void render_matrix_raw(const CorrelationMatrix& m, std::ostream& out);

// Reattaches heads so every entity span becomes a connected subtree. Spans
// that already are one pass through untouched; for the rest, one anchor
// token keeps its head while the remaining span tokens and any outside
// token that hung below the span move under the anchor. The anchor is the
// root token when the span holds the root, otherwise the rightmost span
// token with no ancestor inside the span (a token whose head merely lies
// outside can still be a descendant of another span token through an
// outside detour, and anchoring such a token would create a cycle).
std::vector<Sentence> repair_trees(const std::vector<Sentence>& corpus);
std::vector<Sentence> repair_trees_serial(const std::vector<Sentence>& corpus);

}  // namespace dgner
