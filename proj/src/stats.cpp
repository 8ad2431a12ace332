#include "dgner/stats.hpp"

#include <algorithm>
#include <cstdio>
#include <limits>
#include <ostream>
#include <set>
#include <stdexcept>

namespace dgner {

namespace {

bool in_span(const Span& span, int idx0) {
  return idx0 >= span.start - 1 && idx0 <= span.end - 1;
}

std::vector<std::vector<int>> children_lists(const Sentence& s) {
  std::vector<std::vector<int>> children(s.n());
  for (int i = 0; i < s.n(); ++i) {
    const int h = s.tokens[i].head;
    if (h != 0) children[h - 1].push_back(i);
  }
  return children;
}

}  // namespace

bool entity_is_subtree(const Sentence& s, const Span& span, Subtree kind) {
  int head_token = -1;
  for (int i = span.start - 1; i <= span.end - 1; ++i) {
    const int h = s.tokens[i].head;
    const bool attaches_inside = h != 0 && in_span(span, h - 1);
    if (!attaches_inside) {
      if (head_token != -1) return false;
      head_token = i;
    }
  }
  if (head_token == -1) return false;  // unreachable on valid trees
  if (kind == Subtree::connected) return true;

  const auto children = children_lists(s);
  std::vector<int> stack{head_token};
  std::size_t closure_size = 0;
  while (!stack.empty()) {
    const int u = stack.back();
    stack.pop_back();
    if (!in_span(span, u)) return false;  // closure escapes the span
    ++closure_size;
    for (int c : children[u]) stack.push_back(c);
  }
  return closure_size == static_cast<std::size_t>(span.end - span.start + 1);
}

bool entity_has_grandchild_dep(const Sentence& s, const Span& span) {
  for (int c = span.start - 1; c <= span.end - 1; ++c) {
    const int hb = s.tokens[c].head;
    if (hb == 0 || !in_span(span, hb - 1)) continue;
    const int ha = s.tokens[hb - 1].head;
    if (ha != 0 && in_span(span, ha - 1)) return true;
  }
  return false;
}

// ---------------------------------------------------------------------------
// Corpus-level counting: one partial per sentence, merged in corpus order so
// serial and parallel runs agree exactly.

namespace {

struct StatsPartial {
  std::size_t entities = 0;
  std::size_t counted = 0;
  std::size_t st = 0;
  std::size_t gd = 0;
  std::map<int, std::size_t> hist;
};

StatsPartial stats_partial(const Sentence& s, int min_entity_len,
                           Subtree kind) {
  StatsPartial p;
  for (const Span& span : from_iobes(s.tags())) {
    ++p.entities;
    const int len = span.end - span.start + 1;
    ++p.hist[len];
    if (len < min_entity_len) continue;
    ++p.counted;
    if (entity_is_subtree(s, span, kind)) ++p.st;
    if (entity_has_grandchild_dep(s, span)) ++p.gd;
  }
  return p;
}

DatasetStats merge_stats(const std::vector<StatsPartial>& parts) {
  DatasetStats out;
  out.sentence_count = parts.size();
  std::size_t st = 0, gd = 0;
  for (const StatsPartial& p : parts) {
    out.entity_count += p.entities;
    out.counted_entities += p.counted;
    st += p.st;
    gd += p.gd;
    for (const auto& [len, n] : p.hist) out.length_histogram[len] += n;
  }
  if (out.counted_entities == 0) {
    out.empty_selection = true;
  } else {
    out.st_ratio = 100.0 * static_cast<double>(st) / out.counted_entities;
    out.gd_ratio = 100.0 * static_cast<double>(gd) / out.counted_entities;
  }
  return out;
}

using TypeCounts = std::map<std::string, std::map<std::string, std::size_t>>;

CorrelationMatrix matrix_from_counts(const TypeCounts& counts,
                                     const std::map<std::string, std::size_t>& denoms) {
  CorrelationMatrix m;
  std::set<std::string> cols;
  for (const auto& [type, row] : counts)
    for (const auto& [col, n] : row) cols.insert(col);
  m.col_labels.assign(cols.begin(), cols.end());
  for (const auto& [type, denom] : denoms) {
    if (denom == 0) continue;
    m.row_labels.push_back(type);
    std::vector<double> row(m.col_labels.size(), 0.0);
    auto it = counts.find(type);
    if (it != counts.end())
      for (std::size_t j = 0; j < m.col_labels.size(); ++j) {
        auto cit = it->second.find(m.col_labels[j]);
        if (cit != it->second.end())
          row[j] = 100.0 * static_cast<double>(cit->second) / denom;
      }
    m.entries.push_back(std::move(row));
  }
  return m;
}

struct MatrixPartial {
  TypeCounts counts;
  std::map<std::string, std::size_t> denoms;
};

// Every word of an entity contributes its incoming relation.
MatrixPartial relation_partial(const Sentence& s) {
  MatrixPartial p;
  for (const Span& span : from_iobes(s.tags()))
    for (int i = span.start - 1; i <= span.end - 1; ++i) {
      ++p.counts[span.type][s.tokens[i].relation];
      ++p.denoms[span.type];
    }
  return p;
}

// Each entity of length >= 3 contributes its set of in-span relation pairs.
MatrixPartial pair_partial(const Sentence& s) {
  MatrixPartial p;
  for (const Span& span : from_iobes(s.tags())) {
    if (span.end - span.start + 1 < 3) continue;
    ++p.denoms[span.type];
    std::set<std::string> pairs;
    for (int c = span.start - 1; c <= span.end - 1; ++c) {
      const int hb = s.tokens[c].head;
      if (hb == 0 || !in_span(span, hb - 1)) continue;
      const int ha = s.tokens[hb - 1].head;
      if (ha != 0 && in_span(span, ha - 1))
        pairs.insert(s.tokens[hb - 1].relation + "," + s.tokens[c].relation);
    }
    for (const std::string& pr : pairs) ++p.counts[span.type][pr];
  }
  return p;
}

void merge_matrix_partials(const std::vector<MatrixPartial>& parts,
                           MatrixPartial& total) {
  for (const MatrixPartial& p : parts) {
    for (const auto& [type, row] : p.counts)
      for (const auto& [col, n] : row) total.counts[type][col] += n;
    for (const auto& [type, n] : p.denoms) total.denoms[type] += n;
  }
}

template <typename PerSentence>
auto map_sentences_parallel(const std::vector<Sentence>& corpus,
                            PerSentence fn) {
  using R = decltype(fn(corpus[0]));
  std::vector<R> parts(corpus.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
  for (std::int64_t i = 0; i < static_cast<std::int64_t>(corpus.size()); ++i)
    parts[i] = fn(corpus[i]);
  return parts;
}

template <typename PerSentence>
auto map_sentences_serial(const std::vector<Sentence>& corpus, PerSentence fn) {
  using R = decltype(fn(corpus[0]));
  std::vector<R> parts(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) parts[i] = fn(corpus[i]);
  return parts;
}

}  // namespace

DatasetStats dataset_stats(const std::vector<Sentence>& corpus,
                           int min_entity_len, Subtree kind) {
  return merge_stats(map_sentences_parallel(corpus, [&](const Sentence& s) {
    return stats_partial(s, min_entity_len, kind);
  }));
}

DatasetStats dataset_stats_serial(const std::vector<Sentence>& corpus,
                                  int min_entity_len, Subtree kind) {
  return merge_stats(map_sentences_serial(corpus, [&](const Sentence& s) {
    return stats_partial(s, min_entity_len, kind);
  }));
}

CorrelationMatrix entity_relation_matrix(const std::vector<Sentence>& corpus) {
  MatrixPartial total;
  merge_matrix_partials(map_sentences_parallel(corpus, relation_partial), total);
  return matrix_from_counts(total.counts, total.denoms);
}

CorrelationMatrix entity_relation_matrix_serial(
    const std::vector<Sentence>& corpus) {
  MatrixPartial total;
  merge_matrix_partials(map_sentences_serial(corpus, relation_partial), total);
  return matrix_from_counts(total.counts, total.denoms);
}

CorrelationMatrix grandchild_pair_matrix(const std::vector<Sentence>& corpus) {
  MatrixPartial total;
  merge_matrix_partials(map_sentences_parallel(corpus, pair_partial), total);
  return matrix_from_counts(total.counts, total.denoms);
}

CorrelationMatrix grandchild_pair_matrix_serial(
    const std::vector<Sentence>& corpus) {
  MatrixPartial total;
  merge_matrix_partials(map_sentences_serial(corpus, pair_partial), total);
  return matrix_from_counts(total.counts, total.denoms);
}

void render_matrix(const CorrelationMatrix& m, std::ostream& out,
                   double drop_below) {
  std::vector<std::size_t> keep;
  for (std::size_t j = 0; j < m.col_labels.size(); ++j) {
    double best = 0.0;
    for (const auto& row : m.entries) best = std::max(best, row[j]);
    if (best >= drop_below) keep.push_back(j);
  }
  out << "type";
  for (std::size_t j : keep) out << '\t' << m.col_labels[j];
  out << '\n';
  char buf[32];
  for (std::size_t i = 0; i < m.row_labels.size(); ++i) {
    out << m.row_labels[i];
    for (std::size_t j : keep) {
      std::snprintf(buf, sizeof buf, "%.1f", m.entries[i][j]);
      out << '\t' << buf;
    }
    out << '\n';
  }
}

void render_matrix_raw(const CorrelationMatrix& m, std::ostream& out) {
  const auto old_precision =
      out.precision(std::numeric_limits<double>::max_digits10);
  out << "type";
  for (const std::string& c : m.col_labels) out << '\t' << c;
  out << '\n';
  for (std::size_t i = 0; i < m.row_labels.size(); ++i) {
    out << m.row_labels[i];
    for (double v : m.entries[i]) out << '\t' << v;
    out << '\n';
  }
  out.precision(old_precision);
}

// ---------------------------------------------------------------------------
// Subtree repair

namespace {

Sentence repair_sentence(const Sentence& in) {
  Sentence s = in;
  for (const Span& span : from_iobes(s.tags())) {
    // Leave entities that already form a connected subtree untouched; only
    // fragmented ones get their heads rewritten.
    if (entity_is_subtree(s, span, Subtree::connected)) continue;
    // A span token has a "span ancestor" if walking its head chain meets a
    // span token before the root; such tokens cannot anchor the subtree.
    int anchor = -1;
    for (int i = span.start - 1; i <= span.end - 1; ++i)
      if (s.tokens[i].head == 0) anchor = i;
    if (anchor == -1) {
      for (int i = span.end - 1; i >= span.start - 1; --i) {
        bool span_ancestor = false;
        int cur = s.tokens[i].head;
        int steps = 0;
        while (cur != 0) {
          if (in_span(span, cur - 1)) {
            span_ancestor = true;
            break;
          }
          cur = s.tokens[cur - 1].head;
          if (++steps > s.n())
            throw std::logic_error("cycle while searching for span anchor");
        }
        if (!span_ancestor) {
          anchor = i;
          break;
        }
      }
    }
    if (anchor == -1)
      throw std::logic_error("entity span with no anchor candidate");
    for (int i = 0; i < s.n(); ++i) {
      if (i == anchor) continue;
      const int h = s.tokens[i].head;
      if (in_span(span, i)) {
        s.tokens[i].head = anchor + 1;
      } else if (h != 0 && in_span(span, h - 1) && h - 1 != anchor) {
        s.tokens[i].head = anchor + 1;
      }
    }
  }
  if (!is_tree(s)) throw std::logic_error("tree repair produced a non-tree");
  return s;
}

}  // namespace

std::vector<Sentence> repair_trees(const std::vector<Sentence>& corpus) {
  return map_sentences_parallel(corpus, repair_sentence);
}

std::vector<Sentence> repair_trees_serial(const std::vector<Sentence>& corpus) {
  return map_sentences_serial(corpus, repair_sentence);
}

}  // namespace dgner
