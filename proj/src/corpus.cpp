#include "dgner/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include "dgner/errors.hpp"
#include "dgner/iobes.hpp"
#include "dgner/rng.hpp"

namespace dgner {

std::vector<std::string> Sentence::tags() const {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.tag);
  return out;
}

bool is_tree(const Sentence& s) {
  const int n = s.n();
  int root = -1;
  for (int i = 0; i < n; ++i) {
    const int h = s.tokens[i].head;
    if (h < 0 || h > n || h == i + 1) return false;
    if (h == 0) {
      if (root != -1) return false;
      root = i;
    }
  }
  if (root == -1) return false;
  // Walk up from every node; a cycle never reaches the root.
  for (int i = 0; i < n; ++i) {
    int cur = i, steps = 0;
    while (s.tokens[cur].head != 0) {
      cur = s.tokens[cur].head - 1;
      if (++steps > n) return false;
    }
  }
  return true;
}

namespace {

[[noreturn]] void fail(int line, const std::string& msg) {
  throw DataError("line " + std::to_string(line) + ": " + msg);
}

int parse_int(const std::string& s, int line, const std::string& what) {
  std::size_t pos = 0;
  int v = 0;
  try {
    v = std::stoi(s, &pos);
  } catch (const std::exception&) {
    fail(line, what + " is not an integer: '" + s + "'");
  }
  if (pos != s.size()) fail(line, what + " is not an integer: '" + s + "'");
  return v;
}

// Validates heads/tags of a finished block and appends the Sentence.
void finish_block(std::vector<Token>& tokens, std::vector<int>& token_lines,
                  int block_line, std::vector<Sentence>& out) {
  const int n = static_cast<int>(tokens.size());
  int root = -1;
  for (int i = 0; i < n; ++i) {
    const int h = tokens[i].head;
    if (h < 0 || h > n)
      fail(token_lines[i], "head " + std::to_string(h) +
                               " out of range for sentence of length " +
                               std::to_string(n));
    if (h == i + 1) fail(token_lines[i], "token is its own head");
    if (h == 0) {
      if (root != -1)
        fail(token_lines[i], "second root in sentence (first at line " +
                                 std::to_string(token_lines[root]) + ")");
      root = i;
    }
  }
  if (root == -1) fail(block_line, "sentence has no root token");
  for (int i = 0; i < n; ++i) {
    int cur = i, steps = 0;
    while (tokens[cur].head != 0) {
      cur = tokens[cur].head - 1;
      if (++steps > n) fail(token_lines[i], "cycle in head links");
    }
  }

  std::vector<std::string> tags;
  tags.reserve(tokens.size());
  for (const Token& t : tokens) tags.push_back(t.tag);
  if (!is_valid_iobes(tags)) {
    if (is_valid_iob2(tags)) {
      tags = iob2_to_iobes(tags);
      for (int i = 0; i < n; ++i) tokens[i].tag = tags[i];
    } else {
      const int bad = first_iobes_violation(tags);
      fail(token_lines[bad], "invalid tag sequence at '" + tags[bad] + "'");
    }
  }

  out.push_back(Sentence{std::move(tokens)});
  tokens.clear();
  token_lines.clear();
}

}  // namespace

std::vector<Sentence> parse_corpus(std::istream& in) {
  std::vector<Sentence> out;
  std::vector<Token> tokens;
  std::vector<int> token_lines;
  int line_no = 0;
  int block_line = 0;  // line of the current block's first token
  std::string line;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (!line.empty() && line[0] == '#') continue;
    if (line.empty()) {
      if (!tokens.empty()) finish_block(tokens, token_lines, block_line, out);
      continue;
    }

    std::vector<std::string> fields;
    std::size_t start = 0;
    while (true) {
      const std::size_t tab = line.find('\t', start);
      fields.push_back(line.substr(start, tab - start));
      if (tab == std::string::npos) break;
      start = tab + 1;
    }
    if (fields.size() != 5 && fields.size() != 6)
      fail(line_no, "expected 5 TAB-separated fields, got " +
                        std::to_string(fields.size()));

    if (tokens.empty()) block_line = line_no;
    const int index = parse_int(fields[0], line_no, "token index");
    if (index != static_cast<int>(tokens.size()) + 1)
      fail(line_no, "token index " + std::to_string(index) +
                        " out of sequence (expected " +
                        std::to_string(tokens.size() + 1) + ")");
    Token t;
    t.form = fields[1];
    t.head = parse_int(fields[2], line_no, "head");
    t.relation = fields[3];
    t.tag = fields[4];
    if (t.form.empty()) fail(line_no, "empty FORM field");
    if (t.relation.empty()) fail(line_no, "empty DEPREL field");
    if (t.tag.empty()) fail(line_no, "empty NERTAG field");
    tokens.push_back(std::move(t));
    token_lines.push_back(line_no);
  }
  if (!tokens.empty()) finish_block(tokens, token_lines, block_line, out);
  return out;
}

std::vector<Sentence> load_corpus(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open corpus file: " + path);
  try {
    return parse_corpus(in);
  } catch (const DataError& e) {
    throw DataError(path + ": " + e.what());
  }
}

void serialize_corpus(const std::vector<Sentence>& corpus, std::ostream& out) {
  for (const Sentence& s : corpus) {
    for (int i = 0; i < s.n(); ++i) {
      const Token& t = s.tokens[i];
      out << (i + 1) << '\t' << t.form << '\t' << t.head << '\t' << t.relation
          << '\t' << t.tag << '\n';
    }
    out << '\n';
  }
}

void save_corpus(const std::vector<Sentence>& corpus, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw DataError("cannot write corpus file: " + path);
  serialize_corpus(corpus, out);
}

void serialize_with_extra(const std::vector<Sentence>& corpus,
                          const std::vector<std::vector<std::string>>& extra,
                          std::ostream& out) {
  if (extra.size() != corpus.size())
    throw DataError("extra-column block count does not match corpus");
  for (std::size_t k = 0; k < corpus.size(); ++k) {
    const Sentence& s = corpus[k];
    if (extra[k].size() != s.tokens.size())
      throw DataError("extra-column length mismatch in sentence " +
                      std::to_string(k + 1));
    for (int i = 0; i < s.n(); ++i) {
      const Token& t = s.tokens[i];
      out << (i + 1) << '\t' << t.form << '\t' << t.head << '\t' << t.relation
          << '\t' << t.tag << '\t' << extra[k][i] << '\n';
    }
    out << '\n';
  }
}

std::vector<Sentence> subsample(const std::vector<Sentence>& corpus,
                                std::size_t n, std::uint64_t seed) {
  if (n > corpus.size())
    throw DataError("subsample size " + std::to_string(n) +
                    " exceeds corpus size " + std::to_string(corpus.size()));
  std::vector<std::size_t> ids(corpus.size());
  std::iota(ids.begin(), ids.end(), 0);
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = i + rng.below(ids.size() - i);
    std::swap(ids[i], ids[j]);
  }
  ids.resize(n);
  std::sort(ids.begin(), ids.end());
  std::vector<Sentence> out;
  out.reserve(n);
  for (std::size_t id : ids) out.push_back(corpus[id]);
  return out;
}

}  // namespace dgner
