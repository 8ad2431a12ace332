#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

namespace dgner {

struct Token {
  std::string form;
  int head = 0;          // 0 = root, else 1-based index of the parent token
  std::string relation;  // dependency label of the incoming edge
  std::string tag;       // IOBES NER tag

  friend bool operator==(const Token& a, const Token& b) {
    return a.form == b.form && a.head == b.head && a.relation == b.relation &&
           a.tag == b.tag;
  }
};

struct Sentence {
  std::vector<Token> tokens;

  int n() const { return static_cast<int>(tokens.size()); }
  std::vector<std::string> tags() const;

  friend bool operator==(const Sentence& a, const Sentence& b) {
    return a.tokens == b.tokens;
  }
};

// True when head links form a single-rooted acyclic tree.
bool is_tree(const Sentence& s);

// Layout: one token per line, TAB-separated INDEX FORM HEAD DEPREL NERTAG,
// blank line after each sentence, '#' lines ignored. A sixth column (as
// written by prediction output) is tolerated and dropped. IOB2 tag sequences
// are converted to IOBES on the way in. Errors carry 1-based line numbers.
std::vector<Sentence> parse_corpus(std::istream& in);
std::vector<Sentence> load_corpus(const std::string& path);

// Canonical five-column form; parse_corpus inverts it exactly.
void serialize_corpus(const std::vector<Sentence>& corpus, std::ostream& out);
void save_corpus(const std::vector<Sentence>& corpus, const std::string& path);

// As serialize_corpus but with `extra[i]` appended as a sixth column.
void serialize_with_extra(const std::vector<Sentence>& corpus,
                          const std::vector<std::vector<std::string>>& extra,
                          std::ostream& out);

// Uniform sample of n sentences without replacement; corpus order is kept
// among the selected. Deterministic under seed.
std::vector<Sentence> subsample(const std::vector<Sentence>& corpus,
                                std::size_t n, std::uint64_t seed);

}  // namespace dgner
