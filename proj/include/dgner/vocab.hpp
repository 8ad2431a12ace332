#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <vector>

#include "dgner/corpus.hpp"

namespace dgner {

// Decodes UTF-8 into codepoints; each invalid byte comes through as its own
// codepoint so no input can fail.
std::vector<std::uint32_t> utf8_codepoints(const std::string& s);

// Id spaces for words, characters, relations and labels. Word/char lookups
// are total (miss -> UNK); relation misses map to the synthetic root
// relation; the label set is closed once built.
class Vocabulary {
 public:
  static constexpr int kUnkWord = 0;
  static constexpr int kPadWord = 1;
  static constexpr int kUnkChar = 0;
  static constexpr int kRootRel = 0;

  // Word lookup is case-sensitive with a lowercase retry on miss.
  int word_id(const std::string& form) const;
  int char_id(std::uint32_t cp) const;
  std::vector<int> char_ids(const std::string& form) const;
  int rel_id(const std::string& relation) const;
  int label_id(const std::string& tag) const;  // unknown tag -> data error
  bool has_label(const std::string& tag) const;

  const std::string& word(int id) const { return words_.at(id); }
  std::uint32_t char_cp(int id) const { return chars_.at(id); }
  const std::string& relation(int id) const { return relations_.at(id); }
  const std::string& label(int id) const { return labels_.at(id); }

  int num_words() const { return static_cast<int>(words_.size()); }
  int num_chars() const { return static_cast<int>(chars_.size()); }
  int num_relations() const { return static_cast<int>(relations_.size()); }
  int num_labels() const { return static_cast<int>(labels_.size()); }
  const std::vector<std::string>& labels() const { return labels_; }

  int add_word(const std::string& form);
  int add_char(std::uint32_t cp);
  int add_relation(const std::string& relation);
  int add_label(const std::string& tag);

 private:
  friend Vocabulary build_vocab(const std::vector<Sentence>&, bool);
  friend Vocabulary make_empty_vocab();

  std::vector<std::string> words_;
  std::vector<std::uint32_t> chars_;
  std::vector<std::string> relations_;
  std::vector<std::string> labels_;
  std::unordered_map<std::string, int> word_ids_;
  std::unordered_map<std::uint32_t, int> char_ids_;
  std::unordered_map<std::string, int> rel_ids_;
  std::unordered_map<std::string, int> label_ids_;
};

// Ids assigned in first-seen order over the given sentences (callers pass
// train+dev+test together so every split is in vocabulary). When
// scheme_closure is set, O and the full B/I/E/S family of every seen entity
// type are added so a transition mask can be built over the label set.
Vocabulary build_vocab(const std::vector<Sentence>& sentences,
                       bool scheme_closure = false);

// Only the special entries; used when deserializing a checkpoint.
Vocabulary make_empty_vocab();

}  // namespace dgner
