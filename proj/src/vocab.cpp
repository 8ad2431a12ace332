#include "dgner/vocab.hpp"

#include <algorithm>
#include <cctype>

#include "dgner/errors.hpp"
#include "dgner/iobes.hpp"

namespace dgner {

std::vector<std::uint32_t> utf8_codepoints(const std::string& s) {
  std::vector<std::uint32_t> out;
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char b = s[i];
    int len = 0;
    std::uint32_t cp = 0;
    if (b < 0x80) {
      len = 1;
      cp = b;
    } else if ((b & 0xE0) == 0xC0) {
      len = 2;
      cp = b & 0x1F;
    } else if ((b & 0xF0) == 0xE0) {
      len = 3;
      cp = b & 0x0F;
    } else if ((b & 0xF8) == 0xF0) {
      len = 4;
      cp = b & 0x07;
    } else {
      out.push_back(b);  // stray continuation/invalid byte
      ++i;
      continue;
    }
    if (i + len > s.size()) {
      out.push_back(b);
      ++i;
      continue;
    }
    bool ok = true;
    for (int k = 1; k < len; ++k) {
      const unsigned char c = s[i + k];
      if ((c & 0xC0) != 0x80) {
        ok = false;
        break;
      }
      cp = (cp << 6) | (c & 0x3F);
    }
    if (!ok) {
      out.push_back(b);
      ++i;
      continue;
    }
    out.push_back(cp);
    i += len;
  }
  return out;
}

namespace {
std::string ascii_lower(const std::string& s) {
  std::string out = s;
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return std::tolower(c); });
  return out;
}
}  // namespace

int Vocabulary::word_id(const std::string& form) const {
  auto it = word_ids_.find(form);
  if (it != word_ids_.end()) return it->second;
  it = word_ids_.find(ascii_lower(form));
  if (it != word_ids_.end()) return it->second;
  return kUnkWord;
}

int Vocabulary::char_id(std::uint32_t cp) const {
  auto it = char_ids_.find(cp);
  return it == char_ids_.end() ? kUnkChar : it->second;
}

std::vector<int> Vocabulary::char_ids(const std::string& form) const {
  std::vector<int> out;
  for (std::uint32_t cp : utf8_codepoints(form)) out.push_back(char_id(cp));
  return out;
}

int Vocabulary::rel_id(const std::string& relation) const {
  auto it = rel_ids_.find(relation);
  return it == rel_ids_.end() ? kRootRel : it->second;
}

int Vocabulary::label_id(const std::string& tag) const {
  auto it = label_ids_.find(tag);
  if (it == label_ids_.end())
    throw DataError("tag '" + tag + "' not in the model's label set");
  return it->second;
}

bool Vocabulary::has_label(const std::string& tag) const {
  return label_ids_.count(tag) != 0;
}

int Vocabulary::add_word(const std::string& form) {
  auto it = word_ids_.find(form);
  if (it != word_ids_.end()) return it->second;
  const int id = static_cast<int>(words_.size());
  words_.push_back(form);
  word_ids_.emplace(form, id);
  return id;
}

int Vocabulary::add_char(std::uint32_t cp) {
  auto it = char_ids_.find(cp);
  if (it != char_ids_.end()) return it->second;
  const int id = static_cast<int>(chars_.size());
  chars_.push_back(cp);
  char_ids_.emplace(cp, id);
  return id;
}

int Vocabulary::add_relation(const std::string& relation) {
  auto it = rel_ids_.find(relation);
  if (it != rel_ids_.end()) return it->second;
  const int id = static_cast<int>(relations_.size());
  relations_.push_back(relation);
  rel_ids_.emplace(relation, id);
  return id;
}

int Vocabulary::add_label(const std::string& tag) {
  auto it = label_ids_.find(tag);
  if (it != label_ids_.end()) return it->second;
  const int id = static_cast<int>(labels_.size());
  labels_.push_back(tag);
  label_ids_.emplace(tag, id);
  return id;
}

Vocabulary make_empty_vocab() {
  Vocabulary v;
  v.add_word("<unk>");
  v.add_word("<pad>");
  v.add_char(0xFFFD);
  v.add_relation("<root>");
  return v;
}

Vocabulary build_vocab(const std::vector<Sentence>& sentences,
                       bool scheme_closure) {
  Vocabulary v = make_empty_vocab();
  for (const Sentence& s : sentences) {
    for (const Token& t : s.tokens) {
      v.add_word(t.form);
      for (std::uint32_t cp : utf8_codepoints(t.form)) v.add_char(cp);
      v.add_relation(t.relation);
      v.add_label(t.tag);
    }
  }
  if (scheme_closure) {
    std::vector<std::string> types;
    for (const std::string& tag : v.labels_)
      if (tag.size() >= 3 && tag[1] == '-') {
        const std::string type = tag.substr(2);
        if (std::find(types.begin(), types.end(), type) == types.end())
          types.push_back(type);
      }
    v.add_label("O");
    for (const std::string& type : types)
      for (const char* prefix : {"B-", "I-", "E-", "S-"})
        v.add_label(prefix + type);
  }
  return v;
}

}  // namespace dgner
