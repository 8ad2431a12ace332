#include "dgner/iobes.hpp"

#include <algorithm>

#include "dgner/errors.hpp"

namespace dgner {

namespace {

struct TagParts {
  char prefix = 0;   // one of O B I E S, 0 if malformed
  std::string type;  // empty for O
};

TagParts parse_tag(const std::string& tag) {
  if (tag == "O") return {'O', ""};
  if (tag.size() >= 3 && tag[1] == '-' &&
      (tag[0] == 'B' || tag[0] == 'I' || tag[0] == 'E' || tag[0] == 'S'))
    return {tag[0], tag.substr(2)};
  return {0, ""};
}

}  // namespace

bool is_valid_tag(const std::string& tag) { return parse_tag(tag).prefix != 0; }

int first_iobes_violation(const std::vector<std::string>& tags) {
  bool open = false;
  std::string open_type;
  for (std::size_t i = 0; i < tags.size(); ++i) {
    const TagParts p = parse_tag(tags[i]);
    if (p.prefix == 0) return static_cast<int>(i);
    switch (p.prefix) {
      case 'O':
      case 'S':
        if (open) return static_cast<int>(i);
        if (p.prefix == 'S') break;
        break;
      case 'B':
        if (open) return static_cast<int>(i);
        open = true;
        open_type = p.type;
        break;
      case 'I':
        if (!open || open_type != p.type) return static_cast<int>(i);
        break;
      case 'E':
        if (!open || open_type != p.type) return static_cast<int>(i);
        open = false;
        break;
    }
  }
  if (open) return static_cast<int>(tags.size()) - 1;
  return -1;
}

bool is_valid_iobes(const std::vector<std::string>& tags) {
  return first_iobes_violation(tags) == -1;
}

bool is_valid_iob2(const std::vector<std::string>& tags) {
  std::string prev_chain;  // type of a B/I run still extendable, else empty
  for (const auto& tag : tags) {
    const TagParts p = parse_tag(tag);
    if (p.prefix == 'O') {
      prev_chain.clear();
    } else if (p.prefix == 'B') {
      prev_chain = p.type;
    } else if (p.prefix == 'I') {
      if (prev_chain != p.type) return false;
    } else {
      return false;  // E/S/malformed are not IOB2
    }
  }
  return true;
}

std::vector<std::string> iob2_to_iobes(const std::vector<std::string>& tags) {
  const std::size_t n = tags.size();
  std::vector<std::string> out(n);
  for (std::size_t i = 0; i < n; ++i) {
    const TagParts p = parse_tag(tags[i]);
    const bool continued =
        i + 1 < n && tags[i + 1] == "I-" + p.type;
    if (p.prefix == 'B')
      out[i] = (continued ? "B-" : "S-") + p.type;
    else if (p.prefix == 'I')
      out[i] = (continued ? "I-" : "E-") + p.type;
    else
      out[i] = tags[i];
  }
  return out;
}

std::vector<std::string> to_iobes(std::vector<Span> spans, int n) {
  std::sort(spans.begin(), spans.end());
  for (std::size_t k = 0; k < spans.size(); ++k) {
    const Span& s = spans[k];
    if (s.start < 1 || s.end > n || s.start > s.end || s.type.empty())
      throw DataError("span (" + std::to_string(s.start) + "," +
                      std::to_string(s.end) + ") out of range for length " +
                      std::to_string(n));
    if (k > 0 && spans[k - 1].end >= s.start)
      throw DataError("overlapping spans at position " + std::to_string(s.start));
  }
  std::vector<std::string> tags(n, "O");
  for (const Span& s : spans) {
    if (s.start == s.end) {
      tags[s.start - 1] = "S-" + s.type;
    } else {
      tags[s.start - 1] = "B-" + s.type;
      for (int i = s.start; i < s.end - 1; ++i) tags[i] = "I-" + s.type;
      tags[s.end - 1] = "E-" + s.type;
    }
  }
  return tags;
}

std::vector<Span> from_iobes(const std::vector<std::string>& tags) {
  const int bad = first_iobes_violation(tags);
  if (bad >= 0)
    throw DataError("malformed IOBES sequence at position " +
                    std::to_string(bad + 1) + ": '" + tags[bad] + "'");
  return extract_spans_repair(tags);
}

std::vector<Span> extract_spans_repair(const std::vector<std::string>& tags) {
  std::vector<Span> spans;
  int open_start = -1;  // 0-based, -1 when no chain open
  std::string open_type;
  auto close_at = [&](int last) {
    spans.push_back({open_start + 1, last + 1, open_type});
    open_start = -1;
  };
  for (int i = 0; i < static_cast<int>(tags.size()); ++i) {
    const TagParts p = parse_tag(tags[i]);
    switch (p.prefix) {
      case 'O':
        if (open_start >= 0) close_at(i - 1);
        break;
      case 'S':
        if (open_start >= 0) close_at(i - 1);
        spans.push_back({i + 1, i + 1, p.type});
        break;
      case 'B':
        if (open_start >= 0) close_at(i - 1);
        open_start = i;
        open_type = p.type;
        break;
      case 'I':
        if (open_start >= 0 && open_type == p.type) break;
        if (open_start >= 0) close_at(i - 1);
        open_start = i;
        open_type = p.type;
        break;
      case 'E':
        if (open_start >= 0 && open_type == p.type) {
          close_at(i);
        } else {
          if (open_start >= 0) close_at(i - 1);
          spans.push_back({i + 1, i + 1, p.type});
        }
        break;
      default:
        throw DataError("unrecognized tag '" + tags[i] + "' at position " +
                        std::to_string(i + 1));
    }
  }
  if (open_start >= 0) close_at(static_cast<int>(tags.size()) - 1);
  return spans;
}

}  // namespace dgner
