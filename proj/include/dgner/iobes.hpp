#pragma once

#include <string>
#include <vector>

namespace dgner {

// Entity span over 1-based token positions, inclusive on both ends.
struct Span {
  int start = 0;
  int end = 0;
  std::string type;

  friend bool operator==(const Span& a, const Span& b) {
    return a.start == b.start && a.end == b.end && a.type == b.type;
  }
  friend bool operator<(const Span& a, const Span& b) {
    if (a.start != b.start) return a.start < b.start;
    if (a.end != b.end) return a.end < b.end;
    return a.type < b.type;
  }
};

// True for O / B-X / I-X / E-X / S-X with a non-empty type.
bool is_valid_tag(const std::string& tag);

// Checks IOBES chain rules over the whole sequence; returns the 0-based index
// of the first offending tag, or -1 if valid.
int first_iobes_violation(const std::vector<std::string>& tags);

bool is_valid_iobes(const std::vector<std::string>& tags);

// True when tags use only O/B-/I- and obey IOB2 chaining.
bool is_valid_iob2(const std::vector<std::string>& tags);

// IOB2 -> IOBES: trailing B becomes S, chain-final I becomes E.
std::vector<std::string> iob2_to_iobes(const std::vector<std::string>& tags);

// Spans -> IOBES tags over n positions. Spans must be in range and
// non-overlapping (invalid input throws).
std::vector<std::string> to_iobes(std::vector<Span> spans, int n);

// Strict inverse of to_iobes; malformed sequences throw with the position.
std::vector<Span> from_iobes(const std::vector<std::string>& tags);

// Span extraction for model output, which need not be well-formed: stray I
// opens a new span, stray E acts as S, and an unterminated chain is closed at
// its last position. On well-formed input this equals from_iobes.
std::vector<Span> extract_spans_repair(const std::vector<std::string>& tags);

}  // namespace dgner
