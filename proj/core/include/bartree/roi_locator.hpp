#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bartree/html_lexer.hpp"

namespace bartree {

// Entity-decode, collapse whitespace runs to one space, trim.
std::string normalize_text(std::string_view raw);

struct RoiAttribute {
  std::string label;
  std::string text;  // normalized

  friend bool operator==(const RoiAttribute&, const RoiAttribute&) = default;
};

// The human-supplied display text of the region of interest, plus ordered
// attribute labels. Construct through make(), which normalizes and checks:
// non-empty RoI text, unique labels, every attribute text inside the RoI.
struct RoiSpec {
  std::string roi_text;
  std::vector<RoiAttribute> attributes;
  // Zero-based occurrence to pick when the RoI text repeats on the page.
  std::optional<std::size_t> occurrence;

  static RoiSpec make(std::string_view roi_text,
                      std::vector<RoiAttribute> attributes = {},
                      std::optional<std::size_t> occurrence = std::nullopt);

  friend bool operator==(const RoiSpec&, const RoiSpec&) = default;
};

struct RoiSpan {
  std::size_t begin = 0;  // source byte offsets
  std::size_t end = 0;
  std::string matched_text;

  Span span() const noexcept { return {begin, end}; }
  friend bool operator==(const RoiSpan&, const RoiSpan&) = default;
};

// Rendered-text view of a tag stream: text runs concatenated in order, a
// space inserted where a non-text-format tag separates two runs, then
// normalized. Every byte keeps the source range it came from.
class TextIndex {
 public:
  explicit TextIndex(const TagStream& stream);
  // Restricted to runs and events inside `range`.
  TextIndex(const TagStream& stream, Span range);

  const std::string& text() const noexcept { return text_; }

  // Source span of normalized bytes [first, last).
  Span source_span(std::size_t first, std::size_t last) const;

  // Every (possibly overlapping) start position of `needle`.
  std::vector<std::size_t> find_all(std::string_view needle) const;

  // First normalized position whose source offset is >= `offset`.
  std::size_t position_at_or_after(std::size_t offset) const;

 private:
  void build(const TagStream& stream, std::optional<Span> range);

  std::string text_;
  std::vector<std::size_t> begin_;
  std::vector<std::size_t> end_;
};

RoiSpan locate_roi(const TagStream& stream, const RoiSpec& spec);

std::vector<std::pair<std::string, RoiSpan>> locate_subrois(
    const TagStream& stream, const RoiSpan& roi, const RoiSpec& spec);

}  // namespace bartree
