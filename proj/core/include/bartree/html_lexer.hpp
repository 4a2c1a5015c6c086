#pragma once

#include <cstddef>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace bartree {

// Half-open byte range [begin, end) into a source document.
struct Span {
  std::size_t begin = 0;
  std::size_t end = 0;

  std::size_t size() const noexcept { return end - begin; }
  bool contains(const Span& other) const noexcept {
    return begin <= other.begin && other.end <= end;
  }
  friend bool operator==(const Span&, const Span&) = default;
};

enum class TagKind { Open, Close, Void };
enum class TagClass { TextFormat, LayoutFormat, Other };

std::string_view to_string(TagKind kind) noexcept;
std::string_view to_string(TagClass cls) noexcept;

struct TagEvent {
  std::string name;  // lowercase
  TagKind kind = TagKind::Open;
  TagClass cls = TagClass::Other;
  Span span;

  friend bool operator==(const TagEvent&, const TagEvent&) = default;
};

// A maximal run of character data between two markup constructs.
// `text` is entity-decoded with whitespace runs collapsed to one space (not
// trimmed). `origin[i]` is the source offset of the construct that produced
// text[i].
struct TextRun {
  Span span;
  std::string text;
  std::vector<std::size_t> origin;

  friend bool operator==(const TextRun&, const TextRun&) = default;
};

struct TagStream {
  std::vector<TagEvent> events;
  std::vector<TextRun> text_runs;

  bool empty() const noexcept { return events.empty() && text_runs.empty(); }
  friend bool operator==(const TagStream&, const TagStream&) = default;
};

// Tag-class lists. Anything not listed as text-format or layout-format is
// Other, which the structural passes treat like layout.
struct TagConfig {
  std::set<std::string, std::less<>> text_format;
  std::set<std::string, std::less<>> layout_format;
  std::set<std::string, std::less<>> void_tags;

  static const TagConfig& defaults();

  TagClass classify(std::string_view name) const;
  bool is_void(std::string_view name) const { return void_tags.contains(name); }
};

TagClass classify_tag(std::string_view name,
                      const TagConfig& config = TagConfig::defaults());

// Total: never throws, tolerates arbitrary bytes. Comments, doctype,
// processing instructions, <script> and <style> blocks produce neither
// events nor text.
TagStream tokenize(std::string_view source,
                   const TagConfig& config = TagConfig::defaults());

enum class CleanPolicy { StripTextFormat, KeepLayoutOnly };

TagStream clean(TagStream stream, CleanPolicy policy);

// Canonical markup for a stream: bare tags without attributes, text with
// &, < and > escaped, runs and events merged by source position.
std::string render(const TagStream& stream);

// Entity decoding with a fixed named table plus decimal/hex numeric
// references. Unknown entities are kept verbatim.
std::string decode_entities(std::string_view raw);

}  // namespace bartree
