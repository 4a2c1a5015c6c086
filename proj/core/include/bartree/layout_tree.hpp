#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "bartree/html_lexer.hpp"
#include "bartree/roi_locator.hpp"

namespace bartree {

// One step of a root-to-node tag path. `ordinal` is the position among
// same-tag siblings under the same parent.
struct PathStep {
  std::string tag;
  std::size_t depth = 0;
  std::size_t ordinal = 0;

  friend bool operator==(const PathStep&, const PathStep&) = default;
};

// Where an attribute lives in the template: the tag path to the innermost
// element enclosing its text, plus the literal text the element held before
// and after the attribute on the training page.
struct AttributeAnchor {
  std::vector<PathStep> path;
  std::string prefix;
  std::string suffix;

  friend bool operator==(const AttributeAnchor&, const AttributeAnchor&) = default;
};

// Element tree over non-text-format, non-void tags, built with a tolerant
// stack: a closer pops through the nearest open element of its name and is
// ignored if none is open.
class LayoutTree {
 public:
  struct Node {
    std::string tag;
    std::size_t depth = 0;
    std::size_t ordinal = 0;
    std::optional<std::size_t> parent;
    std::vector<std::size_t> children;
    Span range;  // opening tag start to closing tag end
  };

  explicit LayoutTree(const TagStream& stream);

  const std::vector<Node>& nodes() const noexcept { return nodes_; }

  std::optional<std::size_t> deepest_enclosing(Span span) const;
  std::vector<PathStep> path_to(std::size_t node) const;
  std::optional<std::size_t> find(const std::vector<PathStep>& path) const;

 private:
  std::vector<Node> nodes_;
  std::vector<std::size_t> roots_;
};

// `stream` must still carry its text runs.
AttributeAnchor make_anchor(const TagStream& stream, const LayoutTree& tree,
                            const RoiSpan& attribute);

// Normalized attribute text on a page, or nullopt when the path is absent
// or the element holds no text.
std::optional<std::string> apply_anchor(const TagStream& stream,
                                        const LayoutTree& tree,
                                        const AttributeAnchor& anchor);

}  // namespace bartree
