#include "bartree/layout_tree.hpp"

#include <algorithm>
#include <map>

namespace bartree {

LayoutTree::LayoutTree(const TagStream& stream) {
  std::vector<std::size_t> stack;
  // Same-tag sibling counters, keyed by parent (npos for roots).
  std::map<std::pair<std::size_t, std::string>, std::size_t> ordinals;
  constexpr std::size_t kNoParent = static_cast<std::size_t>(-1);

  std::size_t doc_end = 0;
  for (const auto& e : stream.events) doc_end = std::max(doc_end, e.span.end);
  for (const auto& t : stream.text_runs) doc_end = std::max(doc_end, t.span.end);

  for (const TagEvent& e : stream.events) {
    if (e.cls == TagClass::TextFormat || e.kind == TagKind::Void) continue;
    if (e.kind == TagKind::Open) {
      Node node;
      node.tag = e.name;
      node.depth = stack.size();
      if (!stack.empty()) node.parent = stack.back();
      const std::size_t parent_key = node.parent.value_or(kNoParent);
      node.ordinal = ordinals[{parent_key, e.name}]++;
      node.range = {e.span.begin, doc_end};
      const std::size_t id = nodes_.size();
      if (node.parent) {
        nodes_[*node.parent].children.push_back(id);
      } else {
        roots_.push_back(id);
      }
      nodes_.push_back(std::move(node));
      stack.push_back(id);
      continue;
    }
    for (std::size_t k = stack.size(); k-- > 0;) {
      if (nodes_[stack[k]].tag != e.name) continue;
      // Elements left open inside end where their ancestor is closed.
      for (std::size_t j = k; j < stack.size(); ++j) {
        nodes_[stack[j]].range.end = e.span.end;
      }
      stack.resize(k);
      break;
    }
  }
}

std::optional<std::size_t> LayoutTree::deepest_enclosing(Span span) const {
  std::optional<std::size_t> best;
  for (std::size_t i = 0; i < nodes_.size(); ++i) {
    if (!nodes_[i].range.contains(span)) continue;
    if (!best || nodes_[i].depth > nodes_[*best].depth) best = i;
  }
  return best;
}

std::vector<PathStep> LayoutTree::path_to(std::size_t node) const {
  std::vector<PathStep> path;
  for (std::optional<std::size_t> cur = node; cur; cur = nodes_[*cur].parent) {
    const Node& n = nodes_[*cur];
    path.push_back({n.tag, n.depth, n.ordinal});
  }
  return {path.rbegin(), path.rend()};
}

std::optional<std::size_t> LayoutTree::find(const std::vector<PathStep>& path) const {
  const std::vector<std::size_t>* candidates = &roots_;
  std::optional<std::size_t> found;
  for (const PathStep& step : path) {
    found.reset();
    for (std::size_t id : *candidates) {
      const Node& n = nodes_[id];
      if (n.tag == step.tag && n.depth == step.depth && n.ordinal == step.ordinal) {
        found = id;
        break;
      }
    }
    if (!found) return std::nullopt;
    candidates = &nodes_[*found].children;
  }
  return found;
}

AttributeAnchor make_anchor(const TagStream& stream, const LayoutTree& tree,
                            const RoiSpan& attribute) {
  AttributeAnchor anchor;
  const auto node = tree.deepest_enclosing(attribute.span());
  const TextIndex index = node ? TextIndex(stream, tree.nodes()[*node].range)
                               : TextIndex(stream);
  if (node) anchor.path = tree.path_to(*node);
  const std::string& text = index.text();
  const std::size_t pos = text.find(attribute.matched_text);
  if (pos != std::string::npos) {
    anchor.prefix = text.substr(0, pos);
    anchor.suffix = text.substr(pos + attribute.matched_text.size());
  }
  return anchor;
}

std::optional<std::string> apply_anchor(const TagStream& stream,
                                        const LayoutTree& tree,
                                        const AttributeAnchor& anchor) {
  if (anchor.path.empty()) return std::nullopt;
  const auto node = tree.find(anchor.path);
  if (!node) return std::nullopt;
  std::string text = TextIndex(stream, tree.nodes()[*node].range).text();
  if (!anchor.prefix.empty() && text.starts_with(anchor.prefix)) {
    text.erase(0, anchor.prefix.size());
  }
  if (!anchor.suffix.empty() && text.ends_with(anchor.suffix)) {
    text.erase(text.size() - anchor.suffix.size());
  }
  while (!text.empty() && text.front() == ' ') text.erase(0, 1);
  while (!text.empty() && text.back() == ' ') text.pop_back();
  if (text.empty()) return std::nullopt;
  return text;
}

}  // namespace bartree
