#include "bartree/synth.hpp"

#include <algorithm>
#include <array>

#include "bartree/error.hpp"

namespace bartree {
namespace {

constexpr std::array<std::string_view, 10> kTags = {
    "div", "section", "ul", "li", "span", "p", "header", "footer", "nav", "table"};

constexpr std::array<std::string_view, 8> kWords = {
    "archive", "listing", "volume", "catalogue", "index", "entry", "notes", "series"};

std::size_t uniform(std::mt19937_64& rng, std::size_t lo, std::size_t hi) {
  return std::uniform_int_distribution<std::size_t>(lo, hi)(rng);
}

// Walks the model in document order. `pos` numbers node openings and the
// RoI item in one sequence, so a non-ancestor node is upper iff its
// opening comes before the RoI.
struct Layout {
  std::vector<std::size_t> depth;
  std::vector<std::size_t> pos;
  std::vector<int> parent;
  std::vector<bool> ancestor;
  std::vector<bool> alive;
  std::size_t roi_pos = 0;
  std::size_t roi_depth = 0;
  int roi_holder = -1;
  std::vector<int> order;  // node ids in document order
};

Layout layout_of(const SynthTree& tree) {
  const std::size_t n = tree.nodes.size();
  Layout l;
  l.depth.assign(n, 0);
  l.pos.assign(n, 0);
  l.parent.assign(n, -1);
  l.ancestor.assign(n, false);
  l.alive.assign(n, false);
  std::size_t counter = 0;
  std::vector<int> path;
  auto walk = [&](auto&& self, int id, std::size_t d) -> void {
    l.alive[id] = true;
    l.depth[id] = d;
    l.pos[id] = counter++;
    l.order.push_back(id);
    path.push_back(id);
    for (int item : tree.nodes[id].items) {
      if (item == SynthTree::kRoiItem) {
        l.roi_pos = counter++;
        l.roi_depth = d + 1;
        l.roi_holder = id;
        for (int a : path) l.ancestor[a] = true;
      } else {
        l.parent[item] = id;
        self(self, item, d + 1);
      }
    }
    path.pop_back();
  };
  walk(walk, 0, 0);
  return l;
}

DepthProfile truth_of(const SynthTree& tree, const Layout& l) {
  DepthProfile p;
  std::vector<std::size_t> index(tree.nodes.size(), 0);
  for (int id : l.order) {
    const std::size_t d = l.depth[id];
    if (p.P.size() <= d) {
      p.P.resize(d + 1, 0);
      p.parents.resize(d + 1);
    }
    index[id] = p.P[d]++;
    if (d > 0) p.parents[d].push_back(index[l.parent[id]]);
  }
  p.d_max = p.P.size();
  p.roi_depth = l.roi_depth;
  std::vector<std::size_t> path;
  for (int id = l.roi_holder; id >= 0; id = l.parent[id]) path.push_back(index[id]);
  p.roi_path.assign(path.rbegin(), path.rend());
  return p;
}

// Index within `holder.items` of the item leading to the RoI.
std::size_t roi_branch(const SynthTree& tree, const Layout& l, int holder) {
  const auto& items = tree.nodes[holder].items;
  for (std::size_t k = 0; k < items.size(); ++k) {
    const int item = items[k];
    if (item == SynthTree::kRoiItem || l.ancestor[item]) return k;
  }
  return items.size();
}

void render(const SynthTree& tree, int id, std::size_t indent, std::mt19937_64& rng,
            std::string& out) {
  const auto& node = tree.nodes[id];
  const std::string pad(indent * 2, ' ');
  out += pad + "<" + node.tag + ">\n";
  // Filler mixes text-format markup and void tags, which the pipeline
  // must ignore.
  out += pad + "  <b>" + node.label + "</b> ";
  switch (uniform(rng, 0, 3)) {
    case 0: out += "<i>" + std::string(kWords[uniform(rng, 0, kWords.size() - 1)]) + "</i>"; break;
    case 1: out += "<br>"; break;
    case 2: out += "<em>" + std::string(kWords[uniform(rng, 0, kWords.size() - 1)]) + "</em> &amp; more"; break;
    default: out += std::string(kWords[uniform(rng, 0, kWords.size() - 1)]); break;
  }
  out += "\n";
  for (int item : node.items) {
    if (item == SynthTree::kRoiItem) {
      out += pad + "  " + tree.roi_sentence + "\n";
    } else {
      render(tree, item, indent + 1, rng, out);
    }
  }
  out += pad + "</" + node.tag + ">\n";
}

int add_node(SynthTree& tree, std::mt19937_64& rng, const std::string& label) {
  tree.nodes.push_back({std::string(kTags[uniform(rng, 0, kTags.size() - 1)]), label, {}});
  return static_cast<int>(tree.nodes.size() - 1);
}

struct Slot {
  int parent;
  std::size_t index;
};

EditSide side_of_slot(const SynthTree& tree, const Layout& l, const Slot& s) {
  if (!l.ancestor[s.parent]) {
    return l.pos[s.parent] < l.roi_pos ? EditSide::Upper : EditSide::Lower;
  }
  return s.index <= roi_branch(tree, l, s.parent) ? EditSide::Upper : EditSide::Lower;
}

// Insertion slots for a new node at `depth` on `side`.
std::vector<Slot> slots_for(const SynthTree& tree, const Layout& l, std::size_t depth,
                            EditSide side) {
  std::vector<Slot> out;
  if (depth == 0) return out;
  for (int id : l.order) {
    if (l.depth[id] != depth - 1) continue;
    for (std::size_t k = 0; k <= tree.nodes[id].items.size(); ++k) {
      const Slot s{id, k};
      if (side_of_slot(tree, l, s) == side) out.push_back(s);
    }
  }
  return out;
}

[[noreturn]] void inapplicable(const std::string& what) {
  throw Error(ErrorCode::Inapplicable, what);
}

}  // namespace

std::string_view to_string(MutationKind kind) noexcept {
  switch (kind) {
    case MutationKind::InsertNode: return "InsertNode";
    case MutationKind::DeleteNode: return "DeleteNode";
    case MutationKind::PermuteSiblings: return "PermuteSiblings";
    case MutationKind::SymmetricDualEdit: return "SymmetricDualEdit";
  }
  return "?";
}

std::string_view to_string(EditSide side) noexcept {
  switch (side) {
    case EditSide::Upper: return "upper";
    case EditSide::Lower: return "lower";
    case EditSide::Both: return "both";
  }
  return "?";
}

SynthPage render_page(SynthTree tree, std::uint64_t seed) {
  std::mt19937_64 rng(seed ^ 0x5bd1e995u);
  SynthPage page;
  const Layout l = layout_of(tree);
  page.truth = truth_of(tree, l);
  page.html = "<!DOCTYPE html>\n<!-- generated listing -->\n";
  render(tree, 0, 0, rng, page.html);
  page.roi_text = tree.roi_sentence;
  page.tree = std::move(tree);
  return page;
}

SynthPage generate_with_counts(const std::vector<std::size_t>& counts,
                               std::uint64_t seed) {
  if (counts.empty() || counts.front() != 1 ||
      std::find(counts.begin(), counts.end(), 0u) != counts.end()) {
    throw Error(ErrorCode::InvalidInput, "level counts must start with 1 and be positive");
  }
  std::mt19937_64 rng(seed);
  SynthTree tree;
  tree.nodes.push_back({"html", "page", {}});
  std::vector<int> previous{0};
  std::size_t serial = 0;
  for (std::size_t d = 1; d < counts.size(); ++d) {
    std::vector<int> level;
    for (std::size_t j = 0; j < counts[d]; ++j) {
      const int id = add_node(tree, rng, "block-" + std::to_string(++serial));
      tree.nodes[previous[uniform(rng, 0, previous.size() - 1)]].items.push_back(id);
      level.push_back(id);
    }
    previous = std::move(level);
  }

  // RoI holder: any node, picked by depth first so deep anchors are common.
  std::vector<std::vector<int>> by_depth(counts.size());
  const Layout pre = layout_of(tree);
  for (int id : pre.order) by_depth[pre.depth[id]].push_back(id);
  const auto& candidates = by_depth[uniform(rng, 0, counts.size() - 1)];
  const int holder = candidates[uniform(rng, 0, candidates.size() - 1)];
  auto& items = tree.nodes[holder].items;
  items.insert(items.begin() + static_cast<long>(uniform(rng, 0, items.size())),
               SynthTree::kRoiItem);
  tree.roi_sentence = "Record " + std::to_string(seed % 1000003) +
                      ": structural drift study of the listing archive.";
  return render_page(std::move(tree), seed);
}

SynthPage generate_template(std::size_t d_max, std::uint64_t seed) {
  if (d_max < 1 || d_max > 25) {
    throw Error(ErrorCode::InvalidInput, "d_max must be in [1, 25]");
  }
  std::mt19937_64 rng(seed * 0x9e3779b97f4a7c15ull + d_max);
  std::vector<std::size_t> counts{1};
  while (counts.size() < d_max) counts.push_back(uniform(rng, 1, 4));
  return generate_with_counts(counts, rng());
}

SynthPage mutate(const SynthPage& page, const Mutation& m, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  SynthTree tree = page.tree;
  const Layout l = layout_of(tree);
  const std::size_t d_max = page.truth.d_max;
  const std::size_t d = m.depth;
  const std::string label = "inserted-" + std::to_string(seed % 100000);

  auto insert_at = [&](Slot s, const std::string& name) {
    const int id = add_node(tree, rng, name);
    auto& items = tree.nodes[s.parent].items;
    items.insert(items.begin() + static_cast<long>(s.index), id);
  };

  switch (m.kind) {
    case MutationKind::InsertNode: {
      if (m.side == EditSide::Both || d < 1 || d > d_max) inapplicable("insert depth out of range");
      const auto slots = slots_for(tree, l, d, m.side);
      if (slots.empty()) inapplicable("no insertion slot");
      insert_at(slots[uniform(rng, 0, slots.size() - 1)], label);
      break;
    }
    case MutationKind::DeleteNode: {
      if (m.side == EditSide::Both || d < 1 || d >= d_max) inapplicable("delete depth out of range");
      std::vector<int> leaves;
      for (int id : l.order) {
        if (l.depth[id] != d || l.ancestor[id] || !tree.nodes[id].items.empty()) continue;
        const EditSide side = l.pos[id] < l.roi_pos ? EditSide::Upper : EditSide::Lower;
        if (side == m.side) leaves.push_back(id);
      }
      if (leaves.empty()) inapplicable("no deletable leaf");
      const int victim = leaves[uniform(rng, 0, leaves.size() - 1)];
      auto& items = tree.nodes[l.parent[victim]].items;
      items.erase(std::find(items.begin(), items.end(), victim));
      break;
    }
    case MutationKind::PermuteSiblings: {
      if (m.side == EditSide::Both || d < 1 || d >= d_max || page.truth.P[d] < 2) {
        inapplicable("permutation needs two nodes at the depth");
      }
      std::vector<std::pair<int, std::size_t>> movable;  // (holder, item index)
      for (int id : l.order) {
        if (!l.ancestor[id] || l.depth[id] != d - 1) continue;
        const std::size_t branch = roi_branch(tree, l, id);
        const auto& items = tree.nodes[id].items;
        for (std::size_t k = 0; k < items.size(); ++k) {
          if (k == branch) continue;
          if ((k < branch) == (m.side == EditSide::Upper)) movable.emplace_back(id, k);
        }
      }
      if (movable.empty()) inapplicable("no sibling of the RoI branch on that side");
      const auto [holder, k] = movable[uniform(rng, 0, movable.size() - 1)];
      auto& items = tree.nodes[holder].items;
      const int moved = items[k];
      items.erase(items.begin() + static_cast<long>(k));
      const std::size_t branch = roi_branch(tree, l, holder);
      // Land right next to the RoI branch, on the opposite side.
      const std::size_t at = m.side == EditSide::Upper ? branch + 1 : branch;
      items.insert(items.begin() + static_cast<long>(at), moved);
      break;
    }
    case MutationKind::SymmetricDualEdit: {
      if (d < 1 || d > d_max) inapplicable("dual edit depth out of range");
      const auto upper = slots_for(tree, l, d, EditSide::Upper);
      const auto lower = slots_for(tree, l, d, EditSide::Lower);
      if (upper.empty() || lower.empty()) inapplicable("dual edit needs slots on both sides");
      const Slot u = upper[uniform(rng, 0, upper.size() - 1)];
      Slot w = lower[uniform(rng, 0, lower.size() - 1)];
      if (w.parent == u.parent && w.index >= u.index) ++w.index;
      insert_at(u, label + "-u");
      insert_at(w, label + "-l");
      break;
    }
  }
  return render_page(std::move(tree), seed);
}

std::optional<Mutation> random_mutation(const SynthPage& page, std::mt19937_64& rng,
                                        int attempts) {
  const std::size_t d_max = page.truth.d_max;
  for (int i = 0; i < attempts; ++i) {
    Mutation m;
    m.kind = static_cast<MutationKind>(uniform(rng, 0, 3));
    m.side = uniform(rng, 0, 1) == 0 ? EditSide::Upper : EditSide::Lower;
    if (m.kind == MutationKind::SymmetricDualEdit) m.side = EditSide::Both;
    const bool may_extend =
        m.kind == MutationKind::InsertNode || m.kind == MutationKind::SymmetricDualEdit;
    const std::size_t hi = may_extend ? d_max : d_max - 1;
    if (hi < 1) continue;
    m.depth = uniform(rng, 1, hi);
    try {
      mutate(page, m, rng());
      return m;
    } catch (const Error& e) {
      if (e.code() != ErrorCode::Inapplicable) throw;
    }
  }
  return std::nullopt;
}

std::pair<SynthPage, SynthPage> make_collision_pair(std::size_t d_max,
                                                    std::uint64_t seed) {
  if (d_max < 3 || d_max > 25) {
    throw Error(ErrorCode::InvalidInput, "collision pairs need d_max in [3, 25]");
  }
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < 256; ++attempt) {
    std::vector<std::size_t> counts{1};
    while (counts.size() < d_max - 2) counts.push_back(uniform(rng, 1, 4));
    counts.push_back(3);
    counts.push_back(2);
    const SynthPage base = generate_with_counts(counts, rng());
    for (const EditSide side : {EditSide::Upper, EditSide::Lower}) {
      try {
        const SynthPage trimmed =
            mutate(base, {MutationKind::DeleteNode, side, d_max - 1}, rng());
        if (trimmed.truth.d_max != d_max) continue;
        SynthPage grown =
            mutate(trimmed, {MutationKind::InsertNode, side, d_max - 2}, rng());
        if (grown.truth.d_max == d_max) return {base, std::move(grown)};
      } catch (const Error& e) {
        if (e.code() != ErrorCode::Inapplicable) throw;
      }
    }
  }
  throw Error(ErrorCode::Inapplicable, "no collision pair found");
}

}  // namespace bartree
