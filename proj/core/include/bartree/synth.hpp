#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bartree/reverse_tree.hpp"

namespace bartree {

// Structural model of a generated page. A node's `items` interleave child
// node ids with at most one kRoiItem marking where the RoI sentence sits.
struct SynthTree {
  static constexpr int kRoiItem = -1;

  struct Node {
    std::string tag;
    std::string label;
    std::vector<int> items;
  };

  std::vector<Node> nodes;  // nodes[0] is the <html> root
  std::string roi_sentence;
};

struct SynthPage {
  std::string html;
  std::string roi_text;
  SynthTree tree;
  // Profile derived from the model alone (no lexing).
  DepthProfile truth;
};

// Page with the requested number of layout levels, P_0 = 1 and
// P_d drawn from [1, 4] for d >= 1. d_max must be in [1, 25].
SynthPage generate_template(std::size_t d_max, std::uint64_t seed);

// Same, with per-depth node counts fixed to `counts` (counts[0] must be 1).
SynthPage generate_with_counts(const std::vector<std::size_t>& counts,
                               std::uint64_t seed);

// Re-renders a (possibly edited) model.
SynthPage render_page(SynthTree tree, std::uint64_t seed);

enum class MutationKind { InsertNode, DeleteNode, PermuteSiblings, SymmetricDualEdit };
enum class EditSide { Upper, Lower, Both };

std::string_view to_string(MutationKind kind) noexcept;
std::string_view to_string(EditSide side) noexcept;

struct Mutation {
  MutationKind kind = MutationKind::InsertNode;
  EditSide side = EditSide::Upper;
  std::size_t depth = 1;
};

// Applies exactly one structural edit away from the RoI sentence:
//   InsertNode        new leaf at `depth` on `side`
//   DeleteNode        removes a leaf at `depth` on `side`
//   PermuteSiblings   moves a sibling of the RoI branch at `depth` from
//                     `side` to the other side of the RoI (needs P_depth >= 2)
//   SymmetricDualEdit one new leaf at `depth` on each side
// Throws Error(Inapplicable) when the page offers no place for the edit.
SynthPage mutate(const SynthPage& page, const Mutation& mutation, std::uint64_t seed);

// A random applicable mutation, or nothing after `attempts` failed draws.
std::optional<Mutation> random_mutation(const SynthPage& page, std::mt19937_64& rng,
                                        int attempts = 64);

// Page pair whose fingerprints agree on {d_max, A_total} under I = 1,
// r = 0 but differ in P: the last two levels go from counts (3, 2) to
// (4, 1) by deleting a deepest leaf and adding a leaf one level up on the
// same side. Requires d_max >= 3.
std::pair<SynthPage, SynthPage> make_collision_pair(std::size_t d_max,
                                                    std::uint64_t seed);

}  // namespace bartree
