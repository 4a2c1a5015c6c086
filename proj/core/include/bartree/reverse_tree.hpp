#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "bartree/html_lexer.hpp"
#include "bartree/roi_locator.hpp"

namespace bartree {

enum class Side { Upper, Lower };

// Layout-only markup above (document start to RoI) and below (RoI to end)
// the region of interest.
struct Parts {
  TagStream upper;
  TagStream lower;
};

// n_ot counts tags with no partner inside the part, n_ct counts pairs
// formed inside the part, sigma = n_ot - n_ct.
struct TagCounts {
  std::int64_t n_ot = 0;
  std::int64_t n_ct = 0;
  std::int64_t sigma = 0;

  friend bool operator==(const TagCounts&, const TagCounts&) = default;
};

enum class Symmetry { FullySymmetric, LowerAsymmetric, UpperAsymmetric };

std::string_view to_string(Symmetry s) noexcept;

struct SymmetryClass {
  std::int64_t delta = 0;
  Symmetry cls = Symmetry::FullySymmetric;

  friend bool operator==(const SymmetryClass&, const SymmetryClass&) = default;
};

// Per-depth node counts of the layout tree around the RoI. The outermost
// elements sit at depth 0; P[d] counts nodes at depth d and d_max is the
// number of populated levels, so P.size() == d_max.
struct DepthProfile {
  std::size_t d_max = 0;
  std::vector<std::size_t> P;
  // Depth the RoI would occupy as a node: the number of open ancestors.
  std::size_t roi_depth = 0;
  // parents[d][j]: index, among depth d-1 nodes in document order, of the
  // parent of the j-th node at depth d. parents[0] is empty.
  std::vector<std::vector<std::size_t>> parents;
  // roi_path[d]: index among depth-d nodes of the RoI ancestor at depth d.
  std::vector<std::size_t> roi_path;

  friend bool operator==(const DepthProfile&, const DepthProfile&) = default;
};

Parts split(const TagStream& stream, const RoiSpan& roi);

// Pairs tags with a stack scan starting next to the RoI: right-to-left for
// the upper part, left-to-right for the lower part. A tag only pairs with
// the nearest pending partner of the same name.
TagCounts count_tags(const TagStream& part, Side side);

SymmetryClass symmetry(std::int64_t sigma_upper, std::int64_t sigma_lower);

// Throws Error(DegenerateProfile) when neither part holds structure.
DepthProfile depth_profile(const Parts& parts);

// Textual bar diagram of a profile: one line per depth with its count and
// the RoI branch marked.
std::string describe(const DepthProfile& profile);

}  // namespace bartree
