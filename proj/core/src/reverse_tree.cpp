#include "bartree/reverse_tree.hpp"

#include <sstream>
#include <string_view>

#include "bartree/error.hpp"

namespace bartree {

std::string_view to_string(Symmetry s) noexcept {
  switch (s) {
    case Symmetry::FullySymmetric: return "FullySymmetric";
    case Symmetry::LowerAsymmetric: return "LowerAsymmetric";
    case Symmetry::UpperAsymmetric: return "UpperAsymmetric";
  }
  return "?";
}

Parts split(const TagStream& stream, const RoiSpan& roi) {
  Parts parts;
  for (const TagEvent& e : stream.events) {
    if (e.span.end <= roi.begin) {
      parts.upper.events.push_back(e);
    } else if (e.span.begin >= roi.end) {
      parts.lower.events.push_back(e);
    }
  }
  parts.upper = clean(std::move(parts.upper), CleanPolicy::KeepLayoutOnly);
  parts.lower = clean(std::move(parts.lower), CleanPolicy::KeepLayoutOnly);
  return parts;
}

TagCounts count_tags(const TagStream& part, Side side) {
  // Tags waiting for a partner further away from the RoI.
  std::vector<std::string_view> pending;
  TagCounts counts;
  const TagKind opener = side == Side::Upper ? TagKind::Close : TagKind::Open;

  auto visit = [&](const TagEvent& e) {
    if (e.kind == TagKind::Void) return;
    if (e.kind == opener) {
      pending.push_back(e.name);
    } else if (!pending.empty() && pending.back() == e.name) {
      pending.pop_back();
      ++counts.n_ct;
    } else {
      ++counts.n_ot;
    }
  };

  if (side == Side::Upper) {
    for (auto it = part.events.rbegin(); it != part.events.rend(); ++it) visit(*it);
  } else {
    for (const TagEvent& e : part.events) visit(e);
  }
  counts.n_ot += static_cast<std::int64_t>(pending.size());
  counts.sigma = counts.n_ot - counts.n_ct;
  return counts;
}

SymmetryClass symmetry(std::int64_t sigma_upper, std::int64_t sigma_lower) {
  const std::int64_t delta = sigma_upper - sigma_lower;
  Symmetry cls = Symmetry::FullySymmetric;
  if (delta < 0) cls = Symmetry::LowerAsymmetric;
  if (delta > 0) cls = Symmetry::UpperAsymmetric;
  return {delta, cls};
}

namespace {

class ProfileBuilder {
 public:
  void open(std::string_view name) {
    const std::size_t depth = stack_.size();
    if (profile_.P.size() <= depth) {
      profile_.P.resize(depth + 1, 0);
      profile_.parents.resize(depth + 1);
    }
    const std::size_t index = profile_.P[depth]++;
    if (depth > 0) profile_.parents[depth].push_back(stack_.back().index);
    stack_.push_back({name, index});
  }

  void close(std::string_view name) {
    for (std::size_t k = stack_.size(); k-- > 0;) {
      if (stack_[k].name == name) {
        stack_.resize(k);
        return;
      }
    }
  }

  void mark_roi() {
    profile_.roi_depth = stack_.size();
    profile_.roi_path.clear();
    for (const auto& entry : stack_) profile_.roi_path.push_back(entry.index);
  }

  void feed(const TagStream& part) {
    for (const TagEvent& e : part.events) {
      if (e.kind == TagKind::Open) open(e.name);
      if (e.kind == TagKind::Close) close(e.name);
    }
  }

  DepthProfile finish() {
    profile_.d_max = profile_.P.size();
    return std::move(profile_);
  }

 private:
  struct Entry {
    std::string_view name;
    std::size_t index;
  };
  std::vector<Entry> stack_;
  DepthProfile profile_;
};

}  // namespace

DepthProfile depth_profile(const Parts& parts) {
  ProfileBuilder builder;
  builder.feed(parts.upper);
  builder.mark_roi();
  builder.feed(parts.lower);
  DepthProfile profile = builder.finish();
  if (profile.d_max == 0) {
    throw Error(ErrorCode::DegenerateProfile,
                "no layout structure around the RoI");
  }
  return profile;
}

std::string describe(const DepthProfile& profile) {
  std::ostringstream out;
  out << "d_max=" << profile.d_max << " roi_depth=" << profile.roi_depth
      << '\n';
  for (std::size_t d = 0; d < profile.d_max; ++d) {
    out << "d=" << d << (d < 10 ? "  " : " ") << "P=" << profile.P[d] << "  ";
    for (std::size_t j = 0; j < profile.P[d]; ++j) {
      const bool on_path = d < profile.roi_path.size() && profile.roi_path[d] == j;
      out << (on_path ? "[#]" : "[ ]");
    }
    out << '\n';
  }
  return out.str();
}

}  // namespace bartree
