#include <gtest/gtest.h>

#include "bartree/layout_tree.hpp"
#include "support.hpp"

namespace bartree {
namespace {

TagStream stream_of(const std::string& html) {
  return clean(tokenize(html), CleanPolicy::StripTextFormat);
}

TEST(LayoutTree, DepthsOrdinalsAndRanges) {
  const std::string html = "<div><p>a</p><span>b</span><p>c<br></p></div><div></div>";
  const LayoutTree tree(stream_of(html));
  const auto& n = tree.nodes();
  ASSERT_EQ(n.size(), 5u);
  EXPECT_EQ(n[0].tag, "div");
  EXPECT_EQ(n[3].tag, "p");
  EXPECT_EQ(n[3].depth, 1u);
  EXPECT_EQ(n[3].ordinal, 1u);  // second p under the first div
  EXPECT_EQ(n[2].ordinal, 0u);
  EXPECT_EQ(n[4].ordinal, 1u);  // second root div
  EXPECT_EQ(html.substr(n[1].range.begin, n[1].range.size()), "<p>a</p>");
  EXPECT_EQ(n[0].children, (std::vector<std::size_t>{1, 2, 3}));
}

TEST(LayoutTree, ToleratesStrayAndMissingClosers) {
  const std::string html = "<div><p>x</span></div><li>open";
  const LayoutTree tree(stream_of(html));
  const auto& n = tree.nodes();
  ASSERT_EQ(n.size(), 3u);
  // </div> closes the p left open inside it.
  EXPECT_EQ(n[1].range.end, html.find("<li>"));
  EXPECT_EQ(n[2].range.end, html.size());
}

TEST(LayoutTree, PathRoundTrip) {
  const LayoutTree tree(stream_of("<ul><li>a</li><li><p>b</p></li></ul>"));
  for (std::size_t i = 0; i < tree.nodes().size(); ++i) {
    EXPECT_EQ(tree.find(tree.path_to(i)), i);
  }
  EXPECT_EQ(tree.find({{"ul", 0, 0}, {"li", 1, 2}}), std::nullopt);
  EXPECT_EQ(tree.find({}), std::nullopt);
}

TEST(Anchors, ExtractionOnTrainingPageIsIdentity) {
  const std::string html = "<div><p>Title: <b>Big</b> result (2009)</p></div>";
  const TagStream s = stream_of(html);
  const LayoutTree tree(s);
  const RoiSpec spec = RoiSpec::make("Big result", {{"t", "Big result"}});
  const RoiSpan roi = locate_roi(s, spec);
  const auto subs = locate_subrois(s, roi, spec);
  const AttributeAnchor anchor = make_anchor(s, tree, subs[0].second);
  EXPECT_EQ(anchor.path, (std::vector<PathStep>{{"div", 0, 0}, {"p", 1, 0}}));
  EXPECT_EQ(anchor.prefix, "Title: ");
  EXPECT_EQ(anchor.suffix, " (2009)");
  EXPECT_EQ(apply_anchor(s, tree, anchor), "Big result");

  const TagStream other = stream_of("<div><p>Title: Small change (2010)</p></div>");
  EXPECT_EQ(apply_anchor(other, LayoutTree(other), anchor), "Small change (2010)");
  const TagStream moved = stream_of("<section><p>Title: x</p></section>");
  EXPECT_EQ(apply_anchor(moved, LayoutTree(moved), anchor), std::nullopt);
}

}  // namespace
}  // namespace bartree
