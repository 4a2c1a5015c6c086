#include "bartree/roi_locator.hpp"

#include <algorithm>
#include <set>

#include "bartree/error.hpp"

namespace bartree {
namespace {

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

}  // namespace

std::string normalize_text(std::string_view raw) {
  const std::string decoded = decode_entities(raw);
  std::string out;
  out.reserve(decoded.size());
  bool pending_space = false;
  for (char c : decoded) {
    if (is_space(c)) {
      pending_space = !out.empty();
      continue;
    }
    if (pending_space) out.push_back(' ');
    pending_space = false;
    out.push_back(c);
  }
  return out;
}

RoiSpec RoiSpec::make(std::string_view roi_text,
                      std::vector<RoiAttribute> attributes,
                      std::optional<std::size_t> occurrence) {
  RoiSpec spec;
  spec.roi_text = normalize_text(roi_text);
  spec.occurrence = occurrence;
  if (spec.roi_text.empty()) {
    throw Error(ErrorCode::InvalidInput, "RoI text is empty after normalization");
  }
  std::set<std::string> labels;
  for (auto& attr : attributes) {
    attr.text = normalize_text(attr.text);
    if (attr.label.empty()) {
      throw Error(ErrorCode::InvalidInput, "attribute label is empty");
    }
    if (!labels.insert(attr.label).second) {
      throw Error(ErrorCode::InvalidInput,
                  "duplicate attribute label '" + attr.label + "'");
    }
    if (attr.text.empty() ||
        spec.roi_text.find(attr.text) == std::string::npos) {
      throw Error(ErrorCode::InvalidInput,
                  "attribute '" + attr.label + "' text is not part of the RoI");
    }
  }
  spec.attributes = std::move(attributes);
  return spec;
}

TextIndex::TextIndex(const TagStream& stream) { build(stream, std::nullopt); }

TextIndex::TextIndex(const TagStream& stream, Span range) {
  build(stream, range);
}

void TextIndex::build(const TagStream& stream, std::optional<Span> range) {
  std::string raw;
  std::vector<std::size_t> raw_begin;
  std::vector<std::size_t> raw_end;

  std::size_t ev = 0;
  bool have_prev = false;
  std::size_t prev_end = 0;
  for (const TextRun& run : stream.text_runs) {
    if (range && (run.span.end <= range->begin || run.span.begin >= range->end)) {
      continue;
    }
    bool separated = false;
    while (ev < stream.events.size() &&
           stream.events[ev].span.begin < run.span.begin) {
      const TagEvent& e = stream.events[ev++];
      if (have_prev && e.span.begin >= prev_end &&
          e.cls != TagClass::TextFormat) {
        separated = true;
      }
    }
    if (separated) {
      raw.push_back(' ');
      raw_begin.push_back(prev_end);
      raw_end.push_back(prev_end);
    }

    const std::size_t n = run.text.size();
    std::vector<std::size_t> ends(n);
    for (std::size_t k = n; k-- > 0;) {
      if (k + 1 == n) {
        ends[k] = run.span.end;
      } else if (run.origin[k + 1] != run.origin[k]) {
        ends[k] = run.origin[k + 1];
      } else {
        ends[k] = ends[k + 1];
      }
    }
    for (std::size_t k = 0; k < n; ++k) {
      if (range && (run.origin[k] < range->begin || ends[k] > range->end)) {
        continue;
      }
      raw.push_back(run.text[k]);
      raw_begin.push_back(run.origin[k]);
      raw_end.push_back(ends[k]);
    }
    have_prev = true;
    prev_end = run.span.end;
  }

  // Collapse and trim; run texts are already collapsed internally.
  bool pending = false;
  std::size_t pending_at = 0;
  for (std::size_t i = 0; i < raw.size(); ++i) {
    if (raw[i] == ' ') {
      if (!text_.empty() && !pending) {
        pending = true;
        pending_at = i;
      }
      continue;
    }
    if (pending) {
      text_.push_back(' ');
      begin_.push_back(raw_begin[pending_at]);
      end_.push_back(raw_end[pending_at]);
      pending = false;
    }
    text_.push_back(raw[i]);
    begin_.push_back(raw_begin[i]);
    end_.push_back(raw_end[i]);
  }
}

Span TextIndex::source_span(std::size_t first, std::size_t last) const {
  if (first >= last || last > text_.size()) return {};
  return {begin_[first], end_[last - 1]};
}

std::vector<std::size_t> TextIndex::find_all(std::string_view needle) const {
  std::vector<std::size_t> hits;
  if (needle.empty()) return hits;
  for (std::size_t pos = text_.find(needle); pos != std::string::npos;
       pos = text_.find(needle, pos + 1)) {
    hits.push_back(pos);
  }
  return hits;
}

std::size_t TextIndex::position_at_or_after(std::size_t offset) const {
  return static_cast<std::size_t>(
      std::lower_bound(begin_.begin(), begin_.end(), offset) - begin_.begin());
}

RoiSpan locate_roi(const TagStream& stream, const RoiSpec& spec) {
  const TextIndex index(stream);
  const auto hits = index.find_all(spec.roi_text);
  if (hits.empty()) {
    throw Error(ErrorCode::NotFound, "RoI text not found on page");
  }
  std::size_t chosen = 0;
  if (spec.occurrence) {
    if (*spec.occurrence >= hits.size()) {
      throw Error(ErrorCode::NotFound,
                  "RoI occurrence " + std::to_string(*spec.occurrence) +
                      " requested but only " + std::to_string(hits.size()) +
                      " found");
    }
    chosen = hits[*spec.occurrence];
  } else if (hits.size() > 1) {
    throw Error(ErrorCode::Ambiguous,
                "RoI text occurs " + std::to_string(hits.size()) + " times",
                static_cast<long>(hits.size()));
  } else {
    chosen = hits.front();
  }
  const Span span = index.source_span(chosen, chosen + spec.roi_text.size());
  return {span.begin, span.end, spec.roi_text};
}

std::vector<std::pair<std::string, RoiSpan>> locate_subrois(
    const TagStream& stream, const RoiSpan& roi, const RoiSpec& spec) {
  const TextIndex index(stream);
  std::vector<std::pair<std::string, RoiSpan>> out;
  std::size_t cursor = index.position_at_or_after(roi.begin);
  for (const auto& attr : spec.attributes) {
    const std::size_t pos = index.text().find(attr.text, cursor);
    const Span span = pos == std::string::npos
                          ? Span{}
                          : index.source_span(pos, pos + attr.text.size());
    if (pos == std::string::npos || span.end > roi.end) {
      throw Error(ErrorCode::SubRoiNotFound,
                  "attribute '" + attr.label + "' not found inside the RoI");
    }
    out.emplace_back(attr.label, RoiSpan{span.begin, span.end, attr.text});
    cursor = pos + attr.text.size();
  }
  return out;
}

}  // namespace bartree
