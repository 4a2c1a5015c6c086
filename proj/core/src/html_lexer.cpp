#include "bartree/html_lexer.hpp"

#include <algorithm>
#include <array>
#include <cstdint>
#include <utility>

namespace bartree {
namespace {

struct NamedEntity {
  std::string_view name;
  std::string_view utf8;
};

// &nbsp; decodes to a plain space so it collapses like rendered whitespace.
constexpr std::array<NamedEntity, 52> kEntities{{
    {"amp", "&"},       {"lt", "<"},        {"gt", ">"},
    {"quot", "\""},     {"apos", "'"},      {"nbsp", " "},
    {"copy", "©"}, {"reg", "®"},  {"trade", "™"},
    {"hellip", "…"}, {"mdash", "—"}, {"ndash", "–"},
    {"lsquo", "‘"}, {"rsquo", "’"}, {"ldquo", "“"},
    {"rdquo", "”"}, {"laquo", "«"}, {"raquo", "»"},
    {"middot", "·"}, {"bull", "•"}, {"deg", "°"},
    {"times", "×"}, {"divide", "÷"}, {"euro", "€"},
    {"pound", "£"}, {"yen", "¥"},  {"cent", "¢"},
    {"sect", "§"},  {"para", "¶"}, {"shy", "­"},
    {"auml", "ä"},  {"ouml", "ö"}, {"uuml", "ü"},
    {"Auml", "Ä"},  {"Ouml", "Ö"}, {"Uuml", "Ü"},
    {"szlig", "ß"}, {"eacute", "é"}, {"egrave", "è"},
    {"Eacute", "É"}, {"aacute", "á"}, {"agrave", "à"},
    {"iacute", "í"}, {"oacute", "ó"}, {"uacute", "ú"},
    {"ccedil", "ç"}, {"ntilde", "ñ"}, {"acirc", "â"},
    {"ecirc", "ê"}, {"ocirc", "ô"}, {"aring", "å"},
    {"oslash", "ø"},
}};

bool is_space(char c) noexcept {
  return c == ' ' || c == '\t' || c == '\n' || c == '\r' || c == '\f' ||
         c == '\v';
}

bool is_alpha(char c) noexcept {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_name_char(char c) noexcept {
  return is_alpha(c) || (c >= '0' && c <= '9') || c == '-' || c == '_' ||
         c == ':';
}

char to_lower(char c) noexcept {
  return (c >= 'A' && c <= 'Z') ? static_cast<char>(c - 'A' + 'a') : c;
}

void append_utf8(std::string& out, std::uint32_t cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) {
    cp = 0xFFFD;
  }
  if (cp < 0x80) {
    out.push_back(static_cast<char>(cp));
  } else if (cp < 0x800) {
    out.push_back(static_cast<char>(0xC0 | (cp >> 6)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else if (cp < 0x10000) {
    out.push_back(static_cast<char>(0xE0 | (cp >> 12)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  } else {
    out.push_back(static_cast<char>(0xF0 | (cp >> 18)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 12) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | ((cp >> 6) & 0x3F)));
    out.push_back(static_cast<char>(0x80 | (cp & 0x3F)));
  }
}

// Tries to decode an entity starting at raw[i] == '&'. On success appends
// the decoded bytes and returns the entity length; returns 0 otherwise.
std::size_t decode_one(std::string_view raw, std::size_t i, std::string& out) {
  const std::size_t semi = raw.find(';', i + 1);
  if (semi == std::string_view::npos || semi - i > 33) return 0;
  const std::string_view body = raw.substr(i + 1, semi - i - 1);
  if (body.empty()) return 0;

  if (body[0] == '#') {
    std::uint32_t cp = 0;
    std::size_t k = 1;
    const bool hex = body.size() > 1 && (body[1] == 'x' || body[1] == 'X');
    if (hex) k = 2;
    if (k >= body.size()) return 0;
    for (; k < body.size(); ++k) {
      const char c = body[k];
      std::uint32_t digit = 0;
      if (c >= '0' && c <= '9') {
        digit = static_cast<std::uint32_t>(c - '0');
      } else if (hex && c >= 'a' && c <= 'f') {
        digit = static_cast<std::uint32_t>(c - 'a' + 10);
      } else if (hex && c >= 'A' && c <= 'F') {
        digit = static_cast<std::uint32_t>(c - 'A' + 10);
      } else {
        return 0;
      }
      cp = cp * (hex ? 16 : 10) + digit;
      if (cp > 0x10FFFF) cp = 0x110000;  // saturate; mapped to U+FFFD
    }
    append_utf8(out, cp);
    return semi - i + 1;
  }

  for (const auto& entity : kEntities) {
    if (entity.name == body) {
      out.append(entity.utf8);
      return semi - i + 1;
    }
  }
  return 0;
}

// Decodes raw text that begins at source offset `base`, collapsing
// whitespace runs and recording per-byte origins.
TextRun make_run(std::string_view source, std::size_t begin, std::size_t end) {
  TextRun run;
  run.span = {begin, end};
  const std::string_view raw = source.substr(begin, end - begin);
  std::string decoded;
  for (std::size_t i = 0; i < raw.size();) {
    decoded.clear();
    std::size_t consumed = 1;
    if (raw[i] == '&') {
      consumed = decode_one(raw, i, decoded);
      if (consumed == 0) {
        decoded.push_back('&');
        consumed = 1;
      }
    } else {
      decoded.push_back(raw[i]);
    }
    for (char c : decoded) {
      if (is_space(c)) {
        if (!run.text.empty() && run.text.back() == ' ') continue;
        c = ' ';
      }
      run.text.push_back(c);
      run.origin.push_back(begin + i);
    }
    i += consumed;
  }
  return run;
}

bool starts_with_ci(std::string_view text, std::size_t at,
                    std::string_view prefix) {
  if (at + prefix.size() > text.size()) return false;
  for (std::size_t k = 0; k < prefix.size(); ++k) {
    if (to_lower(text[at + k]) != prefix[k]) return false;
  }
  return true;
}

// Finds the '>' closing a start tag, skipping quoted attribute values.
std::size_t find_tag_end(std::string_view source, std::size_t from) {
  char quote = 0;
  for (std::size_t i = from; i < source.size(); ++i) {
    const char c = source[i];
    if (quote != 0) {
      if (c == quote) quote = 0;
    } else if (c == '"' || c == '\'') {
      quote = c;
    } else if (c == '>') {
      return i;
    }
  }
  return std::string_view::npos;
}

std::size_t find_ci(std::string_view text, std::size_t from,
                    std::string_view needle) {
  for (std::size_t i = from; i + needle.size() <= text.size(); ++i) {
    if (starts_with_ci(text, i, needle)) return i;
  }
  return std::string_view::npos;
}

class Lexer {
 public:
  Lexer(std::string_view source, const TagConfig& config)
      : src_(source), config_(config) {}

  TagStream run() {
    std::size_t pos = 0;
    while (pos < src_.size()) {
      if (src_[pos] != '<') {
        ++pos;
        continue;
      }
      const std::size_t next = markup(pos);
      if (next == pos) {
        ++pos;  // literal '<'
      } else {
        pos = next;
      }
    }
    flush_text(src_.size());
    return std::move(out_);
  }

 private:
  // Returns the offset after the construct at `pos`, or `pos` when the '<'
  // does not start markup.
  std::size_t markup(std::size_t pos) {
    if (src_.compare(pos, 4, "<!--") == 0) {
      flush_text(pos);
      const std::size_t end = src_.find("-->", pos + 4);
      return skip_to(end == std::string_view::npos ? src_.size() : end + 3);
    }
    if (pos + 1 >= src_.size()) return pos;
    const char c1 = src_[pos + 1];
    if (c1 == '!' || c1 == '?') {
      flush_text(pos);
      const std::size_t end = src_.find('>', pos + 2);
      return skip_to(end == std::string_view::npos ? src_.size() : end + 1);
    }
    if (c1 == '/') {
      if (pos + 2 >= src_.size() || !is_alpha(src_[pos + 2])) return pos;
      const auto [name, name_end] = read_name(pos + 2);
      const std::size_t end = src_.find('>', name_end);
      if (end == std::string_view::npos) return pos;
      flush_text(pos);
      const TagKind kind = config_.is_void(name) ? TagKind::Void : TagKind::Close;
      emit(name, kind, {pos, end + 1});
      return end + 1;
    }
    if (!is_alpha(c1)) return pos;

    const auto [name, name_end] = read_name(pos + 1);
    const std::size_t end = find_tag_end(src_, name_end);
    if (end == std::string_view::npos) return pos;
    flush_text(pos);
    const bool self_closing = src_[end - 1] == '/';
    if ((name == "script" || name == "style") && !self_closing) {
      const std::string closer = "</" + name;
      const std::size_t close_at = find_ci(src_, end + 1, closer);
      if (close_at == std::string_view::npos) return skip_to(src_.size());
      const std::size_t close_end = src_.find('>', close_at);
      return skip_to(close_end == std::string_view::npos ? src_.size() : close_end + 1);
    }
    const TagKind kind = config_.is_void(name) ? TagKind::Void : TagKind::Open;
    emit(name, kind, {pos, end + 1});
    return end + 1;
  }

  std::pair<std::string, std::size_t> read_name(std::size_t at) const {
    std::string name;
    std::size_t i = at;
    while (i < src_.size() && is_name_char(src_[i])) {
      name.push_back(to_lower(src_[i]));
      ++i;
    }
    return {std::move(name), i};
  }

  void emit(std::string name, TagKind kind, Span span) {
    const TagClass cls = config_.classify(name);
    out_.events.push_back({std::move(name), kind, cls, span});
    text_begin_ = span.end;
  }

  // Silent constructs: no event, and their bytes never reach a text run.
  std::size_t skip_to(std::size_t end) {
    text_begin_ = end;
    return end;
  }

  void flush_text(std::size_t upto) {
    if (upto > text_begin_) {
      out_.text_runs.push_back(make_run(src_, text_begin_, upto));
    }
    text_begin_ = upto;
  }

  std::string_view src_;
  const TagConfig& config_;
  TagStream out_;
  std::size_t text_begin_ = 0;
};

}  // namespace

std::string_view to_string(TagKind kind) noexcept {
  switch (kind) {
    case TagKind::Open: return "Open";
    case TagKind::Close: return "Close";
    case TagKind::Void: return "Void";
  }
  return "?";
}

std::string_view to_string(TagClass cls) noexcept {
  switch (cls) {
    case TagClass::TextFormat: return "TextFormat";
    case TagClass::LayoutFormat: return "LayoutFormat";
    case TagClass::Other: return "Other";
  }
  return "?";
}

const TagConfig& TagConfig::defaults() {
  static const TagConfig config{
      {"b", "i", "em", "strong", "u", "small", "sub", "sup", "font", "mark",
       "s", "strike", "tt"},
      {"html", "body", "div", "table", "tr", "td", "th", "thead", "tbody",
       "ul", "ol", "li", "span", "p", "form", "section", "header", "footer",
       "nav", "h1", "h2", "h3", "h4", "h5", "h6"},
      {"br", "hr", "img", "input", "meta", "link"},
  };
  return config;
}

TagClass TagConfig::classify(std::string_view name) const {
  if (text_format.contains(name)) return TagClass::TextFormat;
  if (layout_format.contains(name)) return TagClass::LayoutFormat;
  return TagClass::Other;
}

TagClass classify_tag(std::string_view name, const TagConfig& config) {
  return config.classify(name);
}

TagStream tokenize(std::string_view source, const TagConfig& config) {
  return Lexer(source, config).run();
}

TagStream clean(TagStream stream, CleanPolicy policy) {
  std::erase_if(stream.events, [](const TagEvent& e) {
    return e.cls == TagClass::TextFormat;
  });
  if (policy == CleanPolicy::KeepLayoutOnly) stream.text_runs.clear();
  return stream;
}

std::string render(const TagStream& stream) {
  std::string out;
  std::string pending;  // adjacent runs are merged before collapsing
  auto flush = [&] {
    bool last_space = false;
    for (char c : pending) {
      if (c == ' ') {
        if (last_space) continue;
        last_space = true;
      } else {
        last_space = false;
      }
      switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        default: out.push_back(c);
      }
    }
    pending.clear();
  };

  std::size_t e = 0;
  std::size_t t = 0;
  while (e < stream.events.size() || t < stream.text_runs.size()) {
    const bool take_text =
        t < stream.text_runs.size() &&
        (e >= stream.events.size() ||
         stream.text_runs[t].span.begin < stream.events[e].span.begin);
    if (take_text) {
      pending += stream.text_runs[t++].text;
      continue;
    }
    flush();
    const TagEvent& ev = stream.events[e++];
    out += ev.kind == TagKind::Close ? "</" : "<";
    out += ev.name;
    out += '>';
  }
  flush();
  return out;
}

std::string decode_entities(std::string_view raw) {
  std::string out;
  for (std::size_t i = 0; i < raw.size();) {
    if (raw[i] == '&') {
      const std::size_t used = decode_one(raw, i, out);
      if (used != 0) {
        i += used;
        continue;
      }
    }
    out.push_back(raw[i++]);
  }
  return out;
}

}  // namespace bartree
