#include "newsbias/html_extract.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <optional>
#include <unordered_map>

#include "newsbias/bias.hpp"
#include "newsbias/error.hpp"

namespace newsbias {

namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

std::string ascii_lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string collapse_whitespace(std::string_view s) {
  std::string out;
  bool pending = false;
  for (char c : s) {
    if (is_space(c)) {
      pending = !out.empty();
    } else {
      if (pending) out += ' ';
      pending = false;
      out += c;
    }
  }
  return out;
}

void append_utf8(std::string& out, unsigned long cp) {
  if (cp == 0 || cp > 0x10FFFF || (cp >= 0xD800 && cp <= 0xDFFF)) cp = 0xFFFD;
  if (cp < 0x80) {
    out += static_cast<char>(cp);
  } else if (cp < 0x800) {
    out += static_cast<char>(0xC0 | (cp >> 6));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else if (cp < 0x10000) {
    out += static_cast<char>(0xE0 | (cp >> 12));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  } else {
    out += static_cast<char>(0xF0 | (cp >> 18));
    out += static_cast<char>(0x80 | ((cp >> 12) & 0x3F));
    out += static_cast<char>(0x80 | ((cp >> 6) & 0x3F));
    out += static_cast<char>(0x80 | (cp & 0x3F));
  }
}

const std::unordered_map<std::string_view, unsigned long>& named_entities() {
  static const std::unordered_map<std::string_view, unsigned long> table = {
      {"amp", '&'},       {"lt", '<'},        {"gt", '>'},        {"quot", '"'},     {"apos", '\''},
      {"nbsp", 0xA0},     {"rsquo", 0x2019},  {"lsquo", 0x2018},  {"rdquo", 0x201D}, {"ldquo", 0x201C},
      {"mdash", 0x2014},  {"ndash", 0x2013},  {"hellip", 0x2026}, {"copy", 0xA9},    {"reg", 0xAE},
      {"trade", 0x2122},  {"eacute", 0xE9},   {"egrave", 0xE8},   {"aacute", 0xE1},  {"uuml", 0xFC},
      {"ouml", 0xF6},     {"auml", 0xE4},     {"ccedil", 0xE7},   {"middot", 0xB7},  {"bull", 0x2022},
  };
  return table;
}

// Elements whose whole subtree is boilerplate.
bool is_boilerplate_tag(std::string_view name) {
  static constexpr std::array<std::string_view, 16> kTags = {
      "script", "style",  "noscript", "template", "nav",    "header", "footer", "aside",
      "form",   "iframe", "svg",      "button",   "select", "figure", "menu",   "dialog"};
  return std::find(kTags.begin(), kTags.end(), name) != kTags.end();
}

bool has_boilerplate_marker(std::string_view class_or_id) {
  static constexpr std::array<std::string_view, 12> kMarkers = {
      "paywall", "subscribe", "newsletter", "share",  "social", "related",
      "comment", "promo",     "advert",     "cookie", "byline", "breadcrumb"};
  const std::string lowered = ascii_lower(class_or_id);
  return std::any_of(kMarkers.begin(), kMarkers.end(),
                     [&](std::string_view m) { return lowered.find(m) != std::string::npos; });
}

bool is_void_tag(std::string_view name) {
  static constexpr std::array<std::string_view, 14> kTags = {"area", "base",  "br",   "col",  "embed",
                                                             "hr",   "img",   "input", "link", "meta",
                                                             "param", "source", "track", "wbr"};
  return std::find(kTags.begin(), kTags.end(), name) != kTags.end();
}

bool is_raw_text_tag(std::string_view name) {
  return name == "script" || name == "style" || name == "textarea" || name == "title";
}

// Tags that end an implicitly open <p>.
bool closes_paragraph(std::string_view name) {
  static constexpr std::array<std::string_view, 20> kTags = {
      "p",  "div", "ul", "ol", "dl", "table", "section", "article", "blockquote", "pre",
      "h1", "h2",  "h3", "h4", "h5", "h6",    "hr",      "main",    "header",     "footer"};
  return std::find(kTags.begin(), kTags.end(), name) != kTags.end();
}

bool is_block_tag(std::string_view name) {
  return closes_paragraph(name) || name == "li" || name == "td" || name == "th" || name == "tr" ||
         name == "br" || name == "body";
}

struct Tag {
  std::string name;
  bool closing = false;
  bool self_closing = false;
  std::unordered_map<std::string, std::string> attrs;
};

// Parses the tag starting at html[pos] == '<'; on success advances pos past '>'.
std::optional<Tag> parse_tag(std::string_view html, std::size_t& pos) {
  std::size_t i = pos + 1;
  Tag tag;
  if (i < html.size() && html[i] == '/') {
    tag.closing = true;
    ++i;
  }
  const std::size_t name_start = i;
  while (i < html.size() && (std::isalnum(static_cast<unsigned char>(html[i])) || html[i] == '-' || html[i] == ':'))
    ++i;
  if (i == name_start) return std::nullopt;
  tag.name = ascii_lower(html.substr(name_start, i - name_start));

  while (i < html.size() && html[i] != '>') {
    if (is_space(html[i])) {
      ++i;
      continue;
    }
    if (html[i] == '/') {
      tag.self_closing = true;
      ++i;
      continue;
    }
    tag.self_closing = false;
    const std::size_t an = i;
    while (i < html.size() && !is_space(html[i]) && html[i] != '=' && html[i] != '>' && html[i] != '/') ++i;
    std::string name = ascii_lower(html.substr(an, i - an));
    while (i < html.size() && is_space(html[i])) ++i;
    std::string value;
    if (i < html.size() && html[i] == '=') {
      ++i;
      while (i < html.size() && is_space(html[i])) ++i;
      if (i < html.size() && (html[i] == '"' || html[i] == '\'')) {
        const char quote = html[i++];
        const std::size_t vs = i;
        while (i < html.size() && html[i] != quote) ++i;
        value = std::string(html.substr(vs, i - vs));
        if (i < html.size()) ++i;
      } else {
        const std::size_t vs = i;
        while (i < html.size() && !is_space(html[i]) && html[i] != '>') ++i;
        value = std::string(html.substr(vs, i - vs));
      }
    }
    if (!name.empty()) tag.attrs.emplace(std::move(name), decode_html_entities(value));
  }
  if (i >= html.size()) return std::nullopt;
  pos = i + 1;
  return tag;
}

std::size_t find_ci(std::string_view hay, std::string_view needle, std::size_t from) {
  for (std::size_t i = from; i + needle.size() <= hay.size(); ++i) {
    bool match = true;
    for (std::size_t j = 0; j < needle.size() && match; ++j)
      match = std::tolower(static_cast<unsigned char>(hay[i + j])) == needle[j];
    if (match) return i;
  }
  return std::string_view::npos;
}

struct Paragraph {
  std::string text;
  std::size_t link_chars = 0;
  bool in_article = false;
};

class Extractor {
 public:
  explicit Extractor(std::string_view html) : html_(html) {}

  ExtractedArticle run() {
    std::size_t pos = 0;
    while (pos < html_.size()) {
      const std::size_t lt = html_.find('<', pos);
      text(html_.substr(pos, (lt == std::string_view::npos ? html_.size() : lt) - pos));
      if (lt == std::string_view::npos) break;
      pos = lt;
      if (html_.substr(pos).starts_with("<!--")) {
        const auto end = html_.find("-->", pos + 4);
        pos = end == std::string_view::npos ? html_.size() : end + 3;
        continue;
      }
      if (html_.substr(pos).starts_with("<!") || html_.substr(pos).starts_with("<?")) {
        const auto end = html_.find('>', pos);
        pos = end == std::string_view::npos ? html_.size() : end + 1;
        continue;
      }
      auto tag = parse_tag(html_, pos);
      if (!tag) {
        text(html_.substr(pos, 1));
        ++pos;
        continue;
      }
      if (tag->closing) {
        end_tag(tag->name);
      } else {
        start_tag(*tag);
        if (is_raw_text_tag(tag->name) && !tag->self_closing) {
          const auto end = find_ci(html_, "</" + tag->name, pos);
          const std::string_view raw = html_.substr(pos, (end == std::string_view::npos ? html_.size() : end) - pos);
          if (tag->name == "title" && title_.empty()) title_ = collapse_whitespace(decode_html_entities(raw));
          pos = end == std::string_view::npos ? html_.size() : end;
        }
      }
    }
    flush_paragraph();
    flush_block();
    return finish();
  }

 private:
  struct Open {
    std::string name;
    bool boilerplate;
    bool article;
  };

  bool skipping() const { return skip_depth_ > 0; }

  void start_tag(const Tag& tag) {
    if (tag.name == "meta") meta(tag);
    if (tag.name == "a") ++link_depth_;
    if (closes_paragraph(tag.name)) flush_paragraph();
    if (is_block_tag(tag.name)) flush_block();
    if (tag.name == "br") {
      if (in_paragraph_) current_.text += ' ';
      return;
    }
    if (is_void_tag(tag.name) || tag.self_closing) return;

    bool boilerplate = is_boilerplate_tag(tag.name);
    for (const char* key : {"class", "id", "role"}) {
      auto it = tag.attrs.find(key);
      if (it == tag.attrs.end()) continue;
      if (std::string_view(key) == "role" ? (it->second == "navigation" || it->second == "banner" ||
                                             it->second == "contentinfo" || it->second == "complementary")
                                          : has_boilerplate_marker(it->second))
        boilerplate = true;
    }
    auto itemprop = tag.attrs.find("itemprop");
    const bool article = tag.name == "article" || (itemprop != tag.attrs.end() && itemprop->second == "articleBody");
    stack_.push_back({tag.name, boilerplate, article});
    if (boilerplate) ++skip_depth_;
    if (article) ++article_depth_;
    if (tag.name == "p" && !skipping()) {
      in_paragraph_ = true;
      current_ = Paragraph{};
      current_.in_article = article_depth_ > 0;
    }
  }

  void end_tag(const std::string& name) {
    if (name == "a" && link_depth_ > 0) --link_depth_;
    if (is_block_tag(name)) flush_block();
    auto it = std::find_if(stack_.rbegin(), stack_.rend(), [&](const Open& o) { return o.name == name; });
    if (it == stack_.rend()) {
      if (name == "p") flush_paragraph();
      return;
    }
    const auto keep = static_cast<std::size_t>(std::distance(it, stack_.rend())) - 1;
    while (stack_.size() > keep) {
      const Open& top = stack_.back();
      if (top.name == "p") flush_paragraph();
      if (top.boilerplate) --skip_depth_;
      if (top.article) --article_depth_;
      stack_.pop_back();
    }
  }

  void text(std::string_view raw) {
    if (raw.empty() || skipping()) return;
    const std::string decoded = decode_html_entities(raw);
    if (in_paragraph_) {
      current_.text += decoded;
      if (link_depth_ > 0) current_.link_chars += decoded.size();
    } else if (in_body_text()) {
      block_ += decoded;
    }
  }

  bool in_body_text() const {
    return std::any_of(stack_.begin(), stack_.end(), [](const Open& o) { return o.name == "body"; }) ||
           std::none_of(stack_.begin(), stack_.end(), [](const Open& o) { return o.name == "head"; });
  }

  void flush_paragraph() {
    if (!in_paragraph_) return;
    in_paragraph_ = false;
    current_.text = collapse_whitespace(current_.text);
    if (!current_.text.empty()) paragraphs_.push_back(std::move(current_));
    current_ = Paragraph{};
  }

  void flush_block() {
    std::string text = collapse_whitespace(block_);
    block_.clear();
    if (!text.empty()) blocks_.push_back(std::move(text));
  }

  void meta(const Tag& tag) {
    auto attr = [&](const char* key) -> std::string {
      auto it = tag.attrs.find(key);
      return it == tag.attrs.end() ? std::string{} : it->second;
    };
    const std::string key = ascii_lower(!attr("property").empty() ? attr("property") : attr("name"));
    const std::string content = attr("content");
    if (key == "og:title") {
      og_title_ = collapse_whitespace(content);
    } else if (key == "keywords" || key == "news_keywords" || key == "article:tag") {
      std::size_t start = 0;
      while (start <= content.size()) {
        std::size_t comma = content.find(',', start);
        if (comma == std::string::npos) comma = content.size();
        std::string tag_text = ascii_lower(collapse_whitespace(std::string_view(content).substr(start, comma - start)));
        if (!tag_text.empty() && std::find(tags_.begin(), tags_.end(), tag_text) == tags_.end())
          tags_.push_back(std::move(tag_text));
        start = comma + 1;
      }
    }
  }

  ExtractedArticle finish() {
    std::vector<std::string> chosen;
    const bool any_article = std::any_of(paragraphs_.begin(), paragraphs_.end(), [](const Paragraph& p) {
      return p.in_article;
    });
    for (const auto& p : paragraphs_) {
      if (any_article && !p.in_article) continue;
      if (p.link_chars * 2 > p.text.size()) continue;
      chosen.push_back(p.text);
    }
    if (chosen.empty() && paragraphs_.empty()) {
      // Without <p> markup only sentence-like blocks count; headlines and
      // menu labels rarely end in terminal punctuation.
      for (const auto& block : blocks_) {
        std::string_view b = block;
        while (!b.empty() && (b.back() == '"' || b.back() == '\'' || b.back() == ')')) b.remove_suffix(1);
        if (!b.empty() && (b.back() == '.' || b.back() == '!' || b.back() == '?')) chosen.push_back(block);
      }
    }

    ExtractedArticle out;
    out.title = title_.empty() ? og_title_ : title_;
    for (std::size_t i = 0; i < chosen.size(); ++i) {
      if (i) out.body += '\n';
      out.body += chosen[i];
    }
    out.tags = std::move(tags_);
    return out;
  }

  std::string_view html_;
  std::vector<Open> stack_;
  int skip_depth_ = 0;
  int article_depth_ = 0;
  int link_depth_ = 0;
  bool in_paragraph_ = false;
  Paragraph current_;
  std::vector<Paragraph> paragraphs_;
  std::string block_;
  std::vector<std::string> blocks_;
  std::string title_;
  std::string og_title_;
  std::vector<std::string> tags_;
};

}  // namespace

std::string decode_html_entities(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  std::size_t i = 0;
  while (i < text.size()) {
    if (text[i] != '&') {
      out += text[i++];
      continue;
    }
    const auto semi = text.find(';', i + 1);
    if (semi == std::string_view::npos || semi - i > 12) {
      out += text[i++];
      continue;
    }
    std::string_view ref = text.substr(i + 1, semi - i - 1);
    if (ref.size() > 1 && ref.front() == '#') {
      unsigned long cp = 0;
      const bool hex = ref[1] == 'x' || ref[1] == 'X';
      std::string_view digits = ref.substr(hex ? 2 : 1);
      auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), cp, hex ? 16 : 10);
      if (ec == std::errc{} && ptr == digits.data() + digits.size() && !digits.empty()) {
        append_utf8(out, cp);
        i = semi + 1;
        continue;
      }
    } else if (auto it = named_entities().find(ref); it != named_entities().end()) {
      append_utf8(out, it->second == 0xA0 ? ' ' : it->second);
      i = semi + 1;
      continue;
    }
    out += text[i++];
  }
  return out;
}

ExtractedArticle extract_article(std::string_view html, std::string_view url) {
  ExtractedArticle article = Extractor(html).run();
  if (split_sentences(article.body).empty())
    throw Error(ErrorCode::NoExtractableText, "no extractable article text at " + std::string(url));
  return article;
}

}  // namespace newsbias
