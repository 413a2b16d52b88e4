#include "newsbias/sitemap.hpp"

#include <expat.h>

#include <limits>
#include <memory>
#include <optional>
#include <type_traits>

#include "newsbias/error.hpp"
#include "newsbias/url.hpp"

namespace newsbias {

namespace {

std::string_view local_name(std::string_view name) {
  const auto colon = name.rfind(':');
  return colon == std::string_view::npos ? name : name.substr(colon + 1);
}

std::string trimmed(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

std::string xml_escape(std::string_view s) {
  std::string out;
  for (char c : s) {
    switch (c) {
      case '&': out += "&amp;"; break;
      case '<': out += "&lt;"; break;
      case '>': out += "&gt;"; break;
      case '"': out += "&quot;"; break;
      case '\'': out += "&apos;"; break;
      default: out += c;
    }
  }
  return out;
}

constexpr const char* kNamespace = "http://www.sitemaps.org/schemas/sitemap/0.9";

// Collects <loc>/<lastmod> of each entry element directly under the root.
struct Collector {
  std::vector<std::string> path;  // local names, root first
  std::string root;
  struct Raw {
    std::optional<std::string> loc;
    std::optional<std::string> lastmod;
  };
  std::vector<Raw> entries;
  std::string* text = nullptr;  // field currently receiving character data

  bool is_entry(std::string_view name) const {
    return (root == "urlset" && name == "url") || (root == "sitemapindex" && name == "sitemap");
  }

  void start(std::string_view name) {
    path.emplace_back(name);
    text = nullptr;
    if (path.size() == 1) root = path[0];
    if (path.size() == 2 && is_entry(name)) entries.emplace_back();
    if (path.size() == 3 && is_entry(path[1])) {
      auto& raw = entries.back();
      std::optional<std::string>* field = name == "loc" ? &raw.loc : name == "lastmod" ? &raw.lastmod : nullptr;
      if (field && !*field) text = &field->emplace();
    }
  }
  void end() {
    path.pop_back();
    text = nullptr;
  }
};

void XMLCALL on_start(void* data, const XML_Char* name, const XML_Char**) {
  static_cast<Collector*>(data)->start(local_name(name));
}
void XMLCALL on_end(void* data, const XML_Char*) { static_cast<Collector*>(data)->end(); }
void XMLCALL on_text(void* data, const XML_Char* s, int len) {
  auto* c = static_cast<Collector*>(data);
  if (c->text) c->text->append(s, static_cast<std::size_t>(len));
}

}  // namespace

SitemapDocument parse_sitemap(std::string_view xml_text) {
  std::unique_ptr<std::remove_pointer_t<XML_Parser>, decltype(&XML_ParserFree)> parser(XML_ParserCreate(nullptr),
                                                                                      &XML_ParserFree);
  if (!parser) throw std::bad_alloc();
  Collector collector;
  XML_SetUserData(parser.get(), &collector);
  XML_SetElementHandler(parser.get(), on_start, on_end);
  XML_SetCharacterDataHandler(parser.get(), on_text);
  if (xml_text.size() > static_cast<std::size_t>(std::numeric_limits<int>::max()))
    throw Error(ErrorCode::MalformedXml, "sitemap document too large");
  if (XML_Parse(parser.get(), xml_text.data(), static_cast<int>(xml_text.size()), 1) != XML_STATUS_OK) {
    throw Error(ErrorCode::MalformedXml, std::string("malformed sitemap XML at line ") +
                                             std::to_string(XML_GetCurrentLineNumber(parser.get())) + ": " +
                                             XML_ErrorString(XML_GetErrorCode(parser.get())));
  }

  auto absolute = [](const std::optional<std::string>& loc) {
    return loc && !loc->empty() && Url::parse(*loc).has_value();
  };

  if (collector.root == "urlset") {
    UrlSet set;
    for (auto& raw : collector.entries) {
      if (raw.loc) raw.loc = trimmed(*raw.loc);
      if (!absolute(raw.loc)) continue;
      SitemapEntry entry{std::move(*raw.loc), std::nullopt};
      if (raw.lastmod) entry.lastmod = parse_w3c_datetime(*raw.lastmod);
      set.entries.push_back(std::move(entry));
    }
    return set;
  }
  if (collector.root == "sitemapindex") {
    SitemapIndex index;
    for (auto& raw : collector.entries) {
      if (raw.loc) raw.loc = trimmed(*raw.loc);
      if (absolute(raw.loc)) index.sitemaps.push_back(std::move(*raw.loc));
    }
    return index;
  }
  throw Error(ErrorCode::UnknownRoot, "unexpected sitemap root element <" + collector.root + ">");
}

std::string serialize_sitemap(const UrlSet& set) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<urlset xmlns=\"";
  out += kNamespace;
  out += "\">\n";
  for (const auto& e : set.entries) {
    out += "  <url>\n    <loc>" + xml_escape(e.loc) + "</loc>\n";
    if (e.lastmod) out += "    <lastmod>" + format_timestamp(*e.lastmod) + "</lastmod>\n";
    out += "  </url>\n";
  }
  out += "</urlset>\n";
  return out;
}

std::string serialize_sitemap(const SitemapIndex& index) {
  std::string out = "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<sitemapindex xmlns=\"";
  out += kNamespace;
  out += "\">\n";
  for (const auto& loc : index.sitemaps) out += "  <sitemap>\n    <loc>" + xml_escape(loc) + "</loc>\n  </sitemap>\n";
  out += "</sitemapindex>\n";
  return out;
}

}  // namespace newsbias
