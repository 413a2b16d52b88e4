#include "newsbias/source.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "newsbias/error.hpp"
#include "newsbias/url.hpp"

namespace newsbias {

namespace pt = boost::property_tree;

namespace {

[[noreturn]] void invalid(const std::string& id, const std::string& what) {
  throw Error(ErrorCode::InvalidConfig, "source [" + id + "]: " + what);
}

bool absolute_http(const std::string& url) {
  auto parsed = Url::parse(url);
  return parsed && parsed->is_http();
}

std::string format_double(double v) {
  std::ostringstream out;
  out.precision(17);
  out << v;
  return out.str();
}

}  // namespace

std::string NewsSource::effective_robots_url() const {
  if (robots_url) return *robots_url;
  auto url = Url::parse(home_url);
  return url ? url->origin() + "/robots.txt" : std::string{};
}

std::vector<NewsSource> load_sources(std::string_view text) {
  pt::ptree tree;
  try {
    std::istringstream in{std::string(text)};
    pt::read_ini(in, tree);
  } catch (const pt::ini_parser_error& e) {
    throw Error(ErrorCode::InvalidConfig, std::string("source config: ") + e.what());
  }

  static const std::set<std::string> kKnown = {"name",     "home_url",       "leaning",   "mainstream",
                                               "crawl_delay_ms", "icon_ref", "robots_url", "fallback_sitemap"};
  std::vector<NewsSource> out;
  std::set<std::string> seen;
  for (const auto& [id, section] : tree) {
    if (section.empty()) invalid(id, "top-level key outside a section or empty section");
    if (!seen.insert(id).second) invalid(id, "duplicate source id");
    for (const auto& [key, value] : section)
      if (!kKnown.count(key)) invalid(id, "unknown key '" + key + "'");

    NewsSource s;
    s.id = id;
    auto required = [&](const char* key) {
      auto v = section.get_optional<std::string>(key);
      if (!v || v->empty()) invalid(id, std::string("missing ") + key);
      return *v;
    };
    s.name = required("name");
    s.home_url = required("home_url");
    if (!absolute_http(s.home_url)) invalid(id, "home_url must be an absolute http(s) URL");

    try {
      std::size_t used = 0;
      const std::string raw = required("leaning");
      s.leaning = std::stod(raw, &used);
      if (used != raw.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::logic_error&) {
      invalid(id, "leaning is not a number");
    }
    if (!std::isfinite(s.leaning) || s.leaning < -1.0 || s.leaning > 1.0) invalid(id, "leaning outside [-1, 1]");

    const std::string mainstream = section.get<std::string>("mainstream", "false");
    if (mainstream == "true" || mainstream == "yes" || mainstream == "1")
      s.mainstream = true;
    else if (mainstream == "false" || mainstream == "no" || mainstream == "0")
      s.mainstream = false;
    else
      invalid(id, "mainstream must be true or false");

    try {
      const std::string raw = section.get<std::string>("crawl_delay_ms", "1000");
      std::size_t used = 0;
      s.crawl_delay_ms = std::stoll(raw, &used);
      if (used != raw.size()) throw std::invalid_argument("trailing characters");
    } catch (const std::logic_error&) {
      invalid(id, "crawl_delay_ms is not an integer");
    }
    if (s.crawl_delay_ms < 0) invalid(id, "crawl_delay_ms must be non-negative");

    if (auto v = section.get_optional<std::string>("icon_ref")) s.icon_ref = *v;
    if (auto v = section.get_optional<std::string>("robots_url")) {
      if (!absolute_http(*v)) invalid(id, "robots_url must be an absolute http(s) URL");
      s.robots_url = *v;
    }
    if (auto v = section.get_optional<std::string>("fallback_sitemap")) {
      if (!absolute_http(*v)) invalid(id, "fallback_sitemap must be an absolute http(s) URL");
      s.fallback_sitemap = *v;
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<NewsSource> load_sources_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::InvalidConfig, "cannot read source config " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return load_sources(buf.str());
}

std::string serialize_sources(const std::vector<NewsSource>& sources) {
  std::ostringstream out;
  bool first = true;
  for (const auto& s : sources) {
    if (!first) out << '\n';
    first = false;
    out << '[' << s.id << "]\n"
        << "name = " << s.name << '\n'
        << "home_url = " << s.home_url << '\n'
        << "leaning = " << format_double(s.leaning) << '\n'
        << "mainstream = " << (s.mainstream ? "true" : "false") << '\n'
        << "crawl_delay_ms = " << s.crawl_delay_ms << '\n';
    if (s.icon_ref) out << "icon_ref = " << *s.icon_ref << '\n';
    if (s.robots_url) out << "robots_url = " << *s.robots_url << '\n';
    if (s.fallback_sitemap) out << "fallback_sitemap = " << *s.fallback_sitemap << '\n';
  }
  return out.str();
}

std::vector<NewsSource> default_sources() {
  auto make = [](std::string id, std::string name, std::string home, double leaning, bool mainstream) {
    NewsSource s;
    s.id = std::move(id);
    s.name = std::move(name);
    s.home_url = std::move(home);
    s.leaning = leaning;
    s.mainstream = mainstream;
    s.crawl_delay_ms = 1000;
    s.icon_ref = "icons/" + s.id + ".png";
    return s;
  };
  return {
      make("newyorker", "The New Yorker", "https://www.newyorker.com/", -0.8, false),
      make("nytimes", "The New York Times", "https://www.nytimes.com/", -0.5, true),
      make("bbc", "BBC", "https://www.bbc.com/", -0.2, true),
      make("foxnews", "Fox News", "https://www.foxnews.com/", 0.6, true),
      make("breitbart", "Breitbart", "https://www.breitbart.com/", 0.9, false),
  };
}

}  // namespace newsbias
