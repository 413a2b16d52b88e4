#include "newsbias/url.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <vector>

#include "newsbias/error.hpp"

namespace newsbias {

namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// RFC 3986 section 5.2.4.
std::string remove_dot_segments(std::string_view path) {
  std::vector<std::string_view> out;
  const bool absolute = !path.empty() && path.front() == '/';
  const bool trailing_slash = !path.empty() && (path.back() == '/' || path.ends_with("/.") ||
                                                path.ends_with("/..") || path == "." || path == "..");
  std::size_t pos = absolute ? 1 : 0;
  while (pos <= path.size()) {
    std::size_t next = path.find('/', pos);
    if (next == std::string_view::npos) next = path.size();
    std::string_view seg = path.substr(pos, next - pos);
    if (seg == "..") {
      if (!out.empty()) out.pop_back();
    } else if (seg != "." && !seg.empty()) {
      out.push_back(seg);
    }
    pos = next + 1;
  }
  std::string result = absolute ? "/" : "";
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (i) result += '/';
    result += out[i];
  }
  if (trailing_slash && !out.empty()) result += '/';
  return result;
}

bool is_tracking_key(std::string_view key) {
  const std::string k = lower(key);
  return k.starts_with("utm_") || k == "gwh" || k == "gwt" || k == "mtrref";
}

}  // namespace

std::optional<Url> Url::parse(std::string_view text) {
  text = trim(text);
  const auto colon = text.find(':');
  if (colon == std::string_view::npos || colon == 0) return std::nullopt;
  const std::string_view scheme = text.substr(0, colon);
  if (!std::isalpha(static_cast<unsigned char>(scheme.front()))) return std::nullopt;
  for (char c : scheme)
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '+' && c != '-' && c != '.')
      return std::nullopt;
  std::string_view rest = text.substr(colon + 1);
  if (!rest.starts_with("//")) return std::nullopt;
  rest.remove_prefix(2);

  Url url;
  url.scheme = lower(scheme);
  const auto authority_end = rest.find_first_of("/?#");
  std::string_view authority = rest.substr(0, authority_end);
  rest = authority_end == std::string_view::npos ? std::string_view{} : rest.substr(authority_end);
  if (const auto at = authority.rfind('@'); at != std::string_view::npos)
    authority.remove_prefix(at + 1);
  std::string_view host = authority;
  if (const auto pc = authority.rfind(':');
      pc != std::string_view::npos && authority.find(']', pc) == std::string_view::npos) {
    host = authority.substr(0, pc);
    std::string_view port_text = authority.substr(pc + 1);
    if (!port_text.empty()) {
      int port = 0;
      auto [ptr, ec] = std::from_chars(port_text.data(), port_text.data() + port_text.size(), port);
      if (ec != std::errc{} || ptr != port_text.data() + port_text.size() || port <= 0 || port > 65535)
        return std::nullopt;
      url.port = port;
    }
  }
  if (host.empty()) return std::nullopt;
  url.host = lower(host);

  if (const auto hash = rest.find('#'); hash != std::string_view::npos) {
    url.fragment = std::string(rest.substr(hash + 1));
    rest = rest.substr(0, hash);
  }
  if (const auto q = rest.find('?'); q != std::string_view::npos) {
    url.query = std::string(rest.substr(q + 1));
    rest = rest.substr(0, q);
  }
  url.path = rest.empty() ? "/" : std::string(rest);
  return url;
}

std::string Url::origin() const {
  std::string out = scheme + "://" + host;
  const bool default_port = !port || (scheme == "http" && *port == 80) || (scheme == "https" && *port == 443);
  if (!default_port) out += ":" + std::to_string(*port);
  return out;
}

std::string Url::target() const { return query.empty() ? path : path + "?" + query; }

std::string Url::to_string() const {
  std::string out = origin() + target();
  if (!fragment.empty()) out += "#" + fragment;
  return out;
}

std::string resolve_url(std::string_view base_text, std::string_view ref) {
  ref = trim(ref);
  if (auto absolute = Url::parse(ref)) return std::string(ref);
  auto base = Url::parse(base_text);
  if (!base) return {};
  if (ref.starts_with("//")) {
    auto r = Url::parse(base->scheme + ":" + std::string(ref));
    return r ? r->to_string() : std::string{};
  }
  Url out = *base;
  out.fragment.clear();
  std::string_view r = ref;
  if (const auto hash = r.find('#'); hash != std::string_view::npos) {
    out.fragment = std::string(r.substr(hash + 1));
    r = r.substr(0, hash);
  }
  if (r.empty()) return out.to_string();
  std::string_view path = r;
  std::optional<std::string> query;
  if (const auto q = r.find('?'); q != std::string_view::npos) {
    query = std::string(r.substr(q + 1));
    path = r.substr(0, q);
  }
  if (path.empty()) {
    out.query = query.value_or(base->query);
    return out.to_string();
  }
  std::string merged;
  if (path.front() == '/') {
    merged = std::string(path);
  } else {
    const auto slash = base->path.rfind('/');
    merged = (slash == std::string::npos ? std::string("/") : base->path.substr(0, slash + 1)) + std::string(path);
  }
  out.path = remove_dot_segments(merged);
  if (out.path.empty()) out.path = "/";
  out.query = query.value_or("");
  return out.to_string();
}

std::string canonicalize_url(std::string_view text) {
  auto url = Url::parse(text);
  if (!url || !url->is_http()) throw Error(ErrorCode::InvalidUrl, "not an absolute http(s) URL: " + std::string(text));
  url->fragment.clear();
  if (url->port && *url->port == (url->scheme == "https" ? 443 : 80)) url->port.reset();
  if (!url->query.empty()) {
    std::string kept;
    std::string_view q = url->query;
    while (!q.empty()) {
      const auto amp = q.find('&');
      std::string_view pair = q.substr(0, amp);
      q = amp == std::string_view::npos ? std::string_view{} : q.substr(amp + 1);
      if (pair.empty()) continue;
      if (is_tracking_key(pair.substr(0, pair.find('=')))) continue;
      if (!kept.empty()) kept += '&';
      kept += pair;
    }
    url->query = std::move(kept);
  }
  return url->to_string();
}

}  // namespace newsbias
