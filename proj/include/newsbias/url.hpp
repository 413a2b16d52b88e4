#pragma once

#include <optional>
#include <string>
#include <string_view>

namespace newsbias {

/// Absolute URL split into its RFC 3986 components. Only the pieces the
/// crawler needs; no percent-decoding is performed.
struct Url {
  std::string scheme;  // lowercase
  std::string host;    // lowercase
  std::optional<int> port;
  std::string path = "/";
  std::string query;  // without '?'
  std::string fragment;

  static std::optional<Url> parse(std::string_view text);

  bool is_http() const { return scheme == "http" || scheme == "https"; }
  int effective_port() const { return port.value_or(scheme == "https" ? 443 : 80); }
  /// `scheme://host[:port]`, default ports omitted.
  std::string origin() const;
  /// Path plus `?query`, the request target sent on the wire.
  std::string target() const;
  std::string to_string() const;
};

/// Resolves `ref` against the absolute `base`. Returns `ref` unchanged when it
/// is already absolute, and an empty string when `base` is not absolute.
std::string resolve_url(std::string_view base, std::string_view ref);

/// Lowercases scheme and host, drops default ports and the fragment, and
/// removes tracking query keys (utm_*, gwh, gwt, mtrref). Throws
/// Error{InvalidUrl} when the text is not an absolute http(s) URL.
std::string canonicalize_url(std::string_view text);

}  // namespace newsbias
