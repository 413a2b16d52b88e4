#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace newsbias {

struct ExtractedArticle {
  std::string title;
  std::string body;  // paragraphs joined by '\n'
  std::vector<std::string> tags;
};

/// Heuristic article extraction.
///
/// The title comes from `<title>`, falling back to the `og:title` meta.
/// The body is the text of `<p>` elements outside boilerplate containers
/// (script, style, nav, header, footer, aside, form, ... and any element whose
/// class or id names a paywall/share/promo block); link-dense paragraphs are
/// dropped, and paragraphs inside `<article>` win when there are any. Pages
/// without paragraphs fall back to visible block text. Tags come from the
/// keywords, news_keywords and article:tag metas, comma split, trimmed and
/// lowercased.
///
/// Throws Error{NoExtractableText} when the body holds no sentence.
ExtractedArticle extract_article(std::string_view html, std::string_view url);

/// Decodes named and numeric character references that commonly occur in
/// news markup. Unknown references pass through unchanged.
std::string decode_html_entities(std::string_view text);

}  // namespace newsbias
