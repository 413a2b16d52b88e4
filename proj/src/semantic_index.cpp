#include "newsbias/semantic_index.hpp"

#include <algorithm>
#include <cmath>

#include "newsbias/error.hpp"
#include "newsbias/url.hpp"

namespace newsbias {

double cosine_similarity(std::span<const double> p, std::span<const double> q) {
  if (p.size() != q.size())
    throw Error(ErrorCode::DimensionMismatch,
                "topic vectors of length " + std::to_string(p.size()) + " and " + std::to_string(q.size()));
  double dot = 0.0, pp = 0.0, qq = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i) {
    dot += p[i] * q[i];
    pp += p[i] * p[i];
    qq += q[i] * q[i];
  }
  if (pp == 0.0 || qq == 0.0) return 0.0;
  return std::clamp(dot / std::sqrt(pp * qq), 0.0, 1.0);
}

bool ranks_above(double sim_a, const IndexEntry& a, double sim_b, const IndexEntry& b) {
  if (std::abs(sim_a - sim_b) > kSimilarityTolerance) return sim_a > sim_b;
  if (a.published_at != b.published_at) {
    if (!a.published_at) return false;
    if (!b.published_at) return true;
    return *a.published_at > *b.published_at;
  }
  return a.article_id < b.article_id;
}

std::map<std::string, Match> query_similar(const SemanticIndex& index, std::span<const double> query_theta,
                                           const std::optional<std::string>& exclude_url, double min_similarity) {
  std::optional<std::string> excluded;
  if (exclude_url) {
    try {
      excluded = canonicalize_url(*exclude_url);
    } catch (const Error&) {
      excluded = *exclude_url;
    }
  }

  struct Best {
    const IndexEntry* entry;
    double similarity;
  };
  std::map<std::string, Best> best;
  for (const auto& entry : index.entries) {
    if (excluded && entry.url == *excluded) continue;
    const double sim = cosine_similarity(entry.theta, query_theta);
    auto [it, inserted] = best.try_emplace(entry.source_id, Best{&entry, sim});
    if (!inserted && ranks_above(sim, entry, it->second.similarity, *it->second.entry)) it->second = {&entry, sim};
  }

  std::map<std::string, Match> out;
  for (const auto& [source, b] : best)
    if (b.similarity >= min_similarity) out.emplace(source, Match{b.entry->article_id, b.similarity});
  return out;
}

}  // namespace newsbias
