#pragma once

#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "newsbias/time.hpp"

namespace newsbias {

struct IndexEntry {
  std::string article_id;
  std::string source_id;
  std::string url;  // canonical
  std::optional<Timestamp> published_at;
  std::vector<double> theta;
};

/// Topic distributions of indexed articles, tied to the model that produced
/// them through `model_ref`.
struct SemanticIndex {
  std::vector<IndexEntry> entries;
  std::string model_ref;
};

/// dot(p, q) / (|p| |q|), clamped to [0, 1]. Zero vectors give 0.
/// Throws Error{DimensionMismatch}.
double cosine_similarity(std::span<const double> p, std::span<const double> q);

struct Match {
  std::string article_id;
  double similarity = 0.0;
};

/// Similarities closer than this are ties; summation order alone can move a
/// cosine by a few ulps.
inline constexpr double kSimilarityTolerance = 1e-12;

/// Best match per source. Among equal similarities the newer published_at
/// wins (undated counts as oldest), then the smaller article id. The entry
/// whose url equals `exclude_url` after canonicalisation is never returned,
/// and sources whose best similarity is below `min_similarity` are omitted.
std::map<std::string, Match> query_similar(const SemanticIndex& index, std::span<const double> query_theta,
                                           const std::optional<std::string>& exclude_url = std::nullopt,
                                           double min_similarity = 0.0);

/// True when (similarity, published_at, article_id) of `a` ranks above `b`.
bool ranks_above(double sim_a, const IndexEntry& a, double sim_b, const IndexEntry& b);

}  // namespace newsbias
