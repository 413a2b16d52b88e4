#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "newsbias/article.hpp"
#include "newsbias/lda.hpp"
#include "newsbias/semantic_index.hpp"

namespace newsbias {

/// Text an article contributes to topic modelling: title then body.
std::vector<std::string> article_topic_tokens(const Article& article);

struct IndexBuild {
  TopicModel model;
  SemanticIndex index;
  std::size_t documents = 0;         // articles that reached the sampler
  std::size_t dropped_documents = 0; // no tokens left after filtering
  std::size_t vocabulary = 0;
  double initial_log_likelihood = 0.0;
  double final_log_likelihood = 0.0;
  /// Set when every trained article carries a tag with the label prefix.
  std::optional<double> purity;
};

struct IndexBuildOptions {
  LdaParams lda;
  std::size_t min_word_count = 2;
  /// Tags starting with this prefix are generator labels for purity.
  std::optional<std::string> label_prefix;
  GibbsObserver observer;
};

/// Tokenizes, drops corpus singletons, trains the model and indexes every
/// article that kept at least one token. Articles are processed in id order so
/// the result does not depend on store order.
IndexBuild build_index(const std::vector<Article>& articles, const IndexBuildOptions& options);

}  // namespace newsbias
