#include "newsbias/pipeline.hpp"

#include <algorithm>
#include <map>

#include "newsbias/error.hpp"
#include "newsbias/state.hpp"
#include "newsbias/topic_text.hpp"

namespace newsbias {

std::vector<std::string> article_topic_tokens(const Article& article) {
  return topic_tokens(article.title + "\n" + article.body);
}

IndexBuild build_index(const std::vector<Article>& articles, const IndexBuildOptions& options) {
  std::vector<const Article*> ordered;
  ordered.reserve(articles.size());
  for (const auto& a : articles) ordered.push_back(&a);
  std::sort(ordered.begin(), ordered.end(), [](const Article* a, const Article* b) { return a->id < b->id; });
  ordered.erase(std::unique(ordered.begin(), ordered.end(),
                            [](const Article* a, const Article* b) { return a->id == b->id; }),
                ordered.end());
  if (ordered.empty()) throw Error(ErrorCode::EmptyCorpus, "article store is empty");

  std::vector<std::vector<std::string>> docs;
  docs.reserve(ordered.size());
  for (const Article* a : ordered) docs.push_back(article_topic_tokens(*a));
  drop_rare_words(docs, options.min_word_count);

  IndexBuild out;
  std::vector<std::vector<std::string>> corpus;
  std::vector<const Article*> kept;
  for (std::size_t i = 0; i < docs.size(); ++i) {
    if (docs[i].empty()) {
      ++out.dropped_documents;
      continue;
    }
    corpus.push_back(std::move(docs[i]));
    kept.push_back(ordered[i]);
  }
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "no article has tokens left after filtering");

  LdaTraining trained = train_lda(corpus, options.lda, options.observer);
  out.documents = corpus.size();
  out.vocabulary = trained.model.vocabulary.size();
  out.initial_log_likelihood = trained.log_likelihood.front().second;
  out.final_log_likelihood = trained.log_likelihood.back().second;
  out.index.model_ref = model_fingerprint(trained.model);
  for (std::size_t i = 0; i < kept.size(); ++i) {
    out.index.entries.push_back(
        {kept[i]->id, kept[i]->source_id, kept[i]->url, kept[i]->published_at, std::move(trained.theta[i])});
  }

  if (options.label_prefix) {
    std::map<std::string, int> label_ids;
    std::vector<int> labels;
    for (const Article* a : kept) {
      auto tag = std::find_if(a->tags.begin(), a->tags.end(),
                              [&](const std::string& t) { return t.starts_with(*options.label_prefix); });
      if (tag == a->tags.end()) {
        labels.clear();
        break;
      }
      labels.push_back(label_ids.try_emplace(*tag, static_cast<int>(label_ids.size())).first->second);
    }
    if (!labels.empty()) {
      std::vector<std::vector<double>> theta;
      for (const auto& e : out.index.entries) theta.push_back(e.theta);
      out.purity = topic_purity(theta, labels);
    }
  }
  out.model = std::move(trained.model);
  return out;
}

}  // namespace newsbias
