#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

namespace newsbias {

class Vocabulary {
 public:
  Vocabulary() = default;
  explicit Vocabulary(std::vector<std::string> words);

  /// Returns the id, adding the word when unseen.
  int add(std::string_view word);
  std::optional<int> find(std::string_view word) const;
  const std::string& word(int id) const { return words_[static_cast<std::size_t>(id)]; }
  const std::vector<std::string>& words() const { return words_; }
  std::size_t size() const { return words_.size(); }

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> ids_;
};

struct LdaParams {
  int topics = 20;
  double alpha = 50.0 / 20.0;
  double beta = 0.01;
  int iterations = 500;
  std::uint64_t seed = 42;
  int infer_sweeps = 50;
  /// Record the corpus log-likelihood after every `likelihood_every` sweeps;
  /// 0 records only the initial and final values.
  int likelihood_every = 0;

  /// Defaults with alpha tied to the topic count (50 / K).
  static LdaParams with_topics(int k) {
    LdaParams p;
    p.topics = k;
    p.alpha = 50.0 / k;
    return p;
  }
};

/// Trained topic-word distributions. Immutable after training.
struct TopicModel {
  int topics = 0;
  Vocabulary vocabulary;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<double> phi;  // topics x vocabulary, row-major, rows sum to 1
  std::uint64_t seed = 0;
  int iterations = 0;
  int infer_sweeps = 50;

  std::span<const double> topic(int k) const {
    return {phi.data() + static_cast<std::size_t>(k) * vocabulary.size(), vocabulary.size()};
  }
};

/// Sampler state handed to an observer after initialisation (iteration 0) and
/// after every sweep.
struct GibbsSnapshot {
  int iteration = 0;
  int topics = 0;
  std::span<const int> doc_topic;     // documents x topics
  std::span<const int> doc_lengths;
  std::span<const int> topic_totals;  // topics
  std::optional<double> log_likelihood;
};

using GibbsObserver = std::function<void(const GibbsSnapshot&)>;

struct LdaTraining {
  TopicModel model;
  std::vector<std::vector<double>> theta;  // per document
  /// (iteration, log p(w | z)) pairs, iteration 0 being the random start.
  std::vector<std::pair<int, double>> log_likelihood;
};

/// Collapsed Gibbs sampling over documents of word tokens. The vocabulary is
/// every distinct token, in first-seen order. Same corpus, params and seed give
/// bitwise identical output.
///
/// Throws Error{EmptyCorpus} for no documents or a document with no tokens,
/// Error{DegenerateVocabulary} when the vocabulary is smaller than the topic
/// count, and Error{Usage} for K < 2 or non-positive priors.
LdaTraining train_lda(const std::vector<std::vector<std::string>>& corpus, const LdaParams& params,
                      const GibbsObserver& observer = {});

/// Folds a new document into a frozen model. Out-of-vocabulary tokens are
/// dropped; the sampler seed mixes model.seed with a hash of the known tokens
/// so repeated calls agree. Throws Error{NoKnownTokens}.
std::vector<double> infer_topics(const TopicModel& model, const std::vector<std::string>& tokens);

/// Fraction of documents whose argmax topic agrees with the majority label of
/// that topic's documents.
double topic_purity(const std::vector<std::vector<double>>& theta, const std::vector<int>& labels);

std::size_t argmax(std::span<const double> values);

}  // namespace newsbias
