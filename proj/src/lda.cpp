#include "newsbias/lda.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>

#include "newsbias/error.hpp"
#include "newsbias/hash.hpp"

namespace newsbias {

namespace {

// Uniform double in [0, 1) from the top 53 bits; portable across standard
// libraries, unlike std::uniform_real_distribution.
double uniform01(std::mt19937_64& rng) { return static_cast<double>(rng() >> 11) * 0x1.0p-53; }

int sample_index(std::span<const double> cumulative, double u) {
  const double target = u * cumulative.back();
  const auto it = std::upper_bound(cumulative.begin(), cumulative.end(), target);
  return static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative.begin(),
                                                   static_cast<std::ptrdiff_t>(cumulative.size()) - 1));
}

class GibbsSampler {
 public:
  GibbsSampler(std::vector<std::vector<int>> docs, int topics, int vocab, double alpha, double beta,
               std::uint64_t seed)
      : docs_(std::move(docs)),
        k_(topics),
        v_(vocab),
        alpha_(alpha),
        beta_(beta),
        rng_(seed),
        doc_topic_(docs_.size() * static_cast<std::size_t>(topics), 0),
        topic_word_(static_cast<std::size_t>(topics) * static_cast<std::size_t>(vocab), 0),
        topic_totals_(static_cast<std::size_t>(topics), 0),
        cumulative_(static_cast<std::size_t>(topics), 0.0) {
    assignments_.resize(docs_.size());
    doc_lengths_.reserve(docs_.size());
    for (std::size_t d = 0; d < docs_.size(); ++d) {
      doc_lengths_.push_back(static_cast<int>(docs_[d].size()));
      assignments_[d].resize(docs_[d].size());
      for (std::size_t i = 0; i < docs_[d].size(); ++i) {
        const int z = std::min(static_cast<int>(uniform01(rng_) * k_), k_ - 1);
        assignments_[d][i] = z;
        add(d, docs_[d][i], z, +1);
      }
    }
  }

  void sweep() {
    const double v_beta = v_ * beta_;
    for (std::size_t d = 0; d < docs_.size(); ++d) {
      int* dt = &doc_topic_[d * static_cast<std::size_t>(k_)];
      for (std::size_t i = 0; i < docs_[d].size(); ++i) {
        const int w = docs_[d][i];
        add(d, w, assignments_[d][i], -1);
        double total = 0.0;
        for (int k = 0; k < k_; ++k) {
          total += (dt[k] + alpha_) * (topic_word_[idx(k, w)] + beta_) / (topic_totals_[static_cast<std::size_t>(k)] + v_beta);
          cumulative_[static_cast<std::size_t>(k)] = total;
        }
        const int z = sample_index(cumulative_, uniform01(rng_));
        assignments_[d][i] = z;
        add(d, w, z, +1);
      }
    }
  }

  // log p(w | z) with phi integrated out.
  double log_likelihood() const {
    double ll = k_ * (std::lgamma(v_ * beta_) - v_ * std::lgamma(beta_));
    for (int k = 0; k < k_; ++k) {
      for (int w = 0; w < v_; ++w) ll += std::lgamma(topic_word_[idx(k, w)] + beta_);
      ll -= std::lgamma(topic_totals_[static_cast<std::size_t>(k)] + v_ * beta_);
    }
    return ll;
  }

  GibbsSnapshot snapshot(int iteration, std::optional<double> ll) const {
    return {iteration, k_, doc_topic_, doc_lengths_, topic_totals_, ll};
  }

  std::vector<double> phi() const {
    std::vector<double> out(topic_word_.size());
    for (int k = 0; k < k_; ++k) {
      const double denom = topic_totals_[static_cast<std::size_t>(k)] + v_ * beta_;
      for (int w = 0; w < v_; ++w) out[idx(k, w)] = (topic_word_[idx(k, w)] + beta_) / denom;
    }
    return out;
  }

  std::vector<std::vector<double>> theta() const {
    std::vector<std::vector<double>> out(docs_.size(), std::vector<double>(static_cast<std::size_t>(k_)));
    for (std::size_t d = 0; d < docs_.size(); ++d) {
      const double denom = doc_lengths_[d] + k_ * alpha_;
      for (int k = 0; k < k_; ++k)
        out[d][static_cast<std::size_t>(k)] = (doc_topic_[d * static_cast<std::size_t>(k_) + static_cast<std::size_t>(k)] + alpha_) / denom;
    }
    return out;
  }

 private:
  std::size_t idx(int k, int w) const {
    return static_cast<std::size_t>(k) * static_cast<std::size_t>(v_) + static_cast<std::size_t>(w);
  }

  void add(std::size_t d, int w, int z, int delta) {
    doc_topic_[d * static_cast<std::size_t>(k_) + static_cast<std::size_t>(z)] += delta;
    topic_word_[idx(z, w)] += delta;
    topic_totals_[static_cast<std::size_t>(z)] += delta;
  }

  std::vector<std::vector<int>> docs_;
  int k_;
  int v_;
  double alpha_;
  double beta_;
  std::mt19937_64 rng_;
  std::vector<std::vector<int>> assignments_;
  std::vector<int> doc_lengths_;
  std::vector<int> doc_topic_;
  std::vector<int> topic_word_;
  std::vector<int> topic_totals_;
  std::vector<double> cumulative_;
};

}  // namespace

Vocabulary::Vocabulary(std::vector<std::string> words) {
  for (auto& w : words) add(w);
}

int Vocabulary::add(std::string_view word) {
  auto [it, inserted] = ids_.try_emplace(std::string(word), static_cast<int>(words_.size()));
  if (inserted) words_.emplace_back(word);
  return it->second;
}

std::optional<int> Vocabulary::find(std::string_view word) const {
  auto it = ids_.find(std::string(word));
  if (it == ids_.end()) return std::nullopt;
  return it->second;
}

LdaTraining train_lda(const std::vector<std::vector<std::string>>& corpus, const LdaParams& params,
                      const GibbsObserver& observer) {
  if (params.topics < 2) throw Error(ErrorCode::Usage, "topic count must be at least 2");
  if (!(params.alpha > 0.0) || !(params.beta > 0.0)) throw Error(ErrorCode::Usage, "alpha and beta must be positive");
  if (params.iterations < 0) throw Error(ErrorCode::Usage, "iterations must be non-negative");
  if (corpus.empty()) throw Error(ErrorCode::EmptyCorpus, "corpus has no documents");

  Vocabulary vocab;
  std::vector<std::vector<int>> docs;
  docs.reserve(corpus.size());
  for (std::size_t d = 0; d < corpus.size(); ++d) {
    if (corpus[d].empty()) throw Error(ErrorCode::EmptyCorpus, "document " + std::to_string(d) + " has no tokens");
    std::vector<int> ids;
    ids.reserve(corpus[d].size());
    for (const auto& w : corpus[d]) ids.push_back(vocab.add(w));
    docs.push_back(std::move(ids));
  }
  if (vocab.size() < static_cast<std::size_t>(params.topics))
    throw Error(ErrorCode::DegenerateVocabulary, "vocabulary of " + std::to_string(vocab.size()) +
                                                     " words is smaller than " + std::to_string(params.topics) +
                                                     " topics");

  GibbsSampler sampler(std::move(docs), params.topics, static_cast<int>(vocab.size()), params.alpha, params.beta,
                       params.seed);
  LdaTraining out;
  {
    const double ll = sampler.log_likelihood();
    out.log_likelihood.emplace_back(0, ll);
    if (observer) observer(sampler.snapshot(0, ll));
  }
  for (int it = 1; it <= params.iterations; ++it) {
    sampler.sweep();
    std::optional<double> ll;
    if (it == params.iterations || (params.likelihood_every > 0 && it % params.likelihood_every == 0)) {
      ll = sampler.log_likelihood();
      out.log_likelihood.emplace_back(it, *ll);
    }
    if (observer) observer(sampler.snapshot(it, ll));
  }

  out.model.topics = params.topics;
  out.model.vocabulary = std::move(vocab);
  out.model.alpha = params.alpha;
  out.model.beta = params.beta;
  out.model.phi = sampler.phi();
  out.model.seed = params.seed;
  out.model.iterations = params.iterations;
  out.model.infer_sweeps = params.infer_sweeps;
  out.theta = sampler.theta();
  return out;
}

std::vector<double> infer_topics(const TopicModel& model, const std::vector<std::string>& tokens) {
  std::vector<int> ids;
  std::uint64_t hash = 0xcbf29ce484222325ULL;
  for (const auto& t : tokens) {
    if (auto id = model.vocabulary.find(t)) {
      ids.push_back(*id);
      hash = fnv1a64(t, hash);
      hash = fnv1a64(std::string_view("\0", 1), hash);
    }
  }
  if (ids.empty()) throw Error(ErrorCode::NoKnownTokens, "document has no in-vocabulary tokens");

  const int k_count = model.topics;
  const std::size_t v = model.vocabulary.size();
  std::mt19937_64 rng(model.seed ^ hash);
  std::vector<int> counts(static_cast<std::size_t>(k_count), 0);
  std::vector<int> z(ids.size());
  for (std::size_t i = 0; i < ids.size(); ++i) {
    z[i] = std::min(static_cast<int>(uniform01(rng) * k_count), k_count - 1);
    ++counts[static_cast<std::size_t>(z[i])];
  }
  std::vector<double> cumulative(static_cast<std::size_t>(k_count));
  for (int sweep = 0; sweep < model.infer_sweeps; ++sweep) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      --counts[static_cast<std::size_t>(z[i])];
      double total = 0.0;
      for (int k = 0; k < k_count; ++k) {
        total += (counts[static_cast<std::size_t>(k)] + model.alpha) *
                 model.phi[static_cast<std::size_t>(k) * v + static_cast<std::size_t>(ids[i])];
        cumulative[static_cast<std::size_t>(k)] = total;
      }
      z[i] = sample_index(cumulative, uniform01(rng));
      ++counts[static_cast<std::size_t>(z[i])];
    }
  }
  std::vector<double> theta(static_cast<std::size_t>(k_count));
  const double denom = static_cast<double>(ids.size()) + k_count * model.alpha;
  for (int k = 0; k < k_count; ++k)
    theta[static_cast<std::size_t>(k)] = (counts[static_cast<std::size_t>(k)] + model.alpha) / denom;
  return theta;
}

std::size_t argmax(std::span<const double> values) {
  return static_cast<std::size_t>(std::max_element(values.begin(), values.end()) - values.begin());
}

double topic_purity(const std::vector<std::vector<double>>& theta, const std::vector<int>& labels) {
  if (theta.empty() || theta.size() != labels.size()) return 0.0;
  std::map<std::size_t, std::map<int, std::size_t>> clusters;
  for (std::size_t d = 0; d < theta.size(); ++d) ++clusters[argmax(theta[d])][labels[d]];
  std::size_t agree = 0;
  for (const auto& [topic, label_counts] : clusters) {
    std::size_t best = 0;
    for (const auto& [label, n] : label_counts) best = std::max(best, n);
    agree += best;
  }
  return static_cast<double>(agree) / static_cast<double>(theta.size());
}

}  // namespace newsbias
