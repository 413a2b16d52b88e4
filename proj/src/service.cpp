#define CPPHTTPLIB_OPENSSL_SUPPORT
#include "httplib.h"

#include "newsbias/service.hpp"

#include <algorithm>

#include "newsbias/crawler.hpp"
#include "newsbias/error.hpp"
#include "newsbias/html_extract.hpp"
#include "newsbias/pipeline.hpp"
#include "newsbias/url.hpp"

namespace newsbias {

using nlohmann::json;
using nlohmann::ordered_json;

nlohmann::ordered_json to_json(const BiasReport& r) {
  ordered_json j;
  j["query_url"] = r.query_url;
  j["bias_score"] = r.bias_score;
  j["sentences_total"] = r.sentences_total;
  j["sentences_biased"] = r.sentences_biased;
  ordered_json recs = ordered_json::array();
  for (const auto& rec : r.recommendations) {
    ordered_json item;
    item["url"] = rec.url;
    item["source_id"] = rec.source_id;
    item["source_name"] = rec.source_name;
    item["leaning"] = rec.leaning;
    item["bias_score"] = rec.bias_score;
    item["similarity"] = rec.similarity;
    item["title"] = rec.title;
    recs.push_back(std::move(item));
  }
  j["recommendations"] = std::move(recs);
  j["analyzed_at"] = format_timestamp(r.analyzed_at);
  j["topic_matched"] = r.topic_matched;
  return j;
}

Recommender::Recommender(std::shared_ptr<const ServiceState> state, Fetcher& fetcher, Clock& clock,
                         ServiceOptions options)
    : state_(std::move(state)), fetcher_(fetcher), clock_(clock), options_(options) {}

std::shared_ptr<const ServiceState> Recommender::state() const {
  std::lock_guard lock(state_mu_);
  return state_;
}

void Recommender::replace_state(std::shared_ptr<const ServiceState> state) {
  {
    std::lock_guard lock(state_mu_);
    state_ = std::move(state);
  }
  std::lock_guard lock(cache_mu_);
  cache_.clear();
}

BiasReport Recommender::analyze_url(const std::string& url) {
  const std::string canonical = canonicalize_url(url);
  const auto snapshot = state();
  return analyze_with(*snapshot, canonical);
}

BiasReport Recommender::analyze_with(const ServiceState& state, const std::string& canonical) {
  FetchResponse page;
  try {
    page = fetcher_.fetch(canonical);
  } catch (const Error& e) {
    throw Error(ErrorCode::FetchFailed, e.what());
  }
  if (page.status >= 400) throw Error(ErrorCode::FetchFailed, canonical + " returned HTTP " + std::to_string(page.status));

  ExtractedArticle extracted;
  try {
    extracted = extract_article(page.body, canonical);
  } catch (const Error& e) {
    if (e.code() == ErrorCode::NoExtractableText) throw Error(ErrorCode::NotAnArticle, e.what());
    throw;
  }

  BiasReport report;
  report.query_url = canonical;
  const BiasScore score = score_text(extracted.body, state.lexicon);
  report.bias_score = score.score;
  report.sentences_total = score.total;
  report.sentences_biased = score.biased;
  report.analyzed_at = clock_.now();

  if (!state.model) {
    report.topic_matched = false;
    return report;
  }
  Article query;
  query.title = extracted.title;
  query.body = extracted.body;
  std::vector<double> theta;
  try {
    theta = infer_topics(*state.model, article_topic_tokens(query));
  } catch (const Error& e) {
    if (e.code() != ErrorCode::NoKnownTokens) throw;
    report.topic_matched = false;
    return report;
  }

  for (const auto& [source_id, match] : query_similar(state.index, theta, canonical, options_.min_similarity)) {
    const NewsSource* source = state.source(source_id);
    auto article = state.articles.find(match.article_id);
    if (!source || article == state.articles.end()) continue;
    Recommendation rec;
    rec.url = article->second.url;
    rec.source_id = source_id;
    rec.source_name = source->name;
    rec.leaning = source->leaning;
    rec.bias_score = article->second.bias_score ? *article->second.bias_score
                                                : score_text(article->second.body, state.lexicon).score;
    rec.similarity = match.similarity;
    rec.title = article->second.title;
    report.recommendations.push_back(std::move(rec));
  }
  std::stable_sort(report.recommendations.begin(), report.recommendations.end(),
                   [](const Recommendation& a, const Recommendation& b) {
                     return a.leaning != b.leaning ? a.leaning < b.leaning : a.source_id < b.source_id;
                   });
  return report;
}

std::string Recommender::analyze_json(const std::string& url) {
  const std::string canonical = canonicalize_url(url);
  {
    std::lock_guard lock(cache_mu_);
    if (auto it = cache_.find(canonical); it != cache_.end()) {
      if (clock_.now() < it->second.expires) return it->second.body;
      cache_.erase(it);
    }
  }
  const auto snapshot = state();
  std::string body = to_json(analyze_with(*snapshot, canonical)).dump();
  std::lock_guard lock(cache_mu_);
  if (state() == snapshot) cache_.insert_or_assign(canonical, CacheEntry{clock_.now() + options_.cache_ttl, body});
  return body;
}

namespace {

HttpResponse json_response(int status, const ordered_json& j) { return {status, j.dump(), "application/json"}; }

HttpResponse error_response(int status, std::string_view error, const std::string& reason) {
  ordered_json j;
  j["error"] = error;
  j["reason"] = reason;
  return json_response(status, j);
}

std::optional<json> parse_body(std::string_view body) {
  json j = json::parse(body, nullptr, false);
  if (j.is_discarded() || !j.is_object()) return std::nullopt;
  return j;
}

}  // namespace

RecommendService::RecommendService(ServiceContext context, std::shared_ptr<const ServiceState> state,
                                   ServiceOptions options)
    : context_(std::move(context)),
      recommender_(std::move(state), context_.fetcher, context_.clock, options),
      gate_(context_.clock) {}

RecommendService::~RecommendService() { stop(); }

HttpResponse RecommendService::handle(std::string_view method, std::string_view path, std::string_view body) {
  try {
    if (method == "OPTIONS") return {204, "", "text/plain"};
    if (path == "/v1/analyze" && method == "POST") return analyze(body);
    if (path == "/v1/sources" && method == "GET") return sources();
    if (path == "/v1/health" && method == "GET") return health();
    if (path == "/v1/admin/crawl" && method == "POST") return admin_crawl(body);
    if (path == "/v1/admin/train" && method == "POST") return admin_train(body);
    if (path == "/v1/analyze" || path == "/v1/sources" || path == "/v1/health" || path == "/v1/admin/crawl" ||
        path == "/v1/admin/train")
      return error_response(405, "MethodNotAllowed", std::string(method) + " not supported on " + std::string(path));
    return error_response(404, "NotFound", "no route for " + std::string(path));
  } catch (const Error& e) {
    return error_response(500, to_string(e.code()), e.what());
  } catch (const std::exception& e) {
    return error_response(500, "Internal", e.what());
  }
}

HttpResponse RecommendService::analyze(std::string_view body) {
  auto request = parse_body(body);
  if (!request || !request->contains("url") || !(*request)["url"].is_string())
    return error_response(400, "BadRequest", "expected {\"url\": \"<string>\"}");
  try {
    return {200, recommender_.analyze_json((*request)["url"].get<std::string>()), "application/json"};
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::InvalidUrl: return error_response(400, "InvalidUrl", e.what());
      case ErrorCode::FetchFailed:
      case ErrorCode::NotAnArticle: return error_response(422, to_string(e.code()), e.what());
      default: throw;
    }
  }
}

HttpResponse RecommendService::sources() const {
  const auto state = recommender_.state();
  ordered_json list = ordered_json::array();
  for (const auto& s : state->sources) {
    ordered_json item;
    item["id"] = s.id;
    item["name"] = s.name;
    item["leaning"] = s.leaning;
    item["mainstream"] = s.mainstream;
    item["icon_ref"] = s.icon_ref ? ordered_json(*s.icon_ref) : nullptr;
    list.push_back(std::move(item));
  }
  return json_response(200, list);
}

HttpResponse RecommendService::health() const {
  const auto state = recommender_.state();
  ordered_json j;
  j["status"] = "ok";
  j["articles"] = state->articles.size();
  j["model_loaded"] = state->model.has_value();
  return json_response(200, j);
}

HttpResponse RecommendService::admin_crawl(std::string_view body) {
  auto request = parse_body(body);
  if (!request || !request->contains("max_urls") || !(*request)["max_urls"].is_number_integer() ||
      (*request)["max_urls"].get<long long>() < 1)
    return error_response(400, "BadRequest", "expected {\"source_id\"?: string, \"max_urls\": integer >= 1}");

  std::lock_guard admin(admin_mu_);
  const auto state = recommender_.state();
  std::vector<NewsSource> selected;
  if (request->contains("source_id")) {
    if (!(*request)["source_id"].is_string()) return error_response(400, "BadRequest", "source_id must be a string");
    const auto id = (*request)["source_id"].get<std::string>();
    const NewsSource* s = state->source(id);
    if (!s) return error_response(400, "UnknownSource", "no configured source " + id);
    selected.push_back(*s);
  } else {
    selected = state->sources;
  }

  CrawlOptions options;
  options.max_urls = (*request)["max_urls"].get<std::size_t>();
  options.lexicon = &state->lexicon;
  for (const auto& [id, a] : state->articles) options.known_ids.insert(id);
  CrawlContext ctx{context_.fetcher, gate_, context_.clock};
  auto results = crawl_sources(selected, ctx, options);

  auto next = std::make_shared<ServiceState>(*state);
  ordered_json summary;
  ordered_json per_source = ordered_json::array();
  std::size_t added = 0;
  {
    std::filesystem::create_directories(context_.paths.dir);
    StoreWriter writer(context_.paths.store().string());
    for (const auto& r : results) {
      for (const auto& a : r.articles) {
        if (!next->articles.emplace(a.id, a).second) continue;
        writer.append(a);
        ++added;
      }
      ordered_json item;
      item["source_id"] = r.source_id;
      item["articles"] = r.articles.size();
      item["candidates"] = r.candidates;
      item["skipped_extraction"] = r.skipped_extraction;
      item["skipped_known"] = r.skipped_known;
      item["errors"] = r.errors.size();
      per_source.push_back(std::move(item));
    }
    writer.flush();
  }
  summary["sources"] = std::move(per_source);
  summary["added"] = added;
  summary["articles"] = next->articles.size();
  recommender_.replace_state(std::move(next));
  return json_response(200, summary);
}

HttpResponse RecommendService::admin_train(std::string_view body) {
  auto request = parse_body(body);
  if (!request) return error_response(400, "BadRequest", "expected a JSON object");
  IndexBuildOptions options;
  try {
    const int topics = request->value("topics", 20);
    options.lda = LdaParams::with_topics(topics);
    options.lda.iterations = request->value("iterations", options.lda.iterations);
    options.lda.seed = request->value("seed", options.lda.seed);
  } catch (const json::exception& e) {
    return error_response(400, "BadRequest", e.what());
  }

  std::lock_guard admin(admin_mu_);
  const auto state = recommender_.state();
  std::vector<Article> articles;
  articles.reserve(state->articles.size());
  for (const auto& [id, a] : state->articles) articles.push_back(a);
  IndexBuild built;
  try {
    built = build_index(articles, options);
  } catch (const Error& e) {
    switch (e.code()) {
      case ErrorCode::EmptyCorpus:
      case ErrorCode::DegenerateVocabulary:
      case ErrorCode::Usage: return error_response(422, to_string(e.code()), e.what());
      default: throw;
    }
  }
  std::filesystem::create_directories(context_.paths.dir);
  save_model(context_.paths.model(), built.model);
  save_index(context_.paths.index(), built.index);

  auto next = std::make_shared<ServiceState>(*state);
  for (const auto& e : built.index.entries)
    if (auto it = next->articles.find(e.article_id); it != next->articles.end()) it->second.topic_distribution = e.theta;
  ordered_json summary;
  summary["documents"] = built.documents;
  summary["dropped_documents"] = built.dropped_documents;
  summary["vocabulary"] = built.vocabulary;
  summary["topics"] = built.model.topics;
  summary["iterations"] = built.model.iterations;
  summary["seed"] = built.model.seed;
  summary["initial_log_likelihood"] = built.initial_log_likelihood;
  summary["final_log_likelihood"] = built.final_log_likelihood;
  next->model = std::move(built.model);
  next->index = std::move(built.index);
  recommender_.replace_state(std::move(next));
  return json_response(200, summary);
}

int RecommendService::bind(const std::string& host, int port) {
  server_ = std::make_unique<httplib::Server>();
  auto forward = [this](const httplib::Request& req, httplib::Response& res) {
    HttpResponse out = handle(req.method, req.path, req.body);
    res.status = out.status;
    res.set_content(out.body, out.content_type);
  };
  for (const char* path : {"/v1/analyze", "/v1/sources", "/v1/health", "/v1/admin/crawl", "/v1/admin/train"}) {
    server_->Get(path, forward);
    server_->Post(path, forward);
    server_->Options(path, forward);
  }
  server_->set_error_handler([](const httplib::Request& req, httplib::Response& res) {
    if (!res.body.empty()) return;
    res.set_content(ordered_json{{"error", "NotFound"}, {"reason", "no route for " + req.path}}.dump(),
                    "application/json");
  });
  server_->set_default_headers({{"Access-Control-Allow-Origin", "*"},
                                {"Access-Control-Allow-Methods", "GET, POST, OPTIONS"},
                                {"Access-Control-Allow-Headers", "Content-Type"}});
  const int bound = port == 0 ? server_->bind_to_any_port(host) : (server_->bind_to_port(host, port) ? port : -1);
  if (bound < 0) throw Error(ErrorCode::Usage, "cannot listen on " + host + ":" + std::to_string(port));
  return bound;
}

void RecommendService::listen() {
  if (server_) server_->listen_after_bind();
}

void RecommendService::stop() {
  if (server_) server_->stop();
}

}  // namespace newsbias
