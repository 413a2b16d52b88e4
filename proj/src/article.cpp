#include "newsbias/article.hpp"

#include <cmath>

#include "newsbias/error.hpp"
#include "newsbias/hash.hpp"

namespace newsbias {

std::string article_id(std::string_view canonical_url) { return sha256_hex(canonical_url); }

nlohmann::ordered_json to_json(const Article& a) {
  nlohmann::ordered_json j;
  j["id"] = a.id;
  j["url"] = a.url;
  j["source_id"] = a.source_id;
  j["title"] = a.title;
  j["body"] = a.body;
  j["tags"] = a.tags;
  j["published_at"] = a.published_at ? nlohmann::ordered_json(format_timestamp(*a.published_at)) : nullptr;
  j["fetched_at"] = format_timestamp(a.fetched_at);
  j["bias_score"] = a.bias_score ? nlohmann::ordered_json(*a.bias_score) : nullptr;
  j["topic_distribution"] = a.topic_distribution ? nlohmann::ordered_json(*a.topic_distribution) : nullptr;
  return j;
}

Article article_from_json(const nlohmann::json& j) {
  auto corrupt = [](const std::string& what) -> Error { return Error(ErrorCode::CorruptState, "article record: " + what); };
  Article a;
  try {
    a.id = j.at("id").get<std::string>();
    a.url = j.at("url").get<std::string>();
    a.source_id = j.at("source_id").get<std::string>();
    a.title = j.at("title").get<std::string>();
    a.body = j.at("body").get<std::string>();
    a.tags = j.at("tags").get<std::vector<std::string>>();
    if (!j.at("published_at").is_null()) {
      a.published_at = parse_w3c_datetime(j.at("published_at").get<std::string>());
      if (!a.published_at) throw corrupt("bad published_at");
    }
    auto fetched = parse_w3c_datetime(j.at("fetched_at").get<std::string>());
    if (!fetched) throw corrupt("bad fetched_at");
    a.fetched_at = *fetched;
    if (!j.at("bias_score").is_null()) a.bias_score = j.at("bias_score").get<double>();
    if (!j.at("topic_distribution").is_null())
      a.topic_distribution = j.at("topic_distribution").get<std::vector<double>>();
  } catch (const nlohmann::json::exception& e) {
    throw corrupt(e.what());
  }
  if (a.id != article_id(a.url)) throw corrupt("id does not match url " + a.url);
  if (a.body.empty()) throw corrupt("empty body for " + a.url);
  if (a.bias_score && !(*a.bias_score >= 0.0 && *a.bias_score <= 1.0)) throw corrupt("bias_score outside [0,1]");
  if (a.topic_distribution) {
    double sum = 0.0;
    for (double p : *a.topic_distribution) {
      if (!(p >= 0.0)) throw corrupt("negative topic probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) throw corrupt("topic_distribution does not sum to 1");
  }
  return a;
}

std::vector<Article> read_store(const std::string& path) {
  std::vector<Article> out;
  std::ifstream in(path, std::ios::binary);
  if (!in) return out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    nlohmann::json j = nlohmann::json::parse(line, nullptr, false);
    if (j.is_discarded()) throw Error(ErrorCode::CorruptState, path + ":" + std::to_string(line_no) + ": not JSON");
    try {
      out.push_back(article_from_json(j));
    } catch (const Error& e) {
      throw Error(ErrorCode::CorruptState, path + ":" + std::to_string(line_no) + ": " + e.what());
    }
  }
  return out;
}

StoreWriter::StoreWriter(const std::string& path) : out_(path, std::ios::binary | std::ios::app) {
  if (!out_) throw Error(ErrorCode::MissingState, "cannot open article store " + path);
  worker_ = std::thread([this] { run(); });
}

StoreWriter::~StoreWriter() {
  {
    std::lock_guard lock(mu_);
    stop_ = true;
  }
  cv_.notify_all();
  worker_.join();
}

void StoreWriter::append(const Article& article) {
  std::string line = to_json(article).dump() + "\n";
  {
    std::lock_guard lock(mu_);
    queue_.push_back(std::move(line));
  }
  cv_.notify_one();
}

void StoreWriter::flush() {
  std::unique_lock lock(mu_);
  drained_.wait(lock, [this] { return queue_.empty() && !writing_; });
}

void StoreWriter::run() {
  std::unique_lock lock(mu_);
  for (;;) {
    cv_.wait(lock, [this] { return stop_ || !queue_.empty(); });
    while (!queue_.empty()) {
      std::string line = std::move(queue_.front());
      queue_.pop_front();
      writing_ = true;
      lock.unlock();
      out_ << line;
      out_.flush();
      lock.lock();
      writing_ = false;
    }
    drained_.notify_all();
    if (stop_) return;
  }
}

}  // namespace newsbias
