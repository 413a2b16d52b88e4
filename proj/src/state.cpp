#include "newsbias/state.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "newsbias/error.hpp"
#include "newsbias/hash.hpp"

namespace newsbias {

using nlohmann::json;
using nlohmann::ordered_json;

namespace {

[[noreturn]] void corrupt(const std::string& what) { throw Error(ErrorCode::CorruptState, what); }

ordered_json model_json(const TopicModel& m) {
  ordered_json j;
  j["topics"] = m.topics;
  j["alpha"] = m.alpha;
  j["beta"] = m.beta;
  j["seed"] = m.seed;
  j["iterations"] = m.iterations;
  j["infer_sweeps"] = m.infer_sweeps;
  j["vocabulary"] = m.vocabulary.words();
  j["phi"] = m.phi;
  return j;
}

}  // namespace

const NewsSource* ServiceState::source(std::string_view id) const {
  for (const auto& s : sources)
    if (s.id == id) return &s;
  return nullptr;
}

std::string model_fingerprint(const TopicModel& model) { return sha256_hex(model_json(model).dump()); }

std::string encode_state_file(std::string_view kind, const std::string& payload) {
  return "newsbias " + std::string(kind) + " v" + std::to_string(kStateVersion) + " sha256=" + sha256_hex(payload) +
         "\n" + payload;
}

std::string decode_state_file(std::string_view kind, std::string_view contents) {
  const auto nl = contents.find('\n');
  if (nl == std::string_view::npos) corrupt(std::string(kind) + " state: missing header");
  std::istringstream header{std::string(contents.substr(0, nl))};
  std::string magic, file_kind, version, digest;
  header >> magic >> file_kind >> version >> digest;
  if (magic != "newsbias" || !version.starts_with("v") || !digest.starts_with("sha256="))
    corrupt(std::string(kind) + " state: bad header");
  if (file_kind != kind) corrupt(std::string(kind) + " state: file holds " + file_kind);
  if (version != "v" + std::to_string(kStateVersion))
    throw Error(ErrorCode::VersionMismatch, std::string(kind) + " state has schema " + version + ", expected v" +
                                                std::to_string(kStateVersion));
  std::string payload(contents.substr(nl + 1));
  if (sha256_hex(payload) != digest.substr(7)) corrupt(std::string(kind) + " state: checksum mismatch");
  return payload;
}

std::string serialize_model(const TopicModel& model) { return encode_state_file("model", model_json(model).dump()); }

TopicModel deserialize_model(std::string_view contents) {
  const json j = json::parse(decode_state_file("model", contents), nullptr, false);
  if (j.is_discarded()) corrupt("model state: payload is not JSON");
  TopicModel m;
  try {
    m.topics = j.at("topics").get<int>();
    m.alpha = j.at("alpha").get<double>();
    m.beta = j.at("beta").get<double>();
    m.seed = j.at("seed").get<std::uint64_t>();
    m.iterations = j.at("iterations").get<int>();
    m.infer_sweeps = j.at("infer_sweeps").get<int>();
    m.vocabulary = Vocabulary(j.at("vocabulary").get<std::vector<std::string>>());
    m.phi = j.at("phi").get<std::vector<double>>();
  } catch (const json::exception& e) {
    corrupt(std::string("model state: ") + e.what());
  }
  const std::size_t v = m.vocabulary.size();
  if (m.topics < 2 || !(m.alpha > 0) || !(m.beta > 0) || v == 0 || m.phi.size() != v * static_cast<std::size_t>(m.topics))
    corrupt("model state: inconsistent dimensions or priors");
  for (int k = 0; k < m.topics; ++k) {
    double sum = 0.0;
    for (double p : m.topic(k)) {
      if (!(p >= 0.0)) corrupt("model state: negative topic-word probability");
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) corrupt("model state: topic row does not sum to 1");
  }
  return m;
}

std::string serialize_index(const SemanticIndex& index) {
  ordered_json j;
  j["model_ref"] = index.model_ref;
  ordered_json entries = ordered_json::array();
  for (const auto& e : index.entries) {
    ordered_json item;
    item["article_id"] = e.article_id;
    item["source_id"] = e.source_id;
    item["url"] = e.url;
    item["published_at"] = e.published_at ? ordered_json(format_timestamp(*e.published_at)) : nullptr;
    item["theta"] = e.theta;
    entries.push_back(std::move(item));
  }
  j["entries"] = std::move(entries);
  return encode_state_file("index", j.dump());
}

SemanticIndex deserialize_index(std::string_view contents) {
  const json j = json::parse(decode_state_file("index", contents), nullptr, false);
  if (j.is_discarded()) corrupt("index state: payload is not JSON");
  SemanticIndex index;
  try {
    index.model_ref = j.at("model_ref").get<std::string>();
    for (const auto& item : j.at("entries")) {
      IndexEntry e;
      e.article_id = item.at("article_id").get<std::string>();
      e.source_id = item.at("source_id").get<std::string>();
      e.url = item.at("url").get<std::string>();
      if (!item.at("published_at").is_null()) {
        e.published_at = parse_w3c_datetime(item.at("published_at").get<std::string>());
        if (!e.published_at) corrupt("index state: bad published_at");
      }
      e.theta = item.at("theta").get<std::vector<double>>();
      index.entries.push_back(std::move(e));
    }
  } catch (const json::exception& e) {
    corrupt(std::string("index state: ") + e.what());
  }
  return index;
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::MissingState, "cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file_atomic(const std::filesystem::path& path, std::string_view contents) {
  auto tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(ErrorCode::MissingState, "cannot write " + tmp.string());
    out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
    if (!out) throw Error(ErrorCode::MissingState, "short write to " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

void save_model(const std::filesystem::path& path, const TopicModel& model) {
  write_file_atomic(path, serialize_model(model));
}
TopicModel load_model(const std::filesystem::path& path) { return deserialize_model(read_file(path)); }
void save_index(const std::filesystem::path& path, const SemanticIndex& index) {
  write_file_atomic(path, serialize_index(index));
}
SemanticIndex load_index(const std::filesystem::path& path) { return deserialize_index(read_file(path)); }

void save_store(const std::filesystem::path& path, const std::vector<Article>& articles) {
  std::string out;
  for (const auto& a : articles) out += to_json(a).dump() + "\n";
  write_file_atomic(path, out);
}

void persist_state(const StatePaths& paths, const ServiceState& state) {
  std::filesystem::create_directories(paths.dir);
  std::vector<Article> articles;
  articles.reserve(state.articles.size());
  for (const auto& [id, a] : state.articles) articles.push_back(a);
  std::sort(articles.begin(), articles.end(), [](const Article& a, const Article& b) { return a.id < b.id; });
  save_store(paths.store(), articles);
  if (state.model) save_model(paths.model(), *state.model);
  save_index(paths.index(), state.index);
  write_file_atomic(paths.sources(), serialize_sources(state.sources));
  std::string lexicon = "# " + state.lexicon.name + " " + state.lexicon.version + "\n";
  for (const auto& t : state.lexicon.terms) lexicon += t + "\n";
  write_file_atomic(paths.lexicon(), lexicon);
}

ServiceState load_state(const StatePaths& paths, const LoadOptions& options) {
  ServiceState state;
  const auto sources_path = options.sources.value_or(paths.sources());
  if (!std::filesystem::exists(sources_path))
    throw Error(ErrorCode::MissingState, "source config not found: " + sources_path.string());
  state.sources = load_sources_file(sources_path.string());

  const auto lexicon_path = options.lexicon.value_or(paths.lexicon());
  if (std::filesystem::exists(lexicon_path)) {
    state.lexicon = load_lexicon(read_file(lexicon_path), lexicon_path.filename().string(), "file");
  } else if (options.lexicon) {
    throw Error(ErrorCode::MissingState, "lexicon not found: " + lexicon_path.string());
  } else {
    state.lexicon = default_lexicon();
  }

  for (auto& a : read_store(paths.store().string())) {
    std::string id = a.id;
    state.articles.insert_or_assign(std::move(id), std::move(a));
  }

  const bool have_model = std::filesystem::exists(paths.model());
  if (!have_model) {
    if (options.require_model) throw Error(ErrorCode::MissingState, "model file not found: " + paths.model().string());
    return state;
  }
  state.model = load_model(paths.model());
  if (!std::filesystem::exists(paths.index()))
    throw Error(ErrorCode::MissingState, "index file not found: " + paths.index().string());
  state.index = load_index(paths.index());
  if (state.index.model_ref != model_fingerprint(*state.model))
    corrupt("index " + paths.index().string() + " was built by a different model");
  for (const auto& e : state.index.entries) {
    if (e.theta.size() != static_cast<std::size_t>(state.model->topics)) corrupt("index entry has wrong topic count");
    if (auto it = state.articles.find(e.article_id); it != state.articles.end()) it->second.topic_distribution = e.theta;
  }
  return state;
}

}  // namespace newsbias
