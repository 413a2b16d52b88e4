#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "newsbias/article.hpp"
#include "newsbias/bias.hpp"
#include "newsbias/lda.hpp"
#include "newsbias/semantic_index.hpp"
#include "newsbias/source.hpp"

namespace newsbias {

/// Schema version written into model.state and index.state headers.
inline constexpr int kStateVersion = 1;

/// The state directory layout shared by every command.
struct StatePaths {
  std::filesystem::path dir;

  std::filesystem::path store() const { return dir / "store.ndjson"; }
  std::filesystem::path model() const { return dir / "model.state"; }
  std::filesystem::path index() const { return dir / "index.state"; }
  std::filesystem::path sources() const { return dir / "sources.cfg"; }
  std::filesystem::path lexicon() const { return dir / "lexicon.txt"; }
};

/// Everything a recommendation request reads. Treated as an immutable
/// snapshot once built.
struct ServiceState {
  std::vector<NewsSource> sources;
  BiasLexicon lexicon;
  std::optional<TopicModel> model;
  SemanticIndex index;
  std::unordered_map<std::string, Article> articles;  // by id

  const NewsSource* source(std::string_view id) const;
};

/// Stable digest of a model's parameters; the index records it as model_ref.
std::string model_fingerprint(const TopicModel& model);

/// Versioned container: one header line `newsbias <kind> v<version>
/// sha256=<hex>` followed by a JSON payload whose digest the header pins.
std::string encode_state_file(std::string_view kind, const std::string& payload);
/// Throws Error{VersionMismatch} for another schema version and
/// Error{CorruptState} for a bad header, wrong kind or checksum failure.
std::string decode_state_file(std::string_view kind, std::string_view contents);

std::string serialize_model(const TopicModel& model);
TopicModel deserialize_model(std::string_view contents);
std::string serialize_index(const SemanticIndex& index);
SemanticIndex deserialize_index(std::string_view contents);

void save_model(const std::filesystem::path& path, const TopicModel& model);
TopicModel load_model(const std::filesystem::path& path);
void save_index(const std::filesystem::path& path, const SemanticIndex& index);
SemanticIndex load_index(const std::filesystem::path& path);

/// Rewrites the article store with exactly `articles`, in order.
void save_store(const std::filesystem::path& path, const std::vector<Article>& articles);

/// Writes store, model (when present), index, source config and lexicon.
void persist_state(const StatePaths& paths, const ServiceState& state);

struct LoadOptions {
  /// Overrides `paths.lexicon()`; neither present means the built-in lexicon.
  std::optional<std::filesystem::path> lexicon;
  std::optional<std::filesystem::path> sources;
  bool require_model = true;
};

/// Loads a state directory. Missing required files throw
/// Error{MissingState} naming the path; an index built by another model
/// throws Error{CorruptState}.
ServiceState load_state(const StatePaths& paths, const LoadOptions& options = {});

std::string read_file(const std::filesystem::path& path);
/// Write-then-rename so readers never see a partial file.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

}  // namespace newsbias
