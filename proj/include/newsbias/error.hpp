#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace newsbias {

enum class ErrorCode {
  // corpus_ingest
  MalformedXml,
  UnknownRoot,
  NoExtractableText,
  RobotsUnavailable,
  NetworkError,
  InvalidConfig,
  InvalidUrl,
  // bias_scorer
  EmptyLexicon,
  EmptyDocument,
  // topic_index
  EmptyCorpus,
  DegenerateVocabulary,
  NoKnownTokens,
  DimensionMismatch,
  // recommend_service
  FetchFailed,
  NotAnArticle,
  VersionMismatch,
  CorruptState,
  MissingState,
  Usage,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::MalformedXml: return "MalformedXml";
    case ErrorCode::UnknownRoot: return "UnknownRoot";
    case ErrorCode::NoExtractableText: return "NoExtractableText";
    case ErrorCode::RobotsUnavailable: return "RobotsUnavailable";
    case ErrorCode::NetworkError: return "NetworkError";
    case ErrorCode::InvalidConfig: return "InvalidConfig";
    case ErrorCode::InvalidUrl: return "InvalidUrl";
    case ErrorCode::EmptyLexicon: return "EmptyLexicon";
    case ErrorCode::EmptyDocument: return "EmptyDocument";
    case ErrorCode::EmptyCorpus: return "EmptyCorpus";
    case ErrorCode::DegenerateVocabulary: return "DegenerateVocabulary";
    case ErrorCode::NoKnownTokens: return "NoKnownTokens";
    case ErrorCode::DimensionMismatch: return "DimensionMismatch";
    case ErrorCode::FetchFailed: return "FetchFailed";
    case ErrorCode::NotAnArticle: return "NotAnArticle";
    case ErrorCode::VersionMismatch: return "VersionMismatch";
    case ErrorCode::CorruptState: return "CorruptState";
    case ErrorCode::MissingState: return "MissingState";
    case ErrorCode::Usage: return "Usage";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace newsbias
