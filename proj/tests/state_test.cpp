#include <gtest/gtest.h>

#include <cstring>

#include "newsbias/error.hpp"
#include "newsbias/service.hpp"
#include "newsbias/state.hpp"
#include "test_support.hpp"

using namespace newsbias;

namespace {

ErrorCode code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return ErrorCode::Usage;
}

std::string message_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.what();
  }
  return {};
}

class StateTest : public ::testing::Test {
 protected:
  static void SetUpTestSuite() { state_ = nbtest::fixture_state(); }
  static void TearDownTestSuite() { state_.reset(); }
  static std::shared_ptr<ServiceState> state_;
};
std::shared_ptr<ServiceState> StateTest::state_;

std::vector<std::string> analyze_all(std::shared_ptr<const ServiceState> state) {
  FixtureFetcher fetcher(nbtest::sites_dir());
  ManualClock clock(nbtest::fixture_now());
  Recommender rec(std::move(state), fetcher, clock);
  std::vector<std::string> out;
  for (const auto& q : nbtest::fixture_queries()) out.push_back(rec.analyze_json(q));
  out.push_back(rec.analyze_json("http://www.example-news.com/politics/biased-four.html"));
  return out;
}

}  // namespace

TEST(StateFile, HeaderAndChecksum) {
  const auto encoded = encode_state_file("model", "{\"x\":1}");
  EXPECT_TRUE(encoded.starts_with("newsbias model v1 sha256="));
  EXPECT_EQ(decode_state_file("model", encoded), "{\"x\":1}");

  EXPECT_EQ(code_of([&] { decode_state_file("index", encoded); }), ErrorCode::CorruptState);
  auto tampered = encoded;
  tampered.back() = '2';
  EXPECT_EQ(code_of([&] { decode_state_file("model", tampered); }), ErrorCode::CorruptState);
  EXPECT_EQ(code_of([&] { decode_state_file("model", "garbage"); }), ErrorCode::CorruptState);
  EXPECT_EQ(code_of([&] { decode_state_file("model", "hello world\n{}"); }), ErrorCode::CorruptState);

  auto other_version = encoded;
  other_version.replace(other_version.find(" v1 "), 4, " v2 ");
  EXPECT_EQ(code_of([&] { decode_state_file("model", other_version); }), ErrorCode::VersionMismatch);
}

TEST_F(StateTest, ModelAndIndexRoundTrip) {
  const auto model_text = serialize_model(*state_->model);
  const auto model = deserialize_model(model_text);
  EXPECT_EQ(serialize_model(model), model_text);
  ASSERT_EQ(model.phi.size(), state_->model->phi.size());
  EXPECT_EQ(std::memcmp(model.phi.data(), state_->model->phi.data(), model.phi.size() * sizeof(double)), 0);
  EXPECT_EQ(model.vocabulary.words(), state_->model->vocabulary.words());
  EXPECT_EQ(model_fingerprint(model), model_fingerprint(*state_->model));

  const auto index_text = serialize_index(state_->index);
  EXPECT_EQ(serialize_index(deserialize_index(index_text)), index_text);
  EXPECT_EQ(state_->index.model_ref, model_fingerprint(*state_->model));
}

TEST_F(StateTest, PersistLoadAnalyzeIsByteIdentical) {
  nbtest::TempDir dir;
  StatePaths paths{dir.path()};
  persist_state(paths, *state_);
  auto loaded = std::make_shared<ServiceState>(load_state(paths));
  EXPECT_EQ(loaded->articles.size(), state_->articles.size());
  EXPECT_EQ(analyze_all(loaded), analyze_all(state_));

  // Saving what was loaded reproduces the same files.
  nbtest::TempDir again;
  persist_state(StatePaths{again.path()}, *loaded);
  for (const char* f : {"store.ndjson", "model.state", "index.state", "sources.cfg"})
    EXPECT_EQ(read_file(again / f), read_file(dir / f)) << f;
}

TEST_F(StateTest, TruncatedIndexIsCorrupt) {
  nbtest::TempDir dir;
  StatePaths paths{dir.path()};
  persist_state(paths, *state_);
  const auto text = read_file(paths.index());
  write_file_atomic(paths.index(), text.substr(0, text.size() / 2));
  EXPECT_EQ(code_of([&] { load_state(paths); }), ErrorCode::CorruptState);
}

TEST_F(StateTest, OtherSchemaVersionIsRejected) {
  nbtest::TempDir dir;
  StatePaths paths{dir.path()};
  persist_state(paths, *state_);
  auto text = read_file(paths.model());
  text.replace(text.find(" v1 "), 4, " v9 ");
  write_file_atomic(paths.model(), text);
  EXPECT_EQ(code_of([&] { load_state(paths); }), ErrorCode::VersionMismatch);
}

TEST_F(StateTest, IndexFromAnotherModelIsCorrupt) {
  nbtest::TempDir dir;
  StatePaths paths{dir.path()};
  persist_state(paths, *state_);
  auto other = *state_->model;
  other.seed += 1;
  save_model(paths.model(), other);
  EXPECT_EQ(code_of([&] { load_state(paths); }), ErrorCode::CorruptState);
}

TEST_F(StateTest, MissingFilesNameThePath) {
  nbtest::TempDir dir;
  StatePaths paths{dir.path()};
  persist_state(paths, *state_);
  std::filesystem::remove(paths.model());
  EXPECT_EQ(code_of([&] { load_state(paths); }), ErrorCode::MissingState);
  EXPECT_NE(message_of([&] { load_state(paths); }).find(paths.model().string()), std::string::npos);
  LoadOptions lenient;
  lenient.require_model = false;
  EXPECT_FALSE(load_state(paths, lenient).model);

  std::filesystem::remove(paths.sources());
  EXPECT_NE(message_of([&] { load_state(paths); }).find(paths.sources().string()), std::string::npos);
}

TEST(StateFile, AtomicWriteLeavesNoTempFiles) {
  nbtest::TempDir dir;
  write_file_atomic(dir / "f.txt", "one");
  write_file_atomic(dir / "f.txt", "two");
  EXPECT_EQ(read_file(dir / "f.txt"), "two");
  EXPECT_EQ(std::distance(std::filesystem::directory_iterator(dir.path()), std::filesystem::directory_iterator()), 1);
}
