#include "newsbias/cli.hpp"

#include <CLI11.hpp>
#include <pthread.h>
#include <signal.h>

#include <algorithm>
#include <cstdlib>
#include <iomanip>
#include <iostream>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <atomic>
#include <thread>

#include "newsbias/crawler.hpp"
#include "newsbias/error.hpp"
#include "newsbias/html_extract.hpp"
#include "newsbias/pipeline.hpp"
#include "newsbias/service.hpp"
#include "newsbias/url.hpp"

namespace newsbias {

namespace {

struct GlobalOptions {
  std::string state_dir;
  std::string fixtures;
  std::vector<std::string> resolve;
  std::string lexicon;
  std::string sources;
};

int exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::Usage:
    case ErrorCode::InvalidUrl: return kExitUsage;
    case ErrorCode::InvalidConfig:
    case ErrorCode::EmptyLexicon: return kExitConfig;
    case ErrorCode::NetworkError:
    case ErrorCode::FetchFailed:
    case ErrorCode::RobotsUnavailable: return kExitNetwork;
    case ErrorCode::VersionMismatch:
    case ErrorCode::CorruptState:
    case ErrorCode::MissingState: return kExitState;
    default: return kExitData;
  }
}

std::string one_line(std::string s) {
  std::replace(s.begin(), s.end(), '\n', ' ');
  return s;
}

StatePaths state_paths(const GlobalOptions& g) { return StatePaths{g.state_dir}; }

std::unique_ptr<Fetcher> make_fetcher(const GlobalOptions& g) {
  if (!g.fixtures.empty()) return std::make_unique<FixtureFetcher>(g.fixtures);
  HttpFetcherOptions options;
  for (const auto& rule : g.resolve) {
    const auto eq = rule.find('=');
    if (eq == std::string::npos || eq == 0 || eq + 1 == rule.size())
      throw Error(ErrorCode::Usage, "--resolve expects HOST=ADDRESS:PORT, got " + rule);
    options.host_overrides[rule.substr(0, eq)] = rule.substr(eq + 1);
  }
  return std::make_unique<HttpFetcher>(std::move(options));
}

std::filesystem::path sources_path(const GlobalOptions& g) {
  return g.sources.empty() ? state_paths(g).sources() : std::filesystem::path(g.sources);
}

BiasLexicon resolve_lexicon(const GlobalOptions& g) {
  if (!g.lexicon.empty()) return load_lexicon(read_file(g.lexicon), std::filesystem::path(g.lexicon).filename().string(), "file");
  const auto path = state_paths(g).lexicon();
  if (std::filesystem::exists(path)) return load_lexicon(read_file(path), path.filename().string(), "file");
  return default_lexicon();
}

LoadOptions load_options(const GlobalOptions& g, bool require_model) {
  LoadOptions options;
  if (!g.lexicon.empty()) options.lexicon = g.lexicon;
  if (!g.sources.empty()) options.sources = g.sources;
  options.require_model = require_model;
  return options;
}

std::string fixed(double v, int digits = 4) {
  std::ostringstream s;
  s << std::fixed << std::setprecision(digits) << v;
  return s.str();
}

std::string fetch_article_text(Fetcher& fetcher, const std::string& url, std::string* title = nullptr) {
  const std::string canonical = canonicalize_url(url);
  FetchResponse page;
  try {
    page = fetcher.fetch(canonical);
  } catch (const Error& e) {
    throw Error(ErrorCode::FetchFailed, e.what());
  }
  if (page.status >= 400) throw Error(ErrorCode::FetchFailed, canonical + " returned HTTP " + std::to_string(page.status));
  auto extracted = extract_article(page.body, canonical);
  if (title) *title = extracted.title;
  return extracted.body;
}

// ---------------------------------------------------------------------------

int cmd_init(const GlobalOptions& g, bool force, std::ostream& out) {
  const StatePaths paths = state_paths(g);
  std::filesystem::create_directories(paths.dir);
  if (force || !std::filesystem::exists(paths.sources())) {
    write_file_atomic(paths.sources(), serialize_sources(default_sources()));
    out << "wrote " << paths.sources().string() << "\n";
  }
  if (force || !std::filesystem::exists(paths.lexicon())) {
    std::string text = "# placeholder bias lexicon; replace with the full word list for comparable scores\n";
    for (const auto& t : default_lexicon().terms) text += t + "\n";
    write_file_atomic(paths.lexicon(), text);
    out << "wrote " << paths.lexicon().string() << "\n";
  }
  return kExitOk;
}

int cmd_crawl(const GlobalOptions& g, std::size_t max_per_source, const std::string& since_text,
              const std::vector<std::string>& only, std::ostream& out) {
  const auto cfg = sources_path(g);
  if (!std::filesystem::exists(cfg)) throw Error(ErrorCode::Usage, "source config not found: " + cfg.string());
  auto sources = load_sources_file(cfg.string());
  if (sources.empty()) throw Error(ErrorCode::Usage, "source config " + cfg.string() + " defines no sources");
  if (!only.empty()) {
    for (const auto& id : only)
      if (std::none_of(sources.begin(), sources.end(), [&](const NewsSource& s) { return s.id == id; }))
        throw Error(ErrorCode::Usage, "unknown source " + id);
    std::erase_if(sources, [&](const NewsSource& s) { return std::find(only.begin(), only.end(), s.id) == only.end(); });
  }
  if (max_per_source < 1) throw Error(ErrorCode::Usage, "--max-per-source must be at least 1");

  const StatePaths paths = state_paths(g);
  std::filesystem::create_directories(paths.dir);
  const BiasLexicon lexicon = resolve_lexicon(g);
  CrawlOptions options;
  options.max_urls = max_per_source;
  options.lexicon = &lexicon;
  if (!since_text.empty()) {
    options.since = parse_w3c_datetime(since_text);
    if (!options.since) throw Error(ErrorCode::Usage, "--since expects YYYY-MM-DD[Thh:mm[:ss]TZD], got " + since_text);
  }
  for (const auto& a : read_store(paths.store().string())) options.known_ids.insert(a.id);

  auto fetcher = make_fetcher(g);
  SystemClock clock;
  PolitenessGate gate(clock);
  CrawlContext ctx{*fetcher, gate, clock};
  const auto results = crawl_sources(sources, ctx, options);

  std::size_t added = 0;
  {
    StoreWriter writer(paths.store().string());
    std::set<std::string> written;
    for (const auto& r : results)
      for (const auto& a : r.articles)
        if (written.insert(a.id).second) {
          writer.append(a);
          ++added;
        }
    writer.flush();
  }

  out << std::left << std::setw(14) << "source" << std::right << std::setw(6) << "new" << std::setw(12)
      << "candidates" << std::setw(10) << "skipped" << std::setw(8) << "known" << std::setw(8) << "errors" << "\n";
  for (const auto& r : results) {
    out << std::left << std::setw(14) << r.source_id << std::right << std::setw(6) << r.articles.size()
        << std::setw(12) << r.candidates << std::setw(10) << r.skipped_extraction << std::setw(8) << r.skipped_known
        << std::setw(8) << r.errors.size() << "\n";
  }
  out << "total new articles: " << added << "\n";
  for (const auto& r : results)
    for (const auto& e : r.errors) out << "warning: " << r.source_id << ": " << e.url << ": " << one_line(e.message) << "\n";
  return kExitOk;
}

int cmd_train(const GlobalOptions& g, const IndexBuildOptions& options, std::ostream& out) {
  const StatePaths paths = state_paths(g);
  const auto articles = read_store(paths.store().string());
  const IndexBuild built = build_index(articles, options);
  save_model(paths.model(), built.model);
  save_index(paths.index(), built.index);
  out << "documents: " << built.documents << "\n"
      << "dropped_documents: " << built.dropped_documents << "\n"
      << "vocabulary: " << built.vocabulary << "\n"
      << "topics: " << built.model.topics << "\n"
      << "iterations: " << built.model.iterations << "\n"
      << "seed: " << built.model.seed << "\n"
      << "log_likelihood: " << fixed(built.initial_log_likelihood, 3) << " -> " << fixed(built.final_log_likelihood, 3)
      << "\n";
  if (built.purity) out << "purity: " << fixed(*built.purity, 4) << "\n";
  out << "wrote " << paths.model().string() << " and " << paths.index().string() << "\n";
  return kExitOk;
}

int cmd_score(const GlobalOptions& g, const std::string& url, const std::string& file, bool as_json,
              std::ostream& out) {
  if (url.empty() == file.empty()) throw Error(ErrorCode::Usage, "score needs exactly one of --url or --file");
  const BiasLexicon lexicon = resolve_lexicon(g);
  std::string text;
  if (!url.empty()) {
    auto fetcher = make_fetcher(g);
    text = fetch_article_text(*fetcher, url);
  } else {
    text = read_file(file);
    const auto ext = std::filesystem::path(file).extension().string();
    if (ext == ".html" || ext == ".htm") text = extract_article(text, file).body;
  }
  const BiasAnalysis analysis = analyze_bias(text, lexicon);
  if (as_json) {
    nlohmann::ordered_json j;
    j["bias_score"] = analysis.score.score;
    j["sentences_total"] = analysis.score.total;
    j["sentences_biased"] = analysis.score.biased;
    nlohmann::ordered_json sentences = nlohmann::ordered_json::array();
    for (const auto& v : analysis.sentences) sentences.push_back({{"text", v.text}, {"biased", v.biased}, {"hits", v.hits}});
    j["sentences"] = std::move(sentences);
    out << j.dump(2) << "\n";
    return kExitOk;
  }
  out << "score: " << fixed(analysis.score.score) << "\n"
      << "total: " << analysis.score.total << "\n"
      << "biased: " << analysis.score.biased << "\n";
  for (const auto& v : analysis.sentences) {
    out << (v.biased ? "[B] " : "[ ] ") << v.text;
    if (v.biased) {
      out << "  (";
      for (std::size_t i = 0; i < v.hits.size(); ++i) out << (i ? ", " : "") << v.hits[i];
      out << ")";
    }
    out << "\n";
  }
  return kExitOk;
}

int cmd_recommend(const GlobalOptions& g, const std::string& url, bool as_json, std::ostream& out) {
  auto parsed = Url::parse(url);
  if (!parsed || !parsed->is_http()) throw Error(ErrorCode::Usage, "--url must be an absolute http(s) URL: " + url);
  auto state = std::make_shared<const ServiceState>(load_state(state_paths(g), load_options(g, true)));
  auto fetcher = make_fetcher(g);
  SystemClock clock;
  Recommender recommender(state, *fetcher, clock);
  const BiasReport report = recommender.analyze_url(url);
  if (as_json) {
    out << to_json(report).dump(2) << "\n";
    return kExitOk;
  }
  out << "query: " << report.query_url << "\n"
      << "bias: " << fixed(report.bias_score) << " (" << report.sentences_biased << "/" << report.sentences_total
      << " sentences)\n";
  if (!report.topic_matched) out << "topic: no match (page shares no vocabulary with the model)\n";
  out << "\n"
      << std::left << std::setw(12) << "source" << std::right << std::setw(9) << "leaning" << std::setw(8) << "bias"
      << std::setw(12) << "similarity" << "  url\n";
  for (const auto& r : report.recommendations)
    out << std::left << std::setw(12) << r.source_id << std::right << std::setw(9) << fixed(r.leaning, 2)
        << std::setw(8) << fixed(r.bias_score, 2) << std::setw(12) << fixed(r.similarity, 4) << "  " << r.url << "\n";
  out << "\nsource,leaning,bias\n";
  for (const auto& r : report.recommendations)
    out << r.source_id << "," << fixed(r.leaning) << "," << fixed(r.bias_score) << "\n";
  return kExitOk;
}

int cmd_serve(const GlobalOptions& g, const std::string& addr, int cache_ttl_s, std::ostream& out) {
  const auto colon = addr.rfind(':');
  if (colon == std::string::npos) throw Error(ErrorCode::Usage, "--addr expects HOST:PORT, got " + addr);
  const std::string host = addr.substr(0, colon);
  int port = 0;
  try {
    port = std::stoi(addr.substr(colon + 1));
  } catch (const std::logic_error&) {
    throw Error(ErrorCode::Usage, "--addr expects HOST:PORT, got " + addr);
  }

  auto state = std::make_shared<const ServiceState>(load_state(state_paths(g), load_options(g, true)));
  auto fetcher = make_fetcher(g);
  SystemClock clock;
  ServiceOptions options;
  options.cache_ttl = std::chrono::seconds(cache_ttl_s);
  RecommendService service({state_paths(g), *fetcher, clock}, state, options);

  // Route SIGTERM/SIGINT to a dedicated thread that stops the server; the
  // server then drains in-flight requests before listen() returns.
  sigset_t signals;
  sigemptyset(&signals);
  sigaddset(&signals, SIGTERM);
  sigaddset(&signals, SIGINT);
  sigset_t previous;
  pthread_sigmask(SIG_BLOCK, &signals, &previous);
  const int bound = service.bind(host, port);
  out << "listening on " << host << ":" << bound << "\n" << std::flush;
  std::atomic<bool> done{false};
  std::thread watcher([&] {
    int sig = 0;
    sigwait(&signals, &sig);
    if (!done) service.stop();
  });
  service.listen();
  done = true;
  pthread_kill(watcher.native_handle(), SIGTERM);
  watcher.join();
  pthread_sigmask(SIG_SETMASK, &previous, nullptr);
  out << "stopped\n";
  return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Bias-aware news recommender: crawl sources, score bias, index topics, serve recommendations"};
  app.require_subcommand(1);
  GlobalOptions g;
  if (const char* env = std::getenv("NEWSBIAS_STATE_DIR")) g.state_dir = env;
  if (g.state_dir.empty()) g.state_dir = "state";
  app.add_option("--state", g.state_dir, "State directory (default: $NEWSBIAS_STATE_DIR or ./state)");
  app.add_option("--fixtures", g.fixtures, "Serve every fetch from DIR/<host>/<path> instead of the network");
  app.add_option("--resolve", g.resolve, "HOST=ADDRESS:PORT connection override, repeatable");
  app.add_option("--lexicon", g.lexicon, "Bias lexicon file (default: <state>/lexicon.txt, else built-in)");
  app.add_option("--sources", g.sources, "Source config (default: <state>/sources.cfg)");

  bool init_force = false;
  auto* init = app.add_subcommand("init", "Write the default source config and lexicon into the state directory");
  init->add_flag("--force", init_force, "Overwrite existing files");

  std::size_t max_per_source = 50;
  std::string since;
  std::vector<std::string> only;
  auto* crawl = app.add_subcommand("crawl", "Crawl configured sources into the article store");
  crawl->add_option("--max-per-source", max_per_source, "Newest sitemap entries fetched per source");
  crawl->add_option("--since", since, "Skip entries last modified before this date");
  crawl->add_option("--source", only, "Restrict to these source ids");

  IndexBuildOptions train_options;
  int topics = 20;
  std::optional<double> alpha;
  std::string label_prefix;
  auto* train = app.add_subcommand("train", "Train the topic model and build the semantic index");
  train->add_option("--topics,-k", topics, "Topic count K");
  train->add_option("--iterations", train_options.lda.iterations, "Gibbs sweeps");
  train->add_option("--seed", train_options.lda.seed, "Sampler seed");
  train->add_option("--alpha", alpha, "Doc-topic prior (default 50/K)");
  train->add_option("--beta", train_options.lda.beta, "Topic-word prior");
  train->add_option("--label-prefix", label_prefix, "Report purity against article tags with this prefix");

  std::string score_url, score_file;
  bool score_json = false;
  auto* score = app.add_subcommand("score", "Bias score of one article");
  score->add_option("--url", score_url, "Article URL to fetch");
  score->add_option("--file", score_file, "Plain text file, or HTML when it ends in .html/.htm");
  score->add_flag("--json", score_json, "Emit JSON");

  std::string rec_url;
  bool rec_json = false;
  auto* recommend = app.add_subcommand("recommend", "Bias report and per-source recommendations for a URL");
  recommend->add_option("--url", rec_url, "Article URL")->required();
  recommend->add_flag("--json", rec_json, "Emit the BiasReport JSON");

  std::string addr = "127.0.0.1:8080";
  int cache_ttl = 900;
  auto* serve = app.add_subcommand("serve", "Run the REST service");
  serve->add_option("--addr", addr, "Listen address HOST:PORT");
  serve->add_option("--cache-ttl", cache_ttl, "Report cache lifetime in seconds");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    err << "error: Usage: " << one_line(e.what()) << "\n";
    return kExitUsage;
  }

  try {
    if (init->parsed()) return cmd_init(g, init_force, out);
    if (crawl->parsed()) return cmd_crawl(g, max_per_source, since, only, out);
    if (train->parsed()) {
      const std::uint64_t seed = train_options.lda.seed;
      const int iterations = train_options.lda.iterations;
      const double beta = train_options.lda.beta;
      train_options.lda = LdaParams::with_topics(std::max(topics, 1));
      train_options.lda.topics = topics;
      train_options.lda.seed = seed;
      train_options.lda.iterations = iterations;
      train_options.lda.beta = beta;
      if (alpha) train_options.lda.alpha = *alpha;
      if (!label_prefix.empty()) train_options.label_prefix = label_prefix;
      return cmd_train(g, train_options, out);
    }
    if (score->parsed()) return cmd_score(g, score_url, score_file, score_json, out);
    if (recommend->parsed()) return cmd_recommend(g, rec_url, rec_json, out);
    if (serve->parsed()) return cmd_serve(g, addr, cache_ttl, out);
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << one_line(e.what()) << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    err << "error: Internal: " << one_line(e.what()) << "\n";
    return kExitFailure;
  }
  return kExitUsage;
}

}  // namespace newsbias
