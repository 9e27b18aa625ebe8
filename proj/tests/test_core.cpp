#include <cmath>
#include <cstdlib>
#include <limits>
#include <random>

#include "doctest.h"
#include "faithsum/config.hpp"
#include "faithsum/error.hpp"
#include "faithsum/trace.hpp"

using namespace faithsum;

TEST_CASE("empty config yields the tuned defaults") {
  const Config c = parse_config("");
  CHECK(c.thresholds.t_e == 0.9);
  CHECK(c.thresholds.t_c == 0.8);
  CHECK(c.thresholds.t_a == 0.5);
  CHECK(c.thresholds.top_m == 2);
  CHECK(c.thresholds.cov_min == 0.4);
  CHECK(c.thresholds.top_n == 10);
  CHECK(c.thresholds.mmr_lambda == 0.5);
  CHECK(c.backend.kind == BackendKind::stub);
  CHECK(c.chunking.window == 384);
  CHECK(c.chunking.stride == 256);
}

TEST_CASE("overriding one key leaves the others at their defaults") {
  const Config c = parse_config("# tuned on dev\nt_e = 0.95\n");
  Thresholds expected;
  expected.t_e = 0.95;
  CHECK(c.thresholds == expected);
}

TEST_CASE("config errors") {
  CHECK_THROWS_AS(parse_config("t_e = 1.3"), ConfigError);
  CHECK_THROWS_AS(parse_config("t_c = -0.1"), ConfigError);
  CHECK_THROWS_AS(parse_config("t_e = high"), ConfigError);
  CHECK_THROWS_AS(parse_config("t_ee = 0.5"), ConfigError);
  CHECK_THROWS_AS(parse_config("t_e"), ConfigError);
  CHECK_THROWS_AS(parse_config("t_e = 0.9\nt_e = 0.8"), ConfigError);
  CHECK_THROWS_AS(parse_config("top_m = 0"), ConfigError);
  CHECK_THROWS_AS(parse_config("cov_min = 1.5"), ConfigError);
  CHECK_THROWS_AS(parse_config("nli_window = 10\nnli_stride = 20"), ConfigError);
  CHECK_THROWS_AS(parse_config("backend = remote"), ConfigError);
  CHECK_THROWS_AS(parse_config("backend = remote\nbackend_url = localhost:80"), ConfigError);
  CHECK_THROWS_AS(load_config("/nonexistent/faithsum.conf"), ConfigError);

  try {
    parse_config("t_e = 0.9\n\nbogus = 1", "x.conf");
    FAIL("expected ConfigError");
  } catch (const ConfigError& e) {
    CHECK(std::string(e.what()).find("x.conf:3") != std::string::npos);
  }
}

TEST_CASE("config accepts remote settings and lists") {
  const Config c = parse_config(
      "backend = remote\nbackend_url = http://127.0.0.1:9000/api/\nmax_retries = 5\n"
      "contradiction_lexicon = no, denies ,negative\n");
  CHECK(c.backend.kind == BackendKind::remote);
  CHECK(c.backend.max_retries == 5);
  CHECK(c.contradiction_lexicon == std::vector<std::string>{"no", "denies", "negative"});
  const auto url = parse_base_url(c.backend.base_url);
  CHECK(url.host == "127.0.0.1");
  CHECK(url.port == 9000);
  CHECK(url.path_prefix == "/api");
}

TEST_CASE("environment overrides the backend url") {
  Config c;
  c.backend.base_url = "http://a:1";
  setenv("FAITHSUM_BACKEND_URL", "http://b:2", 1);
  apply_env_overrides(c);
  unsetenv("FAITHSUM_BACKEND_URL");
  CHECK(c.backend.base_url == "http://b:2");
}

TEST_CASE("document and draft invariants") {
  CHECK_THROWS_AS(Document("d", "   \n"), PreconditionError);
  const Document d("d1", "Some text.", DatasetKind::mimic3);
  CHECK(d.id() == "d1");

  SummaryDraft s{"x", Stage::initial, "d1"};
  auto r = s.advance(Stage::refined, "y");
  CHECK(r.stage == Stage::refined);
  CHECK(r.parent_id == "d1");
  CHECK(r.advance(Stage::final, "z").stage == Stage::final);
  CHECK_THROWS_AS(s.advance(Stage::final, "z"), PreconditionError);
  CHECK_THROWS_AS(r.advance(Stage::refined, "z"), PreconditionError);

  CHECK(parse_dataset_kind("MIMIC-III") == DatasetKind::mimic3);
  CHECK(parse_dataset_kind("aci-bench") == DatasetKind::acibench);
  CHECK_THROWS_AS(parse_dataset_kind("pubmed"), ParseError);
}

TEST_CASE("thresholds with t_e + t_c >= 1 never label a simplex point twice") {
  const Thresholds th;
  REQUIRE(th.labels_exclusive());
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int i = 0; i < 10000; ++i) {
    double a = u(rng), b = u(rng);
    if (a > b) std::swap(a, b);
    const double e = a, n = b - a, c = 1.0 - b;
    const bool entailed = e > th.t_e;
    const bool confab = n + c > th.t_c;
    CHECK_FALSE((entailed && confab));
  }
}

TEST_CASE("new_trace binds the document") {
  const Document a("d1", "A."), b("d2", "B.");
  CHECK(new_trace(a).document_id == "d1");
  CHECK(new_trace(a) != new_trace(b));
  CHECK(new_trace(a).status == "ok");
}

TEST_CASE("trace survives a serialize/parse round trip") {
  PipelineTrace t = new_trace(Document("d1", "The heart is enlarged."));
  t.prompt = "p";
  t.raw_completion = "c";
  t.initial_summary = "The heart is enlarged, and the spine shows fractures.";
  t.dsus.push_back({"The heart is enlarged, and the spine shows fractures.", DsuLevel::sentence,
                    std::nullopt, {0.5, 0.5, 0.0}, DsuLabel::uncertain, false});
  t.dsus.push_back({"The heart is enlarged", DsuLevel::atomic, 0, {1.0, 0.0, 0.0},
                    DsuLabel::entailed, true});
  t.removed_units = {"the spine shows fractures"};
  t.refined_summary = "The heart is enlarged.";
  t.key_sentences = {{"The heart is enlarged.", 0, 0.125}};
  t.key_phrases = {};
  t.sim_rows = 1;
  t.sim_cols = 0;
  t.cov_scores = {-std::numeric_limits<double>::infinity()};
  t.missing = {"The heart is enlarged."};
  t.insertions = {{"The heart is enlarged.", 1, 3.0}};
  t.final_summary = "The heart is enlarged. The heart is enlarged.";
  t.flags = {TraceFlag::no_missing_info, TraceFlag::backend_fallback};

  const auto line = serialize(t);
  CHECK(line.find('\n') == std::string::npos);
  CHECK(parse_trace(line) == t);
  CHECK_THROWS_AS(parse_trace("{"), ParseError);
}

TEST_CASE("the shipped example config matches the built-in defaults") {
  const auto c = load_config(std::string(FAITHSUM_TEST_DATA) + "/../../data/faithsum.conf");
  CHECK(c.thresholds == Thresholds{});
  CHECK(c.backend.max_retries == 3);
  CHECK(c.chunking.window == 384);
  CHECK(c.abbreviations_file == "data/abbreviations.txt");
}
