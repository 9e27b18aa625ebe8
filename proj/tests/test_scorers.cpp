#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "faithsum/error.hpp"
#include "faithsum/scorers.hpp"
#include "faithsum/stub_backend.hpp"
#include "faithsum/text.hpp"

using namespace faithsum;

namespace {

bool same(const NliDistribution& a, const NliDistribution& b) {
  return std::abs(a.entailment - b.entailment) < 1e-12 &&
         std::abs(a.neutral - b.neutral) < 1e-12 &&
         std::abs(a.contradiction - b.contradiction) < 1e-12;
}

std::string words(const std::string& stem, int from, int to) {
  std::string s;
  for (int i = from; i < to; ++i) {
    if (!s.empty()) s += ' ';
    s += stem + std::to_string(i);
  }
  return s;
}

}  // namespace

TEST_CASE("fnv1a64 known vectors") {
  CHECK(text::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(text::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(text::fnv1a64("foobar") == 0x85944171f73967e8ULL);
}

TEST_CASE("stub nli examples") {
  const StubBackend b;
  CHECK(same(b.nli_score("the heart is enlarged today", "the heart is enlarged"), {1.0, 0.0, 0.0}));
  CHECK(same(b.nli_score("lungs clear", "fracture present"), {0.0, 1.0, 0.0}));
  CHECK(same(b.nli_score("a b c d", "a b x y"), {0.5, 0.5, 0.0}));
  CHECK(same(b.nli_score("lungs clear", "no effusion"), {0.0, 0.2, 0.8}));
  // a lexicon word present in the premise is ordinary overlap
  CHECK(same(b.nli_score("no effusion", "No effusion."), {1.0, 0.0, 0.0}));
  CHECK_THROWS_AS(b.nli_score("x", ""), PreconditionError);
  CHECK(same(b.nli_score("x", "..."), {0.0, 1.0, 0.0}));

  const StubBackend custom({"denies"});
  CHECK(same(custom.nli_score("pain", "denies pain"), {0.0, 0.2, 0.8}));
  CHECK(same(custom.nli_score("pain", "no pain"), {0.5, 0.5, 0.0}));
}

TEST_CASE("premise chunks") {
  CHECK(premise_chunks("", 4, 2).empty());
  CHECK(premise_chunks("a b c", 4, 2) == std::vector<std::string>{"a b c"});
  CHECK(premise_chunks("a b c d e f", 4, 2) ==
        std::vector<std::string>{"a b c d", "c d e f"});
  CHECK(premise_chunks("a b c d e f g", 4, 2) ==
        std::vector<std::string>{"a b c d", "c d e f", "d e f g"});
}

TEST_CASE("chunked nli picks the best-supported window") {
  const StubBackend b;
  const std::string hyp = words("w", 0, 10);
  // first window shares 2 hypothesis tokens, second shares 9
  const std::string first = words("w", 0, 2) + " " + words("f", 0, 8);
  const std::string second = words("w", 0, 9) + " g0";
  const std::string doc = first + " " + second;
  CHECK(b.nli_score(first, hyp).entailment == doctest::Approx(0.2));
  CHECK(b.nli_score(second, hyp).entailment == doctest::Approx(0.9));
  const auto r = nli_with_chunking(b, doc, hyp, 10, 10);
  CHECK(same(r, b.nli_score(second, hyp)));

  CHECK(same(nli_with_chunking(b, "a b", "a c", 10, 5), b.nli_score("a b", "a c")));
  CHECK(same(nli_with_chunking(b, "", "a c", 10, 5), {0.0, 1.0, 0.0}));
}

TEST_CASE("chunked nli agrees with a brute-force window scan") {
  const StubBackend b;
  std::mt19937 rng(5);
  for (int trial = 0; trial < 200; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 30);
    std::vector<std::string> toks;
    for (int i = 0; i < n; ++i) toks.push_back("t" + std::to_string(rng() % 12));
    const std::size_t window = 1 + rng() % 8;
    const std::size_t stride = 1 + rng() % window;
    const std::string hyp = "t" + std::to_string(rng() % 12) + " t" + std::to_string(rng() % 12);

    // every window start a stride multiple, plus one flush with the end
    std::vector<std::size_t> starts;
    if (toks.size() <= window) {
      starts.push_back(0);
    } else {
      for (std::size_t s = 0; s + window < toks.size(); s += stride) starts.push_back(s);
      starts.push_back(toks.size() - window);
    }
    NliDistribution best{-1.0, 0.0, 0.0};
    for (auto s : starts) {
      std::vector<std::string> w(toks.begin() + s,
                                 toks.begin() + std::min(toks.size(), s + window));
      const auto d = b.nli_score(text::join(w, " "), hyp);
      if (d.entailment > best.entailment) best = d;
    }
    CHECK(same(nli_with_chunking(b, text::join(toks, " "), hyp, window, stride), best));
  }
}

TEST_CASE("stub embeddings") {
  const StubBackend b;
  const auto xx = b.embed({"x", "x"});
  CHECK(dot(xx[0], xx[1]) == doctest::Approx(1.0).epsilon(1e-12));
  const auto z = b.embed({""});
  CHECK(z[0].size() == StubBackend::kEmbeddingDim);
  CHECK(l2_norm(z[0]) == 0.0);
  CHECK(b.embed({}).empty());

  const std::vector<std::string> left = {"lungs", "clear"};
  const std::vector<std::string> right = {"fracture", "present"};
  std::set<std::uint64_t> buckets;
  for (const auto& w : left) buckets.insert(text::fnv1a64(w) % 256);
  for (const auto& w : right) buckets.insert(text::fnv1a64(w) % 256);
  REQUIRE(buckets.size() == 4);
  const auto v = b.embed({"lungs clear", "fracture present"});
  CHECK(dot(v[0], v[1]) == 0.0);

  // one token twice and one once: weights 2 and 1 before normalization
  const auto w = b.embed({"pain pain fever"})[0];
  REQUIRE(text::fnv1a64("pain") % 256 != text::fnv1a64("fever") % 256);
  CHECK(w[text::fnv1a64("pain") % 256] == doctest::Approx(2.0 / std::sqrt(5.0)));
  CHECK(w[text::fnv1a64("fever") % 256] == doctest::Approx(1.0 / std::sqrt(5.0)));
}

TEST_CASE("stub perplexity") {
  const StubBackend b;
  CHECK(b.perplexity("word") == 1.0);
  CHECK(b.perplexity("aa bb") == 1.0);
  CHECK(b.perplexity("a bbbb") == 4.0);
  CHECK(b.perplexity("a bbbb cc") == 6.0);
  CHECK_THROWS_AS(b.perplexity(""), PreconditionError);
}

TEST_CASE("stub generate") {
  const StubBackend b;
  CHECK(b.generate("Summarize.\nDOCUMENT: A. B. C. D.", 256) == "A. B. C.");
  CHECK(b.generate("DECOMPOSE: X, and Y.", 256) == "X\nY");
  CHECK(b.generate("DECOMPOSE: The lungs are clear.", 256) == "The lungs are clear.");
  CHECK(b.generate("DOCUMENT: one two three four.", 2) == "one two");
  // a marker inside a line is content, not a marker
  CHECK(b.generate("DOCUMENT:\nSee DOCUMENT: here. Next.", 256) == "See DOCUMENT: here. Next.");
  CHECK_THROWS_AS(b.generate("", 256), PreconditionError);
  CHECK_THROWS_AS(b.generate("DOCUMENT: x", 0), PreconditionError);
  CHECK_THROWS_AS(b.generate("DOCUMENT:   ", 16), BackendError);
}

TEST_CASE("stub responses honour the simplex and norm contracts and are pure") {
  const StubBackend b;
  const std::vector<std::string> vocab = {"no", "the", "heart", "not", "lungs", "clear",
                                          "mass", "", "effusion", "never", "3.5", "cm"};
  std::mt19937 rng(17);
  auto sample = [&](int max_len) {
    std::string s;
    const int n = static_cast<int>(rng() % (max_len + 1));
    for (int i = 0; i < n; ++i) s += vocab[rng() % vocab.size()] + " ";
    return s;
  };
  for (int i = 0; i < 500; ++i) {
    std::string h = sample(6);
    if (text::trim(h).empty()) h = "heart";
    const std::string p = sample(10);
    const auto d = b.nli_score(p, h);
    CHECK(std::abs(d.sum() - 1.0) <= 1e-4);
    CHECK(same(d, b.nli_score(p, h)));
    const auto e = b.embed({p})[0];
    const double n = l2_norm(e);
    CHECK((n == 0.0 || std::abs(n - 1.0) <= 1e-6));
    CHECK(e == b.embed({p})[0]);
  }
}

namespace {

class BrokenBackend : public StubBackend {
 public:
  NliDistribution nli{0.5, 0.5, 0.5};
  double ppl = 0.5;

 protected:
  NliDistribution do_nli(std::string_view, std::string_view) const override { return nli; }
  double do_perplexity(std::string_view) const override { return ppl; }
  std::vector<Embedding> do_embed(const std::vector<std::string>&) const override {
    return {Embedding{3.0, 4.0}};
  }
};

}  // namespace

TEST_CASE("contract violations surface as backend errors") {
  BrokenBackend b;
  CHECK_THROWS_AS(b.nli_score("a", "b"), BackendError);
  CHECK_THROWS_AS(b.perplexity("a b"), BackendError);
  CHECK_THROWS_AS(b.embed({"a"}), BackendError);
  CHECK_THROWS_AS(b.embed({"a", "b"}), BackendError);
}
