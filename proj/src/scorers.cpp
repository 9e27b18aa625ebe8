#include "faithsum/scorers.hpp"

#include <cmath>

#include "faithsum/error.hpp"
#include "faithsum/text.hpp"

namespace faithsum {

namespace {

constexpr double kSimplexTol = 1e-4;
constexpr double kNormTol = 1e-6;

}  // namespace

NliDistribution Backend::nli_score(std::string_view premise,
                                   std::string_view hypothesis) const {
  if (hypothesis.empty()) throw PreconditionError("nli_score: empty hypothesis");
  NliDistribution d = do_nli(premise, hypothesis);
  if (!d.is_valid(kSimplexTol)) {
    throw BackendError("nli_score: response is not a probability distribution");
  }
  return d;
}

std::vector<Embedding> Backend::embed(const std::vector<std::string>& texts) const {
  auto vectors = do_embed(texts);
  if (vectors.size() != texts.size()) {
    throw BackendError("embed: expected " + std::to_string(texts.size()) +
                       " vectors, got " + std::to_string(vectors.size()));
  }
  for (const auto& v : vectors) {
    if (!vectors.empty() && v.size() != vectors.front().size()) {
      throw BackendError("embed: vectors have inconsistent dimensions");
    }
    const double norm = l2_norm(v);
    if (norm != 0.0 && std::fabs(norm - 1.0) > kNormTol) {
      throw BackendError("embed: vector is not unit-norm");
    }
  }
  return vectors;
}

double Backend::perplexity(std::string_view text) const {
  if (text::trim(text).empty()) throw PreconditionError("perplexity: empty text");
  const double ppl = do_perplexity(text);
  if (!std::isfinite(ppl) || ppl < 1.0) {
    throw BackendError("perplexity: value must be finite and >= 1");
  }
  return ppl;
}

std::string Backend::generate(std::string_view prompt, int max_tokens) const {
  if (text::trim(prompt).empty()) throw PreconditionError("generate: empty prompt");
  if (max_tokens < 1) throw PreconditionError("generate: max_tokens must be positive");
  std::string out = do_generate(prompt, max_tokens);
  if (text::trim(out).empty()) throw BackendError("generate: empty completion");
  return out;
}

std::vector<std::string> premise_chunks(std::string_view document, std::size_t window,
                                        std::size_t stride) {
  if (stride == 0 || window < stride) {
    throw PreconditionError("premise_chunks: requires window >= stride > 0");
  }
  const auto tokens = text::whitespace_tokens(document);
  std::vector<std::string> chunks;
  if (tokens.empty()) return chunks;
  if (tokens.size() <= window) {
    chunks.emplace_back(document);
    return chunks;
  }
  auto chunk_at = [&](std::size_t begin) {
    std::string s;
    for (std::size_t i = begin; i < begin + window; ++i) {
      if (i > begin) s.push_back(' ');
      s.append(tokens[i]);
    }
    return s;
  };
  std::size_t begin = 0;
  while (begin + window < tokens.size()) {
    chunks.push_back(chunk_at(begin));
    begin += stride;
  }
  chunks.push_back(chunk_at(tokens.size() - window));
  return chunks;
}

NliDistribution nli_with_chunking(const Backend& backend, std::string_view document,
                                  std::string_view hypothesis, std::size_t window,
                                  std::size_t stride) {
  if (hypothesis.empty()) throw PreconditionError("nli_with_chunking: empty hypothesis");
  const auto chunks = premise_chunks(document, window, stride);
  if (chunks.empty()) return {0.0, 1.0, 0.0};
  NliDistribution best = backend.nli_score(chunks.front(), hypothesis);
  for (std::size_t i = 1; i < chunks.size(); ++i) {
    const auto d = backend.nli_score(chunks[i], hypothesis);
    if (d.entailment > best.entailment) best = d;
  }
  return best;
}

double dot(const Embedding& a, const Embedding& b) {
  if (a.size() != b.size()) {
    throw PreconditionError("dot: dimension mismatch");
  }
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double l2_norm(const Embedding& v) {
  double s = 0.0;
  for (double x : v) s += x * x;
  return std::sqrt(s);
}

}  // namespace faithsum
