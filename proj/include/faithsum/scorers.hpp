#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "faithsum/core.hpp"

namespace faithsum {

using Embedding = std::vector<double>;

// The four model capabilities the pipeline consumes. Public entry points check
// preconditions and response contracts so every backend behaves alike;
// implementations override the do_* hooks. Implementations must be safe to
// call from several threads.
class Backend {
 public:
  virtual ~Backend() = default;

  // P(label | premise, hypothesis). Hypothesis must be non-empty.
  NliDistribution nli_score(std::string_view premise, std::string_view hypothesis) const;

  // One vector per text; unit norm, or all zeros for text without tokens.
  std::vector<Embedding> embed(const std::vector<std::string>& texts) const;

  // >= 1. Text must be non-empty.
  double perplexity(std::string_view text) const;

  // Non-empty completion; an empty one is a BackendError.
  std::string generate(std::string_view prompt, int max_tokens) const;

  virtual std::string describe() const = 0;

 protected:
  virtual NliDistribution do_nli(std::string_view premise,
                                 std::string_view hypothesis) const = 0;
  virtual std::vector<Embedding> do_embed(const std::vector<std::string>& texts) const = 0;
  virtual double do_perplexity(std::string_view text) const = 0;
  virtual std::string do_generate(std::string_view prompt, int max_tokens) const = 0;
};

// NLI against a premise that may exceed the model context. The document is
// cut into whitespace-token windows of `window` tokens every `stride` tokens
// (the last window is aligned to the end) and the distribution of the
// window with the highest entailment wins; earliest window on ties. A
// document that fits one window is scored as-is; an empty one yields
// {0, 1, 0} without a backend call.
NliDistribution nli_with_chunking(const Backend& backend, std::string_view document,
                                  std::string_view hypothesis, std::size_t window,
                                  std::size_t stride);

// The windows nli_with_chunking scores, in order.
std::vector<std::string> premise_chunks(std::string_view document, std::size_t window,
                                        std::size_t stride);

double dot(const Embedding& a, const Embedding& b);
double l2_norm(const Embedding& v);

}  // namespace faithsum
