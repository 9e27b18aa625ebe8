#include "faithsum/stage3.hpp"

#include <algorithm>
#include <fstream>
#include <limits>

#include "faithsum/error.hpp"
#include "faithsum/text.hpp"

namespace faithsum {

std::vector<std::size_t> mmr_order(const std::vector<Embedding>& candidates,
                                   const Embedding& context, std::size_t k, double lambda,
                                   std::vector<double>* scores) {
  if (!(lambda >= 0.0 && lambda <= 1.0)) {
    throw PreconditionError("mmr: lambda must lie in [0,1]");
  }
  const std::size_t n = candidates.size();
  k = std::min(k, n);
  std::vector<double> relevance(n);
  for (std::size_t i = 0; i < n; ++i) relevance[i] = dot(candidates[i], context);

  std::vector<bool> taken(n, false);
  // Max similarity of each candidate to the selected set; unused until the
  // first pick.
  std::vector<double> redundancy(n, -std::numeric_limits<double>::infinity());
  std::vector<std::size_t> order;
  if (scores) scores->clear();

  for (std::size_t step = 0; step < k; ++step) {
    std::size_t best = n;
    double best_score = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (taken[i]) continue;
      const double penalty = order.empty() ? 0.0 : redundancy[i];
      const double score = lambda * relevance[i] - (1.0 - lambda) * penalty;
      if (best == n || score > best_score) {
        best = i;
        best_score = score;
      }
    }
    taken[best] = true;
    order.push_back(best);
    if (scores) scores->push_back(best_score);
    for (std::size_t i = 0; i < n; ++i) {
      if (!taken[i]) redundancy[i] = std::max(redundancy[i], dot(candidates[i], candidates[best]));
    }
  }
  return order;
}

std::vector<KeyUnit> mmr_select(const std::vector<std::string>& candidates,
                                std::string_view context, std::size_t k, double lambda,
                                const Backend& embedder, KeySource source) {
  if (candidates.empty() || k == 0) return {};
  std::vector<std::string> texts = candidates;
  texts.emplace_back(context);
  auto vectors = embedder.embed(texts);
  const Embedding context_vec = std::move(vectors.back());
  vectors.pop_back();

  std::vector<double> scores;
  const auto order = mmr_order(vectors, context_vec, k, lambda, &scores);
  std::vector<KeyUnit> out;
  for (std::size_t i = 0; i < order.size(); ++i) {
    const std::size_t idx = order[i];
    out.push_back({candidates[idx], source, vectors[idx], scores[i], idx});
  }
  return out;
}

std::set<std::string> default_stopwords() {
  // Common English function words (close to the usual IR stop lists).
  static const char* const kWords[] = {
      "a", "about", "above", "after", "again", "against", "all", "am", "an", "and",
      "any", "are", "as", "at", "be", "because", "been", "before", "being", "below",
      "between", "both", "but", "by", "can", "could", "did", "do", "does", "doing",
      "down", "during", "each", "few", "for", "from", "further", "had", "has", "have",
      "having", "he", "her", "here", "hers", "herself", "him", "himself", "his", "how",
      "i", "if", "in", "into", "is", "it", "its", "itself", "just", "me", "more", "most",
      "my", "myself", "nor", "now", "of", "off", "on", "once", "only", "or", "other",
      "our", "ours", "ourselves", "out", "over", "own", "same", "she", "should", "so",
      "some", "such", "than", "that", "the", "their", "theirs", "them", "themselves",
      "then", "there", "these", "they", "this", "those", "through", "to", "too", "under",
      "until", "up", "very", "was", "we", "were", "what", "when", "where", "which",
      "while", "who", "whom", "why", "will", "with", "would", "you", "your", "yours",
      "yourself", "yourselves"};
  return {std::begin(kWords), std::end(kWords)};
}

std::set<std::string> load_stopwords(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open stopword list: " + path.string());
  std::set<std::string> out;
  std::string line;
  while (std::getline(in, line)) {
    auto t = text::trim(line);
    if (t.empty() || t.front() == '#') continue;
    out.insert(text::to_lower(t));
  }
  return out;
}

namespace {

bool is_word_byte(char c) {
  const auto u = static_cast<unsigned char>(c);
  return (u >= 'a' && u <= 'z') || (u >= 'A' && u <= 'Z') || (u >= '0' && u <= '9') ||
         u >= 0x80;
}

}  // namespace

std::vector<std::string> candidate_phrases(std::string_view summary,
                                           const std::set<std::string>& stopwords) {
  std::vector<std::vector<std::string>> runs(1);
  auto break_run = [&] {
    if (!runs.back().empty()) runs.emplace_back();
  };
  for (auto word : text::whitespace_tokens(summary)) {
    std::size_t b = 0;
    std::size_t e = word.size();
    while (b < e && !is_word_byte(word[b])) ++b;
    while (e > b && !is_word_byte(word[e - 1])) --e;
    if (b > 0) break_run();
    const std::string token = text::to_lower(word.substr(b, e - b));
    if (token.empty() || stopwords.count(token)) {
      break_run();
      continue;
    }
    runs.back().push_back(token);
    if (e < word.size()) break_run();
  }

  std::vector<std::string> out;
  std::set<std::string> seen;
  for (const auto& run : runs) {
    for (std::size_t i = 0; i < run.size(); ++i) {
      std::string phrase;
      for (std::size_t n = 0; n < 3 && i + n < run.size(); ++n) {
        if (n) phrase.push_back(' ');
        phrase += run[i + n];
        if (seen.insert(phrase).second) out.push_back(phrase);
      }
    }
  }
  return out;
}

std::vector<KeyUnit> extract_key_sentences(std::string_view document_text, const Thresholds& th,
                                           const Backend& embedder,
                                           const SentenceSplitter& splitter) {
  const auto sentences = splitter.sentences(document_text);
  return mmr_select(sentences, document_text, static_cast<std::size_t>(th.top_m),
                    th.mmr_lambda, embedder, KeySource::doc_sentence);
}

std::vector<KeyUnit> extract_key_sentences(const Document& document, const Thresholds& th,
                                           const Backend& embedder,
                                           const SentenceSplitter& splitter) {
  return extract_key_sentences(document.text(), th, embedder, splitter);
}

std::vector<KeyUnit> extract_key_phrases(std::string_view summary, const Thresholds& th,
                                         const Backend& embedder,
                                         const std::set<std::string>& stopwords) {
  const auto phrases = candidate_phrases(summary, stopwords);
  return mmr_select(phrases, summary, static_cast<std::size_t>(th.top_n), th.mmr_lambda,
                    embedder, KeySource::summary_phrase);
}

CoverageReport coverage(std::vector<KeyUnit> key_sentences, std::vector<KeyUnit> key_phrases) {
  CoverageReport r;
  r.rows = key_sentences.size();
  r.cols = key_phrases.size();
  r.sim_matrix.reserve(r.rows * r.cols);
  for (const auto& s : key_sentences) {
    double best = -std::numeric_limits<double>::infinity();
    for (const auto& p : key_phrases) {
      if (s.embedding.empty() || p.embedding.empty()) {
        throw PreconditionError("coverage: key unit without embedding");
      }
      const double v = dot(s.embedding, p.embedding);
      r.sim_matrix.push_back(v);
      best = std::max(best, v);
    }
    r.cov_scores.push_back(best);
  }
  r.key_sentences = std::move(key_sentences);
  r.key_phrases = std::move(key_phrases);
  return r;
}

CoverageReport coverage(std::vector<KeyUnit> key_sentences, std::vector<KeyUnit> key_phrases,
                        const Backend& embedder) {
  auto refresh = [&](std::vector<KeyUnit>& units) {
    std::vector<std::string> texts;
    for (const auto& u : units) texts.push_back(u.text);
    auto vectors = embedder.embed(texts);
    for (std::size_t i = 0; i < units.size(); ++i) units[i].embedding = std::move(vectors[i]);
  };
  refresh(key_sentences);
  refresh(key_phrases);
  return coverage(std::move(key_sentences), std::move(key_phrases));
}

std::vector<KeyUnit> detect_missing(const CoverageReport& report, double cov_min) {
  std::vector<KeyUnit> out;
  for (std::size_t i = 0; i < report.key_sentences.size(); ++i) {
    if (report.cov_scores[i] <= cov_min) out.push_back(report.key_sentences[i]);
  }
  std::stable_sort(out.begin(), out.end(),
                   [](const KeyUnit& a, const KeyUnit& b) { return a.position < b.position; });
  return out;
}

std::string insert_sentence(std::string_view summary, std::string_view sentence,
                            std::size_t position, const SentenceSplitter& splitter) {
  auto sentences = splitter.sentences(summary);
  if (position > sentences.size()) {
    throw PreconditionError("insert_sentence: position " + std::to_string(position) +
                            " beyond " + std::to_string(sentences.size()) + " sentences");
  }
  sentences.insert(sentences.begin() + static_cast<std::ptrdiff_t>(position),
                   std::string(text::trim(sentence)));
  for (std::size_t i = 0; i + 1 < sentences.size(); ++i) {
    if (!text::ends_with_terminal(sentences[i])) sentences[i].push_back('.');
  }
  return text::join(sentences, " ");
}

MergeResult merge_missing(const SummaryDraft& summary, const std::vector<KeyUnit>& missing,
                          const Backend& ppl_scorer, const SentenceSplitter& splitter) {
  MergeResult out;
  std::string current = summary.text;
  try {
    for (const auto& unit : missing) {
      const std::size_t slots = splitter.split(current).size();
      std::string best_text;
      Insertion best{unit.text, 0, 0.0};
      for (std::size_t loc = 0; loc <= slots; ++loc) {
        std::string candidate = insert_sentence(current, unit.text, loc, splitter);
        const double ppl = ppl_scorer.perplexity(candidate);
        if (loc == 0 || ppl < best.perplexity) {
          best.position = loc;
          best.perplexity = ppl;
          best_text = std::move(candidate);
        }
      }
      out.insertions.push_back(best);
      current = std::move(best_text);
    }
  } catch (const BackendError& e) {
    out.failed = true;
    out.error = e.what();
    out.insertions.clear();
    current = summary.text;
  }
  out.final_summary = summary.stage == Stage::refined
                          ? summary.advance(Stage::final, std::move(current))
                          : SummaryDraft{std::move(current), Stage::final, summary.parent_id};
  return out;
}

std::string replay_insertions(std::string_view refined, const std::vector<Insertion>& insertions,
                              const SentenceSplitter& splitter) {
  std::string current(refined);
  for (const auto& ins : insertions) {
    current = insert_sentence(current, ins.text, ins.position, splitter);
  }
  return current;
}

}  // namespace faithsum
