#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace faithsum {

enum class DatasetKind { mimic3, meqsum, acibench, generic };

std::string_view to_string(DatasetKind kind);
// Accepts the enum names plus the dataset spellings "mimic-iii", "aci-bench".
DatasetKind parse_dataset_kind(std::string_view s);

// A source document. Construction validates that the text has content.
class Document {
 public:
  Document(std::string id, std::string text,
           DatasetKind kind = DatasetKind::generic);

  const std::string& id() const { return id_; }
  const std::string& text() const { return text_; }
  DatasetKind kind() const { return kind_; }

 private:
  std::string id_;
  std::string text_;
  DatasetKind kind_;
};

enum class Stage { initial, refined, final };

std::string_view to_string(Stage stage);

struct SummaryDraft {
  std::string text;
  Stage stage = Stage::initial;
  std::string parent_id;

  // initial -> refined -> final; anything else throws PreconditionError.
  SummaryDraft advance(Stage next, std::string new_text) const;
};

// Tunable surface of the pipeline. t_e, t_c, t_a, top_m and cov_min default to
// tuned values; top_n and mmr_lambda are engine defaults.
struct Thresholds {
  double t_e = 0.9;
  double t_c = 0.8;
  double t_a = 0.5;
  int top_m = 2;
  int top_n = 10;
  double cov_min = 0.4;
  double mmr_lambda = 0.5;

  // Throws ConfigError naming the offending field.
  void validate() const;

  // True when no point of the probability simplex can be both entailed and
  // confabulated under these thresholds.
  bool labels_exclusive() const { return t_e + t_c >= 1.0; }

  bool operator==(const Thresholds&) const = default;
};

struct NliDistribution {
  double entailment = 0.0;
  double neutral = 0.0;
  double contradiction = 0.0;

  double sum() const { return entailment + neutral + contradiction; }
  bool is_valid(double tol = 1e-4) const;

  bool operator==(const NliDistribution&) const = default;
};

enum class DsuLevel { sentence, atomic };
enum class DsuLabel { entailed, confab, uncertain };

std::string_view to_string(DsuLevel level);
std::string_view to_string(DsuLabel label);
DsuLevel parse_dsu_level(std::string_view s);
DsuLabel parse_dsu_label(std::string_view s);

// Decomposed summary unit: a summary sentence or one of its atomic facts.
struct Dsu {
  std::string text;
  DsuLevel level = DsuLevel::sentence;
  std::optional<std::size_t> parent_index;  // sentence index, atomic only
  NliDistribution scores;
  DsuLabel label = DsuLabel::uncertain;
  bool retained = false;

  bool operator==(const Dsu&) const = default;
};

enum class KeySource { doc_sentence, summary_phrase };

struct KeyUnit {
  std::string text;
  KeySource source = KeySource::doc_sentence;
  std::vector<double> embedding;
  double mmr_score = 0.0;
  std::size_t position = 0;  // index in the candidate list it came from
};

struct Insertion {
  std::string text;
  std::size_t position = 0;
  double perplexity = 0.0;

  bool operator==(const Insertion&) const = default;
};

}  // namespace faithsum
