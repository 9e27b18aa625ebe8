#include "faithsum/benchmark.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <set>
#include <sstream>

#include "faithsum/error.hpp"
#include "faithsum/text.hpp"

namespace faithsum {

namespace {

using Tokens = std::vector<std::string>;

// Indices into `ref` of one LCS of (ref, cand).
std::vector<std::size_t> lcs_indices(const Tokens& ref, const Tokens& cand) {
  const std::size_t m = ref.size();
  const std::size_t n = cand.size();
  std::vector<std::vector<std::size_t>> t(m + 1, std::vector<std::size_t>(n + 1, 0));
  for (std::size_t i = 1; i <= m; ++i) {
    for (std::size_t j = 1; j <= n; ++j) {
      t[i][j] = ref[i - 1] == cand[j - 1] ? t[i - 1][j - 1] + 1
                                          : std::max(t[i - 1][j], t[i][j - 1]);
    }
  }
  std::vector<std::size_t> out;
  std::size_t i = m;
  std::size_t j = n;
  while (i > 0 && j > 0) {
    if (ref[i - 1] == cand[j - 1]) {
      out.push_back(i - 1);
      --i;
      --j;
    } else if (t[i][j - 1] > t[i - 1][j]) {
      --j;
    } else {
      --i;
    }
  }
  std::reverse(out.begin(), out.end());
  return out;
}

std::vector<Tokens> tokenized_sentences(std::string_view s, const SentenceSplitter& splitter) {
  std::vector<Tokens> out;
  for (const auto& sentence : splitter.sentences(s)) {
    auto toks = text::word_tokens(sentence);
    if (!toks.empty()) out.push_back(std::move(toks));
  }
  return out;
}

}  // namespace

RougeScore rouge_l_sum(std::string_view candidate, std::string_view reference,
                       const SentenceSplitter& splitter) {
  const auto cand = tokenized_sentences(candidate, splitter);
  const auto ref = tokenized_sentences(reference, splitter);
  std::map<std::string, std::size_t> cand_counts;
  std::map<std::string, std::size_t> ref_counts;
  std::size_t n = 0;
  std::size_t m = 0;
  for (const auto& s : cand) {
    for (const auto& t : s) ++cand_counts[t];
    n += s.size();
  }
  for (const auto& s : ref) {
    for (const auto& t : s) ++ref_counts[t];
    m += s.size();
  }
  if (m == 0 || n == 0) return {};

  std::size_t hits = 0;
  for (const auto& r : ref) {
    std::set<std::size_t> united;
    for (const auto& c : cand) {
      for (auto idx : lcs_indices(r, c)) united.insert(idx);
    }
    for (auto idx : united) {
      const auto& tok = r[idx];
      auto& cc = cand_counts[tok];
      auto& rc = ref_counts[tok];
      if (cc > 0 && rc > 0) {
        ++hits;
        --cc;
        --rc;
      }
    }
  }
  RougeScore out;
  out.precision = static_cast<double>(hits) / static_cast<double>(n);
  out.recall = static_cast<double>(hits) / static_cast<double>(m);
  if (out.precision + out.recall > 0.0) {
    out.f1 = 2.0 * out.precision * out.recall / (out.precision + out.recall);
  }
  return out;
}

std::string_view to_string(TieRule rule) {
  switch (rule) {
    case TieRule::dense: return "dense";
    case TieRule::fractional: return "fractional";
    case TieRule::min: return "min";
  }
  return "dense";
}

TieRule parse_tie_rule(std::string_view s) {
  if (s == "dense") return TieRule::dense;
  if (s == "fractional" || s == "average") return TieRule::fractional;
  if (s == "min" || s == "competition") return TieRule::min;
  throw ParseError("unknown tie rule: '" + std::string(s) + "'");
}

std::vector<double> rank_values(const std::vector<double>& values, bool higher_is_better,
                                TieRule rule) {
  const std::size_t n = values.size();
  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), 0);
  auto better = [&](double a, double b) { return higher_is_better ? a > b : a < b; };
  std::stable_sort(idx.begin(), idx.end(),
                   [&](std::size_t a, std::size_t b) { return better(values[a], values[b]); });

  std::vector<double> ranks(n, 0.0);
  std::size_t distinct = 0;
  for (std::size_t i = 0; i < n;) {
    std::size_t j = i;
    while (j < n && values[idx[j]] == values[idx[i]]) ++j;
    ++distinct;
    double r = 0.0;
    switch (rule) {
      case TieRule::dense: r = static_cast<double>(distinct); break;
      case TieRule::min: r = static_cast<double>(i + 1); break;
      // mean of positions i+1 .. j
      case TieRule::fractional: r = static_cast<double>(i + 1 + j) / 2.0; break;
    }
    for (std::size_t k = i; k < j; ++k) ranks[idx[k]] = r;
    i = j;
  }
  return ranks;
}

std::string MetricSpec::group() const {
  const auto slash = name.rfind('/');
  return slash == std::string::npos ? std::string() : name.substr(0, slash);
}

std::string MethodEntry::display() const {
  return model.empty() ? method : method + " (" + model + ")";
}

void MetricTable::validate() const {
  std::set<std::string> names;
  for (const auto& m : metrics) {
    if (!names.insert(m.name).second) throw ParseError("duplicate metric name: " + m.name);
  }
  if (scores.size() != methods.size()) {
    throw ParseError("metric table: score rows do not match method count");
  }
  for (std::size_t i = 0; i < scores.size(); ++i) {
    if (scores[i].size() != metrics.size()) {
      throw ParseError("metric table: row " + std::to_string(i + 1) + " has " +
                       std::to_string(scores[i].size()) + " scores, expected " +
                       std::to_string(metrics.size()));
    }
    for (double v : scores[i]) {
      if (!std::isfinite(v)) throw ParseError("metric table: non-finite score");
    }
  }
}

namespace {

std::vector<std::string> split_csv_line(std::string_view line, std::size_t line_no) {
  std::vector<std::string> cells;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    const char c = line[i];
    if (quoted) {
      if (c == '"' && i + 1 < line.size() && line[i + 1] == '"') {
        cur.push_back('"');
        ++i;
      } else if (c == '"') {
        quoted = false;
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == ',') {
      cells.push_back(std::move(cur));
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (quoted) throw ParseError("csv line " + std::to_string(line_no) + ": unterminated quote");
  cells.push_back(std::move(cur));
  for (auto& c : cells) c = std::string(text::trim(c));
  return cells;
}

MetricSpec parse_metric_header(std::string_view cell) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  while (true) {
    auto colon = cell.find(':', start);
    parts.emplace_back(text::trim(cell.substr(start, colon - start)));
    if (colon == std::string_view::npos) break;
    start = colon + 1;
  }
  if (parts.size() < 2 || parts.size() > 3 || parts[0].empty()) {
    throw ParseError("metric header must be name:direction[:entailment], got '" +
                     std::string(cell) + "'");
  }
  MetricSpec spec;
  spec.name = parts[0];
  const std::string dir = text::to_lower(parts[1]);
  if (dir == "higher" || dir == "max" || dir == "+") {
    spec.higher_is_better = true;
  } else if (dir == "lower" || dir == "min" || dir == "-") {
    spec.higher_is_better = false;
  } else {
    throw ParseError("unknown metric direction '" + parts[1] + "' in '" + std::string(cell) + "'");
  }
  if (parts.size() == 3) {
    if (text::to_lower(parts[2]) != "entailment") {
      throw ParseError("unknown metric flag '" + parts[2] + "'");
    }
    spec.is_entailment = true;
  } else {
    const auto slash = spec.name.rfind('/');
    const std::string base =
        text::to_lower(slash == std::string::npos ? spec.name : spec.name.substr(slash + 1));
    spec.is_entailment = base.rfind("ent", 0) == 0;
  }
  return spec;
}

}  // namespace

MetricTable parse_metric_table(std::string_view csv) {
  MetricTable table;
  bool have_header = false;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < csv.size()) {
    auto nl = csv.find('\n', pos);
    if (nl == std::string_view::npos) nl = csv.size();
    std::string_view line = csv.substr(pos, nl - pos);
    pos = nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (text::trim(line).empty()) continue;

    auto cells = split_csv_line(line, line_no);
    if (!have_header) {
      if (cells.size() < 3 || text::to_lower(cells[0]) != "method" ||
          text::to_lower(cells[1]) != "model") {
        throw ParseError("csv header must start with method,model and name at least one metric");
      }
      for (std::size_t i = 2; i < cells.size(); ++i) {
        table.metrics.push_back(parse_metric_header(cells[i]));
      }
      have_header = true;
      continue;
    }
    if (cells.size() != table.metrics.size() + 2) {
      throw ParseError("csv line " + std::to_string(line_no) + ": expected " +
                       std::to_string(table.metrics.size() + 2) + " cells, got " +
                       std::to_string(cells.size()));
    }
    table.methods.push_back({cells[0], cells[1]});
    std::vector<double> row;
    for (std::size_t i = 2; i < cells.size(); ++i) {
      double v = 0.0;
      const auto& c = cells[i];
      auto [p, ec] = std::from_chars(c.data(), c.data() + c.size(), v);
      if (c.empty() || ec != std::errc() || p != c.data() + c.size()) {
        throw ParseError("csv line " + std::to_string(line_no) + ": bad score '" + c + "'");
      }
      row.push_back(v);
    }
    table.scores.push_back(std::move(row));
  }
  if (!have_header) throw ParseError("metric table is empty");
  if (table.methods.empty()) throw ParseError("metric table has no method rows");
  table.validate();
  return table;
}

MetricTable load_metric_table(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open metric table: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_metric_table(buf.str());
}

Ranking rank_methods(const MetricTable& table, bool include_entailment, TieRule rule) {
  table.validate();
  Ranking out;
  out.include_entailment = include_entailment;
  out.rule = rule;
  const std::size_t n = table.methods.size();
  out.per_metric_ranks.assign(n, {});
  out.aggregate.assign(n, 0.0);

  for (std::size_t j = 0; j < table.metrics.size(); ++j) {
    const auto& metric = table.metrics[j];
    if (metric.is_entailment && !include_entailment) continue;
    out.metric_columns.push_back(j);
    std::vector<double> column(n);
    for (std::size_t i = 0; i < n; ++i) column[i] = table.scores[i][j];
    const auto ranks = rank_values(column, metric.higher_is_better, rule);
    for (std::size_t i = 0; i < n; ++i) {
      out.per_metric_ranks[i].push_back(ranks[i]);
      out.aggregate[i] += ranks[i];
    }
  }

  out.ordering.resize(n);
  std::iota(out.ordering.begin(), out.ordering.end(), 0);
  std::stable_sort(out.ordering.begin(), out.ordering.end(), [&](std::size_t a, std::size_t b) {
    if (out.aggregate[a] != out.aggregate[b]) return out.aggregate[a] < out.aggregate[b];
    const auto& ma = table.methods[a];
    const auto& mb = table.methods[b];
    if (ma.method != mb.method) return ma.method < mb.method;
    return ma.model < mb.model;
  });
  return out;
}

RankReport rank_report(const MetricTable& table, TieRule rule) {
  return {rank_methods(table, true, rule), rank_methods(table, false, rule)};
}

nlohmann::json to_json(const MetricTable& table, const Ranking& ranking) {
  nlohmann::json metrics = nlohmann::json::array();
  for (auto j : ranking.metric_columns) metrics.push_back(table.metrics[j].name);
  nlohmann::json rows = nlohmann::json::array();
  for (std::size_t pos = 0; pos < ranking.ordering.size(); ++pos) {
    const auto i = ranking.ordering[pos];
    rows.push_back({{"position", pos + 1},
                    {"method", table.methods[i].method},
                    {"model", table.methods[i].model},
                    {"aggregate", ranking.aggregate[i]},
                    {"per_metric_ranks", ranking.per_metric_ranks[i]}});
  }
  return {{"include_entailment", ranking.include_entailment},
          {"tie_rule", to_string(ranking.rule)},
          {"metrics", std::move(metrics)},
          {"ranking", std::move(rows)}};
}

std::string format_ranking(const MetricTable& table, const Ranking& ranking) {
  std::size_t width = 6;
  for (const auto& m : table.methods) width = std::max(width, m.display().size());
  std::ostringstream out;
  out << (ranking.include_entailment ? "Ranking with entailment" : "Ranking without entailment")
      << " (" << ranking.metric_columns.size() << " metrics, tie rule "
      << to_string(ranking.rule) << ")\n";
  out << std::left << std::setw(5) << "pos" << std::setw(static_cast<int>(width) + 2) << "method"
      << std::right << std::setw(10) << "rank sum" << '\n';
  for (std::size_t pos = 0; pos < ranking.ordering.size(); ++pos) {
    const auto i = ranking.ordering[pos];
    out << std::left << std::setw(5) << pos + 1 << std::setw(static_cast<int>(width) + 2)
        << table.methods[i].display() << std::right << std::setw(10) << std::fixed
        << std::setprecision(1) << ranking.aggregate[i] << '\n';
  }
  return out.str();
}

}  // namespace faithsum
