// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any
// criterion fails. Everything runs against the stub backends.
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "faithsum/benchmark.hpp"
#include "faithsum/config.hpp"
#include "faithsum/runner.hpp"
#include "faithsum/stage2.hpp"
#include "faithsum/stage3.hpp"
#include "faithsum/stub_backend.hpp"
#include "faithsum/text.hpp"
#include "oracles.hpp"

using namespace faithsum;
namespace fs = std::filesystem;

namespace {

const fs::path kData = FAITHSUM_TEST_DATA;

struct Outcome {
  bool ok = true;
  std::string detail;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) {
      ok = false;
      detail = what;
    }
  }
};

int failures = 0;

void criterion(const std::string& name, double budget_s, const std::function<Outcome()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = body();
  } catch (const std::exception& e) {
    o.ok = false;
    o.detail = std::string("exception: ") + e.what();
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (budget_s > 0 && secs >= budget_s) {
    o.require(false, "took " + std::to_string(secs) + " s, budget " + std::to_string(budget_s) + " s");
  }
  char timing[32];
  std::snprintf(timing, sizeof timing, "%.3fs", secs);
  std::cout << (o.ok ? "PASS " : "FAIL ") << name << " [" << timing << "]";
  if (!o.detail.empty()) std::cout << ": " << o.detail;
  std::cout << '\n';
  if (!o.ok) ++failures;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::map<std::string, std::pair<int, int>> reference_positions() {
  std::ifstream in(kData / "leaderboard_positions.csv");
  std::string line;
  std::getline(in, line);
  std::map<std::string, std::pair<int, int>> out;
  while (std::getline(in, line)) {
    std::vector<std::string> f;
    std::stringstream ss(line);
    for (std::string cell; std::getline(ss, cell, ',');) f.push_back(cell);
    out[f[0] + " (" + f[1] + ")"] = {std::stoi(f[2]), std::stoi(f[3])};
  }
  return out;
}

KeyUnit unit(std::string text, Embedding e, std::size_t pos) {
  return {std::move(text), KeySource::doc_sentence, std::move(e), 0.0, pos};
}

bool close(double a, double b, double tol) { return std::abs(a - b) <= tol; }

}  // namespace

int main() {
  criterion("leaderboard-rank-recomputation", 1.0, [] {
    Outcome o;
    const auto table = load_metric_table(kData / "leaderboard_scores.csv");
    const auto report = rank_report(table);
    const auto reference = reference_positions();
    const std::string leader = "Element Aware + ICL + uMedSum (GPT-4)";
    for (bool with : {true, false}) {
      const auto& r = with ? report.with_entailment : report.without_entailment;
      const std::string tag = with ? "with entailment" : "without entailment";
      const auto top = table.methods[r.ordering[0]].display();
      o.require(top == leader, tag + ": rank 1 is " + top);
      std::set<std::string> got, want;
      for (std::size_t i = 0; i < 3; ++i) got.insert(table.methods[r.ordering[i]].display());
      for (const auto& [name, pos] : reference) {
        if ((with ? pos.first : pos.second) <= 3) want.insert(name);
      }
      o.require(got == want, tag + ": top-3 differs from the reference top-3");
    }
    o.detail = o.ok ? "top-1 and top-3 match in both orderings" : o.detail;
    return o;
  });

  criterion("default-thresholds", 0, [] {
    Outcome o;
    const auto t = parse_config("").thresholds;
    o.require(t.t_e == 0.9, "t_e");
    o.require(t.t_c == 0.8, "t_c");
    o.require(t.t_a == 0.5, "t_a");
    o.require(t.top_m == 2, "top_m");
    o.require(t.cov_min == 0.4, "cov_min");
    o.require(Thresholds{} == t, "struct defaults differ from empty config");
    return o;
  });

  criterion("rtb-ts-oracle-200", 5.0, [] {
    Outcome o;
    const StubBackend stub;
    const Thresholds th;
    std::mt19937 rng(20240601);
    for (int i = 0; i < 200 && o.ok; ++i) {
      const auto c = oracle::random_rtb_case(rng);
      const auto want = oracle::rtb(c, th.t_e, th.t_c, th.t_a);
      const auto got = rtb_ts(Document("d", c.document),
                              SummaryDraft{c.summary_text(), Stage::initial, "d"}, stub, &stub, th);
      std::vector<std::string> kept;
      for (const auto& d : got.dsus) {
        if (d.retained) kept.push_back(d.text);
      }
      o.require(kept == want.retained, "case " + std::to_string(i) + ": retained set differs");
      o.require(got.refined.text == want.refined, "case " + std::to_string(i) + ": refined text differs");
    }
    return o;
  });

  criterion("mmr-oracle-200", 5.0, [] {
    Outcome o;
    const StubBackend stub;
    const auto& vocab = oracle::vocabulary();
    std::mt19937 rng(77);
    for (int i = 0; i < 200 && o.ok; ++i) {
      const std::size_t n = 1 + rng() % 8;
      std::vector<std::string> cands;
      for (std::size_t c = 0; c < n; ++c) {
        std::string s;
        for (std::size_t w = 0, len = 1 + rng() % 4; w < len; ++w) s += vocab[rng() % vocab.size()] + " ";
        cands.push_back(s);
      }
      std::string ctx;
      for (int w = 0; w < 8; ++w) ctx += vocab[rng() % vocab.size()] + " ";
      const std::size_t k = 1 + rng() % n;
      const double lambda = static_cast<double>(rng() % 11) / 10.0;
      std::vector<std::vector<double>> emb;
      for (const auto& c : cands) emb.push_back(oracle::embed(c));
      const auto want = oracle::mmr(emb, oracle::embed(ctx), k, lambda);
      const auto got = mmr_select(cands, ctx, k, lambda, stub);
      std::vector<std::size_t> picked;
      for (const auto& u : got) picked.push_back(u.position);
      o.require(picked == want, "case " + std::to_string(i) + ": selection differs");
    }
    return o;
  });

  criterion("insertion-optimality-200", 5.0, [] {
    Outcome o;
    const StubBackend stub;
    std::mt19937 rng(4242);
    std::size_t checked = 0;
    for (int i = 0; i < 200 && o.ok; ++i) {
      std::vector<std::string> summary;
      for (std::size_t s = 0, n = rng() % 5; s < n; ++s) summary.push_back(oracle::random_sentence(rng));
      std::vector<KeyUnit> missing;
      for (std::size_t m = 0, n = 1 + rng() % 3; m < n; ++m) {
        missing.push_back(unit(oracle::random_sentence(rng), {}, m));
      }
      const SummaryDraft refined{oracle::join(summary, " "), Stage::refined, "d"};
      const auto merged = merge_missing(refined, missing, stub);
      o.require(merged.insertions.size() == missing.size(), "insertion count");
      // Re-evaluate every location available at each recorded step.
      auto current = summary;
      for (const auto& ins : merged.insertions) {
        std::size_t best = 0;
        double best_ppl = 0;
        for (std::size_t loc = 0; loc <= current.size(); ++loc) {
          auto cand = current;
          cand.insert(cand.begin() + static_cast<std::ptrdiff_t>(loc), ins.text);
          const double p = oracle::perplexity(oracle::join(cand, " "));
          if (loc == 0 || p < best_ppl) {
            best = loc;
            best_ppl = p;
          }
        }
        o.require(ins.position == best, "case " + std::to_string(i) + ": position " +
                                            std::to_string(ins.position) + " vs argmin " +
                                            std::to_string(best));
        o.require(ins.perplexity == best_ppl, "case " + std::to_string(i) + ": recorded perplexity");
        current.insert(current.begin() + static_cast<std::ptrdiff_t>(ins.position), ins.text);
        ++checked;
      }
      o.require(oracle::join(current, " ") == merged.final_summary.text,
                "case " + std::to_string(i) + ": final text");
    }
    if (o.ok) o.detail = std::to_string(checked) + " insertions checked";
    return o;
  });

  criterion("coverage-exactness", 0, [] {
    Outcome o;
    const double tol = 1e-6;
    // 2x2 with stub embeddings; the four tokens land in distinct buckets
    {
      std::set<std::uint64_t> buckets;
      for (const char* t : {"heart", "lungs", "spine", "fracture"}) buckets.insert(oracle::fnv1a64(t) % 256);
      o.require(buckets.size() == 4, "token buckets collide");
      const StubBackend stub;
      const auto r = coverage({unit("heart lungs", {}, 0), unit("spine", {}, 1)},
                              {unit("heart", {}, 0), unit("spine fracture", {}, 1)}, stub);
      const double h = 1.0 / std::sqrt(2.0);
      const std::vector<double> want = {h, 0.0, 0.0, h};
      for (std::size_t i = 0; i < 4; ++i) o.require(close(r.sim_matrix[i], want[i], tol), "2x2 sim entry");
      o.require(close(r.cov_scores[0], h, tol) && close(r.cov_scores[1], h, tol), "2x2 coverage");
    }
    // 3x3 with hand-built unit vectors
    {
      const auto r = coverage({unit("a", {1, 0, 0}, 0), unit("b", {0, 1, 0}, 1), unit("c", {0, 0, 1}, 2)},
                              {unit("p", {0.6, 0.8, 0}, 0), unit("q", {0, 0.6, 0.8}, 1),
                               unit("r", {0.48, 0.6, 0.64}, 2)});
      const std::vector<double> want = {0.6, 0.0, 0.48, 0.8, 0.6, 0.6, 0.0, 0.8, 0.64};
      for (std::size_t i = 0; i < 9; ++i) o.require(close(r.sim_matrix[i], want[i], tol), "3x3 sim entry");
      o.require(close(r.cov_scores[0], 0.6, tol) && close(r.cov_scores[1], 0.8, tol) &&
                    close(r.cov_scores[2], 0.8, tol),
                "3x3 coverage");
      o.require(detect_missing(r, 0.4).empty(), "3x3 missing set");
    }
    // boundary: cov exactly 0.4 is missing, the next double above is not
    {
      const auto r = coverage({unit("edge", {0.4, std::sqrt(0.84)}, 0), unit("above", {1.0, 0.0}, 1),
                               unit("below", {0.3, std::sqrt(0.91)}, 2)},
                              {unit("p", {1.0, 0.0}, 0)});
      o.require(r.cov_scores[0] == 0.4, "boundary cov is not exactly 0.4");
      const auto m = detect_missing(r, 0.4);
      o.require(m.size() == 2 && m[0].text == "edge" && m[1].text == "below", "cov <= 0.4 membership");
      CoverageReport nudged = r;
      nudged.cov_scores[0] = std::nextafter(0.4, 1.0);
      o.require(detect_missing(nudged, 0.4).size() == 1, "cov just above 0.4 counted as missing");
    }
    return o;
  });

  criterion("rouge-lsum", 0, [] {
    Outcome o;
    o.require(rouge_l_sum("The lungs are clear. No effusion.", "The lungs are clear. No effusion.").f1 == 1.0,
              "identical texts");
    o.require(rouge_l_sum("alpha beta gamma", "delta epsilon").f1 == 0.0, "disjoint texts");
    const double f1 = rouge_l_sum("a b c d", "a c e").f1;
    o.require(close(f1, 4.0 / 7.0, 1e-9), "a b c d / a c e gives " + std::to_string(f1));
    return o;
  });

  criterion("determinism-fixture10", 0, [] {
    Outcome o;
    const auto tmp = fs::temp_directory_path() / "faithsum_acceptance_determinism";
    fs::remove_all(tmp);
    const StubBackend stub;
    for (const char* name : {"a", "b"}) {
      RunOptions opts;
      opts.dataset = kData / "fixture10.jsonl";
      opts.out_dir = tmp / name;
      o.require(run(opts, stub) == 0, "run failed");
    }
    for (const char* f : {"summaries.jsonl", "traces.jsonl"}) {
      const auto a = slurp(tmp / "a" / f);
      o.require(!a.empty(), std::string(f) + " is empty");
      o.require(a == slurp(tmp / "b" / f), std::string(f) + " differs between runs");
    }
    std::size_t lines = 0;
    std::ifstream in(tmp / "a" / "summaries.jsonl");
    for (std::string l; std::getline(in, l);) ++lines;
    o.require(lines == 10, "expected 10 summaries, got " + std::to_string(lines));
    fs::remove_all(tmp);
    return o;
  });

  criterion("simplex-norm-contracts-1000", 0, [] {
    Outcome o;
    const StubBackend stub;
    const auto& vocab = oracle::vocabulary();
    std::mt19937 rng(1000);
    auto sample = [&](std::size_t max_words) {
      std::string s;
      for (std::size_t i = 0, n = rng() % (max_words + 1); i < n; ++i) s += vocab[rng() % vocab.size()] + " ";
      return s;
    };
    int nli_calls = 0, embed_calls = 0;
    for (int i = 0; i < 1000; ++i) {
      if (i % 2 == 0) {
        std::string h = sample(6);
        if (text::trim(h).empty()) h = vocab[rng() % vocab.size()];
        const auto d = stub.nli_score(sample(12), h);
        o.require(std::abs(d.sum() - 1.0) <= 1e-4, "nli sum " + std::to_string(d.sum()));
        o.require(d.entailment >= 0 && d.neutral >= 0 && d.contradiction >= 0, "negative probability");
        ++nli_calls;
      } else {
        const auto t = sample(10);
        const double n = l2_norm(stub.embed({t})[0]);
        if (oracle::tokens(t).empty()) {
          o.require(n == 0.0, "empty text must embed to the zero vector");
        } else {
          o.require(std::abs(n - 1.0) <= 1e-6, "norm " + std::to_string(n));
        }
        ++embed_calls;
      }
    }
    if (o.ok) o.detail = std::to_string(nli_calls) + " nli, " + std::to_string(embed_calls) + " embed";
    return o;
  });

  std::cout << (failures == 0 ? "ALL PASS" : std::to_string(failures) + " FAILED") << '\n';
  return failures == 0 ? 0 : 1;
}
