#include "jointvec/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "jointvec/graphdist.hpp"
#include "jointvec/kernels.hpp"
#include "jointvec/vec_ops.hpp"

namespace jointvec {

MaterializedTuples materialize_labeled(std::span<const LabeledTuple> tuples,
                                       const WordSynsetMap& map) {
  MaterializedTuples out;
  for (const auto& lt : tuples) {
    const auto left = map.members_of(lt.tuple.left);
    const auto right = map.members_of(lt.tuple.right);
    if (left.empty() || right.empty()) {
      ++out.skipped;
      continue;
    }
    // members are sorted by id = frequency rank; front() is deterministic
    out.tuples.push_back({WordTuple{{left.front(), lt.tuple.relation, right.front()}}, lt.positive});
  }
  return out;
}

namespace {

struct ScoredTuple {
  double score;
  bool positive;
};

// Best accuracy over thresholds of the form "score >= T"; candidates are
// interval midpoints plus half-unit boundary steps, scanned ascending so
// ties settle on the smallest threshold.
std::pair<double, double> best_threshold(std::vector<ScoredTuple> scored) {
  std::sort(scored.begin(), scored.end(),
            [](const ScoredTuple& a, const ScoredTuple& b) { return a.score < b.score; });
  const int n = static_cast<int>(scored.size());
  std::vector<double> candidates;
  candidates.push_back(scored.front().score - 0.5);
  for (int i = 0; i + 1 < n; ++i)
    if (scored[i].score < scored[i + 1].score)
      candidates.push_back(0.5 * (scored[i].score + scored[i + 1].score));
  candidates.push_back(scored.back().score + 0.5);

  double best_t = candidates.front();
  int best_correct = -1;
  for (const double t : candidates) {
    int correct = 0;
    for (const auto& s : scored)
      if ((s.score >= t) == s.positive) ++correct;
    if (correct > best_correct) {
      best_correct = correct;
      best_t = t;
    }
  }
  return {best_t, static_cast<double>(best_correct) / n};
}

}  // namespace

ThresholdTable fit_thresholds(const KbParams& params, const EmbeddingTable& emb,
                              std::span<const LabeledWordTuple> dev) {
  std::map<int, std::vector<ScoredTuple>> by_relation;
  for (const auto& t : dev) {
    if (t.tuple.relation() >= kb_relation_count(params)) continue;  // unknown to the model
    by_relation[t.tuple.relation()].push_back({kb_score(params, emb, t.tuple), t.positive});
  }
  ThresholdTable table;
  for (const auto& [rel, scored] : by_relation)
    table.by_relation[rel] = best_threshold(scored).first;
  return table;
}

KbEvalResult kb_classify(const KbParams& params, const EmbeddingTable& emb,
                         const ThresholdTable& thresholds,
                         std::span<const LabeledWordTuple> test) {
  KbEvalResult result;
  std::map<int, KbEvalResult::Row> rows;
  // Scoring is read-only; compute all scores up front with the parallel
  // kernels' policy, then tally serially.
  const int known_relations = kb_relation_count(params);
  std::vector<double> scores(test.size());
  kernels::parallel_for(static_cast<std::int64_t>(test.size()), [&](std::int64_t i) {
    scores[i] = test[i].tuple.relation() < known_relations
                    ? kb_score(params, emb, test[i].tuple)
                    : std::numeric_limits<double>::quiet_NaN();
  });
  for (std::size_t i = 0; i < test.size(); ++i) {
    const auto& t = test[i];
    auto& row = rows[t.tuple.relation()];
    row.relation = t.tuple.relation();
    ++row.n;
    const auto it = thresholds.by_relation.find(t.tuple.relation());
    bool correct = false;
    if (it == thresholds.by_relation.end()) {
      ++result.unfitted;  // no threshold fitted: counted as incorrect
    } else {
      correct = (scores[i] >= it->second) == t.positive;
    }
    if (correct) ++row.correct;
  }
  for (auto& [rel, row] : rows) {
    row.accuracy = row.n > 0 ? static_cast<double>(row.correct) / row.n : 0.0;
    result.total += row.n;
    result.correct += row.correct;
    result.per_relation.push_back(row);
  }
  result.overall = result.total > 0 ? static_cast<double>(result.correct) / result.total : 0.0;
  return result;
}

EmbeddingTable average_embeddings(const EmbeddingTable& w, const EmbeddingTable& v,
                                  std::span<const int> shared_ids) {
  if (w.dim() != v.dim() || w.size() != v.size())
    throw std::invalid_argument("embedding tables must have matching shape");
  EmbeddingTable avg = w;
  for (const int id : shared_ids) {
    auto a = avg.vec(id);
    const auto vv = v.vec(id);
    for (int k = 0; k < w.dim(); ++k) a[k] = 0.5 * (a[k] + vv[k]);
  }
  return avg;
}

AnalogyCategory load_analogy_category(std::istream& in, const std::string& name) {
  AnalogyCategory cat;
  cat.name = name;
  enum class Section { None, Examples, Tests, MaxDiff } section = Section::None;
  std::string line;
  int line_no = 0;
  MaxDiffQuestion* question = nullptr;
  const auto fail = [&](const std::string& msg) {
    throw std::runtime_error("analogy file " + name + " line " + std::to_string(line_no) + ": " +
                             msg);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    if (line == "#examples") {
      section = Section::Examples;
      continue;
    }
    if (line == "#tests") {
      section = Section::Tests;
      continue;
    }
    if (line == "#maxdiff") {
      section = Section::MaxDiff;
      continue;
    }
    if (line == "#question") {
      if (section != Section::MaxDiff) fail("#question outside #maxdiff");
      cat.questions.emplace_back();
      question = &cat.questions.back();
      continue;
    }
    std::vector<std::string> fields;
    {
      std::size_t start = 0;
      while (true) {
        const auto tab = line.find('\t', start);
        if (tab == std::string::npos) {
          fields.push_back(line.substr(start));
          break;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
      }
    }
    switch (section) {
      case Section::None:
        fail("content before any section header (expected #examples)");
        break;
      case Section::Examples:
        if (fields.size() != 2) fail("example pairs need 2 fields");
        cat.examples.push_back({fields[0], fields[1]});
        break;
      case Section::Tests: {
        if (fields.size() != 3) fail("test pairs need 3 fields (w1, w2, gold)");
        try {
          cat.tests.push_back({{fields[0], fields[1]}, std::stod(fields[2])});
        } catch (const std::exception&) {
          fail("bad gold score");
        }
        break;
      }
      case Section::MaxDiff: {
        if (!question) fail("candidate line before #question");
        if (fields.size() != 3) fail("candidates need 3 fields (w1, w2, most|least|-)");
        const int idx = static_cast<int>(question->candidates.size());
        question->candidates.push_back({fields[0], fields[1]});
        if (fields[2] == "most") {
          if (question->gold_most >= 0) fail("duplicate most label");
          question->gold_most = idx;
        } else if (fields[2] == "least") {
          if (question->gold_least >= 0) fail("duplicate least label");
          question->gold_least = idx;
        } else if (fields[2] != "-") {
          fail("candidate label must be most, least or -");
        }
        break;
      }
    }
  }
  if (cat.examples.empty()) throw std::runtime_error("analogy file " + name + ": no example pairs");
  for (std::size_t q = 0; q < cat.questions.size(); ++q) {
    const auto& question_ref = cat.questions[q];
    if (question_ref.candidates.size() < 2)
      throw std::runtime_error("analogy file " + name + ": question " + std::to_string(q + 1) +
                               " needs at least 2 candidates");
    if (question_ref.gold_most < 0 || question_ref.gold_least < 0)
      throw std::runtime_error("analogy file " + name + ": question " + std::to_string(q + 1) +
                               " is missing a most or least label");
  }
  return cat;
}

std::optional<double> spearman(std::span<const double> model, std::span<const double> gold) {
  if (model.size() != gold.size()) throw std::invalid_argument("spearman: length mismatch");
  const std::size_t n = model.size();
  if (n < 2) throw std::invalid_argument("spearman needs at least 2 points");

  const auto ranks = [](std::span<const double> xs) {
    const std::size_t n = xs.size();
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(),
                     [&](std::size_t a, std::size_t b) { return xs[a] < xs[b]; });
    std::vector<double> r(n);
    std::size_t i = 0;
    while (i < n) {
      std::size_t j = i;
      while (j + 1 < n && xs[order[j + 1]] == xs[order[i]]) ++j;
      const double avg = 0.5 * (static_cast<double>(i) + static_cast<double>(j)) + 1.0;
      for (std::size_t k = i; k <= j; ++k) r[order[k]] = avg;
      i = j + 1;
    }
    return r;
  };

  const auto ra = ranks(model);
  const auto rb = ranks(gold);
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += ra[i];
    mb += rb[i];
  }
  ma /= n;
  mb /= n;
  double cov = 0.0, va = 0.0, vb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double da = ra[i] - ma;
    const double db = rb[i] - mb;
    cov += da * db;
    va += da * da;
    vb += db * db;
  }
  if (va == 0.0 || vb == 0.0) return std::nullopt;  // constant sequence
  return cov / std::sqrt(va * vb);
}

namespace {

// Offset w2 - w1 if both words resolve and the offset is nonzero.
std::optional<std::vector<double>> pair_offset(const EmbeddingTable& emb, const Vocabulary& vocab,
                                               const WordPairRef& pair) {
  const int i1 = vocab.find(lowercase(pair.w1));
  const int i2 = vocab.find(lowercase(pair.w2));
  if (i1 < 0 || i2 < 0) return std::nullopt;
  const auto a = emb.vec(i1);
  const auto b = emb.vec(i2);
  std::vector<double> off(emb.dim());
  double sq = 0.0;
  for (int k = 0; k < emb.dim(); ++k) {
    off[k] = b[k] - a[k];
    sq += off[k] * off[k];
  }
  if (sq == 0.0) return std::nullopt;
  return off;
}

double offset_score(std::span<const double> off, const std::vector<std::vector<double>>& examples,
                    OffsetAgg agg) {
  double best = -2.0, sum = 0.0;
  for (const auto& ex : examples) {
    const double c = cosine(off, ex);
    sum += c;
    best = std::max(best, c);
  }
  return agg == OffsetAgg::Mean ? sum / static_cast<double>(examples.size()) : best;
}

}  // namespace

AnalogyResult evaluate_analogy(const EmbeddingTable& emb, const Vocabulary& vocab,
                               std::span<const AnalogyCategory> categories, OffsetAgg agg) {
  AnalogyResult result;
  for (const auto& cat : categories) {
    CategoryResult cr;
    cr.name = cat.name;

    std::vector<std::vector<double>> example_offsets;
    for (const auto& ex : cat.examples) {
      ++result.total_pairs;
      if (auto off = pair_offset(emb, vocab, ex))
        example_offsets.push_back(std::move(*off));
      else
        ++result.oov_pairs;
    }

    cr.n_tests = static_cast<int>(cat.tests.size());
    std::vector<double> golds;
    for (const auto& test : cat.tests) {
      ++result.total_pairs;
      std::optional<std::vector<double>> off = pair_offset(emb, vocab, test.pair);
      if (!off) ++result.oov_pairs;
      if (!off || example_offsets.empty()) {
        ++cr.skipped_tests;
        continue;
      }
      cr.test_scores.push_back(offset_score(*off, example_offsets, agg));
      golds.push_back(test.gold);
    }
    if (cr.test_scores.size() >= 2) cr.spearman = spearman(cr.test_scores, golds);

    for (const auto& q : cat.questions) {
      ++cr.questions;
      std::vector<std::vector<double>> offsets;
      bool usable = !example_offsets.empty();
      for (const auto& cand : q.candidates) {
        ++result.total_pairs;
        std::optional<std::vector<double>> off = pair_offset(emb, vocab, cand);
        if (!off) {
          ++result.oov_pairs;
          usable = false;
          continue;
        }
        offsets.push_back(std::move(*off));
      }
      if (!usable) {
        ++cr.skipped_questions;
        continue;
      }
      std::vector<double> scores;
      scores.reserve(offsets.size());
      for (const auto& off : offsets) scores.push_back(offset_score(off, example_offsets, agg));
      int most = 0, least = 0;
      for (int i = 1; i < static_cast<int>(scores.size()); ++i) {
        if (scores[i] > scores[most]) most = i;  // first index wins ties
        if (scores[i] < scores[least]) least = i;
      }
      for (int i = 0; i < static_cast<int>(scores.size()); ++i) {
        if (i != most && scores[i] == scores[most]) ++cr.score_ties;
        if (i != least && scores[i] == scores[least]) ++cr.score_ties;
      }
      cr.choice_total += 2;
      if (most == q.gold_most) ++cr.choice_correct;
      if (least == q.gold_least) ++cr.choice_correct;
      if (most == q.gold_most && least == q.gold_least) ++cr.question_correct;
    }

    if (cr.spearman) {
      result.mean_spearman += *cr.spearman;
      ++result.categories_with_spearman;
    }
    result.choice_correct += cr.choice_correct;
    result.choice_total += cr.choice_total;
    result.question_correct += cr.question_correct;
    result.question_total += cr.questions - cr.skipped_questions;
    result.categories.push_back(std::move(cr));
  }
  if (result.categories_with_spearman > 0) result.mean_spearman /= result.categories_with_spearman;
  if (result.choice_total > 0)
    result.choice_accuracy = static_cast<double>(result.choice_correct) / result.choice_total;
  if (result.question_total > 0)
    result.question_accuracy = static_cast<double>(result.question_correct) / result.question_total;
  return result;
}

KmeansResult kmeans_cluster(const EmbeddingTable& emb, int k, Rng& rng, int max_iters) {
  const int n = emb.size();
  const int d = emb.dim();
  if (k < 1) throw std::invalid_argument("k must be >= 1");
  if (k > n) throw std::invalid_argument("k must not exceed the number of vectors");

  const auto points = emb.raw();
  std::vector<double> centroids(static_cast<std::size_t>(k) * d);
  const auto copy_point = [&](int c, int p) {
    std::copy(points.begin() + static_cast<std::size_t>(p) * d,
              points.begin() + static_cast<std::size_t>(p + 1) * d,
              centroids.begin() + static_cast<std::size_t>(c) * d);
  };

  // k-means++ seeding: D^2-weighted draws, cumulative walk in index order.
  std::vector<double> d2(n);
  copy_point(0, rng.uniform_index(n));
  const auto refresh_d2 = [&](int chosen) {
    const double* m = centroids.data() + static_cast<std::size_t>(chosen) * d;
    for (int p = 0; p < n; ++p) {
      const double* x = points.data() + static_cast<std::size_t>(p) * d;
      double dist = 0.0;
      for (int j = 0; j < d; ++j) {
        const double t = x[j] - m[j];
        dist += t * t;
      }
      if (chosen == 0 || dist < d2[p]) d2[p] = dist;
    }
  };
  refresh_d2(0);
  for (int c = 1; c < k; ++c) {
    const double total = kernels::ordered_sum(d2);
    int pick;
    if (total <= 0.0) {
      pick = rng.uniform_index(n);  // only duplicates left
    } else {
      const double r = rng.uniform() * total;
      double run = 0.0;
      pick = n - 1;
      for (int p = 0; p < n; ++p) {
        run += d2[p];
        if (run > r) {
          pick = p;
          break;
        }
      }
    }
    copy_point(c, pick);
    refresh_d2(c);
  }

  KmeansResult result;
  result.assignment.assign(n, -1);
  std::vector<int> prev(n, -1);
  std::vector<double> sqdist(n);
  std::vector<int> cluster_size(k);
  bool reseeded = false;
  for (int iter = 0; iter < max_iters; ++iter) {
    kernels::kmeans_assign(points, n, d, centroids, k, result.assignment, sqdist);
    result.sse = kernels::ordered_sum(sqdist);
    result.sse_history.push_back(result.sse);
    result.iterations = iter + 1;
    if (!reseeded && result.assignment == prev) break;
    prev = result.assignment;
    reseeded = false;

    std::fill(centroids.begin(), centroids.end(), 0.0);
    std::fill(cluster_size.begin(), cluster_size.end(), 0);
    for (int p = 0; p < n; ++p) {
      const int c = result.assignment[p];
      ++cluster_size[c];
      const double* x = points.data() + static_cast<std::size_t>(p) * d;
      double* m = centroids.data() + static_cast<std::size_t>(c) * d;
      for (int j = 0; j < d; ++j) m[j] += x[j];
    }
    for (int c = 0; c < k; ++c) {
      if (cluster_size[c] == 0) continue;
      double* m = centroids.data() + static_cast<std::size_t>(c) * d;
      for (int j = 0; j < d; ++j) m[j] /= cluster_size[c];
    }
    // Empty cluster: restart it at the farthest point (lowest index on
    // ties); the next assignment phase can only lower the SSE.
    for (int c = 0; c < k; ++c) {
      if (cluster_size[c] > 0) continue;
      int far = 0;
      for (int p = 1; p < n; ++p)
        if (sqdist[p] > sqdist[far]) far = p;
      copy_point(c, far);
      sqdist[far] = 0.0;
      reseeded = true;
    }
  }
  return result;
}

}  // namespace jointvec
