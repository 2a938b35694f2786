#pragma once

#include <istream>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "jointvec/config.hpp"
#include "jointvec/embedding.hpp"
#include "jointvec/kb.hpp"
#include "jointvec/rng.hpp"
#include "jointvec/vocab.hpp"
#include "jointvec/wordnet.hpp"

namespace jointvec {

struct LabeledWordTuple {
  WordTuple tuple;
  bool positive;
};

struct MaterializedTuples {
  std::vector<LabeledWordTuple> tuples;
  int skipped = 0;  // synset had no in-vocabulary member
};

// Word-level view of labeled synset tuples for classification: each synset
// maps to its most frequent in-vocabulary member (lowest id), which keeps
// evaluation deterministic.
MaterializedTuples materialize_labeled(std::span<const LabeledTuple> tuples,
                                       const WordSynsetMap& map);

// Per-relation decision thresholds T_R: score >= T_R classifies as correct.
struct ThresholdTable {
  std::map<int, double> by_relation;
};

// Maximizes dev accuracy per relation; candidate thresholds are midpoints
// between adjacent distinct scores (half a unit beyond the extremes at the
// boundaries), ties resolved toward the smallest threshold. Relations
// without dev tuples are omitted.
ThresholdTable fit_thresholds(const KbParams& params, const EmbeddingTable& emb,
                              std::span<const LabeledWordTuple> dev);

struct KbEvalResult {
  struct Row {
    int relation = 0;
    int n = 0;
    int correct = 0;
    double accuracy = 0.0;
  };
  std::vector<Row> per_relation;
  int unfitted = 0;  // tuples with no threshold, counted as incorrect
  int total = 0;
  int correct = 0;
  double overall = 0.0;
};

KbEvalResult kb_classify(const KbParams& params, const EmbeddingTable& emb,
                         const ThresholdTable& thresholds,
                         std::span<const LabeledWordTuple> test);

// Elementwise mean on the shared ids; other rows copy w.
EmbeddingTable average_embeddings(const EmbeddingTable& w, const EmbeddingTable& v,
                                  std::span<const int> shared_ids);

struct WordPairRef {
  std::string w1, w2;
};

struct AnalogyTestPair {
  WordPairRef pair;
  double gold = 0.0;
};

struct MaxDiffQuestion {
  std::vector<WordPairRef> candidates;  // 4-5 pairs
  int gold_most = -1;
  int gold_least = -1;
};

struct AnalogyCategory {
  std::string name;
  std::vector<WordPairRef> examples;
  std::vector<AnalogyTestPair> tests;
  std::vector<MaxDiffQuestion> questions;
};

// Category file: `#examples`, pair lines `w1<TAB>w2`; `#tests`, lines
// `w1<TAB>w2<TAB>gold`; `#maxdiff`, then per question a `#question` line
// followed by candidate lines `w1<TAB>w2<TAB>{most|least|-}`.
AnalogyCategory load_analogy_category(std::istream& in, const std::string& name);

// Rank correlation with average-rank ties; empty when either input is
// constant (undefined).
std::optional<double> spearman(std::span<const double> model, std::span<const double> gold);

struct CategoryResult {
  std::string name;
  int n_tests = 0;
  int skipped_tests = 0;  // OOV or zero-offset pairs
  std::optional<double> spearman;
  std::vector<double> test_scores;  // aligned with scored tests
  int questions = 0;
  int skipped_questions = 0;
  int choice_correct = 0;  // most and least counted separately
  int choice_total = 0;
  int question_correct = 0;  // both picks right
  int score_ties = 0;        // ties broken by candidate order
};

struct AnalogyResult {
  std::vector<CategoryResult> categories;
  double mean_spearman = 0.0;        // over categories with a defined value
  int categories_with_spearman = 0;
  int choice_correct = 0;            // pooled
  int choice_total = 0;
  int question_correct = 0;
  int question_total = 0;
  double choice_accuracy = 0.0;      // headline MaxDiff number
  double question_accuracy = 0.0;
  int oov_pairs = 0;
  int total_pairs = 0;
};

// Offset representation w2 - w1; a test pair scores the mean (or max)
// cosine between its offset and each example offset.
AnalogyResult evaluate_analogy(const EmbeddingTable& emb, const Vocabulary& vocab,
                               std::span<const AnalogyCategory> categories,
                               OffsetAgg agg = OffsetAgg::Mean);

struct KmeansResult {
  std::vector<int> assignment;
  double sse = 0.0;
  int iterations = 0;
  std::vector<double> sse_history;  // one entry per Lloyd assignment phase
};

// Lloyd's algorithm with k-means++ seeding; empty clusters are re-seeded
// from the farthest point. Deterministic for a fixed stream.
KmeansResult kmeans_cluster(const EmbeddingTable& emb, int k, Rng& rng, int max_iters = 100);

}  // namespace jointvec
