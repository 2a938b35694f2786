#pragma once

#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "jointvec/coupling.hpp"
#include "jointvec/embedding.hpp"
#include "jointvec/nlm.hpp"
#include "jointvec/rng.hpp"
#include "jointvec/wordnet.hpp"

namespace jointvec {

// Relations as translations: S = -||v_l + R - v_r||_2.
struct TransEParams {
  int d = 0;
  std::vector<std::string> relation_names;
  std::vector<double> rel;  // R x d

  static TransEParams init(std::vector<std::string> names, int d, Rng& rng);
  int relation_count() const { return static_cast<int>(relation_names.size()); }
  std::span<double> relation(int r) {
    return {rel.data() + static_cast<std::size_t>(r) * d, static_cast<std::size_t>(d)};
  }
  std::span<const double> relation(int r) const {
    return {rel.data() + static_cast<std::size_t>(r) * d, static_cast<std::size_t>(d)};
  }
};

double transe_score(const TransEParams& p, const EmbeddingTable& emb, int wl, int r, int wr);

// Bilinear tensor network: S = U . sigmoid(v_l' W_R v_r + V_R [v_l; v_r] + b_R)
// with per-relation W, V, b and a shared output vector U.
struct NtnParams {
  int d = 0, h = 0;
  std::vector<std::string> relation_names;
  std::vector<double> W;  // R x h x d x d
  std::vector<double> V;  // R x h x 2d
  std::vector<double> b;  // R x h
  std::vector<double> U;  // h, shared across relations

  static NtnParams init(std::vector<std::string> names, int d, int h, Rng& rng);
  int relation_count() const { return static_cast<int>(relation_names.size()); }
  std::size_t w_off(int r, int k) const {
    return ((static_cast<std::size_t>(r) * h + k) * d) * d;
  }
  std::span<double> v_row(int r, int k) {
    return {V.data() + (static_cast<std::size_t>(r) * h + k) * 2 * d,
            static_cast<std::size_t>(2) * d};
  }
  std::span<const double> v_row(int r, int k) const {
    return {V.data() + (static_cast<std::size_t>(r) * h + k) * 2 * d,
            static_cast<std::size_t>(2) * d};
  }
  std::span<double> b_row(int r) {
    return {b.data() + static_cast<std::size_t>(r) * h, static_cast<std::size_t>(h)};
  }
  std::span<const double> b_row(int r) const {
    return {b.data() + static_cast<std::size_t>(r) * h, static_cast<std::size_t>(h)};
  }
};

double ntn_score(const NtnParams& p, const EmbeddingTable& emb, int wl, int r, int wr);

using KbParams = std::variant<TransEParams, NtnParams>;

double kb_score(const KbParams& p, const EmbeddingTable& emb, int wl, int r, int wr);
inline double kb_score(const KbParams& p, const EmbeddingTable& emb, const WordTuple& t) {
  return kb_score(p, emb, t.left(), t.relation(), t.right());
}
int kb_relation_count(const KbParams& p);
const std::vector<std::string>& kb_relation_names(const KbParams& p);

struct KbGradients {
  double loss = 0.0;
  std::map<int, std::vector<double>> emb;      // per distinct touched word
  std::map<int, std::vector<double>> rel_vec;  // TransE, touched relations
  struct NtnRelGrad {
    std::vector<double> W;  // h x d x d
    std::vector<double> V;  // h x 2d
    std::vector<double> b;  // h
  };
  std::map<int, NtnRelGrad> ntn_rel;  // NTN, touched relations
  std::vector<double> U;              // NTN shared output weights
};

// Gradients of hinge_loss(S(clean), S(corrupted)); zero when the margin is
// met, but touched words are still registered for the coupling step.
KbGradients kb_gradients(const KbParams& p, const EmbeddingTable& emb, const WordTuple& clean,
                         const WordTuple& corrupted);

struct KbStepOptions {
  double lr = 0.01;
  double weight = 1.0;  // objective weight (1 - alpha side)
  double l2 = 0.0;
  CouplingView coupling;
};

// One epoch over the train split in randomized order: per tuple, word-level
// instantiation and one corruption via the WordNet store, then an immediate
// update. Tuples without in-vocabulary members on both sides are skipped.
SgdStepStats kb_sgd_step(KbParams& p, EmbeddingTable& emb, const RelationTupleSet& tuples,
                         const WordSynsetMap& map, const Vocabulary& vocab,
                         const KbStepOptions& opt, Rng& rng);

// Mean hinge loss over the usable train tuples at fixed parameters,
// instantiations and corruptions drawn from `rng`.
double kb_eval_loss(const KbParams& p, const EmbeddingTable& emb, const RelationTupleSet& tuples,
                    const WordSynsetMap& map, const Vocabulary& vocab, Rng& rng);

}  // namespace jointvec
