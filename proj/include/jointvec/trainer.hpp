#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "jointvec/config.hpp"
#include "jointvec/errors.hpp"
#include "jointvec/coupling.hpp"
#include "jointvec/embedding.hpp"
#include "jointvec/graphdist.hpp"
#include "jointvec/kb.hpp"
#include "jointvec/nlm.hpp"
#include "jointvec/ngram.hpp"
#include "jointvec/vocab.hpp"
#include "jointvec/wordnet.hpp"

namespace jointvec {

enum class RelationalKind { None, Gd, TransE, Ntn };

// Which objectives a run trains: the distributional NLM, a relational
// objective, or both joined by ADMM.
struct ObjectiveSpec {
  bool nlm = false;
  RelationalKind relational = RelationalKind::None;

  bool joint() const { return nlm && relational != RelationalKind::None; }
  bool has_relational() const { return relational != RelationalKind::None; }

  // "nlm", "gd", "transe", "ntn", "nlm+gd", "nlm+transe", "nlm+ntn"
  static ObjectiveSpec parse(const std::string& s);
  std::string to_string() const;
};

struct DiagnosticRecord {
  int iteration = 0;
  double joint_loss = 0.0;  // L_NLM + L_rel, penalty excluded, unweighted
  double mean_y_norm = 0.0;
  double mean_scaled_residual = 0.0;
};

// Everything a run produces; the unit the checkpoint reader/writer moves.
struct ModelState {
  ObjectiveSpec objectives;
  RunConfig config;
  int iteration = 0;
  std::optional<EmbeddingTable> w;  // distributional side
  std::optional<EmbeddingTable> v;  // relational side
  std::optional<NlmParams> nlm;
  std::optional<GdParams> gd;
  std::optional<KbParams> kb;
  std::optional<AdmmCoupling> coupling;  // joint runs only
};

struct TrainData {
  const Vocabulary* vocab = nullptr;
  const NgramSource* ngrams = nullptr;       // required when nlm
  const SynsetGraph* graph = nullptr;        // required for gd
  const WordSynsetMap* map = nullptr;        // required for any relational
  const RelationTupleSet* tuples = nullptr;  // required for transe/ntn
};

struct IterationView {
  int iteration;
  const ModelState& state;
  // Multipliers before this iteration's dual update; null when uncoupled.
  const std::vector<double>* y_before;
  const DiagnosticRecord& record;
};
using IterationObserver = std::function<void(const IterationView&)>;

struct TrainOutcome {
  ModelState state;
  std::vector<DiagnosticRecord> diagnostics;
};

// The three-step ADMM loop: (1) SGD on w and the NLM parameters against
// alpha L_NLM + L_P, (2) SGD on v and the relational parameters against
// (1-alpha) L_rel + L_P, (3) y_i += rho (w_i - v_i). One DiagnosticRecord
// per iteration, evaluated at fixed parameters on a per-iteration
// diagnostics stream.
TrainOutcome admm_train(const RunConfig& config, const ObjectiveSpec& spec, const TrainData& data,
                        const IterationObserver& observer = {});

// Same loop with the coupling disabled; a joint run with rho = 0 and y = 0
// reproduces it bit for bit on the matching side.
TrainOutcome single_objective_train(const RunConfig& config, const ObjectiveSpec& spec,
                                    const TrainData& data,
                                    const IterationObserver& observer = {});

}  // namespace jointvec
