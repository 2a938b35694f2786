#include "jointvec/trainer.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace jointvec {

ObjectiveSpec ObjectiveSpec::parse(const std::string& s) {
  ObjectiveSpec spec;
  if (s == "nlm") {
    spec.nlm = true;
    return spec;
  }
  std::string rel = s;
  if (s.rfind("nlm+", 0) == 0) {
    spec.nlm = true;
    rel = s.substr(4);
  }
  if (rel == "gd")
    spec.relational = RelationalKind::Gd;
  else if (rel == "transe")
    spec.relational = RelationalKind::TransE;
  else if (rel == "ntn")
    spec.relational = RelationalKind::Ntn;
  else
    throw std::invalid_argument(
        "objective must be one of nlm, gd, transe, ntn, nlm+gd, nlm+transe, nlm+ntn (got '" + s +
        "')");
  return spec;
}

std::string ObjectiveSpec::to_string() const {
  std::string s;
  if (nlm) s = "nlm";
  switch (relational) {
    case RelationalKind::None:
      break;
    case RelationalKind::Gd:
      s += s.empty() ? "gd" : "+gd";
      break;
    case RelationalKind::TransE:
      s += s.empty() ? "transe" : "+transe";
      break;
    case RelationalKind::Ntn:
      s += s.empty() ? "ntn" : "+ntn";
      break;
  }
  return s;
}

namespace {

class TrainLoop {
 public:
  TrainLoop(const RunConfig& config, const ObjectiveSpec& spec, const TrainData& data, bool joint)
      : config_(config),
        spec_(spec),
        data_(data),
        joint_(joint),
        corpus_rng_(Rng::substream(config.seed, streams::kCorpus)),
        rel_rng_(Rng::substream(config.seed, streams::kRelational)) {
    config_.validate();
    check_data();
    init_state();
  }

  TrainOutcome run(const IterationObserver& observer) {
    TrainOutcome out;
    for (int iter = 1; iter <= config_.iterations; ++iter) {
      try {
        // Training losses are not recorded; the diagnostic joint loss is
        // re-evaluated at fixed parameters below.
        if (spec_.nlm) nlm_iteration();
        if (spec_.has_relational()) relational_iteration();
      } catch (const DivergenceError& e) {
        throw DivergenceError(e.what(), iter);
      }

      std::vector<double> y_before;
      if (state_.coupling) {
        const auto y = state_.coupling->y();
        y_before.assign(y.begin(), y.end());
        state_.coupling->update_multipliers(*state_.w, *state_.v);
      }
      state_.iteration = iter;

      DiagnosticRecord record = diagnostics(iter);
      out.diagnostics.push_back(record);
      if (observer) {
        IterationView view{iter, state_, state_.coupling ? &y_before : nullptr, record};
        observer(view);
      }
    }
    out.state = std::move(state_);
    return out;
  }

 private:
  void check_data() {
    if (!data_.vocab) throw std::invalid_argument("vocabulary is required");
    if (spec_.nlm && !data_.ngrams) throw std::invalid_argument("nlm objective needs n-gram data");
    if (spec_.has_relational() && !data_.map)
      throw std::invalid_argument("relational objectives need word-synset membership");
    if (spec_.relational == RelationalKind::Gd && !data_.graph)
      throw std::invalid_argument("gd objective needs the synset graph");
    if ((spec_.relational == RelationalKind::TransE || spec_.relational == RelationalKind::Ntn) &&
        !data_.tuples)
      throw std::invalid_argument("transe/ntn objectives need relation tuples");
  }

  void init_state() {
    state_.objectives = spec_;
    state_.config = config_;
    const int d = config_.dim;
    const int n_words = data_.vocab->size();
    const double half_range = 0.5 / d;

    if (spec_.nlm) {
      Rng init_w = Rng::substream(config_.seed, streams::kInitW);
      state_.w = EmbeddingTable::uniform_init(n_words, d, half_range, init_w);
      Rng init_nlm = Rng::substream(config_.seed, streams::kInitNlm);
      state_.nlm = NlmParams::init(data_.ngrams->n(), d, config_.nlm_hidden, init_nlm);
    }
    if (spec_.has_relational()) {
      Rng init_v = Rng::substream(config_.seed, streams::kInitV);
      state_.v = EmbeddingTable::uniform_init(n_words, d, half_range, init_v);
      Rng init_rel = Rng::substream(config_.seed, streams::kInitRelational);
      switch (spec_.relational) {
        case RelationalKind::Gd:
          state_.gd = GdParams{};
          break;
        case RelationalKind::TransE:
          state_.kb = TransEParams::init(data_.tuples->relations(), d, init_rel);
          break;
        case RelationalKind::Ntn:
          state_.kb = NtnParams::init(data_.tuples->relations(), d, config_.ntn_hidden, init_rel);
          break;
        case RelationalKind::None:
          break;
      }
    }
    if (joint_) {
      const auto& shared = data_.map->wordnet_word_ids();
      if (shared.empty())
        throw std::runtime_error("shared vocabulary I is empty; nothing couples the objectives");
      state_.coupling.emplace(shared, d, config_.rho, config_.alpha);
    }
  }

  CouplingView coupling_view(CouplingSide side) const {
    CouplingView cv;
    if (state_.coupling) {
      cv.coupling = &*state_.coupling;
      cv.other = side == CouplingSide::W ? &*state_.v : &*state_.w;
      cv.side = side;
    }
    return cv;
  }

  double nlm_iteration() {
    const auto block = data_.ngrams->sample_block(config_.ngram_block, corpus_rng_);
    NlmStepOptions opt;
    opt.lr = config_.lr_nlm;
    opt.weight = config_.alpha;
    opt.l2 = config_.l2;
    opt.corrupt_position = config_.corrupt_position;
    opt.coupling = coupling_view(CouplingSide::W);
    return nlm_sgd_step(*state_.nlm, *state_.w, block, *data_.vocab, opt, corpus_rng_).mean_loss;
  }

  std::vector<GdPair> sample_gd_pairs(Rng& rng) const {
    const auto raw =
        sample_word_pairs(*data_.map, *data_.vocab, config_.gd_word_sample,
                          config_.gd_max_neighbors, rng);
    std::vector<GdPair> pairs;
    pairs.reserve(raw.size());
    for (const auto& [i, j] : raw) {
      const auto ws = word_similarity(*data_.graph, *data_.map, i, j);
      if (!ws) continue;  // cannot happen for sampler output; kept as a guard
      pairs.push_back({i, j, *ws});
    }
    return pairs;
  }

  double relational_iteration() {
    if (spec_.relational == RelationalKind::Gd) {
      const auto pairs = sample_gd_pairs(rel_rng_);
      if (!state_.gd->initialized) {
        // Scale chosen so the initial target a*ws + b starts inside the
        // cosine range: a = 1 / max WordSim over the first sampled batch.
        double max_ws = 0.0;
        for (const auto& p : pairs) max_ws = std::max(max_ws, p.ws);
        state_.gd->a = max_ws > 0.0 ? 1.0 / max_ws : 1.0;
        state_.gd->b = 0.0;
        state_.gd->initialized = true;
      }
      GdStepOptions opt;
      opt.lr = config_.lr_gd;
      opt.weight = 1.0 - config_.alpha;
      opt.l2 = config_.l2;
      opt.coupling = coupling_view(CouplingSide::V);
      return gd_sgd_step(*state_.gd, *state_.v, pairs, opt).mean_loss;
    }
    KbStepOptions opt;
    opt.lr = config_.lr_kb;
    opt.weight = 1.0 - config_.alpha;
    opt.l2 = config_.l2;
    opt.coupling = coupling_view(CouplingSide::V);
    return kb_sgd_step(*state_.kb, *state_.v, *data_.tuples, *data_.map, *data_.vocab, opt,
                       rel_rng_)
        .mean_loss;
  }

  // Joint loss L_NLM + L_rel at fixed parameters, penalty excluded,
  // evaluated on a per-iteration diagnostics stream so it can be recomputed
  // exactly from a checkpoint.
  DiagnosticRecord diagnostics(int iter) const {
    DiagnosticRecord rec;
    rec.iteration = iter;
    Rng diag = Rng::substream(config_.seed, streams::kDiagnostics, static_cast<std::uint64_t>(iter));
    if (spec_.nlm) {
      const auto block = data_.ngrams->sample_block(config_.ngram_block, diag);
      rec.joint_loss += nlm_eval_loss(*state_.nlm, *state_.w, block, *data_.vocab,
                                      config_.corrupt_position, diag);
    }
    if (spec_.has_relational()) {
      if (spec_.relational == RelationalKind::Gd) {
        const auto pairs = sample_gd_pairs(diag);
        rec.joint_loss += gd_eval_loss(*state_.gd, *state_.v, pairs);
      } else {
        rec.joint_loss +=
            kb_eval_loss(*state_.kb, *state_.v, *data_.tuples, *data_.map, *data_.vocab, diag);
      }
    }
    if (state_.coupling) {
      const auto stats = state_.coupling->stats(*state_.w, *state_.v);
      rec.mean_y_norm = stats.mean_y_norm;
      rec.mean_scaled_residual = stats.mean_scaled_residual;
    }
    return rec;
  }

  RunConfig config_;
  ObjectiveSpec spec_;
  TrainData data_;
  bool joint_;
  ModelState state_;
  Rng corpus_rng_;
  Rng rel_rng_;
};

}  // namespace

TrainOutcome admm_train(const RunConfig& config, const ObjectiveSpec& spec, const TrainData& data,
                        const IterationObserver& observer) {
  if (!spec.joint())
    throw std::invalid_argument("admm_train needs both the nlm and a relational objective");
  TrainLoop loop(config, spec, data, /*joint=*/true);
  return loop.run(observer);
}

TrainOutcome single_objective_train(const RunConfig& config, const ObjectiveSpec& spec,
                                    const TrainData& data, const IterationObserver& observer) {
  if (spec.joint())
    throw std::invalid_argument("single_objective_train takes exactly one objective");
  if (!spec.nlm && !spec.has_relational()) throw std::invalid_argument("no objective selected");
  TrainLoop loop(config, spec, data, /*joint=*/false);
  return loop.run(observer);
}

}  // namespace jointvec
