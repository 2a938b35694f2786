// Command-line surface for training and evaluating jointly optimized word
// embeddings: `train`, `eval`, `diagnose`, `vocab`.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "jointvec/checkpoint.hpp"
#include "jointvec/eval.hpp"
#include "jointvec/kernels.hpp"
#include "jointvec/trainer.hpp"

namespace fs = std::filesystem;
using namespace jointvec;

namespace {

// Relative data paths resolve against JOINTVEC_DATA_ROOT when it is set.
fs::path resolve_data(const std::string& p) {
  fs::path path(p);
  if (path.is_absolute()) return path;
  if (const char* root = std::getenv("JOINTVEC_DATA_ROOT"); root && *root)
    return fs::path(root) / path;
  return path;
}

std::ifstream open_data(const std::string& p) {
  const fs::path path = resolve_data(p);
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open data file: " + path.string());
  return in;
}

std::ofstream open_output(const fs::path& p) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write output file: " + p.string());
  return out;
}

struct DataPaths {
  std::string text, ngrams;
  std::string hypernyms, membership;
  std::string tuples_train, tuples_dev, tuples_test;
};

void add_corpus_options(CLI::App* cmd, DataPaths& paths) {
  cmd->add_option("--text", paths.text, "raw text corpus, one sentence per line");
  cmd->add_option("--ngrams", paths.ngrams, "counted n-gram TSV: count<TAB>w1 w2 ... wn");
}

void add_wordnet_options(CLI::App* cmd, DataPaths& paths) {
  cmd->add_option("--hypernyms", paths.hypernyms, "hypernym edge TSV: child<TAB>parent");
  cmd->add_option("--membership", paths.membership, "membership TSV: synset<TAB>word");
  cmd->add_option("--tuples-train", paths.tuples_train, "relation tuple TSV (train)");
  cmd->add_option("--tuples-dev", paths.tuples_dev, "labeled relation tuple TSV (dev)");
  cmd->add_option("--tuples-test", paths.tuples_test, "labeled relation tuple TSV (test)");
}

void add_config_options(CLI::App* cmd, RunConfig& config, std::string& corrupt_position,
                        std::string& analogy_agg) {
  cmd->add_option("--dim", config.dim, "embedding dimension");
  cmd->add_option("--rho", config.rho, "ADMM penalty weight / dual step size");
  cmd->add_option("--alpha", config.alpha, "objective weight in [0,1]");
  cmd->add_option("--iters", config.iterations, "training iterations");
  cmd->add_option("--block-size", config.ngram_block, "n-grams sampled per iteration");
  cmd->add_option("--gd-word-sample", config.gd_word_sample, "words sampled per GD iteration");
  cmd->add_option("--gd-max-neighbors", config.gd_max_neighbors, "partners per sampled word");
  cmd->add_option("--lr-nlm", config.lr_nlm, "NLM learning rate");
  cmd->add_option("--lr-gd", config.lr_gd, "graph-distance learning rate");
  cmd->add_option("--lr-kb", config.lr_kb, "TransE/NTN learning rate");
  cmd->add_option("--vocab-max", config.vocab_max, "vocabulary size cap");
  cmd->add_option("--ngram-n", config.ngram_n, "n-gram length for raw text");
  cmd->add_option("--nlm-hidden", config.nlm_hidden, "NLM hidden layer size");
  cmd->add_option("--ntn-hidden", config.ntn_hidden, "NTN hidden layer size");
  cmd->add_option("--k", config.kmeans_k, "k-means cluster count");
  cmd->add_option("--l2", config.l2, "L2 regularization weight");
  cmd->add_option("--seed", config.seed, "random seed");
  cmd->add_option("--checkpoint-every", config.checkpoint_every, "checkpoint cadence");
  cmd->add_option("--corrupt-position", corrupt_position, "middle|random");
  cmd->add_option("--analogy-agg", analogy_agg, "mean|max example aggregation");
  cmd->add_flag("!--serial", config.parallel, "disable the OpenMP kernels");
  cmd->add_option("--distance-cache", config.distance_cache,
                  "all-pairs synset distance cache: on|off|auto");
}

struct LoadedWordnet {
  SynsetGraph graph;
  WordSynsetMap map;
  RelationTupleSet tuples;
};

LoadedWordnet load_wordnet(const DataPaths& paths, const Vocabulary& vocab, bool need_tuples,
                           bool need_labeled) {
  LoadedWordnet wn;
  if (!paths.hypernyms.empty()) {
    auto in = open_data(paths.hypernyms);
    wn.graph.load_edges(in);
  }
  if (paths.membership.empty()) throw std::runtime_error("--membership is required");
  {
    auto in = open_data(paths.membership);
    wn.map.load(in, wn.graph, vocab);
  }
  if (need_tuples) {
    if (paths.tuples_train.empty()) throw std::runtime_error("--tuples-train is required");
    auto in = open_data(paths.tuples_train);
    wn.tuples.load_train(in, wn.graph);
  }
  if (need_labeled) {
    if (paths.tuples_dev.empty() || paths.tuples_test.empty())
      throw std::runtime_error("--tuples-dev and --tuples-test are required");
    auto dev = open_data(paths.tuples_dev);
    wn.tuples.load_dev(dev, wn.graph);
    auto test = open_data(paths.tuples_test);
    wn.tuples.load_test(test, wn.graph);
  }
  wn.graph.finalize();
  wn.map.freeze();
  return wn;
}

Vocabulary build_vocab_from(const DataPaths& paths, int vocab_max) {
  if (!paths.text.empty()) {
    auto in = open_data(paths.text);
    return Vocabulary::from_counts(count_tokens_text(in), static_cast<std::size_t>(vocab_max));
  }
  if (!paths.ngrams.empty()) {
    auto in = open_data(paths.ngrams);
    return Vocabulary::from_counts(count_tokens_ngram_tsv(in),
                                   static_cast<std::size_t>(vocab_max));
  }
  throw std::runtime_error("either --text or --ngrams is required");
}

NgramSource build_ngrams_from(const DataPaths& paths, const Vocabulary& vocab, int n) {
  if (!paths.text.empty()) {
    auto in = open_data(paths.text);
    return NgramSource::from_text(in, vocab, n);
  }
  auto in = open_data(paths.ngrams);
  return NgramSource::from_counted_tsv(in, vocab);
}

// Flat key=value configuration; keys match the long flag names. Values set
// on the command line take precedence.
void apply_config_file(CLI::App* cmd, const std::string& path, RunConfig& config,
                       std::string& corrupt_position, std::string& analogy_agg) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  const auto given = [&](const std::string& flag) { return cmd->count(flag) > 0; };
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw std::runtime_error("config line " + std::to_string(line_no) + ": expected key=value");
    const std::string key = line.substr(0, eq);
    const std::string value = line.substr(eq + 1);
    const auto set_int = [&](int& field) { field = std::stoi(value); };
    const auto set_double = [&](double& field) { field = std::stod(value); };
    if (given("--" + key)) continue;
    if (key == "dim") set_int(config.dim);
    else if (key == "rho") set_double(config.rho);
    else if (key == "alpha") set_double(config.alpha);
    else if (key == "iters") set_int(config.iterations);
    else if (key == "block-size") set_int(config.ngram_block);
    else if (key == "gd-word-sample") set_int(config.gd_word_sample);
    else if (key == "gd-max-neighbors") set_int(config.gd_max_neighbors);
    else if (key == "lr-nlm") set_double(config.lr_nlm);
    else if (key == "lr-gd") set_double(config.lr_gd);
    else if (key == "lr-kb") set_double(config.lr_kb);
    else if (key == "vocab-max") set_int(config.vocab_max);
    else if (key == "ngram-n") set_int(config.ngram_n);
    else if (key == "nlm-hidden") set_int(config.nlm_hidden);
    else if (key == "ntn-hidden") set_int(config.ntn_hidden);
    else if (key == "k") set_int(config.kmeans_k);
    else if (key == "l2") set_double(config.l2);
    else if (key == "seed") config.seed = std::stoull(value);
    else if (key == "checkpoint-every") set_int(config.checkpoint_every);
    else if (key == "corrupt-position") { if (!given("--corrupt-position")) corrupt_position = value; }
    else if (key == "analogy-agg") { if (!given("--analogy-agg")) analogy_agg = value; }
    else if (key == "serial") config.parallel = !(value == "1" || value == "true");
    else if (key == "distance-cache") config.distance_cache = value;
    else throw std::runtime_error("config line " + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
}

void maybe_build_cache(SynsetGraph& graph, const RunConfig& config) {
  const bool build = config.distance_cache == "on" ||
                     (config.distance_cache == "auto" && graph.size() <= 4096);
  if (build && graph.size() > 0) graph.build_distance_cache();
}

int cmd_train(const std::string& objective, const DataPaths& paths, const RunConfig& config,
              const fs::path& out_dir) {
  const auto spec = ObjectiveSpec::parse(objective);
  kernels::set_parallel(config.parallel);

  const Vocabulary vocab = build_vocab_from(paths, config.vocab_max);
  std::optional<NgramSource> ngrams;
  if (spec.nlm) ngrams.emplace(build_ngrams_from(paths, vocab, config.ngram_n));

  std::optional<LoadedWordnet> wn;
  if (spec.has_relational()) {
    const bool need_tuples = spec.relational != RelationalKind::Gd;
    wn.emplace(load_wordnet(paths, vocab, need_tuples, /*need_labeled=*/false));
    if (spec.relational == RelationalKind::Gd) maybe_build_cache(wn->graph, config);
  }

  TrainData data;
  data.vocab = &vocab;
  if (ngrams) data.ngrams = &*ngrams;
  if (wn) {
    data.graph = &wn->graph;
    data.map = &wn->map;
    data.tuples = &wn->tuples;
  }

  fs::create_directories(out_dir);
  {
    auto out = open_output(out_dir / "vocab.tsv");
    vocab.dump(out);
  }

  std::vector<DiagnosticRecord> diagnostics;
  fs::path last_checkpoint;
  const auto observer = [&](const IterationView& view) {
    diagnostics.push_back(view.record);
    if (view.iteration % config.checkpoint_every == 0 && view.iteration != config.iterations) {
      std::ostringstream name;
      name << "checkpoint_iter" << std::setw(6) << std::setfill('0') << view.iteration;
      write_checkpoint(out_dir / name.str(), view.state, vocab);
      last_checkpoint = out_dir / name.str();
    }
  };

  const auto write_diag = [&] {
    auto out = open_output(out_dir / "diagnostics.csv");
    write_diagnostics_csv(out, diagnostics);
  };

  try {
    const auto outcome = spec.joint() ? admm_train(config, spec, data, observer)
                                      : single_objective_train(config, spec, data, observer);
    write_checkpoint(out_dir / "checkpoint_final", outcome.state, vocab);
    write_diag();
    std::cout << "trained " << spec.to_string() << " for " << outcome.state.iteration
              << " iterations; checkpoint at " << (out_dir / "checkpoint_final").string() << '\n';
    return 0;
  } catch (const DivergenceError& e) {
    write_diag();
    std::cerr << "training diverged at iteration " << e.iteration << ": " << e.what() << '\n';
    if (!last_checkpoint.empty())
      std::cerr << "last checkpoint retained at " << last_checkpoint.string() << '\n';
    else
      std::cerr << "no checkpoint had been written yet\n";
    return 2;
  }
}

const EmbeddingTable& pick_side(const ModelState& state, const std::string& side, bool prefer_v,
                                std::optional<EmbeddingTable>& avg_storage) {
  const auto need = [&](const std::optional<EmbeddingTable>& t,
                        const char* name) -> const EmbeddingTable& {
    if (!t) throw std::runtime_error(std::string("checkpoint has no ") + name + " embeddings");
    return *t;
  };
  if (side == "w") return need(state.w, "w-side");
  if (side == "v") return need(state.v, "v-side");
  if (side == "avg") {
    if (!state.w || !state.v || !state.coupling)
      throw std::runtime_error("avg needs a joint checkpoint with both sides and multipliers");
    avg_storage = average_embeddings(*state.w, *state.v, state.coupling->shared_ids());
    return *avg_storage;
  }
  if (side != "auto") throw std::runtime_error("--embedding-side must be w, v, avg or auto");
  if (prefer_v) return state.v ? *state.v : need(state.w, "w-side");
  return state.w ? *state.w : need(state.v, "v-side");
}

int cmd_eval_kb(const CheckpointData& ck, const DataPaths& paths, const std::string& side,
                const fs::path& out_csv) {
  if (!ck.state.kb)
    throw std::runtime_error("checkpoint has no relational (TransE/NTN) parameters");
  std::optional<EmbeddingTable> avg;
  const auto& emb = pick_side(ck.state, side, /*prefer_v=*/true, avg);

  // Relation indices must follow the checkpoint's relation order.
  LoadedWordnet wn;
  for (const auto& name : kb_relation_names(*ck.state.kb)) wn.tuples.intern_relation(name);
  if (paths.membership.empty()) throw std::runtime_error("--membership is required");
  {
    auto in = open_data(paths.membership);
    wn.map.load(in, wn.graph, ck.vocab);
  }
  if (paths.tuples_dev.empty() || paths.tuples_test.empty())
    throw std::runtime_error("--tuples-dev and --tuples-test are required");
  {
    auto in = open_data(paths.tuples_dev);
    wn.tuples.load_dev(in, wn.graph);
  }
  {
    auto in = open_data(paths.tuples_test);
    wn.tuples.load_test(in, wn.graph);
  }
  wn.map.freeze();

  const auto dev = materialize_labeled(wn.tuples.dev(), wn.map);
  const auto test = materialize_labeled(wn.tuples.test(), wn.map);
  const auto thresholds = fit_thresholds(*ck.state.kb, emb, dev.tuples);
  const auto result = kb_classify(*ck.state.kb, emb, thresholds, test.tuples);

  auto out = open_output(out_csv);
  out << std::setprecision(9) << "relation,n,correct,accuracy\n";
  for (const auto& row : result.per_relation)
    out << wn.tuples.relations()[row.relation] << ',' << row.n << ',' << row.correct << ','
        << row.accuracy << '\n';
  out << "overall," << result.total << ',' << result.correct << ',' << result.overall << '\n';

  std::cout << "kb completion accuracy: " << result.overall << " over " << result.total
            << " tuples (" << result.unfitted << " with unfitted relations, " << dev.skipped
            << "+" << test.skipped << " skipped for missing members)\n";
  return 0;
}

int cmd_eval_analogy(const CheckpointData& ck, const std::vector<std::string>& data_paths,
                     const std::string& side, const std::string& agg_str,
                     const fs::path& out_csv) {
  std::optional<EmbeddingTable> avg;
  const auto& emb = pick_side(ck.state, side, /*prefer_v=*/false, avg);
  const OffsetAgg agg =
      agg_str.empty() ? ck.state.config.analogy_agg : offset_agg_from_string(agg_str);

  std::vector<AnalogyCategory> categories;
  for (const auto& p : data_paths) {
    const fs::path path = resolve_data(p);
    std::vector<fs::path> files;
    if (fs::is_directory(path)) {
      for (const auto& entry : fs::directory_iterator(path))
        if (entry.is_regular_file()) files.push_back(entry.path());
      std::sort(files.begin(), files.end());
    } else {
      files.push_back(path);
    }
    for (const auto& file : files) {
      std::ifstream in(file);
      if (!in) throw std::runtime_error("cannot open analogy file: " + file.string());
      categories.push_back(load_analogy_category(in, file.stem().string()));
    }
  }
  if (categories.empty()) throw std::runtime_error("no analogy categories found");

  const auto result = evaluate_analogy(emb, ck.vocab, categories, agg);
  auto out = open_output(out_csv);
  out << std::setprecision(9)
      << "category,tests,skipped_tests,spearman,questions,skipped_questions,"
         "choice_accuracy,question_accuracy,ties\n";
  for (const auto& cr : result.categories) {
    const int scored_q = cr.questions - cr.skipped_questions;
    out << cr.name << ',' << cr.n_tests << ',' << cr.skipped_tests << ',';
    if (cr.spearman) out << *cr.spearman;
    out << ',' << cr.questions << ',' << cr.skipped_questions << ',';
    if (cr.choice_total > 0) out << static_cast<double>(cr.choice_correct) / cr.choice_total;
    out << ',';
    if (scored_q > 0) out << static_cast<double>(cr.question_correct) / scored_q;
    out << ',' << cr.score_ties << '\n';
  }
  out << "overall,,," << result.mean_spearman << ",,," << result.choice_accuracy << ','
      << result.question_accuracy << ",\n";

  const double oov_rate =
      result.total_pairs > 0 ? static_cast<double>(result.oov_pairs) / result.total_pairs : 0.0;
  std::cout << "analogy: maxdiff choice accuracy " << result.choice_accuracy << " (per-question "
            << result.question_accuracy << "), mean spearman " << result.mean_spearman << " over "
            << result.categories_with_spearman << " categories, pair OOV rate " << oov_rate
            << '\n';
  return 0;
}

int cmd_eval_clusters(const CheckpointData& ck, const std::string& side, int k,
                      std::uint64_t seed, const fs::path& out_tsv) {
  std::optional<EmbeddingTable> avg;
  const auto& emb = pick_side(ck.state, side, /*prefer_v=*/false, avg);
  Rng rng = Rng::substream(seed, streams::kEval);
  const auto result = kmeans_cluster(emb, k, rng);
  auto out = open_output(out_tsv);
  for (int id = 0; id < emb.size(); ++id)
    out << ck.vocab.word(id) << '\t' << result.assignment[id] << '\n';
  std::cout << std::setprecision(9) << "sse=" << result.sse
            << " iterations=" << result.iterations << " k=" << k << '\n';
  return 0;
}

int cmd_diagnose(const fs::path& run_dir, const DataPaths& paths, const fs::path& out_csv) {
  std::vector<fs::path> checkpoints;
  for (const auto& entry : fs::directory_iterator(run_dir)) {
    const auto name = entry.path().filename().string();
    if (entry.is_directory() && name.rfind("checkpoint_", 0) == 0)
      checkpoints.push_back(entry.path());
  }
  if (checkpoints.empty()) throw std::runtime_error("no checkpoints under " + run_dir.string());

  std::vector<DiagnosticRecord> records;
  std::optional<Vocabulary> vocab;
  std::optional<NgramSource> ngrams;
  std::optional<LoadedWordnet> wn;
  for (const auto& dir : checkpoints) {
    const auto ck = read_checkpoint(dir);
    const auto& config = ck.state.config;
    const auto& spec = ck.state.objectives;
    if (!vocab) {
      // data reloaded once against the checkpoint vocabulary
      vocab = ck.vocab;
      if (spec.nlm) ngrams.emplace(build_ngrams_from(paths, *vocab, config.ngram_n));
      if (spec.has_relational()) {
        wn.emplace(load_wordnet(paths, *vocab, spec.relational != RelationalKind::Gd, false));
        if (spec.relational == RelationalKind::Gd) maybe_build_cache(wn->graph, config);
        if (spec.relational != RelationalKind::Gd && ck.state.kb) {
          // relation indices must match the training order
          RelationTupleSet reordered;
          for (const auto& n : kb_relation_names(*ck.state.kb)) reordered.intern_relation(n);
          auto in = open_data(paths.tuples_train);
          reordered.load_train(in, wn->graph);
          wn->tuples = std::move(reordered);
        }
      }
    }
    DiagnosticRecord rec;
    rec.iteration = ck.state.iteration;
    Rng diag = Rng::substream(config.seed, streams::kDiagnostics,
                              static_cast<std::uint64_t>(ck.state.iteration));
    if (spec.nlm) {
      const auto block = ngrams->sample_block(config.ngram_block, diag);
      rec.joint_loss += nlm_eval_loss(*ck.state.nlm, *ck.state.w, block, *vocab,
                                      config.corrupt_position, diag);
    }
    if (spec.has_relational()) {
      if (spec.relational == RelationalKind::Gd) {
        const auto raw = sample_word_pairs(wn->map, *vocab, config.gd_word_sample,
                                           config.gd_max_neighbors, diag);
        std::vector<GdPair> pairs;
        for (const auto& [i, j] : raw) {
          const auto ws = word_similarity(wn->graph, wn->map, i, j);
          if (ws) pairs.push_back({i, j, *ws});
        }
        rec.joint_loss += gd_eval_loss(*ck.state.gd, *ck.state.v, pairs);
      } else {
        rec.joint_loss +=
            kb_eval_loss(*ck.state.kb, *ck.state.v, wn->tuples, wn->map, *vocab, diag);
      }
    }
    if (ck.state.coupling) {
      const auto stats = ck.state.coupling->stats(*ck.state.w, *ck.state.v);
      rec.mean_y_norm = stats.mean_y_norm;
      rec.mean_scaled_residual = stats.mean_scaled_residual;
    }
    records.push_back(rec);
  }
  std::sort(records.begin(), records.end(),
            [](const DiagnosticRecord& a, const DiagnosticRecord& b) {
              return a.iteration < b.iteration;
            });
  auto out = open_output(out_csv);
  write_diagnostics_csv(out, records);
  std::cout << "wrote " << records.size() << " diagnostic rows to " << out_csv.string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"jointvec: joint distributional + relational word vector training"};
  app.require_subcommand(1);

  DataPaths paths;
  RunConfig config;
  std::string objective, out_path, corrupt_position, analogy_agg;

  auto* train = app.add_subcommand("train", "train embeddings, write checkpoints + diagnostics");
  train->add_option("--objective", objective, "nlm|gd|transe|ntn|nlm+gd|nlm+transe|nlm+ntn")
      ->required();
  train->add_option("--out", out_path, "output run directory")->required();
  add_corpus_options(train, paths);
  add_wordnet_options(train, paths);
  add_config_options(train, config, corrupt_position, analogy_agg);
  std::string config_file;
  train->add_option("--config", config_file, "flat key=value configuration file");

  std::string task, checkpoint_path, side = "auto", agg_override;
  std::vector<std::string> analogy_data;
  int k_override = 0;
  std::uint64_t eval_seed = 1;
  auto* eval = app.add_subcommand("eval", "evaluate a checkpoint on kb|analogy|clusters");
  eval->add_option("--task", task, "kb|analogy|clusters")->required();
  eval->add_option("--checkpoint", checkpoint_path, "checkpoint directory")->required();
  eval->add_option("--out", out_path, "output CSV/TSV path")->required();
  eval->add_option("--embedding-side", side, "w|v|avg|auto (kb defaults to v)");
  eval->add_option("--analogy-data", analogy_data, "category file(s) or directory");
  eval->add_option("--agg", agg_override, "mean|max offset aggregation override");
  eval->add_option("--k", k_override, "cluster count (default from checkpoint config)");
  eval->add_option("--seed", eval_seed, "clustering seed");
  add_wordnet_options(eval, paths);

  std::string run_path;
  auto* diagnose = app.add_subcommand("diagnose", "re-emit the diagnostics CSV from checkpoints");
  diagnose->add_option("--run", run_path, "run directory containing checkpoint_*")->required();
  diagnose->add_option("--out", out_path, "output CSV path")->required();
  add_corpus_options(diagnose, paths);
  add_wordnet_options(diagnose, paths);

  int vocab_max = 50000;
  auto* vocab_cmd = app.add_subcommand("vocab", "build a vocabulary and dump it as TSV");
  vocab_cmd->add_option("--max-size", vocab_max, "vocabulary size cap");
  vocab_cmd->add_option("--out", out_path, "output TSV path")->required();
  add_corpus_options(vocab_cmd, paths);

  CLI11_PARSE(app, argc, argv);

  try {
    if (train->parsed() && !config_file.empty())
      apply_config_file(train, config_file, config, corrupt_position, analogy_agg);
    if (!corrupt_position.empty())
      config.corrupt_position = corrupt_position_from_string(corrupt_position);
    if (!analogy_agg.empty()) config.analogy_agg = offset_agg_from_string(analogy_agg);
    config.validate();

    if (train->parsed()) return cmd_train(objective, paths, config, out_path);
    if (eval->parsed()) {
      kernels::set_parallel(config.parallel);
      const auto ck = read_checkpoint(checkpoint_path);
      if (task == "kb") return cmd_eval_kb(ck, paths, side, out_path);
      if (task == "analogy")
        return cmd_eval_analogy(ck, analogy_data, side, agg_override, out_path);
      if (task == "clusters") {
        const int k = k_override > 0 ? k_override : ck.state.config.kmeans_k;
        return cmd_eval_clusters(ck, side, k, eval_seed, out_path);
      }
      throw std::runtime_error("--task must be kb, analogy or clusters");
    }
    if (diagnose->parsed()) return cmd_diagnose(run_path, paths, out_path);
    if (vocab_cmd->parsed()) {
      const auto vocab = build_vocab_from(paths, vocab_max);
      auto out = open_output(out_path);
      vocab.dump(out);
      std::cout << "wrote " << vocab.size() << " words to " << out_path << '\n';
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 1;
}
