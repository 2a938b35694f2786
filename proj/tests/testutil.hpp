#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "jointvec/ngram.hpp"
#include "jointvec/rng.hpp"
#include "jointvec/vocab.hpp"
#include "jointvec/wordnet.hpp"

namespace testutil {

// Central finite differences over one parameter view, mutating in place.
inline std::vector<double> finite_difference(std::span<double> params,
                                             const std::function<double()>& f,
                                             double step = 1e-5) {
  std::vector<double> g(params.size());
  for (std::size_t i = 0; i < params.size(); ++i) {
    const double orig = params[i];
    params[i] = orig + step;
    const double fp = f();
    params[i] = orig - step;
    const double fm = f();
    params[i] = orig;
    g[i] = (fp - fm) / (2.0 * step);
  }
  return g;
}

// Componentwise relative error with a floor, so exact zeros compare cleanly.
inline double gradient_error(std::span<const double> analytic, std::span<const double> numeric) {
  double worst = 0.0;
  for (std::size_t i = 0; i < analytic.size(); ++i) {
    const double denom = std::max({std::abs(analytic[i]), std::abs(numeric[i]), 1e-3});
    worst = std::max(worst, std::abs(analytic[i] - numeric[i]) / denom);
  }
  return worst;
}

// All-pairs shortest edge distances; the brute-force oracle for BFS.
inline std::vector<std::vector<int>> floyd_warshall(int n,
                                                    const std::vector<std::vector<int>>& adj) {
  const int inf = std::numeric_limits<int>::max() / 4;
  std::vector<std::vector<int>> dist(n, std::vector<int>(n, inf));
  for (int i = 0; i < n; ++i) dist[i][i] = 0;
  for (int u = 0; u < n; ++u)
    for (int v : adj[u]) dist[u][v] = 1;
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j)
        dist[i][j] = std::min(dist[i][j], dist[i][k] + dist[k][j]);
  return dist;
}

// Random connected hypernym graph of up to max_synsets, returned as an edge
// TSV plus the synset names.
struct RandomGraphSpec {
  std::string edges_tsv;
  std::vector<std::string> synsets;
};

inline RandomGraphSpec random_graph(int max_synsets, jointvec::Rng& rng) {
  const int n = 2 + rng.uniform_index(std::max(1, max_synsets - 1));
  RandomGraphSpec spec;
  std::ostringstream edges;
  for (int i = 0; i < n; ++i) spec.synsets.push_back("s" + std::to_string(i));
  // random parent tree plus a few extra edges (multiple inheritance)
  for (int i = 1; i < n; ++i)
    edges << spec.synsets[i] << '\t' << spec.synsets[rng.uniform_index(i)] << '\n';
  const int extra = rng.uniform_index(n / 2 + 1);
  for (int e = 0; e < extra; ++e) {
    const int a = rng.uniform_index(n);
    const int b = rng.uniform_index(n);
    if (a != b) edges << spec.synsets[std::max(a, b)] << '\t' << spec.synsets[std::min(a, b)] << '\n';
  }
  spec.edges_tsv = edges.str();
  return spec;
}

inline jointvec::SynsetGraph graph_from_tsv(const std::string& tsv) {
  jointvec::SynsetGraph g;
  std::istringstream in(tsv);
  g.load_edges(in);
  g.finalize();
  return g;
}

// Self-contained toy training world: corpus, vocabulary, synset graph,
// membership and relation tuples over the same words.
struct ToyWorld {
  jointvec::Vocabulary vocab;
  jointvec::NgramSource ngrams;
  jointvec::SynsetGraph graph;
  jointvec::WordSynsetMap map;
  jointvec::RelationTupleSet tuples;
};

struct ToyWorldOptions {
  int n_words = 40;
  int n_synsets = 20;
  int n_sentences = 120;
  int sentence_len = 8;
  int ngram_n = 3;
  int n_train_tuples = 40;
  int n_labeled = 16;       // dev/test tuples each
  double wordnet_coverage = 0.7;  // fraction of words that get a synset
  std::uint64_t seed = 7;
};

inline ToyWorld make_toy_world(const ToyWorldOptions& opt = {}) {
  jointvec::Rng rng(opt.seed);
  const auto word = [](int i) { return "w" + std::to_string(i); };

  // Zipf-ish rank skew so the corpus has a frequency profile.
  const auto draw_word = [&] {
    const double u = rng.uniform();
    return word(static_cast<int>(u * u * opt.n_words));
  };
  std::ostringstream corpus;
  for (int s = 0; s < opt.n_sentences; ++s) {
    for (int t = 0; t < opt.sentence_len; ++t) {
      if (t) corpus << ' ';
      corpus << draw_word();
    }
    corpus << '\n';
  }
  const std::string corpus_text = corpus.str();

  ToyWorld world;
  {
    std::istringstream in(corpus_text);
    world.vocab = jointvec::build_vocabulary(in, static_cast<std::size_t>(opt.n_words));
  }
  {
    std::istringstream in(corpus_text);
    world.ngrams = jointvec::NgramSource::from_text(in, world.vocab, opt.ngram_n);
  }

  std::ostringstream edges;
  for (int s = 1; s < opt.n_synsets; ++s)
    edges << "s" << s << "\ts" << rng.uniform_index(s) << '\n';
  {
    std::istringstream in(edges.str());
    world.graph.load_edges(in);
  }

  std::ostringstream members;
  const int covered = static_cast<int>(opt.n_words * opt.wordnet_coverage);
  for (int i = 0; i < covered; ++i)
    members << 's' << (i % opt.n_synsets) << '\t' << word(i) << '\n';
  {
    std::istringstream in(members.str());
    world.map.load(in, world.graph, world.vocab);
  }

  std::ostringstream train, dev, test;
  const auto rand_synset = [&] { return "s" + std::to_string(rng.uniform_index(opt.n_synsets)); };
  const auto rand_rel = [&] { return rng.uniform_index(2) == 0 ? "type_of" : "part_of"; };
  for (int t = 0; t < opt.n_train_tuples; ++t)
    train << rand_synset() << '\t' << rand_rel() << '\t' << rand_synset() << '\n';
  for (int t = 0; t < opt.n_labeled; ++t) {
    dev << rand_synset() << '\t' << rand_rel() << '\t' << rand_synset() << '\t'
        << (t % 2 == 0 ? "1" : "-1") << '\n';
    test << rand_synset() << '\t' << rand_rel() << '\t' << rand_synset() << '\t'
         << (t % 2 == 0 ? "1" : "-1") << '\n';
  }
  {
    std::istringstream in(train.str());
    world.tuples.load_train(in, world.graph);
  }
  {
    std::istringstream in(dev.str());
    world.tuples.load_dev(in, world.graph);
  }
  {
    std::istringstream in(test.str());
    world.tuples.load_test(in, world.graph);
  }

  world.graph.finalize();
  world.map.freeze();
  return world;
}

}  // namespace testutil
