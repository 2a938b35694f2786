#include "doctest.h"

#include <cmath>
#include <set>
#include <sstream>

#include "jointvec/wordnet.hpp"
#include "testutil.hpp"

using namespace jointvec;

TEST_CASE("root insertion connects parentless synsets") {
  auto g = testutil::graph_from_tsv("B\tA\n");
  const int root = g.root();
  CHECK(g.depth(root) == 0);
  CHECK(g.depth(g.find("A")) == 1);
  CHECK(g.depth(g.find("B")) == 2);
  CHECK(g.max_depth() == 2);
}

TEST_CASE("shortest_path_len counts nodes") {
  auto g = testutil::graph_from_tsv("B\tA\nC\tR\n");
  // edges: B-A, C-R, plus root-A and root-R
  const int b = g.find("B"), c = g.find("C");
  CHECK(g.shortest_path_len(b, b) == 1);
  CHECK(g.shortest_path_len(b, c) == 5);  // B A root R C
  CHECK(g.shortest_path_len(g.find("A"), b) == 2);
  CHECK(g.shortest_path_len(b, c) == g.shortest_path_len(c, b));
  CHECK_THROWS_AS(g.shortest_path_len(b, 999), std::out_of_range);
}

TEST_CASE("synset similarity matches the hand-evaluated chain") {
  // root--A--B and root--C: max_depth = 2
  SynsetGraph g2;
  {
    std::istringstream edges("B\tA\n");
    g2.load_edges(edges);
    g2.intern("C");
    g2.finalize();
  }
  REQUIRE(g2.max_depth() == 2);
  const int b = g2.find("B"), c = g2.find("C"), a = g2.find("A");
  CHECK(g2.shortest_path_len(b, c) == 4);  // B A root C
  CHECK(synset_similarity(g2, b, c) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(synset_similarity(g2, a, a) == doctest::Approx(std::log(4.0)).epsilon(1e-12));
  // identity maximizes similarity
  for (int s = 0; s < g2.size(); ++s)
    CHECK(synset_similarity(g2, b, b) >= synset_similarity(g2, b, s));
}

TEST_CASE("BFS equals the Floyd-Warshall oracle on random graphs") {
  Rng rng(17);
  for (int trial = 0; trial < 100; ++trial) {
    const auto spec = testutil::random_graph(12, rng);
    const auto g = testutil::graph_from_tsv(spec.edges_tsv);
    std::vector<std::vector<int>> adj(g.size());
    for (int s = 0; s < g.size(); ++s) adj[s] = g.neighbors(s);
    const auto fw = testutil::floyd_warshall(g.size(), adj);
    for (int i = 0; i < g.size(); ++i)
      for (int j = 0; j < g.size(); ++j)
        CHECK(g.shortest_path_len(i, j) == fw[i][j] + 1);
  }
}

TEST_CASE("triangle inequality holds for edge distances") {
  Rng rng(23);
  const auto spec = testutil::random_graph(12, rng);
  const auto g = testutil::graph_from_tsv(spec.edges_tsv);
  for (int i = 0; i < g.size(); ++i)
    for (int j = 0; j < g.size(); ++j)
      for (int k = 0; k < g.size(); ++k) {
        const int dij = g.shortest_path_len(i, j) - 1;
        const int dik = g.shortest_path_len(i, k) - 1;
        const int dkj = g.shortest_path_len(k, j) - 1;
        CHECK(dij <= dik + dkj);
      }
}

TEST_CASE("distance cache returns identical results") {
  Rng rng(29);
  const auto spec = testutil::random_graph(12, rng);
  const auto plain = testutil::graph_from_tsv(spec.edges_tsv);
  auto cached = testutil::graph_from_tsv(spec.edges_tsv);
  cached.build_distance_cache();
  REQUIRE(cached.has_distance_cache());
  for (int i = 0; i < plain.size(); ++i)
    for (int j = 0; j < plain.size(); ++j)
      CHECK(plain.shortest_path_len(i, j) == cached.shortest_path_len(i, j));
}

TEST_CASE("word similarity takes the max over synset pairs") {
  SynsetGraph g;
  {
    std::istringstream edges("B\tA\n");
    g.load_edges(edges);
    g.intern("C");
  }
  WordSynsetMap map;
  Vocabulary vocab;
  {
    std::istringstream text("i j k");
    vocab = build_vocabulary(text, 10);
  }
  const int wi = vocab.id_or_rare("i"), wj = vocab.id_or_rare("j"), wk = vocab.id_or_rare("k");
  map.add(wi, g.find("B"));
  map.add(wj, g.find("B"));
  map.add(wj, g.find("C"));
  g.finalize();
  map.freeze();

  const auto sim_ii = word_similarity(g, map, wi, wi);
  REQUIRE(sim_ii.has_value());
  CHECK(*sim_ii == doctest::Approx(synset_similarity(g, g.find("B"), g.find("B"))));
  // max over {(B,B), (B,C)} is the identity pair
  const auto sim_ij = word_similarity(g, map, wi, wj);
  REQUIRE(sim_ij.has_value());
  CHECK(*sim_ij == doctest::Approx(synset_similarity(g, g.find("B"), g.find("B"))));
  CHECK(!word_similarity(g, map, wi, wk).has_value());  // k has no synsets
  // symmetry when defined
  CHECK(*word_similarity(g, map, wj, wi) == doctest::Approx(*sim_ij));
}

TEST_CASE("sampled word pairs always have defined similarity") {
  const auto world = testutil::make_toy_world();
  Rng rng(31);
  const auto pairs = sample_word_pairs(world.map, world.vocab, 50, 3, rng);
  CHECK(!pairs.empty());
  for (const auto& [i, j] : pairs)
    CHECK(word_similarity(world.graph, world.map, i, j).has_value());
}

TEST_CASE("single-synset map restricts pairs to its two words") {
  SynsetGraph g;
  g.intern("s");
  WordSynsetMap map;
  Vocabulary vocab;
  {
    std::istringstream text("a a b c");
    vocab = build_vocabulary(text, 10);
  }
  map.add(vocab.id_or_rare("a"), g.find("s"));
  map.add(vocab.id_or_rare("b"), g.find("s"));
  g.finalize();
  map.freeze();
  Rng rng(37);
  const auto pairs = sample_word_pairs(map, vocab, 200, 2, rng);
  const std::set<int> allowed = {vocab.id_or_rare("a"), vocab.id_or_rare("b")};
  CHECK(!pairs.empty());
  for (const auto& [i, j] : pairs) {
    CHECK(allowed.count(i) == 1);
    CHECK(allowed.count(j) == 1);
  }
  // zero draws -> empty
  CHECK(sample_word_pairs(map, vocab, 0, 5, rng).empty());
}

TEST_CASE("relation tuple corruption changes exactly one slot") {
  const auto world = testutil::make_toy_world();
  Rng rng(41);
  for (int trial = 0; trial < 100; ++trial) {
    const auto pair = sample_relation_tuple(world.tuples, world.map, world.vocab, rng);
    int delta = 0;
    for (int s = 0; s < 3; ++s)
      if (pair.clean.slots[s] != pair.corrupted.slots[s]) ++delta;
    CHECK(delta == 1);
  }
}

TEST_CASE("a single relation forces word-slot corruption") {
  WordTuple t{{3, 0, 5}};
  std::istringstream text("a b c d e f");
  const auto vocab = build_vocabulary(text, 10);
  Rng rng(43);
  for (int trial = 0; trial < 60; ++trial) {
    const auto corrupted = corrupt_tuple(t, vocab, /*relation_count=*/1, rng);
    CHECK(corrupted.relation() == t.relation());
    CHECK((corrupted.left() != t.left() || corrupted.right() != t.right()));
  }
}

TEST_CASE("singleton memberships instantiate deterministically") {
  SynsetGraph g;
  const int s1 = g.intern("s1");
  const int s2 = g.intern("s2");
  Vocabulary vocab;
  {
    std::istringstream text("cat mammal");
    vocab = build_vocabulary(text, 10);
  }
  WordSynsetMap map;
  map.add(vocab.id_or_rare("cat"), s1);
  map.add(vocab.id_or_rare("mammal"), s2);
  g.finalize();
  map.freeze();
  Rng rng(47);
  const auto word_tuple = instantiate_tuple(RelationTuple{s1, 0, s2}, map, rng);
  REQUIRE(word_tuple.has_value());
  CHECK(word_tuple->left() == vocab.id_or_rare("cat"));
  CHECK(word_tuple->right() == vocab.id_or_rare("mammal"));
}

TEST_CASE("labeled tuple files require labels") {
  SynsetGraph g;
  RelationTupleSet tuples;
  std::istringstream bad("s1\tr\ts2\n");
  CHECK_THROWS_WITH_AS(tuples.load_dev(bad, g), doctest::Contains("label"), std::runtime_error);
  std::istringstream bad2("s1\tr\ts2\t2\n");
  CHECK_THROWS_AS(tuples.load_dev(bad2, g), std::runtime_error);
  std::istringstream good("s1\tr\ts2\t1\ns3\tr\ts4\t-1\n");
  tuples.load_dev(good, g);
  REQUIRE(tuples.dev().size() == 2);
  CHECK(tuples.dev()[0].positive);
  CHECK(!tuples.dev()[1].positive);
}

TEST_CASE("membership loading drops out-of-vocabulary words") {
  SynsetGraph g;
  Vocabulary vocab;
  {
    std::istringstream text("a b");
    vocab = build_vocabulary(text, 10);
  }
  WordSynsetMap map;
  std::istringstream members("s0\ta\ns0\tzzz\n");
  map.load(members, g, vocab);
  g.finalize();
  map.freeze();
  CHECK(map.members_of(g.find("s0")).size() == 1);
  CHECK(map.wordnet_word_ids() == std::vector<int>{vocab.id_or_rare("a")});
}
