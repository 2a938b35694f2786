#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

#include "jointvec/checkpoint.hpp"
#include "testutil.hpp"

using namespace jointvec;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() /
           ("jointvec_test_" + std::to_string(::getpid()) + "_" +
            std::to_string(counter()++));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  static int& counter() {
    static int c = 0;
    return c;
  }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

ModelState joint_state(const testutil::ToyWorld& world) {
  Rng rng(60);
  ModelState state;
  state.objectives = ObjectiveSpec::parse("nlm+gd");
  state.config.dim = 5;
  state.config.seed = 9;
  state.iteration = 12;
  state.w = EmbeddingTable::uniform_init(world.vocab.size(), 5, 1.0, rng);
  state.v = EmbeddingTable::uniform_init(world.vocab.size(), 5, 1.0, rng);
  state.nlm = NlmParams::init(3, 5, 2, rng);
  state.gd = GdParams{1.3, -0.2, true};
  state.coupling.emplace(world.map.wordnet_word_ids(), 5, 0.05, 0.5);
  for (auto& y : state.coupling->mutable_y()) y = rng.uniform(-1.0, 1.0);
  return state;
}

}  // namespace

TEST_CASE("embedding files round trip through the documented format") {
  Rng rng(61);
  auto emb = EmbeddingTable::uniform_init(7, 3, 1.0, rng);
  const std::vector<std::string> words = {"RARE", "a", "b", "c", "d", "e", "f"};
  std::ostringstream out;
  write_embedding_file(out, emb, words);
  std::istringstream in(out.str());
  const auto f = read_embedding_file(in);
  CHECK(f.words == words);
  REQUIRE(f.table.size() == 7);
  REQUIRE(f.table.dim() == 3);
  // written at 9 significant digits; rewriting reproduces the bytes exactly
  std::ostringstream out2;
  write_embedding_file(out2, f.table, f.words);
  CHECK(out.str() == out2.str());
}

TEST_CASE("embedding files reject dimension mismatches with the line number") {
  std::istringstream bad("1 2\ncat 0.5\n");
  CHECK_THROWS_WITH_AS(read_embedding_file(bad), doctest::Contains("line 2"), std::runtime_error);
  std::istringstream bad2("1 2\ncat 0.5 0.25 0.125\n");
  CHECK_THROWS_WITH_AS(read_embedding_file(bad2), doctest::Contains("line 2"), std::runtime_error);
  std::istringstream bad3("one two\n");
  CHECK_THROWS_WITH_AS(read_embedding_file(bad3), doctest::Contains("line 1"), std::runtime_error);
}

TEST_CASE("checkpoints round trip every component") {
  const auto world = testutil::make_toy_world();
  const auto state = joint_state(world);
  TempDir dir;
  write_checkpoint(dir.path / "ck", state, world.vocab);
  const auto back = read_checkpoint(dir.path / "ck");

  CHECK(back.state.objectives.to_string() == "nlm+gd");
  CHECK(back.state.iteration == 12);
  CHECK(back.state.config.seed == 9);
  CHECK(back.vocab.size() == world.vocab.size());
  CHECK(back.vocab.word(0) == world.vocab.word(0));
  REQUIRE(back.state.w.has_value());
  REQUIRE(back.state.v.has_value());
  REQUIRE(back.state.nlm.has_value());
  REQUIRE(back.state.gd.has_value());
  REQUIRE(back.state.coupling.has_value());
  CHECK(back.state.gd->a == doctest::Approx(1.3).epsilon(1e-9));
  CHECK(back.state.coupling->shared_ids() == state.coupling->shared_ids());

  // idempotence at stored precision: write(read(x)) == write(x)
  write_checkpoint(dir.path / "ck2", back.state, back.vocab);
  for (const auto* name : {"meta.txt", "w.emb", "v.emb", "y.emb", "nlm_params.txt",
                           "gd_params.txt"}) {
    CAPTURE(name);
    CHECK(slurp(dir.path / "ck" / name) == slurp(dir.path / "ck2" / name));
  }
}

TEST_CASE("kb parameter files round trip") {
  const auto world = testutil::make_toy_world();
  Rng rng(62);
  ModelState state;
  state.objectives = ObjectiveSpec::parse("ntn");
  state.config.dim = 3;
  state.v = EmbeddingTable::uniform_init(world.vocab.size(), 3, 1.0, rng);
  state.kb = NtnParams::init({"type_of", "part_of"}, 3, 2, rng);
  TempDir dir;
  write_checkpoint(dir.path / "ck", state, world.vocab);
  const auto back = read_checkpoint(dir.path / "ck");
  REQUIRE(back.state.kb.has_value());
  const auto& ntn = std::get<NtnParams>(*back.state.kb);
  CHECK(ntn.relation_names == std::vector<std::string>{"type_of", "part_of"});
  CHECK(ntn.d == 3);
  CHECK(ntn.h == 2);
  write_checkpoint(dir.path / "ck2", back.state, back.vocab);
  CHECK(slurp(dir.path / "ck" / "ntn_params.txt") == slurp(dir.path / "ck2" / "ntn_params.txt"));

  state.kb = TransEParams::init({"type_of"}, 3, rng);
  state.objectives = ObjectiveSpec::parse("transe");
  write_checkpoint(dir.path / "ck3", state, world.vocab);
  const auto te_back = read_checkpoint(dir.path / "ck3");
  CHECK(std::get<TransEParams>(*te_back.state.kb).relation_names ==
        std::vector<std::string>{"type_of"});
}

TEST_CASE("diagnostics CSV round trips with a stable header") {
  std::vector<DiagnosticRecord> records = {{1, 0.5, 0.01, 0.2}, {2, 0.45, 0.02, 0.18}};
  std::ostringstream out;
  write_diagnostics_csv(out, records);
  CHECK(out.str().rfind("iteration,joint_loss,mean_y_norm,mean_scaled_residual\n", 0) == 0);
  std::istringstream in(out.str());
  const auto back = read_diagnostics_csv(in);
  REQUIRE(back.size() == 2);
  CHECK(back[1].iteration == 2);
  CHECK(back[1].joint_loss == doctest::Approx(0.45).epsilon(1e-12));
}
