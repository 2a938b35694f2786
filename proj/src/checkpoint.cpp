#include "jointvec/checkpoint.hpp"

#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <stdexcept>

namespace jointvec {

namespace {

constexpr int kValuePrecision = 9;    // embedding/parameter values
constexpr int kConfigPrecision = 17;  // config echo must round-trip doubles

std::ofstream open_out(const std::filesystem::path& p) {
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  return out;
}

std::ifstream open_in(const std::filesystem::path& p) {
  std::ifstream in(p);
  if (!in) throw std::runtime_error("cannot read " + p.string());
  return in;
}

void write_values(std::ostream& out, std::span<const double> values) {
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i) out << ' ';
    out << values[i];
  }
  out << '\n';
}

std::vector<double> parse_values(const std::string& line, std::size_t expected,
                                 const std::string& where, int line_no) {
  std::istringstream ls(line);
  std::vector<double> values;
  double x;
  while (ls >> x) values.push_back(x);
  if (values.size() != expected)
    throw std::runtime_error(where + " line " + std::to_string(line_no) + ": expected " +
                             std::to_string(expected) + " values, got " +
                             std::to_string(values.size()));
  return values;
}

std::string next_line(std::istream& in, const std::string& where, int& line_no) {
  std::string line;
  if (!std::getline(in, line))
    throw std::runtime_error(where + ": unexpected end of file at line " +
                             std::to_string(line_no + 1));
  ++line_no;
  return line;
}

void write_meta(std::ostream& out, const ModelState& state) {
  const RunConfig& c = state.config;
  out << std::setprecision(kConfigPrecision);
  out << "format=jointvec-checkpoint-1\n";
  out << "objectives=" << state.objectives.to_string() << '\n';
  out << "iteration=" << state.iteration << '\n';
  out << "seed=" << c.seed << '\n';
  out << "dim=" << c.dim << '\n';
  out << "rho=" << c.rho << '\n';
  out << "alpha=" << c.alpha << '\n';
  out << "iterations=" << c.iterations << '\n';
  out << "ngram_block=" << c.ngram_block << '\n';
  out << "gd_word_sample=" << c.gd_word_sample << '\n';
  out << "gd_max_neighbors=" << c.gd_max_neighbors << '\n';
  out << "lr_nlm=" << c.lr_nlm << '\n';
  out << "lr_gd=" << c.lr_gd << '\n';
  out << "lr_kb=" << c.lr_kb << '\n';
  out << "vocab_max=" << c.vocab_max << '\n';
  out << "ngram_n=" << c.ngram_n << '\n';
  out << "nlm_hidden=" << c.nlm_hidden << '\n';
  out << "ntn_hidden=" << c.ntn_hidden << '\n';
  out << "kmeans_k=" << c.kmeans_k << '\n';
  out << "l2=" << c.l2 << '\n';
  out << "checkpoint_every=" << c.checkpoint_every << '\n';
  out << "corrupt_position=" << to_string(c.corrupt_position) << '\n';
  out << "analogy_agg=" << to_string(c.analogy_agg) << '\n';
}

std::map<std::string, std::string> read_kv(std::istream& in) {
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::runtime_error("meta line without '=': " + line);
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  return kv;
}

const std::string& require(const std::map<std::string, std::string>& kv, const std::string& key) {
  auto it = kv.find(key);
  if (it == kv.end()) throw std::runtime_error("meta.txt is missing key '" + key + "'");
  return it->second;
}

void write_nlm(std::ostream& out, const NlmParams& p) {
  out << std::setprecision(kValuePrecision);
  out << p.n << ' ' << p.d << ' ' << p.h << '\n';
  for (int k = 0; k < p.h; ++k)
    write_values(out, {p.A.data() + static_cast<std::size_t>(k) * p.n * p.d,
                       static_cast<std::size_t>(p.n) * p.d});
  write_values(out, p.b);
  write_values(out, p.u);
}

NlmParams read_nlm(std::istream& in) {
  const std::string where = "nlm_params";
  int line_no = 0;
  NlmParams p;
  {
    std::istringstream hs(next_line(in, where, line_no));
    if (!(hs >> p.n >> p.d >> p.h) || p.n < 1 || p.d < 1 || p.h < 1)
      throw std::runtime_error(where + " line 1: bad header");
  }
  p.A.resize(static_cast<std::size_t>(p.h) * p.n * p.d);
  for (int k = 0; k < p.h; ++k) {
    const auto row = parse_values(next_line(in, where, line_no),
                                  static_cast<std::size_t>(p.n) * p.d, where, line_no);
    std::copy(row.begin(), row.end(), p.A.begin() + static_cast<std::size_t>(k) * p.n * p.d);
  }
  p.b = parse_values(next_line(in, where, line_no), p.h, where, line_no);
  p.u = parse_values(next_line(in, where, line_no), p.h, where, line_no);
  return p;
}

void write_gd(std::ostream& out, const GdParams& p) {
  out << std::setprecision(kValuePrecision);
  out << p.a << ' ' << p.b << ' ' << (p.initialized ? 1 : 0) << '\n';
}

GdParams read_gd(std::istream& in) {
  int line_no = 0;
  const auto v = parse_values(next_line(in, "gd_params", line_no), 3, "gd_params", line_no);
  GdParams p;
  p.a = v[0];
  p.b = v[1];
  p.initialized = v[2] != 0.0;
  return p;
}

void write_transe(std::ostream& out, const TransEParams& p) {
  out << std::setprecision(kValuePrecision);
  out << p.relation_count() << ' ' << p.d << '\n';
  for (int r = 0; r < p.relation_count(); ++r) {
    out << p.relation_names[r];
    for (double x : p.relation(r)) out << ' ' << x;
    out << '\n';
  }
}

TransEParams read_transe(std::istream& in) {
  const std::string where = "transe_params";
  int line_no = 0;
  int nrel = 0;
  TransEParams p;
  {
    std::istringstream hs(next_line(in, where, line_no));
    if (!(hs >> nrel >> p.d) || nrel < 0 || p.d < 1)
      throw std::runtime_error(where + " line 1: bad header");
  }
  p.rel.resize(static_cast<std::size_t>(nrel) * p.d);
  for (int r = 0; r < nrel; ++r) {
    std::istringstream ls(next_line(in, where, line_no));
    std::string name;
    if (!(ls >> name)) throw std::runtime_error(where + " line " + std::to_string(line_no) + ": bad row");
    p.relation_names.push_back(name);
    auto rel = p.relation(r);
    for (int k = 0; k < p.d; ++k)
      if (!(ls >> rel[k]))
        throw std::runtime_error(where + " line " + std::to_string(line_no) + ": expected " +
                                 std::to_string(p.d) + " values");
  }
  return p;
}

void write_ntn(std::ostream& out, const NtnParams& p) {
  out << std::setprecision(kValuePrecision);
  out << p.relation_count() << ' ' << p.d << ' ' << p.h << '\n';
  write_values(out, p.U);
  for (int r = 0; r < p.relation_count(); ++r) {
    out << p.relation_names[r] << '\n';
    for (int k = 0; k < p.h; ++k)
      write_values(out, {p.W.data() + p.w_off(r, k), static_cast<std::size_t>(p.d) * p.d});
    for (int k = 0; k < p.h; ++k) write_values(out, p.v_row(r, k));
    write_values(out, p.b_row(r));
  }
}

NtnParams read_ntn(std::istream& in) {
  const std::string where = "ntn_params";
  int line_no = 0;
  int nrel = 0;
  NtnParams p;
  {
    std::istringstream hs(next_line(in, where, line_no));
    if (!(hs >> nrel >> p.d >> p.h) || nrel < 0 || p.d < 1 || p.h < 1)
      throw std::runtime_error(where + " line 1: bad header");
  }
  p.U = parse_values(next_line(in, where, line_no), p.h, where, line_no);
  p.W.resize(static_cast<std::size_t>(nrel) * p.h * p.d * p.d);
  p.V.resize(static_cast<std::size_t>(nrel) * p.h * 2 * p.d);
  p.b.resize(static_cast<std::size_t>(nrel) * p.h);
  for (int r = 0; r < nrel; ++r) {
    std::string name = next_line(in, where, line_no);
    if (name.empty()) throw std::runtime_error(where + " line " + std::to_string(line_no) + ": empty relation name");
    p.relation_names.push_back(name);
    for (int k = 0; k < p.h; ++k) {
      const auto row = parse_values(next_line(in, where, line_no),
                                    static_cast<std::size_t>(p.d) * p.d, where, line_no);
      std::copy(row.begin(), row.end(), p.W.begin() + p.w_off(r, k));
    }
    for (int k = 0; k < p.h; ++k) {
      const auto row = parse_values(next_line(in, where, line_no),
                                    static_cast<std::size_t>(2) * p.d, where, line_no);
      auto dst = p.v_row(r, k);
      std::copy(row.begin(), row.end(), dst.begin());
    }
    const auto brow = parse_values(next_line(in, where, line_no), p.h, where, line_no);
    auto dst = p.b_row(r);
    std::copy(brow.begin(), brow.end(), dst.begin());
  }
  return p;
}

}  // namespace

void write_embedding_file(std::ostream& out, const EmbeddingTable& emb,
                          const std::vector<std::string>& words) {
  if (static_cast<int>(words.size()) != emb.size())
    throw std::invalid_argument("word list does not match the embedding table size");
  out << std::setprecision(kValuePrecision);
  out << emb.size() << ' ' << emb.dim() << '\n';
  for (int id = 0; id < emb.size(); ++id) {
    out << words[id];
    for (double x : emb.vec(id)) out << ' ' << x;
    out << '\n';
  }
}

void write_embedding_file(std::ostream& out, const EmbeddingTable& emb, const Vocabulary& vocab) {
  write_embedding_file(out, emb, vocab.words());
}

EmbeddingFile read_embedding_file(std::istream& in) {
  int line_no = 0;
  std::string line = next_line(in, "embedding file", line_no);
  int n = 0, d = 0;
  {
    std::istringstream hs(line);
    std::string extra;
    if (!(hs >> n >> d) || (hs >> extra) || n < 0 || d < 1)
      throw std::runtime_error("embedding file line 1: header must be `N d`");
  }
  EmbeddingFile f;
  f.table = EmbeddingTable(n, d);
  f.words.reserve(n);
  for (int id = 0; id < n; ++id) {
    std::istringstream ls(next_line(in, "embedding file", line_no));
    std::string word;
    if (!(ls >> word))
      throw std::runtime_error("embedding file line " + std::to_string(line_no) + ": missing word");
    auto row = f.table.vec(id);
    for (int k = 0; k < d; ++k)
      if (!(ls >> row[k]))
        throw std::runtime_error("embedding file line " + std::to_string(line_no) +
                                 ": expected " + std::to_string(d) + " values");
    double extra;
    if (ls >> extra)
      throw std::runtime_error("embedding file line " + std::to_string(line_no) +
                               ": more than " + std::to_string(d) + " values");
    f.words.push_back(std::move(word));
  }
  return f;
}

void write_checkpoint(const std::filesystem::path& dir, const ModelState& state,
                      const Vocabulary& vocab) {
  std::filesystem::create_directories(dir);
  {
    auto out = open_out(dir / "meta.txt");
    write_meta(out, state);
  }
  if (state.w) {
    auto out = open_out(dir / "w.emb");
    write_embedding_file(out, *state.w, vocab);
  }
  if (state.v) {
    auto out = open_out(dir / "v.emb");
    write_embedding_file(out, *state.v, vocab);
  }
  if (state.coupling) {
    const auto& c = *state.coupling;
    EmbeddingTable y_table(static_cast<int>(c.shared_ids().size()), c.dim());
    std::vector<std::string> words;
    words.reserve(c.shared_ids().size());
    for (std::size_t r = 0; r < c.shared_ids().size(); ++r) {
      const auto row = c.y_row(static_cast<int>(r));
      std::copy(row.begin(), row.end(), y_table.vec(static_cast<int>(r)).begin());
      words.push_back(vocab.word(c.shared_ids()[r]));
    }
    auto out = open_out(dir / "y.emb");
    write_embedding_file(out, y_table, words);
  }
  if (state.nlm) {
    auto out = open_out(dir / "nlm_params.txt");
    write_nlm(out, *state.nlm);
  }
  if (state.gd) {
    auto out = open_out(dir / "gd_params.txt");
    write_gd(out, *state.gd);
  }
  if (state.kb) {
    if (const auto* te = std::get_if<TransEParams>(&*state.kb)) {
      auto out = open_out(dir / "transe_params.txt");
      write_transe(out, *te);
    } else {
      auto out = open_out(dir / "ntn_params.txt");
      write_ntn(out, std::get<NtnParams>(*state.kb));
    }
  }
}

CheckpointData read_checkpoint(const std::filesystem::path& dir) {
  CheckpointData data;
  ModelState& state = data.state;
  std::map<std::string, std::string> kv;
  {
    auto in = open_in(dir / "meta.txt");
    kv = read_kv(in);
  }
  if (require(kv, "format") != "jointvec-checkpoint-1")
    throw std::runtime_error("unsupported checkpoint format: " + kv["format"]);
  state.objectives = ObjectiveSpec::parse(require(kv, "objectives"));
  state.iteration = std::stoi(require(kv, "iteration"));
  RunConfig& c = state.config;
  c.seed = std::stoull(require(kv, "seed"));
  c.dim = std::stoi(require(kv, "dim"));
  c.rho = std::stod(require(kv, "rho"));
  c.alpha = std::stod(require(kv, "alpha"));
  c.iterations = std::stoi(require(kv, "iterations"));
  c.ngram_block = std::stoi(require(kv, "ngram_block"));
  c.gd_word_sample = std::stoi(require(kv, "gd_word_sample"));
  c.gd_max_neighbors = std::stoi(require(kv, "gd_max_neighbors"));
  c.lr_nlm = std::stod(require(kv, "lr_nlm"));
  c.lr_gd = std::stod(require(kv, "lr_gd"));
  c.lr_kb = std::stod(require(kv, "lr_kb"));
  c.vocab_max = std::stoi(require(kv, "vocab_max"));
  c.ngram_n = std::stoi(require(kv, "ngram_n"));
  c.nlm_hidden = std::stoi(require(kv, "nlm_hidden"));
  c.ntn_hidden = std::stoi(require(kv, "ntn_hidden"));
  c.kmeans_k = std::stoi(require(kv, "kmeans_k"));
  c.l2 = std::stod(require(kv, "l2"));
  c.checkpoint_every = std::stoi(require(kv, "checkpoint_every"));
  c.corrupt_position = corrupt_position_from_string(require(kv, "corrupt_position"));
  c.analogy_agg = offset_agg_from_string(require(kv, "analogy_agg"));

  std::vector<std::string> words;
  if (std::filesystem::exists(dir / "w.emb")) {
    auto in = open_in(dir / "w.emb");
    auto f = read_embedding_file(in);
    state.w = std::move(f.table);
    words = std::move(f.words);
  }
  if (std::filesystem::exists(dir / "v.emb")) {
    auto in = open_in(dir / "v.emb");
    auto f = read_embedding_file(in);
    state.v = std::move(f.table);
    if (words.empty())
      words = std::move(f.words);
    else if (words != f.words)
      throw std::runtime_error("w.emb and v.emb disagree on the word column");
  }
  if (words.empty()) throw std::runtime_error("checkpoint has no embedding tables");
  data.vocab = Vocabulary::from_words(words);

  if (std::filesystem::exists(dir / "y.emb")) {
    auto in = open_in(dir / "y.emb");
    auto f = read_embedding_file(in);
    std::vector<int> shared;
    shared.reserve(f.words.size());
    for (const auto& w : f.words) {
      const int id = data.vocab.find(w);
      if (id < 0) throw std::runtime_error("y.emb word not present in embedding tables: " + w);
      shared.push_back(id);
    }
    state.coupling.emplace(shared, f.table.dim(), c.rho, c.alpha);
    auto y = state.coupling->mutable_y();
    std::copy(f.table.raw().begin(), f.table.raw().end(), y.begin());
  }
  if (std::filesystem::exists(dir / "nlm_params.txt")) {
    auto in = open_in(dir / "nlm_params.txt");
    state.nlm = read_nlm(in);
  }
  if (std::filesystem::exists(dir / "gd_params.txt")) {
    auto in = open_in(dir / "gd_params.txt");
    state.gd = read_gd(in);
  }
  if (std::filesystem::exists(dir / "transe_params.txt")) {
    auto in = open_in(dir / "transe_params.txt");
    state.kb = read_transe(in);
  } else if (std::filesystem::exists(dir / "ntn_params.txt")) {
    auto in = open_in(dir / "ntn_params.txt");
    state.kb = read_ntn(in);
  }
  return data;
}

void write_diagnostics_csv(std::ostream& out, std::span<const DiagnosticRecord> records) {
  out << std::setprecision(kValuePrecision);
  out << "iteration,joint_loss,mean_y_norm,mean_scaled_residual\n";
  for (const auto& r : records)
    out << r.iteration << ',' << r.joint_loss << ',' << r.mean_y_norm << ','
        << r.mean_scaled_residual << '\n';
}

std::vector<DiagnosticRecord> read_diagnostics_csv(std::istream& in) {
  std::vector<DiagnosticRecord> records;
  std::string line;
  if (!std::getline(in, line) || line != "iteration,joint_loss,mean_y_norm,mean_scaled_residual")
    throw std::runtime_error("diagnostics csv: bad header");
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    DiagnosticRecord r;
    char c1, c2, c3;
    std::istringstream ls(line);
    if (!(ls >> r.iteration >> c1 >> r.joint_loss >> c2 >> r.mean_y_norm >> c3 >>
          r.mean_scaled_residual) ||
        c1 != ',' || c2 != ',' || c3 != ',')
      throw std::runtime_error("diagnostics csv line " + std::to_string(line_no) + ": bad row");
    records.push_back(r);
  }
  return records;
}

}  // namespace jointvec
