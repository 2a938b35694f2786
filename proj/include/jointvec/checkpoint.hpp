#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>
#include <string>
#include <vector>

#include "jointvec/trainer.hpp"
#include "jointvec/vocab.hpp"

namespace jointvec {

// Text checkpoint, one directory per snapshot:
//   meta.txt     key=value run configuration and objectives
//   w.emb/v.emb  `N d` header, then `word v1 ... vd` per row
//   y.emb        multipliers over the shared words, same format
//   *_params.txt objective parameters
// Values carry 9 significant digits; reading back a written checkpoint
// reproduces the stored text exactly.
void write_checkpoint(const std::filesystem::path& dir, const ModelState& state,
                      const Vocabulary& vocab);

struct CheckpointData {
  ModelState state;
  Vocabulary vocab;  // rebuilt from the embedding word column
};

CheckpointData read_checkpoint(const std::filesystem::path& dir);

// `N d` header then one `word v1 ... vd` row per vector.
void write_embedding_file(std::ostream& out, const EmbeddingTable& emb,
                          const std::vector<std::string>& words);
void write_embedding_file(std::ostream& out, const EmbeddingTable& emb,
                          const Vocabulary& vocab);

struct EmbeddingFile {
  EmbeddingTable table;
  std::vector<std::string> words;
};
// Rejects malformed headers and dimension mismatches with the line number.
EmbeddingFile read_embedding_file(std::istream& in);

void write_diagnostics_csv(std::ostream& out, std::span<const DiagnosticRecord> records);
std::vector<DiagnosticRecord> read_diagnostics_csv(std::istream& in);

}  // namespace jointvec
