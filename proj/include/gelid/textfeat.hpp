#ifndef GELID_TEXTFEAT_HPP
#define GELID_TEXTFEAT_HPP

#include <Eigen/Core>
#include <string>
#include <unordered_map>
#include <vector>

#include "gelid/types.hpp"

namespace gelid {

// Lowercase alphanumeric token runs, order preserving. No stemming, no
// stopword removal.
std::vector<std::string> tokenize(const std::string& text);

struct Vocabulary {
  std::vector<std::string> tokens;  // sorted, unique, lowercase
  std::unordered_map<std::string, int> index;

  size_t size() const { return tokens.size(); }
};

Vocabulary build_vocab(const std::vector<std::string>& transcripts);
void save_vocab(const Vocabulary& vocab, const std::string& path);
Vocabulary load_vocab(const std::string& path);

// Raw term counts over the vocabulary; out-of-vocabulary tokens ignored.
Eigen::VectorXd bow_vector(const std::vector<std::string>& tokens, const Vocabulary& vocab);

struct EmbeddingTable {
  int dim = 0;
  std::unordered_map<std::string, Eigen::VectorXd> vectors;
};

// word2vec text format: header "count dim", then "token v1 ... v_dim" lines.
// Duplicate tokens keep the last entry (with a warning on stderr).
EmbeddingTable load_embeddings(const std::string& path);

// Mean of in-table token embeddings; all-OOV input yields a zero vector.
Eigen::VectorXd embed_average(const std::vector<std::string>& tokens, const EmbeddingTable& table);

}  // namespace gelid

#endif
