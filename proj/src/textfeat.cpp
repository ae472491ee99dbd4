#include "gelid/textfeat.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace gelid {

std::vector<std::string> tokenize(const std::string& text) {
  std::vector<std::string> tokens;
  std::string cur;
  for (unsigned char c : text) {
    if (std::isalnum(c)) {
      cur.push_back(static_cast<char>(std::tolower(c)));
    } else if (!cur.empty()) {
      tokens.push_back(cur);
      cur.clear();
    }
  }
  if (!cur.empty()) tokens.push_back(cur);
  return tokens;
}

Vocabulary build_vocab(const std::vector<std::string>& transcripts) {
  if (transcripts.empty()) throw ValidationError("cannot build vocabulary from empty corpus");
  std::set<std::string> unique;
  for (const std::string& doc : transcripts)
    for (const std::string& tok : tokenize(doc)) unique.insert(tok);
  Vocabulary vocab;
  vocab.tokens.assign(unique.begin(), unique.end());
  for (size_t i = 0; i < vocab.tokens.size(); ++i)
    vocab.index.emplace(vocab.tokens[i], static_cast<int>(i));
  return vocab;
}

void save_vocab(const Vocabulary& vocab, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write vocabulary file: " + path);
  for (const std::string& tok : vocab.tokens) out << tok << '\n';
}

Vocabulary load_vocab(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read vocabulary file: " + path);
  Vocabulary vocab;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    vocab.index.emplace(line, static_cast<int>(vocab.tokens.size()));
    vocab.tokens.push_back(line);
  }
  return vocab;
}

Eigen::VectorXd bow_vector(const std::vector<std::string>& tokens, const Vocabulary& vocab) {
  Eigen::VectorXd counts = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(vocab.size()));
  for (const std::string& tok : tokens) {
    auto it = vocab.index.find(tok);
    if (it != vocab.index.end()) counts[it->second] += 1.0;
  }
  return counts;
}

EmbeddingTable load_embeddings(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read embeddings file: " + path);
  std::string line;
  if (!std::getline(in, line)) throw ParseError("empty embeddings file: " + path);
  std::istringstream header(line);
  long count = 0;
  int dim = 0;
  if (!(header >> count >> dim) || count <= 0 || dim <= 0)
    throw ParseError("bad embeddings header in " + path);

  EmbeddingTable table;
  table.dim = dim;
  long seen = 0;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    std::string token;
    if (!(ls >> token)) throw ParseError("bad embedding line " + std::to_string(line_no));
    Eigen::VectorXd v(dim);
    for (int i = 0; i < dim; ++i)
      if (!(ls >> v[i]))
        throw ParseError("embedding dimension mismatch at line " + std::to_string(line_no) +
                         " in " + path);
    double extra;
    if (ls >> extra)
      throw ParseError("embedding dimension mismatch at line " + std::to_string(line_no) + " in " +
                       path);
    if (table.vectors.count(token))
      std::cerr << "warning: duplicate embedding token '" << token << "' (last wins)\n";
    else
      ++seen;
    table.vectors[token] = std::move(v);
  }
  if (seen != count)
    throw ParseError("embeddings header declares " + std::to_string(count) + " entries, found " +
                     std::to_string(seen) + " in " + path);
  return table;
}

Eigen::VectorXd embed_average(const std::vector<std::string>& tokens, const EmbeddingTable& table) {
  Eigen::VectorXd sum = Eigen::VectorXd::Zero(table.dim);
  long n = 0;
  for (const std::string& tok : tokens) {
    auto it = table.vectors.find(tok);
    if (it != table.vectors.end()) {
      sum += it->second;
      ++n;
    }
  }
  if (n > 0) sum /= static_cast<double>(n);
  return sum;
}

}  // namespace gelid
