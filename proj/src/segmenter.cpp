#include "gelid/segmenter.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <json.hpp>

#include "gelid/textfeat.hpp"

namespace gelid {

namespace {

std::string join_tokens(const std::vector<std::string>& seq) {
  std::string out;
  for (size_t i = 0; i < seq.size(); ++i) {
    if (i) out += ' ';
    out += seq[i];
  }
  return out;
}

}  // namespace

bool KeywordDictionary::contains(const std::vector<std::string>& seq) const {
  return std::find(keywords.begin(), keywords.end(), seq) != keywords.end();
}

void KeywordDictionary::add(const std::vector<std::string>& seq) {
  if (seq.empty()) throw ValidationError("empty keyword sequence");
  if (!contains(seq)) keywords.push_back(seq);
}

KeywordDictionary KeywordDictionary::from_phrases(const std::vector<std::string>& phrases) {
  KeywordDictionary dict;
  for (const std::string& p : phrases) {
    std::vector<std::string> seq = tokenize(p);
    if (!seq.empty()) dict.add(seq);
  }
  return dict;
}

KeywordDictionary load_keywords(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read keyword file: " + path);
  std::vector<std::string> phrases;
  std::string line;
  while (std::getline(in, line)) {
    size_t hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    phrases.push_back(line);
  }
  return KeywordDictionary::from_phrases(phrases);
}

SynonymMap load_synonyms(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read synonym file: " + path);
  nlohmann::json j;
  try {
    in >> j;
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid synonym JSON in " + path + ": " + e.what());
  }
  SynonymMap map;
  for (auto& [token, arr] : j.items()) {
    std::set<std::string>& alts = map[token];
    for (const auto& v : arr) alts.insert(v.get<std::string>());
  }
  return map;
}

std::vector<SegmentSpec> compute_segments(const std::vector<SubtitleEntry>& entries,
                                          double t_seconds, std::int64_t duration_ms,
                                          const std::string& bundle_id) {
  if (t_seconds < 0) throw ValidationError("reaction time t must be >= 0");
  const std::int64_t t_ms = std::llround(t_seconds * 1000.0);
  std::vector<SegmentSpec> out;
  out.reserve(entries.size());
  for (const SubtitleEntry& e : entries) {
    SegmentSpec seg;
    seg.bundle_id = bundle_id;
    seg.start_ms = std::max<std::int64_t>(e.start_ms - t_ms, 0);
    seg.end_ms = std::min<std::int64_t>(e.end_ms + t_ms, duration_ms);
    seg.transcript = e.text;
    if (seg.start_ms < seg.end_ms) out.push_back(std::move(seg));
  }
  return out;
}

std::vector<std::string> expand_keywords(const KeywordDictionary& base, const SynonymMap& synonyms) {
  std::vector<std::string> candidates;
  std::set<std::string> seen;
  for (const auto& keyword : base.keywords) {
    // Per-token alternative lists; each token is implicitly its own synonym.
    std::vector<std::vector<std::string>> alts(keyword.size());
    for (size_t i = 0; i < keyword.size(); ++i) {
      alts[i].push_back(keyword[i]);
      auto it = synonyms.find(keyword[i]);
      if (it != synonyms.end())
        for (const std::string& s : it->second)
          if (s != keyword[i]) alts[i].push_back(s);
    }
    std::vector<size_t> pick(keyword.size(), 0);
    while (true) {
      std::vector<std::string> combo_tokens;
      for (size_t i = 0; i < keyword.size(); ++i)
        for (const std::string& tok : tokenize(alts[i][pick[i]])) combo_tokens.push_back(tok);
      std::string combo = join_tokens(combo_tokens);
      if (!combo_tokens.empty() && !base.contains(combo_tokens) && seen.insert(combo).second)
        candidates.push_back(combo);
      // Advance the mixed-radix counter over synonym choices.
      size_t i = 0;
      while (i < pick.size() && ++pick[i] == alts[i].size()) pick[i++] = 0;
      if (i == pick.size()) break;
    }
  }
  return candidates;
}

std::vector<SegmentSpec> filter_segments(const std::vector<SegmentSpec>& segments,
                                         const KeywordDictionary& dict) {
  if (dict.keywords.empty()) throw ValidationError("keyword dictionary is empty");
  std::vector<SegmentSpec> kept;
  for (const SegmentSpec& seg : segments) {
    std::vector<std::string> tokens = tokenize(seg.transcript);
    std::vector<std::string> matches;
    for (const auto& kw : dict.keywords) {
      if (kw.size() > tokens.size()) continue;
      for (size_t i = 0; i + kw.size() <= tokens.size(); ++i) {
        if (std::equal(kw.begin(), kw.end(), tokens.begin() + i)) {
          matches.push_back(join_tokens(kw));
          break;
        }
      }
    }
    if (!matches.empty()) {
      SegmentSpec copy = seg;
      copy.matched_keywords = std::move(matches);
      kept.push_back(std::move(copy));
    }
  }
  return kept;
}

}  // namespace gelid
