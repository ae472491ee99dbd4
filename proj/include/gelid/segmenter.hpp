#ifndef GELID_SEGMENTER_HPP
#define GELID_SEGMENTER_HPP

#include <map>
#include <set>
#include <string>
#include <vector>

#include "gelid/types.hpp"

namespace gelid {

// Lowercase token sequences, deduplicated, none empty.
struct KeywordDictionary {
  std::vector<std::vector<std::string>> keywords;

  bool contains(const std::vector<std::string>& seq) const;
  void add(const std::vector<std::string>& seq);
  static KeywordDictionary from_phrases(const std::vector<std::string>& phrases);
};

// One keyword per line, '#' starts a comment line.
KeywordDictionary load_keywords(const std::string& path);

// Synonym lexicon: token -> alternative token sequences. JSON map
// token -> array of strings on disk.
using SynonymMap = std::map<std::string, std::set<std::string>>;
SynonymMap load_synonyms(const std::string& path);

// One segment per subtitle entry, shifted by the reaction time t and clamped
// to [0, duration]. Entries that collapse to an empty interval are dropped.
std::vector<SegmentSpec> compute_segments(const std::vector<SubtitleEntry>& entries,
                                          double t_seconds, std::int64_t duration_ms,
                                          const std::string& bundle_id = "");

// Cartesian-product expansion of each base keyword over its per-token synonym
// sets. Base keywords themselves are excluded from the candidate output.
std::vector<std::string> expand_keywords(const KeywordDictionary& base, const SynonymMap& synonyms);

// Keeps segments whose token stream contains at least one dictionary sequence
// as a contiguous subsequence; fills matched_keywords with all matches.
std::vector<SegmentSpec> filter_segments(const std::vector<SegmentSpec>& segments,
                                         const KeywordDictionary& dict);

}  // namespace gelid

#endif
