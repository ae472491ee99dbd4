#ifndef GELID_TYPES_HPP
#define GELID_TYPES_HPP

#include <cstdint>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace gelid {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class ValidationError : public Error {
public:
  using Error::Error;
};

enum class IssueType { logic, presentation, balance, performance, non_informative };

inline const std::vector<IssueType>& all_issue_types() {
  static const std::vector<IssueType> kAll = {
      IssueType::logic, IssueType::presentation, IssueType::balance,
      IssueType::performance, IssueType::non_informative};
  return kAll;
}

std::string to_string(IssueType t);
IssueType issue_type_from_string(const std::string& s);

struct SubtitleEntry {
  int index = 0;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string text;
};

struct SegmentSpec {
  std::string bundle_id;
  std::int64_t start_ms = 0;
  std::int64_t end_ms = 0;
  std::string transcript;
  std::vector<std::string> matched_keywords;
};

struct LabeledSegment {
  SegmentSpec segment;
  IssueType label = IssueType::non_informative;
  std::optional<std::string> context_id;
  std::optional<std::string> issue_id;
};

// Mapping element id -> cluster id. Cluster ids are dense from 0.
struct Partition {
  std::map<std::string, int> assign;

  int cluster_count() const {
    int mx = -1;
    for (const auto& [id, c] : assign) mx = std::max(mx, c);
    return mx + 1;
  }
};

}  // namespace gelid

#endif
