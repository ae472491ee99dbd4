#include "gelid/dataset.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <json.hpp>
#include <sstream>

namespace gelid {

std::string to_string(IssueType t) {
  switch (t) {
    case IssueType::logic: return "logic";
    case IssueType::presentation: return "presentation";
    case IssueType::balance: return "balance";
    case IssueType::performance: return "performance";
    case IssueType::non_informative: return "non_informative";
  }
  throw Error("unreachable issue type");
}

IssueType issue_type_from_string(const std::string& s) {
  for (IssueType t : all_issue_types())
    if (to_string(t) == s) return t;
  throw ValidationError("unknown issue type: " + s);
}

namespace {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> fields;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      fields.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(cur);
  return fields;
}

}  // namespace

void persist_dataset(const std::vector<DatasetRow>& rows, const std::string& path) {
  if (rows.empty()) throw ValidationError("cannot persist empty dataset");
  const std::vector<std::string>& names = rows.front().first.names;
  for (size_t r = 0; r < rows.size(); ++r) {
    const FeatureVector& fv = rows[r].first;
    if (fv.names != names || fv.values.size() != static_cast<Eigen::Index>(names.size()))
      throw ValidationError("inconsistent feature names at row " + std::to_string(r));
    for (Eigen::Index i = 0; i < fv.values.size(); ++i)
      if (!std::isfinite(fv.values[i]))
        throw ValidationError("non-finite feature value at row " + std::to_string(r) +
                              ", feature " + names[i]);
  }

  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write dataset file: " + path);
  for (size_t i = 0; i < names.size(); ++i) out << names[i] << ',';
  out << "label\n";
  for (const auto& [fv, label] : rows) {
    for (Eigen::Index i = 0; i < fv.values.size(); ++i) out << format_double(fv.values[i]) << ',';
    out << to_string(label) << '\n';
  }
  out.close();

  nlohmann::json schema;
  schema["feature_names"] = names;
  nlohmann::json domain = nlohmann::json::array();
  for (IssueType t : all_issue_types()) domain.push_back(to_string(t));
  schema["label_domain"] = domain;
  std::ofstream sout(path + ".schema.json", std::ios::binary);
  if (!sout) throw ValidationError("cannot write schema file: " + path + ".schema.json");
  sout << schema.dump(2) << '\n';
}

std::vector<DatasetRow> load_dataset(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot read dataset file: " + path);
  std::string header;
  if (!std::getline(in, header)) throw ParseError("empty dataset file: " + path);
  std::vector<std::string> cols = split_csv_line(header);
  if (cols.empty() || cols.back() != "label")
    throw ParseError("dataset header must end with 'label': " + path);
  std::vector<std::string> names(cols.begin(), cols.end() - 1);

  std::vector<DatasetRow> rows;
  std::string line;
  int line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string> fields = split_csv_line(line);
    if (fields.size() != cols.size())
      throw ParseError("wrong field count at line " + std::to_string(line_no) + " in " + path);
    FeatureVector fv;
    fv.names = names;
    fv.values.resize(static_cast<Eigen::Index>(names.size()));
    for (size_t i = 0; i < names.size(); ++i) {
      try {
        size_t pos = 0;
        fv.values[static_cast<Eigen::Index>(i)] = std::stod(fields[i], &pos);
        if (pos != fields[i].size()) throw std::invalid_argument("trailing junk");
      } catch (const std::exception&) {
        throw ParseError("bad numeric value at line " + std::to_string(line_no) + " in " + path);
      }
    }
    rows.emplace_back(std::move(fv), issue_type_from_string(fields.back()));
  }
  return rows;
}

}  // namespace gelid
