#include "gelid/subtitles.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <sstream>

namespace gelid {
namespace {

std::string trim(const std::string& s) {
  size_t a = s.find_first_not_of(" \t\r\n");
  if (a == std::string::npos) return "";
  size_t b = s.find_last_not_of(" \t\r\n");
  return s.substr(a, b - a + 1);
}

std::vector<std::string> split_lines(const std::string& raw) {
  std::vector<std::string> lines;
  std::string cur;
  for (char c : raw) {
    if (c == '\n') {
      if (!cur.empty() && cur.back() == '\r') cur.pop_back();
      lines.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  if (!cur.empty()) {
    if (cur.back() == '\r') cur.pop_back();
    lines.push_back(cur);
  }
  return lines;
}

[[noreturn]] void fail(int line_no, const std::string& what) {
  throw ParseError("subtitle parse error at line " + std::to_string(line_no) + ": " + what);
}

// Timestamp forms: HH:MM:SS,mmm (SRT), HH:MM:SS.mmm or MM:SS.mmm (VTT).
std::int64_t parse_timestamp(const std::string& s, SubtitleFormat fmt, int line_no) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : s) {
    if (c == ':') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur.push_back(c);
    }
  }
  parts.push_back(cur);
  if (parts.size() != 2 && parts.size() != 3) fail(line_no, "bad timestamp '" + s + "'");
  if (fmt == SubtitleFormat::srt && parts.size() != 3) fail(line_no, "bad timestamp '" + s + "'");

  const char sep = fmt == SubtitleFormat::srt ? ',' : '.';
  std::string& last = parts.back();
  size_t dot = last.find(sep);
  if (dot == std::string::npos) fail(line_no, "missing millisecond separator in '" + s + "'");
  std::string sec_str = last.substr(0, dot);
  std::string ms_str = last.substr(dot + 1);
  if (ms_str.size() != 3) fail(line_no, "milliseconds must have 3 digits in '" + s + "'");

  auto to_int = [&](const std::string& d) -> std::int64_t {
    if (d.empty()) fail(line_no, "empty timestamp field in '" + s + "'");
    std::int64_t v = 0;
    auto [p, ec] = std::from_chars(d.data(), d.data() + d.size(), v);
    if (ec != std::errc() || p != d.data() + d.size()) fail(line_no, "non-numeric timestamp field in '" + s + "'");
    return v;
  };

  std::int64_t hours = 0, minutes, seconds, millis;
  if (parts.size() == 3) {
    hours = to_int(parts[0]);
    minutes = to_int(parts[1]);
  } else {
    minutes = to_int(parts[0]);
  }
  seconds = to_int(sec_str);
  millis = to_int(ms_str);
  if (minutes > 59 && parts.size() == 3) fail(line_no, "minutes out of range in '" + s + "'");
  if (seconds > 59) fail(line_no, "seconds out of range in '" + s + "'");
  return ((hours * 60 + minutes) * 60 + seconds) * 1000 + millis;
}

bool is_timing_line(const std::string& line) { return line.find("-->") != std::string::npos; }

std::string strip_tags(const std::string& s) {
  std::string out;
  bool in_tag = false;
  for (char c : s) {
    if (c == '<') {
      in_tag = true;
    } else if (c == '>') {
      in_tag = false;
    } else if (!in_tag) {
      out.push_back(c);
    }
  }
  return out;
}

// Parses "<start> --> <end> [settings]" and appends a cue built from the
// following payload lines. `i` points at the timing line.
void parse_cue(const std::vector<std::string>& lines, size_t& i, SubtitleFormat fmt, int index,
               std::vector<SubtitleEntry>& out) {
  const std::string& timing = lines[i];
  int line_no = static_cast<int>(i) + 1;
  size_t arrow = timing.find("-->");
  if (arrow == std::string::npos) fail(line_no, "missing '-->' arrow");
  // Reject sloppy arrows like "->" on either side.
  std::string left = trim(timing.substr(0, arrow));
  if (!left.empty() && (left.back() == '-' || left.back() == '>')) fail(line_no, "bad arrow");
  std::string right = trim(timing.substr(arrow + 3));
  // VTT cue settings follow the end timestamp after whitespace.
  size_t sp = right.find_first_of(" \t");
  if (sp != std::string::npos) right = right.substr(0, sp);
  std::int64_t start = parse_timestamp(left, fmt, line_no);
  std::int64_t end = parse_timestamp(right, fmt, line_no);
  if (end < start) fail(line_no, "cue end precedes start");

  ++i;
  std::string text;
  while (i < lines.size() && !trim(lines[i]).empty()) {
    std::string payload = trim(strip_tags(lines[i]));
    if (!payload.empty()) {
      if (!text.empty()) text += ' ';
      text += payload;
    }
    ++i;
  }
  if (!text.empty()) {
    out.push_back(SubtitleEntry{index, start, end, text});
  }
}

std::vector<SubtitleEntry> parse_srt(const std::vector<std::string>& lines) {
  std::vector<SubtitleEntry> out;
  size_t i = 0;
  int fallback_index = 0;
  while (i < lines.size()) {
    if (trim(lines[i]).empty()) {
      ++i;
      continue;
    }
    int index = ++fallback_index;
    if (!is_timing_line(lines[i])) {
      // Numeric cue counter line.
      std::string id = trim(lines[i]);
      std::int64_t v = 0;
      auto [p, ec] = std::from_chars(id.data(), id.data() + id.size(), v);
      if (ec == std::errc() && p == id.data() + id.size()) index = static_cast<int>(v);
      ++i;
      if (i >= lines.size() || !is_timing_line(lines[i]))
        fail(static_cast<int>(i) + 1, "expected timing line");
    }
    parse_cue(lines, i, SubtitleFormat::srt, index, out);
  }
  return out;
}

std::vector<SubtitleEntry> parse_vtt(const std::vector<std::string>& lines) {
  std::vector<SubtitleEntry> out;
  size_t i = 0;
  // Optional BOM + WEBVTT magic.
  if (i < lines.size()) {
    std::string first = lines[i];
    if (first.size() >= 3 && static_cast<unsigned char>(first[0]) == 0xEF) first = first.substr(3);
    if (first.rfind("WEBVTT", 0) == 0) ++i;
  }
  int index = 0;
  while (i < lines.size()) {
    std::string t = trim(lines[i]);
    if (t.empty()) {
      ++i;
      continue;
    }
    // Skip NOTE/STYLE/REGION blocks.
    if (t.rfind("NOTE", 0) == 0 || t == "STYLE" || t == "REGION") {
      while (i < lines.size() && !trim(lines[i]).empty()) ++i;
      continue;
    }
    if (!is_timing_line(lines[i])) {
      // Cue identifier line.
      ++i;
      if (i >= lines.size() || !is_timing_line(lines[i]))
        fail(static_cast<int>(i) + 1, "expected timing line");
    }
    parse_cue(lines, i, SubtitleFormat::vtt, ++index, out);
  }
  return out;
}

}  // namespace

std::vector<SubtitleEntry> parse_subtitles(const std::string& raw, SubtitleFormat format) {
  std::vector<std::string> lines = split_lines(raw);
  std::vector<SubtitleEntry> out =
      format == SubtitleFormat::srt ? parse_srt(lines) : parse_vtt(lines);
  std::stable_sort(out.begin(), out.end(), [](const SubtitleEntry& a, const SubtitleEntry& b) {
    if (a.start_ms != b.start_ms) return a.start_ms < b.start_ms;
    return a.index < b.index;
  });
  return out;
}

SubtitleFormat subtitle_format_from_path(const std::string& path) {
  if (path.size() >= 4 && path.compare(path.size() - 4, 4, ".vtt") == 0) return SubtitleFormat::vtt;
  return SubtitleFormat::srt;
}

}  // namespace gelid
