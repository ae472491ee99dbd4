#ifndef GELID_SUBTITLES_HPP
#define GELID_SUBTITLES_HPP

#include <string>
#include <vector>

#include "gelid/types.hpp"

namespace gelid {

enum class SubtitleFormat { srt, vtt };

// Parses a full SRT or WebVTT document. Entries are returned sorted by
// start time (ties broken by index), cue lines joined with single spaces
// and formatting tags stripped. Cues that are empty after trimming are
// dropped. Throws ParseError with a line number on malformed input.
std::vector<SubtitleEntry> parse_subtitles(const std::string& raw, SubtitleFormat format);

SubtitleFormat subtitle_format_from_path(const std::string& path);

}  // namespace gelid

#endif
