#ifndef GELID_BUNDLE_HPP
#define GELID_BUNDLE_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "gelid/types.hpp"

namespace gelid {

// A decoded video: pre-extracted PNG frames at a fixed sampling rate plus
// subtitle entries. Layout on disk:
//   <dir>/meta.json      {"id", "fps", "duration_ms", optional "game"}
//   <dir>/frames/%06d.png
//   <dir>/subs.srt or <dir>/subs.vtt
struct VideoBundle {
  std::string id;
  std::string game;  // clustering context scope; defaults to "default"
  std::vector<std::string> frame_paths;
  double fps = 0.0;
  std::int64_t duration_ms = 0;
  std::vector<SubtitleEntry> subtitles;
  int frame_width = 0;
  int frame_height = 0;
};

VideoBundle load_bundle(const std::string& dir_path);

}  // namespace gelid

#endif
