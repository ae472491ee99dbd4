#include "gelid/bundle.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <json.hpp>

#include "gelid/image.hpp"
#include "gelid/subtitles.hpp"

namespace fs = std::filesystem;

namespace gelid {

namespace {

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw ValidationError("cannot read file: " + p.string());
  return std::string(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
}

}  // namespace

VideoBundle load_bundle(const std::string& dir_path) {
  fs::path dir(dir_path);
  if (!fs::is_directory(dir)) throw ValidationError("bundle directory not found: " + dir_path);

  fs::path meta_path = dir / "meta.json";
  if (!fs::exists(meta_path)) throw ValidationError("missing meta.json in bundle: " + dir_path);
  nlohmann::json meta;
  try {
    meta = nlohmann::json::parse(read_file(meta_path));
  } catch (const nlohmann::json::exception& e) {
    throw ParseError("invalid meta.json in " + dir_path + ": " + e.what());
  }

  VideoBundle bundle;
  try {
    bundle.id = meta.at("id").get<std::string>();
    bundle.fps = meta.at("fps").get<double>();
    bundle.duration_ms = meta.at("duration_ms").get<std::int64_t>();
    bundle.game = meta.value("game", std::string("default"));
  } catch (const nlohmann::json::exception& e) {
    throw ValidationError("meta.json missing required key in " + dir_path + ": " + e.what());
  }
  if (!(bundle.fps > 0)) throw ValidationError("bundle fps must be > 0: " + dir_path);
  if (bundle.duration_ms < 0) throw ValidationError("bundle duration_ms must be >= 0: " + dir_path);

  fs::path frames_dir = dir / "frames";
  if (!fs::is_directory(frames_dir)) throw ValidationError("missing frames directory: " + dir_path);
  for (const auto& entry : fs::directory_iterator(frames_dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png")
      bundle.frame_paths.push_back(entry.path().string());
  }
  std::sort(bundle.frame_paths.begin(), bundle.frame_paths.end());
  if (bundle.frame_paths.empty()) throw ValidationError("no frames in bundle: " + dir_path);

  for (const auto& path : bundle.frame_paths) {
    auto [w, h] = png_dimensions(path);
    if (bundle.frame_width == 0) {
      bundle.frame_width = w;
      bundle.frame_height = h;
    } else if (w != bundle.frame_width || h != bundle.frame_height) {
      throw ValidationError("mixed frame dimensions in bundle " + dir_path + ": " + path);
    }
  }

  fs::path srt = dir / "subs.srt";
  fs::path vtt = dir / "subs.vtt";
  if (fs::exists(srt)) {
    bundle.subtitles = parse_subtitles(read_file(srt), SubtitleFormat::srt);
  } else if (fs::exists(vtt)) {
    bundle.subtitles = parse_subtitles(read_file(vtt), SubtitleFormat::vtt);
  } else {
    throw ValidationError("missing subtitles file (subs.srt or subs.vtt): " + dir_path);
  }
  return bundle;
}

}  // namespace gelid
