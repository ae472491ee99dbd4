#include "gelid/visionfeat.hpp"

#include <algorithm>
#include <cmath>

namespace gelid {

namespace {

// Inclusive prefix-sum table with a zero border row/column.
Eigen::MatrixXd integral(const Eigen::MatrixXd& m) {
  Eigen::MatrixXd s = Eigen::MatrixXd::Zero(m.rows() + 1, m.cols() + 1);
  for (Eigen::Index r = 0; r < m.rows(); ++r)
    for (Eigen::Index c = 0; c < m.cols(); ++c)
      s(r + 1, c + 1) = m(r, c) + s(r, c + 1) + s(r + 1, c) - s(r, c);
  return s;
}

double window_sum(const Eigen::MatrixXd& s, int r, int c, int w) {
  return s(r + w, c + w) - s(r, c + w) - s(r + w, c) + s(r, c);
}

}  // namespace

double ssim(const Frame& a, const Frame& b) {
  if (a.width != b.width || a.height != b.height)
    throw ValidationError("ssim: frame dimension mismatch");
  if (a.width < kSsimWindow || a.height < kSsimWindow)
    throw ValidationError("ssim: frames smaller than the SSIM window");

  const Eigen::MatrixXd x = luma(a);
  const Eigen::MatrixXd y = luma(b);
  const Eigen::MatrixXd sx = integral(x);
  const Eigen::MatrixXd sy = integral(y);
  const Eigen::MatrixXd sxx = integral(x.cwiseProduct(x));
  const Eigen::MatrixXd syy = integral(y.cwiseProduct(y));
  const Eigen::MatrixXd sxy = integral(x.cwiseProduct(y));

  const int w = kSsimWindow;
  const double n = static_cast<double>(w) * w;
  double total = 0.0;
  long windows = 0;
  for (int r = 0; r + w <= a.height; ++r) {
    for (int c = 0; c + w <= a.width; ++c) {
      double mx = window_sum(sx, r, c, w) / n;
      double my = window_sum(sy, r, c, w) / n;
      double vx = window_sum(sxx, r, c, w) / n - mx * mx;
      double vy = window_sum(syy, r, c, w) / n - my * my;
      double cov = window_sum(sxy, r, c, w) / n - mx * my;
      total += ((2 * mx * my + kSsimC1) * (2 * cov + kSsimC2)) /
               ((mx * mx + my * my + kSsimC1) * (vx + vy + kSsimC2));
      ++windows;
    }
  }
  return total / static_cast<double>(windows);
}

Eigen::VectorXd hsv_hist(const Frame& f) {
  if (f.width <= 0 || f.height <= 0) throw ValidationError("hsv_hist: empty frame");
  Eigen::VectorXd hist = Eigen::VectorXd::Zero(kHueBins * kSatBins);
  const size_t pixels = static_cast<size_t>(f.width) * f.height;
  for (size_t p = 0; p < pixels; ++p) {
    double r = f.rgb[3 * p] / 255.0;
    double g = f.rgb[3 * p + 1] / 255.0;
    double b = f.rgb[3 * p + 2] / 255.0;
    double mx = std::max({r, g, b});
    double mn = std::min({r, g, b});
    double delta = mx - mn;
    double h = 0.0;
    if (delta > 0) {
      if (mx == r)
        h = 60.0 * std::fmod((g - b) / delta, 6.0);
      else if (mx == g)
        h = 60.0 * ((b - r) / delta + 2.0);
      else
        h = 60.0 * ((r - g) / delta + 4.0);
      if (h < 0) h += 360.0;
    }
    double s = mx > 0 ? delta / mx : 0.0;
    int hb = std::min(static_cast<int>(h / 360.0 * kHueBins), kHueBins - 1);
    int sb = std::min(static_cast<int>(s * kSatBins), kSatBins - 1);
    hist[hb * kSatBins + sb] += 1.0;
  }
  hist /= static_cast<double>(pixels);
  return hist;
}

double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y) {
  if (x.size() != y.size()) throw ValidationError("pearson: length mismatch");
  if (x.size() < 2) throw ValidationError("pearson: need at least 2 elements");
  const double n = static_cast<double>(x.size());
  const double mx = x.mean();
  const double my = y.mean();
  const Eigen::VectorXd dx = x.array() - mx;
  const Eigen::VectorXd dy = y.array() - my;
  const double vx = dx.squaredNorm() / n;
  const double vy = dy.squaredNorm() / n;
  if (vx == 0.0 || vy == 0.0) return (x.array() == y.array()).all() ? 1.0 : 0.0;
  return dx.dot(dy) / n / std::sqrt(vx * vy);
}

PairSeries frame_pair_series(const std::vector<Frame>& frames) {
  if (frames.size() < 2) throw ValidationError("frame_pair_series: need at least 2 frames");
  PairSeries series;
  series.s.reserve(frames.size() - 1);
  series.hsv.reserve(frames.size() - 1);
  std::vector<Eigen::VectorXd> hists;
  hists.reserve(frames.size());
  for (const Frame& f : frames) hists.push_back(hsv_hist(f));
  for (size_t i = 0; i + 1 < frames.size(); ++i) {
    series.s.push_back(ssim(frames[i], frames[i + 1]));
    series.hsv.push_back(pearson(hists[i], hists[i + 1]));
  }
  return series;
}

double quantile(std::vector<double> values, double p) {
  if (values.empty()) throw ValidationError("quantile: empty input");
  std::sort(values.begin(), values.end());
  const double pos = p * static_cast<double>(values.size() - 1);
  const size_t lo = static_cast<size_t>(pos);
  const size_t hi = std::min(lo + 1, values.size() - 1);
  const double frac = pos - static_cast<double>(lo);
  return values[lo] * (1.0 - frac) + values[hi] * frac;
}

const std::vector<std::string>& VideoFeatures::names() {
  static const std::vector<std::string> kNames = {
      "s_mean", "s_median", "s_min", "s_max", "s_q1", "s_q3",
      "hsv_mean", "hsv_median", "hsv_min", "hsv_max", "hsv_q1", "hsv_q3"};
  return kNames;
}

Eigen::VectorXd VideoFeatures::to_vector() const {
  Eigen::VectorXd v(12);
  v << s_mean, s_median, s_min, s_max, s_q1, s_q3, hsv_mean, hsv_median, hsv_min, hsv_max, hsv_q1,
      hsv_q3;
  return v;
}

VideoFeatures aggregate_features(const PairSeries& series) {
  if (series.s.empty() || series.hsv.empty())
    throw ValidationError("aggregate_features: empty series");
  auto stats = [](const std::vector<double>& v) {
    double mean = 0.0;
    for (double x : v) mean += x;
    mean /= static_cast<double>(v.size());
    return std::array<double, 6>{mean,
                                 quantile(v, 0.5),
                                 *std::min_element(v.begin(), v.end()),
                                 *std::max_element(v.begin(), v.end()),
                                 quantile(v, 0.25),
                                 quantile(v, 0.75)};
  };
  auto s = stats(series.s);
  auto h = stats(series.hsv);
  return VideoFeatures{s[0], s[1], s[2], s[3], s[4], s[5], h[0], h[1], h[2], h[3], h[4], h[5]};
}

std::vector<Frame> extract_keyframes(const std::vector<Frame>& frames, double threshold) {
  if (frames.empty()) throw ValidationError("extract_keyframes: no frames");
  std::vector<Frame> keys;
  keys.push_back(frames.front());
  for (size_t i = 1; i < frames.size(); ++i)
    if (ssim(frames[i], keys.back()) < threshold) keys.push_back(frames[i]);
  return keys;
}

Frame summary_frame(const std::vector<Frame>& keyframes) {
  if (keyframes.empty()) throw ValidationError("summary_frame: no keyframes");
  const Frame& first = keyframes.front();
  for (const Frame& f : keyframes)
    if (f.width != first.width || f.height != first.height)
      throw ValidationError("summary_frame: frame dimension mismatch");
  Frame out;
  out.width = first.width;
  out.height = first.height;
  out.rgb.resize(first.rgb.size());
  const double n = static_cast<double>(keyframes.size());
  for (size_t i = 0; i < out.rgb.size(); ++i) {
    double sum = 0.0;
    for (const Frame& f : keyframes) sum += f.rgb[i];
    out.rgb[i] = static_cast<std::uint8_t>(std::floor(sum / n + 0.5));
  }
  return out;
}

}  // namespace gelid
