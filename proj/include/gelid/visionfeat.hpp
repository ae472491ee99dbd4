#ifndef GELID_VISIONFEAT_HPP
#define GELID_VISIONFEAT_HPP

#include <Eigen/Core>
#include <vector>

#include "gelid/image.hpp"

namespace gelid {

// SSIM parameters: K1 = 0.01, K2 = 0.03, L = 255, 8x8 uniform window,
// stride 1, computed on Rec.601 luma.
inline constexpr int kSsimWindow = 8;
inline constexpr double kSsimC1 = (0.01 * 255) * (0.01 * 255);
inline constexpr double kSsimC2 = (0.03 * 255) * (0.03 * 255);

double ssim(const Frame& a, const Frame& b);

// 50 hue x 60 saturation bins, value channel ignored, normalized to sum 1,
// flattened row-major (hue major) to a 3000-vector.
inline constexpr int kHueBins = 50;
inline constexpr int kSatBins = 60;
Eigen::VectorXd hsv_hist(const Frame& f);

// Product-moment correlation. If either input has zero variance: 1 when the
// vectors are element-wise equal, else 0.
double pearson(const Eigen::VectorXd& x, const Eigen::VectorXd& y);

struct PairSeries {
  std::vector<double> s;    // ssim(f_i, f_{i+1})
  std::vector<double> hsv;  // pearson(hist(f_i), hist(f_{i+1}))
};

PairSeries frame_pair_series(const std::vector<Frame>& frames);

struct VideoFeatures {
  double s_mean, s_median, s_min, s_max, s_q1, s_q3;
  double hsv_mean, hsv_median, hsv_min, hsv_max, hsv_q1, hsv_q3;

  static const std::vector<std::string>& names();
  Eigen::VectorXd to_vector() const;
};

// Quartiles by linear interpolation at position p * (n - 1).
double quantile(std::vector<double> values, double p);

VideoFeatures aggregate_features(const PairSeries& series);

// First frame always kept; a frame is added when its SSIM against the last
// keyframe drops below the threshold.
std::vector<Frame> extract_keyframes(const std::vector<Frame>& frames, double threshold = 0.7);

// Per-pixel per-channel mean, rounded half-up to 8 bits.
Frame summary_frame(const std::vector<Frame>& keyframes);

}  // namespace gelid

#endif
