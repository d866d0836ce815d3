#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bathy {

inline constexpr double kDefaultIouThreshold = 0.5;

struct BoundingBox {
  double x_min = 0.0;
  double y_min = 0.0;
  double x_max = 0.0;
  double y_max = 0.0;

  double area() const { return (x_max - x_min) * (y_max - y_min); }
  bool valid() const { return x_min < x_max && y_min < y_max; }
};

struct Detection {
  std::string image_id;
  int class_id = 0;
  BoundingBox box;
  double confidence = 1.0;  // predictions only; ground truth leaves it at 1
};

/// Area of overlap over area of union; 0 for disjoint boxes.
double iou(const BoundingBox& a, const BoundingBox& b);

struct Match {
  std::size_t prediction = 0;
  std::optional<std::size_t> truth;  // index into the truth list when TP
  double iou = 0.0;
};

struct MatchResult {
  std::vector<Match> matches;  // one per prediction, in input order
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
};

/// Per image and class, predictions in descending confidence (input order on
/// ties) claim the unmatched truth of highest IoU when that IoU reaches the
/// threshold.
MatchResult match_detections(std::span<const Detection> preds, std::span<const Detection> truths,
                             double iou_threshold = kDefaultIouThreshold);

struct ScoredPrediction {
  double confidence = 0.0;
  bool true_positive = false;
};

/// All-point interpolated AP: area under the precision envelope, with
/// precision/recall sampled at each distinct confidence cutoff. 0 when there
/// is no ground truth.
double average_precision(std::span<const ScoredPrediction> preds, std::size_t num_truths);

struct EvalReport {
  std::map<int, double> per_class_ap;  // classes present in the ground truth
  double map = 0.0;
  std::size_t tp = 0;
  std::size_t fp = 0;
  std::size_t fn = 0;
  double mean_iou_tp = 0.0;
  double iou_threshold = kDefaultIouThreshold;
  std::vector<std::string> warnings;
};

EvalReport evaluate(std::span<const Detection> preds, std::span<const Detection> truths,
                    double iou_threshold = kDefaultIouThreshold);

/// One detection per line: `image_id class_id confidence x_min y_min x_max y_max`
/// for predictions and the same without confidence for ground truth. Blank
/// lines and `#` comments are skipped. Throws MalformedDetection naming the line.
std::vector<Detection> parse_detections(std::string_view text, bool with_confidence);

/// Confusion matrix and metric tables laid out as rows predicted / columns actual.
std::string format_report_table(const EvalReport& report);
/// `key=value` lines for scripts.
std::string format_report_kv(const EvalReport& report);

}  // namespace bathy
