#include "bathy/detect_eval.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <numeric>
#include <set>
#include <tuple>

#include "bathy/error.hpp"

namespace bathy {

double iou(const BoundingBox& a, const BoundingBox& b) {
  const double w = std::min(a.x_max, b.x_max) - std::max(a.x_min, b.x_min);
  const double h = std::min(a.y_max, b.y_max) - std::max(a.y_min, b.y_min);
  if (w <= 0.0 || h <= 0.0) return 0.0;
  const double overlap = w * h;
  return overlap / (a.area() + b.area() - overlap);
}

MatchResult match_detections(std::span<const Detection> preds, std::span<const Detection> truths,
                             double iou_threshold) {
  MatchResult result;
  result.matches.resize(preds.size());
  for (std::size_t i = 0; i < preds.size(); ++i) result.matches[i].prediction = i;

  using Group = std::tuple<std::string_view, int>;
  std::map<Group, std::vector<std::size_t>> truth_groups;
  for (std::size_t j = 0; j < truths.size(); ++j) {
    truth_groups[{truths[j].image_id, truths[j].class_id}].push_back(j);
  }

  std::vector<std::size_t> order(preds.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return preds[a].confidence > preds[b].confidence;
  });

  std::vector<bool> taken(truths.size(), false);
  for (std::size_t i : order) {
    const auto group = truth_groups.find({preds[i].image_id, preds[i].class_id});
    if (group == truth_groups.end()) continue;
    std::optional<std::size_t> best;
    double best_iou = -1.0;
    for (std::size_t j : group->second) {
      if (taken[j]) continue;
      const double overlap = iou(preds[i].box, truths[j].box);
      if (overlap > best_iou) {
        best_iou = overlap;
        best = j;
      }
    }
    if (best && best_iou >= iou_threshold) {
      taken[*best] = true;
      result.matches[i].truth = best;
      result.matches[i].iou = best_iou;
    }
  }

  for (const Match& m : result.matches) (m.truth ? result.tp : result.fp)++;
  result.fn = truths.size() - result.tp;
  return result;
}

double average_precision(std::span<const ScoredPrediction> preds, std::size_t num_truths) {
  if (num_truths == 0 || preds.empty()) return 0.0;
  std::vector<ScoredPrediction> sorted(preds.begin(), preds.end());
  std::stable_sort(sorted.begin(), sorted.end(), [](const auto& a, const auto& b) {
    return a.confidence > b.confidence;
  });

  // One precision/recall sample per distinct confidence cutoff.
  std::vector<double> recall;
  std::vector<double> precision;
  std::size_t tp = 0;
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    tp += sorted[k].true_positive ? 1 : 0;
    if (k + 1 < sorted.size() && sorted[k + 1].confidence == sorted[k].confidence) continue;
    recall.push_back(static_cast<double>(tp) / static_cast<double>(num_truths));
    precision.push_back(static_cast<double>(tp) / static_cast<double>(k + 1));
  }
  for (std::size_t k = precision.size() - 1; k-- > 0;) {
    precision[k] = std::max(precision[k], precision[k + 1]);
  }
  double ap = 0.0;
  double prev_recall = 0.0;
  for (std::size_t k = 0; k < recall.size(); ++k) {
    ap += (recall[k] - prev_recall) * precision[k];
    prev_recall = recall[k];
  }
  return ap;
}

EvalReport evaluate(std::span<const Detection> preds, std::span<const Detection> truths,
                    double iou_threshold) {
  EvalReport report;
  report.iou_threshold = iou_threshold;
  const MatchResult matched = match_detections(preds, truths, iou_threshold);
  report.tp = matched.tp;
  report.fp = matched.fp;
  report.fn = matched.fn;

  std::map<int, std::size_t> truth_count;
  for (const Detection& t : truths) truth_count[t.class_id]++;
  std::map<int, std::vector<ScoredPrediction>> scored;
  double iou_sum = 0.0;
  for (std::size_t i = 0; i < preds.size(); ++i) {
    const bool hit = matched.matches[i].truth.has_value();
    scored[preds[i].class_id].push_back({preds[i].confidence, hit});
    if (hit) iou_sum += matched.matches[i].iou;
  }
  report.mean_iou_tp = matched.tp == 0 ? 0.0 : iou_sum / static_cast<double>(matched.tp);

  for (const auto& [cls, count] : truth_count) {
    const auto it = scored.find(cls);
    const double ap = it == scored.end() ? 0.0 : average_precision(it->second, count);
    const bool any_hit = it != scored.end() &&
                         std::any_of(it->second.begin(), it->second.end(),
                                     [](const ScoredPrediction& s) { return s.true_positive; });
    if (!any_hit) {
      report.warnings.push_back("class " + std::to_string(cls) +
                                ": no prediction matched the ground truth, AP set to 0");
    }
    report.per_class_ap[cls] = ap;
  }
  for (const auto& [cls, list] : scored) {
    if (!truth_count.contains(cls)) {
      report.warnings.push_back("class " + std::to_string(cls) +
                                ": predictions without ground truth, excluded from mAP");
    }
  }
  if (report.per_class_ap.empty()) {
    report.warnings.push_back("no ground truth boxes, mAP set to 0");
  } else {
    double sum = 0.0;
    for (const auto& [cls, ap] : report.per_class_ap) sum += ap;
    report.map = sum / static_cast<double>(report.per_class_ap.size());
  }
  return report;
}

namespace {

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t')) ++i;
    const std::size_t start = i;
    while (i < line.size() && line[i] != ' ' && line[i] != '\t') ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename T>
bool to_number(std::string_view s, T& out) {
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), out);
  return ec == std::errc() && ptr == s.data() + s.size();
}

std::string fixed(double v, int digits) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", digits, v);
  return buf;
}

}  // namespace

std::vector<Detection> parse_detections(std::string_view text, bool with_confidence) {
  std::vector<Detection> out;
  const std::size_t expected = with_confidence ? 7 : 6;
  std::size_t line_no = 0;
  while (!text.empty()) {
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    const auto tokens = split_ws(line);
    if (tokens.empty() || tokens.front().starts_with('#')) continue;

    auto fail = [line_no](const std::string& why) {
      return Error(Errc::MalformedDetection, "line " + std::to_string(line_no) + ": " + why);
    };
    if (tokens.size() != expected) {
      throw fail("expected " + std::to_string(expected) + " fields, got " + std::to_string(tokens.size()));
    }
    Detection d;
    d.image_id = std::string(tokens[0]);
    if (!to_number(tokens[1], d.class_id)) throw fail("class_id is not an integer");
    std::size_t k = 2;
    if (with_confidence) {
      if (!to_number(tokens[k++], d.confidence)) throw fail("confidence is not a number");
      if (!(d.confidence >= 0.0 && d.confidence <= 1.0)) throw fail("confidence outside [0, 1]");
    }
    double* coords[] = {&d.box.x_min, &d.box.y_min, &d.box.x_max, &d.box.y_max};
    for (double* c : coords) {
      if (!to_number(tokens[k++], *c)) throw fail("box coordinate is not a number");
    }
    if (!d.box.valid()) throw fail("box needs x_min < x_max and y_min < y_max");
    out.push_back(std::move(d));
  }
  return out;
}

std::string format_report_table(const EvalReport& report) {
  auto cell = [](const std::string& s, std::size_t w) {
    return std::string(w > s.size() ? w - s.size() : 0, ' ') + s;
  };
  std::string out;
  out += "# all-point interpolated AP, IoU threshold " + fixed(report.iou_threshold, 2) + "\n";
  out += "Confusion matrix (rows: predicted, columns: actual)\n";
  out += "          " + cell("Positive", 10) + cell("Negative", 10) + "\n";
  out += "Positive  " + cell(std::to_string(report.tp), 10) + cell(std::to_string(report.fp), 10) + "\n";
  out += "Negative  " + cell(std::to_string(report.fn), 10) + cell("0", 10) + "\n";
  out += "\n";
  out += "Metrics   " + cell("Value", 10) + "\n";
  out += "IoU       " + cell(fixed(100.0 * report.mean_iou_tp, 2) + "%", 10) + "\n";
  out += "mAP       " + cell(fixed(100.0 * report.map, 2) + "%", 10) + "\n";
  for (const auto& [cls, ap] : report.per_class_ap) {
    std::string label = "AP[" + std::to_string(cls) + "]";
    label.resize(std::max<std::size_t>(label.size(), 10), ' ');
    out += label + cell(fixed(100.0 * ap, 2) + "%", 10) + "\n";
  }
  for (const auto& w : report.warnings) out += "warning: " + w + "\n";
  return out;
}

std::string format_report_kv(const EvalReport& report) {
  auto num = [](double v) {
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
  };
  std::string out;
  out += "ap_interpolation=all-point\n";
  out += "iou_threshold=" + num(report.iou_threshold) + "\n";
  out += "tp=" + std::to_string(report.tp) + "\n";
  out += "fp=" + std::to_string(report.fp) + "\n";
  out += "fn=" + std::to_string(report.fn) + "\n";
  out += "mean_iou_tp=" + num(report.mean_iou_tp) + "\n";
  out += "map=" + num(report.map) + "\n";
  for (const auto& [cls, ap] : report.per_class_ap) {
    out += "ap." + std::to_string(cls) + "=" + num(ap) + "\n";
  }
  out += "warnings=" + std::to_string(report.warnings.size()) + "\n";
  return out;
}

}  // namespace bathy
