// Command-line front end: parse, synth, calibrate, pointcloud, eval-detections.
//
// Exit codes: 0 success, 1 malformed input or invalid flags, 2 calibration
// failure, 3 I/O failure.

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <limits>
#include <numbers>
#include <optional>
#include <string>

#include "bathy/detect_eval.hpp"
#include "bathy/error.hpp"
#include "bathy/pipeline.hpp"
#include "bathy/sonar_log.hpp"
#include "bathy/synth.hpp"

namespace {

namespace fs = std::filesystem;
using namespace bathy;

constexpr int kExitInput = 1;
constexpr int kExitCalibration = 2;
constexpr int kExitIo = 3;

struct SensorFlags {
  double alpha2_deg = kDefaultAlpha2Deg;
  std::uint32_t width = kDefaultScanlineWidth;
  std::uint32_t deadzone = kDefaultDeadzoneHalfwidth;
  double intensity_max = kDefaultIntensityMax;
  CLI::Option* width_opt = nullptr;
  CLI::Option* deadzone_opt = nullptr;

  void add_to(CLI::App& app) {
    app.add_option("--alpha2", alpha2_deg, "Beam angle from vertical, degrees")
        ->capture_default_str()
        ->check(CLI::Range(0.0, 90.0));
    width_opt = app.add_option("--width", width, "Scanline width W (CSV input and synth)")
                    ->capture_default_str();
    deadzone_opt = app.add_option("--deadzone", deadzone, "Deadzone half-width, pixels")->capture_default_str();
    app.add_option("--intensity-max", intensity_max, "Raw intensity mapped to 1.0")
        ->capture_default_str();
  }

  SensorConfig config(std::uint32_t w) const {
    SensorConfig c;
    c.alpha2 = alpha2_deg * std::numbers::pi / 180.0;
    c.scanline_width = w;
    // Unset deadzone shrinks to fit narrow scanlines.
    const bool explicit_deadzone = deadzone_opt != nullptr && deadzone_opt->count() > 0;
    c.deadzone_halfwidth = explicit_deadzone ? deadzone : SensorConfig::for_width(w).deadzone_halfwidth;
    c.intensity_max = intensity_max;
    return c;
  }
};

SurveyLog load_input(const fs::path& path, const SensorFlags& sensor) {
  const auto bytes = read_file(path);
  if (path.extension() == ".csv") {
    const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    return parse_csv(text, sensor.config(sensor.width));
  }
  const std::uint32_t header_width = peek_bsl_width(bytes);
  const bool explicit_width = sensor.width_opt != nullptr && sensor.width_opt->count() > 0;
  return parse_log(bytes, sensor.config(explicit_width ? sensor.width : header_width));
}

int exit_code_for(const Error& e) {
  switch (e.code()) {
    case Errc::NoUsablePing: return kExitCalibration;
    case Errc::Io: return kExitIo;
    default: return kExitInput;
  }
}

std::string num(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

void print_stats(const fs::path& input, const SurveyLog& log) {
  std::cout << "file=" << input.string() << "\n";
  std::cout << "pings=" << log.pings.size() << "\n";
  std::cout << "scanline_width=" << log.config.scanline_width << "\n";
  if (log.pings.empty()) return;
  float dmin = std::numeric_limits<float>::infinity();
  float dmax = -dmin;
  double dsum = 0.0;
  double lat_min = 90, lat_max = -90, lon_min = 180, lon_max = -180;
  for (const PingRecord& p : log.pings) {
    dmin = std::min(dmin, p.depth);
    dmax = std::max(dmax, p.depth);
    dsum += p.depth;
    lat_min = std::min(lat_min, p.lat);
    lat_max = std::max(lat_max, p.lat);
    lon_min = std::min(lon_min, p.lon);
    lon_max = std::max(lon_max, p.lon);
  }
  std::cout << "t_first=" << num(log.pings.front().t) << "\n";
  std::cout << "t_last=" << num(log.pings.back().t) << "\n";
  std::cout << "depth_min=" << num(dmin) << "\n";
  std::cout << "depth_max=" << num(dmax) << "\n";
  std::cout << "depth_mean=" << num(dsum / static_cast<double>(log.pings.size())) << "\n";
  std::cout << "lat_range=" << num(lat_min) << "," << num(lat_max) << "\n";
  std::cout << "lon_range=" << num(lon_min) << "," << num(lon_max) << "\n";
}

std::string truth_csv(const SyntheticSurvey& survey) {
  std::string out = "ping,positive_pixel,negative_pixel,positive_stray,negative_stray,nadir_depth,positive_depth,negative_depth\n";
  auto opt = [](const std::optional<std::uint32_t>& v) { return v ? std::to_string(*v) : std::string(); };
  for (std::size_t i = 0; i < survey.truth.size(); ++i) {
    const auto& t = survey.truth[i];
    out += std::to_string(i) + "," + opt(t.sides[0].pixel) + "," + opt(t.sides[1].pixel) + "," +
           opt(t.sides[0].stray_pixel) + "," + opt(t.sides[1].stray_pixel) + "," + num(t.nadir_depth) +
           "," + num(t.sides[0].depth) + "," + num(t.sides[1].depth) + "\n";
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sparse bathymetric point clouds from side-scan sonar logs"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Read flags from an INI/TOML file");

  // parse
  SensorFlags parse_sensor;
  std::string parse_input;
  auto* parse_cmd = app.add_subcommand("parse", "Validate a .bsl/.csv log and print statistics");
  parse_cmd->add_option("input", parse_input, "Survey log (.bsl or .csv)")->required();
  parse_sensor.add_to(*parse_cmd);

  // synth
  SensorFlags synth_sensor;
  std::string synth_field = "const:4";
  std::string synth_path = "line:0,0,50,0,501";
  std::string synth_out;
  std::string synth_truth;
  std::string synth_preset;
  SynthOptions synth_opts;
  double synth_jitter = 0.0;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic survey log");
  synth_cmd->add_option("--field", synth_field, "const:D | slope:D,G[,DIR_DEG] | bowl:CX,CY,CENTER,RIM,R")
      ->capture_default_str();
  synth_cmd->add_option("--path", synth_path, "line:X0,Y0,X1,Y1,N | lawnmower:LEN,SPACING,LANES,STEP | points:X,Y;...")
      ->capture_default_str();
  synth_cmd->add_option("--sigma", synth_opts.speckle.sigma, "Multiplicative speckle sigma")->capture_default_str();
  synth_cmd->add_option("--seed", synth_opts.speckle.seed, "Random seed")->capture_default_str();
  synth_cmd->add_option("--ppd", synth_opts.ppd, "Pixels per meter of slant range")->capture_default_str();
  synth_cmd->add_option("--stray-fraction", synth_opts.stray_fraction, "Probability of a spurious echo per side")
      ->capture_default_str();
  synth_cmd->add_option("--jitter", synth_jitter, "Gaussian path noise, meters")->capture_default_str();
  synth_cmd->add_option("--origin-lat", synth_opts.origin.lat, "Latitude of the path origin")->capture_default_str();
  synth_cmd->add_option("--origin-lon", synth_opts.origin.lon, "Longitude of the path origin")->capture_default_str();
  synth_cmd->add_option("--dt", synth_opts.dt, "Seconds between pings")->capture_default_str();
  synth_cmd->add_option("--preset", synth_preset, "Named scenario (noisy-benchmark); overrides field/path/noise");
  synth_cmd->add_option("--truth", synth_truth, "Also write planted ground truth as CSV");
  synth_cmd->add_option("-o,--out", synth_out, "Output .bsl (or .csv)")->required();
  synth_sensor.add_to(*synth_cmd);

  // calibrate
  SensorFlags cal_sensor;
  std::string cal_input;
  double cal_threshold = kDefaultThreshold;
  std::optional<std::size_t> cal_ref;
  auto* cal_cmd = app.add_subcommand("calibrate", "Print the pixels-per-meter calibration");
  cal_cmd->add_option("input", cal_input, "Survey log (.bsl or .csv)")->required();
  cal_cmd->add_option("--threshold", cal_threshold, "First-return threshold")->capture_default_str();
  cal_cmd->add_option("--ref-ping", cal_ref, "Calibrate on this ping instead of the flattest one");
  cal_sensor.add_to(*cal_cmd);

  // pointcloud
  SensorFlags pc_sensor;
  std::string pc_input;
  std::string pc_xyz;
  std::string pc_ply;
  std::string pc_summary;
  PipelineConfig pc;
  std::optional<double> pc_origin_lat;
  std::optional<double> pc_origin_lon;
  auto* pc_cmd = app.add_subcommand("pointcloud", "Build the sparse point cloud");
  pc_cmd->add_option("input", pc_input, "Survey log (.bsl or .csv)")->required();
  pc_cmd->add_option("--xyz", pc_xyz, "Write the filtered cloud as XYZ text");
  pc_cmd->add_option("--ply", pc_ply, "Write the filtered cloud as binary PLY");
  pc_cmd->add_option("--summary", pc_summary, "Write the run summary here instead of stdout");
  pc_cmd->add_option("--threshold", pc.threshold, "First-return threshold")->capture_default_str();
  pc_cmd->add_option("--ref-ping", pc.ref_ping, "Calibrate on this ping instead of the flattest one");
  pc_cmd->add_option("--ppd", pc.ppd, "Known pixels per meter; skips calibration");
  pc_cmd->add_option("--outlier-radius", pc.outlier_radius, "Neighbor sphere radius, meters (default 5/ppd)");
  pc_cmd->add_option("--min-neighbors", pc.min_neighbors, "Neighbors required to keep a point")->capture_default_str();
  pc_cmd->add_option("--origin-lat", pc_origin_lat, "ENU origin latitude (default first ping)");
  pc_cmd->add_option("--origin-lon", pc_origin_lon, "ENU origin longitude (default first ping)");
  pc_cmd->add_flag("--swap-sides", pc.swap_sides, "Label the positive side as port");
  pc_cmd->add_option("--threads", pc.threads, "Worker threads")->capture_default_str()->check(CLI::PositiveNumber);
  pc_sensor.add_to(*pc_cmd);

  // eval-detections
  std::string ev_pred;
  std::string ev_truth;
  double ev_iou = kDefaultIouThreshold;
  std::string ev_format = "both";
  auto* ev_cmd = app.add_subcommand("eval-detections", "Score detections against ground truth");
  ev_cmd->add_option("predictions", ev_pred, "image_id class_id confidence x_min y_min x_max y_max")->required();
  ev_cmd->add_option("truth", ev_truth, "image_id class_id x_min y_min x_max y_max")->required();
  ev_cmd->add_option("--iou-threshold", ev_iou, "Minimum IoU for a true positive")
      ->capture_default_str()
      ->check(CLI::Range(0.0, 1.0));
  ev_cmd->add_option("--format", ev_format, "table | kv | both")
      ->capture_default_str()
      ->check(CLI::IsMember({"table", "kv", "both"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitInput;
  }

  try {
    if (parse_cmd->parsed()) {
      print_stats(parse_input, load_input(parse_input, parse_sensor));
      return 0;
    }

    if (synth_cmd->parsed()) {
      DepthField field;
      std::vector<PlanarPosition> path;
      if (synth_preset == "noisy-benchmark") {
        BenchmarkSpec spec = noisy_benchmark();
        field = spec.field;
        path = std::move(spec.path);
        synth_opts = spec.options;
      } else if (!synth_preset.empty()) {
        throw Error(Errc::InvalidArgument, "unknown preset '" + synth_preset + "'");
      } else {
        field = DepthField::parse(synth_field);
        path = jitter_path(parse_path(synth_path), synth_jitter, synth_opts.speckle.seed);
        synth_opts.config = synth_sensor.config(synth_sensor.width);
      }
      const SyntheticSurvey survey = generate_log(field, path, synth_opts);
      if (fs::path(synth_out).extension() == ".csv") {
        write_file(synth_out, write_csv(survey.log));
      } else {
        write_file(synth_out, write_log(survey.log));
      }
      if (!synth_truth.empty()) write_file(synth_truth, truth_csv(survey));
      std::cout << "pings=" << survey.log.pings.size() << "\nout=" << synth_out << "\n";
      return 0;
    }

    if (cal_cmd->parsed()) {
      const SurveyLog log = load_input(cal_input, cal_sensor);
      const auto overlay = first_return_overlay(log, cal_threshold);
      const Calibration cal = calibrate_ppd(log, overlay, cal_ref);
      std::cout << "ppd=" << num(cal.ppd) << "\nref_ping=" << cal.ref_ping
                << "\nref_depth=" << num(cal.ref_depth) << "\nref_pixels=" << num(cal.ref_pixels) << "\n";
      return 0;
    }

    if (pc_cmd->parsed()) {
      if (pc_origin_lat.has_value() != pc_origin_lon.has_value()) {
        throw Error(Errc::InvalidArgument, "--origin-lat and --origin-lon go together");
      }
      if (pc_origin_lat) pc.enu_origin = GeoPoint{*pc_origin_lat, *pc_origin_lon};
      pc.validate();
      const SurveyLog log = load_input(pc_input, pc_sensor);
      const PipelineResult result = run_pipeline(log, pc);
      if (!pc_xyz.empty()) write_file(pc_xyz, export_xyz(result.cloud));
      if (!pc_ply.empty()) write_file(pc_ply, export_ply(result.cloud, pc.swap_sides));
      const std::string summary = format_summary(log, pc, result);
      if (pc_summary.empty()) {
        std::cout << summary;
      } else {
        write_file(pc_summary, summary);
      }
      return 0;
    }

    if (ev_cmd->parsed()) {
      auto load_text = [](const std::string& path) {
        const auto bytes = read_file(path);
        return std::string(bytes.begin(), bytes.end());
      };
      std::vector<Detection> preds;
      std::vector<Detection> truths;
      try {
        preds = parse_detections(load_text(ev_pred), true);
      } catch (const Error& e) {
        if (e.code() == Errc::MalformedDetection) throw Error(e.code(), ev_pred + ": " + e.what());
        throw;
      }
      try {
        truths = parse_detections(load_text(ev_truth), false);
      } catch (const Error& e) {
        if (e.code() == Errc::MalformedDetection) throw Error(e.code(), ev_truth + ": " + e.what());
        throw;
      }
      const EvalReport report = evaluate(preds, truths, ev_iou);
      if (ev_format != "kv") std::cout << format_report_table(report);
      if (ev_format == "both") std::cout << "\n";
      if (ev_format != "table") std::cout << format_report_kv(report);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitIo;
  }
  return 0;
}
