#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "bathy/error.hpp"
#include "bathy/trajectory.hpp"

namespace bathy {
namespace {

TEST(Heading, EastwardStepPointsNorth) {
  const std::vector<PlanarPosition> p = {{0, 0}, {1, 0}};
  const auto f = heading_frames(p);
  ASSERT_EQ(f.size(), 2U);
  EXPECT_TRUE(f[0].valid);
  EXPECT_EQ(f[0].h, (Vec2{1, 0}));
  EXPECT_EQ(f[0].t_hat, (Vec2{0, 1}));
  EXPECT_EQ(f[1], f[0]);
}

TEST(Heading, ThreeFourFive) {
  const std::vector<PlanarPosition> p = {{0, 0}, {3, 4}};
  const auto f = heading_frames(p);
  EXPECT_DOUBLE_EQ(f[0].t_hat.x, -0.8);
  EXPECT_DOUBLE_EQ(f[0].t_hat.y, 0.6);
}

TEST(Heading, StationaryPingIsInvalid) {
  const std::vector<PlanarPosition> p = {{0, 0}, {0, 0}};
  const auto f = heading_frames(p);
  EXPECT_FALSE(f[0].valid);
  EXPECT_FALSE(f[1].valid);
}

TEST(Heading, SingleAndEmpty) {
  const std::vector<PlanarPosition> one = {{5, 5}};
  EXPECT_FALSE(heading_frames(one)[0].valid);
  try {
    heading_frames({});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::EmptyInput);
  }
}

TEST(Heading, LastPingInheritsNearestValidFrame) {
  const std::vector<PlanarPosition> p = {{0, 0}, {0, 2}, {0, 2}};
  const auto f = heading_frames(p);
  EXPECT_TRUE(f[0].valid);
  EXPECT_FALSE(f[1].valid);
  EXPECT_EQ(f[2], f[0]);
  EXPECT_EQ(f[0].t_hat, (Vec2{-1, 0}));
}

TEST(Heading, FrameInvariantsAndEquivariance) {
  std::mt19937_64 rng(23);
  std::uniform_real_distribution<double> coord(-50, 50);
  std::uniform_real_distribution<double> angle(-3.14, 3.14);
  std::uniform_int_distribution<std::int64_t> dyadic(-(1 << 20), 1 << 20);
  for (int trial = 0; trial < 100; ++trial) {
    std::vector<PlanarPosition> p(20);
    for (auto& q : p) q = {static_cast<double>(dyadic(rng)) / 256.0, static_cast<double>(dyadic(rng)) / 256.0};
    const auto f = heading_frames(p);
    for (const auto& fr : f) {
      if (!fr.valid) continue;
      EXPECT_NEAR(std::hypot(fr.t_hat.x, fr.t_hat.y), 1.0, 1e-12);
      EXPECT_NEAR(fr.t_hat.x * fr.h.x + fr.t_hat.y * fr.h.y, 0.0, 1e-12 * std::hypot(fr.h.x, fr.h.y));
    }

    // Dyadic shift: every difference is exact, so frames must match bit for bit.
    const double sx = static_cast<double>(dyadic(rng)) / 64.0;
    const double sy = static_cast<double>(dyadic(rng)) / 64.0;
    auto shifted = p;
    for (auto& q : shifted) q = {q.x + sx, q.y + sy};
    EXPECT_EQ(heading_frames(shifted), f);

    const double th = angle(rng);
    const double c = std::cos(th);
    const double s = std::sin(th);
    auto rotated = p;
    for (auto& q : rotated) q = {c * q.x - s * q.y, s * q.x + c * q.y};
    const auto g = heading_frames(rotated);
    for (std::size_t i = 0; i < f.size(); ++i) {
      ASSERT_EQ(g[i].valid, f[i].valid);
      if (!f[i].valid) continue;
      EXPECT_NEAR(g[i].h.x, c * f[i].h.x - s * f[i].h.y, 1e-9);
      EXPECT_NEAR(g[i].h.y, s * f[i].h.x + c * f[i].h.y, 1e-9);
      EXPECT_NEAR(g[i].t_hat.x, c * f[i].t_hat.x - s * f[i].t_hat.y, 1e-9);
      EXPECT_NEAR(g[i].t_hat.y, s * f[i].t_hat.x + c * f[i].t_hat.y, 1e-9);
    }
  }
}

SurveyLog depth_log(const std::vector<float>& depths) {
  SurveyLog log;
  log.config = SensorConfig::for_width(3);
  for (std::size_t i = 0; i < depths.size(); ++i) {
    log.pings.push_back({static_cast<double>(i), 0.0, 0.0, depths[i], {0.0F, 0.0F, 0.0F}});
  }
  return log;
}

ReturnPair returns(std::optional<std::uint32_t> pos, std::optional<std::uint32_t> neg) {
  ReturnPair r;
  if (pos) r.positive = {Side::Positive, *pos, true};
  if (neg) r.negative = {Side::Negative, *neg, true};
  return r;
}

TEST(Calibration, SingleSide) {
  const SurveyLog log = depth_log({4.0F});
  const std::vector<ReturnPair> overlay = {returns(100, std::nullopt)};
  const Calibration cal = calibrate_ppd(log, overlay);
  EXPECT_EQ(cal.ppd, 25.0);
  EXPECT_EQ(cal.ref_ping, 0U);
  EXPECT_EQ(cal.ref_pixels, 100.0);
  EXPECT_EQ(cal.ppd, cal.ref_pixels / cal.ref_depth);
}

TEST(Calibration, BothSidesAveraged) {
  const SurveyLog log = depth_log({4.0F});
  const std::vector<ReturnPair> overlay = {returns(100, 102)};
  EXPECT_DOUBLE_EQ(calibrate_ppd(log, overlay).ppd, 25.25);
}

TEST(Calibration, NoUsablePing) {
  const SurveyLog log = depth_log({4.0F, 0.0F});
  const std::vector<ReturnPair> overlay = {returns(std::nullopt, std::nullopt), returns(10, 10)};
  try {
    calibrate_ppd(log, overlay);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NoUsablePing);
  }
  EXPECT_THROW(calibrate_ppd(depth_log({}), {}), Error);
  EXPECT_THROW(calibrate_ppd(log, overlay, 0), Error);
  EXPECT_THROW(calibrate_ppd(log, overlay, 7), Error);
}

TEST(Calibration, PicksFlattestPing) {
  // Depths flatten out around index 6..9.
  const SurveyLog log = depth_log({1, 2, 3, 4, 5, 5.5F, 6, 6, 6, 6, 6, 6.5F, 8, 10});
  std::vector<ReturnPair> overlay(log.pings.size(), returns(120, std::nullopt));
  const Calibration cal = calibrate_ppd(log, overlay);
  // Ping 8's five nearest neighbours (7, 9, 6, 10, 5) differ by 0,0,0,0,0.5.
  EXPECT_EQ(cal.ref_ping, 8U);
  EXPECT_DOUBLE_EQ(cal.ppd, 20.0);
  EXPECT_EQ(calibrate_ppd(log, overlay), cal);

  const Calibration fixed = calibrate_ppd(log, overlay, 2);
  EXPECT_EQ(fixed.ref_ping, 2U);
  EXPECT_DOUBLE_EQ(fixed.ppd, 40.0);
}

}  // namespace
}  // namespace bathy
