#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <limits>
#include <random>

#include "bathy/error.hpp"
#include "bathy/sonar_log.hpp"
#include "oracles.hpp"

namespace bathy {
namespace {

std::vector<std::uint8_t> header(std::uint32_t width, std::uint64_t count) {
  std::vector<std::uint8_t> out = {'B', 'S', 'L', '1'};
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<std::uint8_t>(width >> (8 * i)));
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(count >> (8 * i)));
  return out;
}

template <typename T>
void append(std::vector<std::uint8_t>& out, T value) {
  std::uint8_t raw[sizeof(T)];
  std::memcpy(raw, &value, sizeof(T));
  out.insert(out.end(), raw, raw + sizeof(T));
}

void append_ping(std::vector<std::uint8_t>& out, double t, std::uint32_t width, float fill = 0.0F) {
  append(out, t);
  append(out, 29.4);
  append(out, -82.1);
  append(out, 3.5F);
  for (std::uint32_t k = 0; k < width; ++k) append(out, fill);
}

Errc error_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  ADD_FAILURE() << "no Error thrown";
  return Errc::Io;
}

TEST(SonarLog, EmptyLogParses) {
  const SurveyLog log = parse_log(header(700, 0));
  EXPECT_TRUE(log.pings.empty());
  EXPECT_EQ(log.config.scanline_width, 700U);
  EXPECT_EQ(log.config.deadzone_halfwidth, kDefaultDeadzoneHalfwidth);
}

TEST(SonarLog, MinimalOnePing) {
  auto bytes = header(4, 1);
  append_ping(bytes, 0.0, 4, 7.0F);
  const SurveyLog log = parse_log(bytes);
  ASSERT_EQ(log.pings.size(), 1U);
  EXPECT_EQ(log.pings[0].scanline, (std::vector<float>{7.0F, 7.0F, 7.0F, 7.0F}));
  EXPECT_DOUBLE_EQ(log.pings[0].lat, 29.4);
  EXPECT_FLOAT_EQ(log.pings[0].depth, 3.5F);
}

TEST(SonarLog, TruncatedPayload) {
  auto bytes = header(700, 2);
  append_ping(bytes, 0.0, 700);
  EXPECT_EQ(error_of([&] { parse_log(bytes); }), Errc::TruncatedRecord);
  bytes.pop_back();
  bytes.resize(20);
  EXPECT_EQ(error_of([&] { parse_log(bytes); }), Errc::TruncatedRecord);
  auto short_header = header(700, 0);
  short_header.resize(10);
  EXPECT_EQ(error_of([&] { parse_log(short_header); }), Errc::TruncatedRecord);
}

TEST(SonarLog, HugeDeclaredCountFailsWithoutAllocating) {
  auto bytes = header(700, std::numeric_limits<std::uint64_t>::max());
  append_ping(bytes, 0.0, 700);
  EXPECT_EQ(error_of([&] { parse_log(bytes); }), Errc::TruncatedRecord);
}

TEST(SonarLog, BadMagic) {
  auto bytes = header(4, 0);
  bytes[3] = '2';
  EXPECT_EQ(error_of([&] { parse_log(bytes); }), Errc::BadMagic);
  EXPECT_EQ(error_of([] { parse_log(std::vector<std::uint8_t>{'B', 'S'}); }), Errc::BadMagic);
}

TEST(SonarLog, WidthMismatchAgainstConfig) {
  auto bytes = header(4, 0);
  EXPECT_EQ(error_of([&] { parse_log(bytes, SensorConfig::for_width(8)); }), Errc::WidthMismatch);
  EXPECT_EQ(error_of([&] { parse_log(header(0, 0)); }), Errc::WidthMismatch);
}

TEST(SonarLog, NonFiniteAndNonMonotonic) {
  auto bytes = header(4, 2);
  append_ping(bytes, 1.0, 4);
  append_ping(bytes, 0.5, 4);
  EXPECT_EQ(error_of([&] { parse_log(bytes); }), Errc::NonMonotonicTime);

  auto nan_bytes = header(4, 1);
  append_ping(nan_bytes, 0.0, 4, std::numeric_limits<float>::quiet_NaN());
  EXPECT_EQ(error_of([&] { parse_log(nan_bytes); }), Errc::NonFiniteField);
}

TEST(SonarLog, NegativeIntensityAccepted) {
  auto bytes = header(4, 1);
  append_ping(bytes, 0.0, 4, -5.0e6F);
  EXPECT_FLOAT_EQ(parse_log(bytes).pings[0].scanline[2], -5.0e6F);
}

TEST(SonarLog, TrailingBytesAreNotRead) {
  auto bytes = header(4, 1);
  append_ping(bytes, 0.0, 4);
  bytes.insert(bytes.end(), {0xde, 0xad});
  EXPECT_EQ(parse_log(bytes).pings.size(), 1U);
}

TEST(SonarLog, EmptyLogWritesHeaderOnly) {
  SurveyLog log;
  const auto bytes = write_log(log);
  EXPECT_EQ(bytes, header(700, 0));
  EXPECT_EQ(bytes.size(), kBslHeaderSize);
}

TEST(SonarLog, GoldenHexLayout) {
  SurveyLog log;
  log.config = SensorConfig::for_width(2);
  log.pings.push_back({1.0, 29.5, -82.0, 1.0F, {0.5F, -1.0F}});
  const std::vector<std::uint8_t> expected = {
      0x42, 0x53, 0x4c, 0x31, 0x02, 0x00, 0x00, 0x00, 0x01, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0x00,
      0x00, 0x00, 0x00, 0x00, 0x00, 0x00, 0xf0, 0x3f,  // t = 1.0
      0x00, 0x00, 0x00, 0x00, 0x00, 0x80, 0x3d, 0x40,  // lat = 29.5
      0x00, 0x00, 0x00, 0x00, 0x00, 0x80, 0x54, 0xc0,  // lon = -82.0
      0x00, 0x00, 0x80, 0x3f,                          // depth = 1.0f
      0x00, 0x00, 0x00, 0x3f, 0x00, 0x00, 0x80, 0xbf,  // 0.5f, -1.0f
  };
  EXPECT_EQ(write_log(log), expected);
}

TEST(SonarLog, WriteRejectsNanDepth) {
  SurveyLog log;
  log.config = SensorConfig::for_width(4);
  log.pings.push_back({0.0, 0.0, 0.0, std::numeric_limits<float>::quiet_NaN(), std::vector<float>(4)});
  EXPECT_EQ(error_of([&] { write_log(log); }), Errc::NonFiniteField);
  log.pings[0].depth = -1.0F;
  EXPECT_EQ(error_of([&] { write_log(log); }), Errc::FieldOutOfRange);
  log.pings[0].depth = 1.0F;
  log.pings[0].lat = 91.0;
  EXPECT_EQ(error_of([&] { write_log(log); }), Errc::FieldOutOfRange);
  log.pings[0].lat = 0.0;
  log.pings[0].scanline.pop_back();
  EXPECT_EQ(error_of([&] { write_log(log); }), Errc::WidthMismatch);
}

TEST(SonarLog, RoundTripIsBitExact) {
  std::mt19937_64 rng(11);
  for (std::uint32_t width : {1U, 3U, 700U}) {
    SurveyLog log = testing::random_log(rng, width, 3);
    log.pings[1].scanline[0] = -0.0F;
    const SurveyLog back = parse_log(write_log(log), log.config);
    EXPECT_TRUE(bitwise_equal(back, log));
  }
}

TEST(SonarLog, CsvEmptyAndSingleRow) {
  const SensorConfig config = SensorConfig::for_width(3);
  EXPECT_TRUE(parse_csv("t,lat,lon,depth,i0,i1,i2\n", config).pings.empty());
  const SurveyLog log = parse_csv("t,lat,lon,depth,i0,i1,i2\r\n0,29.4,-82.1,3.5,0,1e9,-2\r\n", config);
  ASSERT_EQ(log.pings.size(), 1U);
  EXPECT_EQ(log.pings[0].lat, 29.4);
  EXPECT_EQ(log.pings[0].lon, -82.1);
  EXPECT_EQ(log.pings[0].depth, 3.5F);
  EXPECT_EQ(log.pings[0].scanline, (std::vector<float>{0.0F, 1e9F, -2.0F}));
}

TEST(SonarLog, CsvErrors) {
  const SensorConfig config = SensorConfig::for_width(3);
  EXPECT_EQ(error_of([&] { parse_csv("t,lat,lon,depth,i0,i1\n", config); }), Errc::HeaderMismatch);
  EXPECT_EQ(error_of([&] { parse_csv("", config); }), Errc::HeaderMismatch);
  try {
    parse_csv("t,lat,lon,depth,i0,i1,i2\n0,29.4,-82.1,3.5,0,0\n", config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::FieldCount);
    EXPECT_NE(std::string(e.what()).find("row 1"), std::string::npos);
  }
  try {
    parse_csv("t,lat,lon,depth,i0,i1,i2\n0,29.4,-82.1,3.5,0,0,0\n1,29.4,x,3.5,0,0,0\n", config);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), Errc::NumericParse);
    EXPECT_NE(std::string(e.what()).find("row 2, column 3"), std::string::npos);
  }
}

TEST(SonarLog, CsvAgreesWithBinary) {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 20; ++trial) {
    const SurveyLog log = testing::random_log(rng, 1 + trial % 9, trial % 5);
    const SurveyLog from_csv = parse_csv(write_csv(log), log.config);
    const SurveyLog from_bin = parse_log(write_log(log), log.config);
    EXPECT_TRUE(bitwise_equal(from_csv, from_bin)) << "trial " << trial;
  }
}

TEST(SonarLog, FuzzedStreamsOnlyRaiseTypedErrors) {
  std::mt19937_64 rng(99);
  const auto seed = write_log(testing::random_log(rng, 5, 4));
  std::uniform_int_distribution<int> byte(0, 255);
  for (int trial = 0; trial < 2000; ++trial) {
    auto bytes = seed;
    const int flips = 1 + trial % 8;
    for (int f = 0; f < flips; ++f) bytes[std::uniform_int_distribution<std::size_t>(0, bytes.size() - 1)(rng)] = static_cast<std::uint8_t>(byte(rng));
    bytes.resize(std::uniform_int_distribution<std::size_t>(0, bytes.size())(rng));
    try {
      (void)parse_log(bytes);
    } catch (const Error&) {
    }
  }
}

}  // namespace
}  // namespace bathy
