#include "bathy/sonar_log.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <system_error>

#include "bathy/error.hpp"

namespace bathy {
namespace {

constexpr char kMagic[4] = {'B', 'S', 'L', '1'};

template <typename T>
T load_le(const std::uint8_t* p) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  U bits = 0;
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(&bits, p, sizeof(U));
  } else {
    for (std::size_t i = 0; i < sizeof(U); ++i) bits |= U{p[i]} << (8 * i);
  }
  return std::bit_cast<T>(bits);
}

template <typename T>
void store_le(std::uint8_t* p, T value) {
  using U = std::conditional_t<sizeof(T) == 8, std::uint64_t, std::uint32_t>;
  const auto bits = std::bit_cast<U>(value);
  if constexpr (std::endian::native == std::endian::little) {
    std::memcpy(p, &bits, sizeof(U));
  } else {
    for (std::size_t i = 0; i < sizeof(U); ++i) p[i] = static_cast<std::uint8_t>(bits >> (8 * i));
  }
}

std::string ping_context(std::size_t index) { return "ping " + std::to_string(index); }

void validate_ping(const PingRecord& ping, std::size_t index, std::uint32_t width) {
  if (!std::isfinite(ping.t) || !std::isfinite(ping.lat) || !std::isfinite(ping.lon) ||
      !std::isfinite(ping.depth)) {
    throw Error(Errc::NonFiniteField, ping_context(index) + ": non-finite t/lat/lon/depth");
  }
  if (ping.lat < -90.0 || ping.lat > 90.0) {
    throw Error(Errc::FieldOutOfRange, ping_context(index) + ": latitude outside [-90, 90]");
  }
  if (ping.lon < -180.0 || ping.lon > 180.0) {
    throw Error(Errc::FieldOutOfRange, ping_context(index) + ": longitude outside [-180, 180]");
  }
  if (ping.depth < 0.0F) {
    throw Error(Errc::FieldOutOfRange, ping_context(index) + ": negative depth");
  }
  if (ping.scanline.size() != width) {
    throw Error(Errc::WidthMismatch, ping_context(index) + ": scanline has " +
                                         std::to_string(ping.scanline.size()) +
                                         " samples, expected " + std::to_string(width));
  }
  for (std::size_t k = 0; k < ping.scanline.size(); ++k) {
    if (!std::isfinite(ping.scanline[k])) {
      throw Error(Errc::NonFiniteField,
                  ping_context(index) + ": non-finite scanline sample " + std::to_string(k));
    }
  }
}

void check_time_order(const std::vector<PingRecord>& pings, std::size_t index) {
  if (index > 0 && pings[index].t < pings[index - 1].t) {
    throw Error(Errc::NonMonotonicTime, ping_context(index) + ": time decreases");
  }
}

template <typename T>
bool parse_number(std::string_view field, T& out) {
  // from_chars rejects a leading '+', which shortest-round-trip output never emits.
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, out);
  return ec == std::errc() && ptr == last;
}

template <typename T>
void append_number(std::string& out, T value) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, ptr);
}

std::string expected_csv_header(std::uint32_t width) {
  std::string header = "t,lat,lon,depth";
  for (std::uint32_t i = 0; i < width; ++i) {
    header += ",i";
    header += std::to_string(i);
  }
  return header;
}

}  // namespace

SensorConfig SensorConfig::for_width(std::uint32_t width) {
  SensorConfig config;
  config.scanline_width = width;
  const std::uint32_t max_halfwidth = width == 0 ? 0 : (width - 1) / 2;
  config.deadzone_halfwidth = std::min(kDefaultDeadzoneHalfwidth, max_halfwidth);
  return config;
}

void SensorConfig::validate() const {
  if (!(alpha2 > 0.0 && alpha2 < std::numbers::pi / 2)) {
    throw Error(Errc::InvalidArgument, "alpha2 must lie in (0, pi/2) radians");
  }
  if (scanline_width == 0) {
    throw Error(Errc::InvalidArgument, "scanline width must be positive");
  }
  if (2ULL * deadzone_halfwidth >= scanline_width) {
    throw Error(Errc::InvalidArgument, "2 * deadzone_halfwidth must be smaller than the width");
  }
  if (!(intensity_max > 0.0) || !std::isfinite(intensity_max)) {
    throw Error(Errc::InvalidArgument, "intensity_max must be positive and finite");
  }
}

bool bitwise_equal(const SurveyLog& a, const SurveyLog& b) noexcept {
  auto same64 = [](double x, double y) {
    return std::bit_cast<std::uint64_t>(x) == std::bit_cast<std::uint64_t>(y);
  };
  auto same32 = [](float x, float y) {
    return std::bit_cast<std::uint32_t>(x) == std::bit_cast<std::uint32_t>(y);
  };
  if (!(a.config == b.config) || a.pings.size() != b.pings.size()) return false;
  for (std::size_t i = 0; i < a.pings.size(); ++i) {
    const auto& p = a.pings[i];
    const auto& q = b.pings[i];
    if (!same64(p.t, q.t) || !same64(p.lat, q.lat) || !same64(p.lon, q.lon) ||
        !same32(p.depth, q.depth) || p.scanline.size() != q.scanline.size()) {
      return false;
    }
    for (std::size_t k = 0; k < p.scanline.size(); ++k) {
      if (!same32(p.scanline[k], q.scanline[k])) return false;
    }
  }
  return true;
}

void validate(const SurveyLog& log) {
  log.config.validate();
  for (std::size_t i = 0; i < log.pings.size(); ++i) {
    validate_ping(log.pings[i], i, log.config.scanline_width);
    check_time_order(log.pings, i);
  }
}

std::uint32_t peek_bsl_width(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < sizeof(kMagic) || std::memcmp(bytes.data(), kMagic, sizeof(kMagic)) != 0) {
    throw Error(Errc::BadMagic, "stream does not begin with \"BSL1\"");
  }
  if (bytes.size() < kBslHeaderSize) {
    throw Error(Errc::TruncatedRecord, "stream ends inside the 16-byte header");
  }
  return load_le<std::uint32_t>(bytes.data() + 4);
}

SurveyLog parse_log(std::span<const std::uint8_t> bytes, const std::optional<SensorConfig>& config) {
  const std::uint32_t width = peek_bsl_width(bytes);
  const std::uint64_t count = load_le<std::uint64_t>(bytes.data() + 8);

  if (width == 0) {
    throw Error(Errc::WidthMismatch, "header declares a zero-width scanline");
  }
  SurveyLog log;
  if (config) {
    if (config->scanline_width != width) {
      throw Error(Errc::WidthMismatch, "header width " + std::to_string(width) +
                                           " differs from configured width " +
                                           std::to_string(config->scanline_width));
    }
    log.config = *config;
  } else {
    log.config = SensorConfig::for_width(width);
  }
  log.config.validate();

  // Length check up front so a hostile ping count never drives allocation.
  const std::size_t stride = bsl_ping_stride(width);
  const std::size_t payload = bytes.size() - kBslHeaderSize;
  const std::uint64_t available = payload / stride;
  if (available < count) {
    throw Error(Errc::TruncatedRecord, "declared " + std::to_string(count) +
                                           " pings but stream ends inside " +
                                           ping_context(static_cast<std::size_t>(available)));
  }

  log.pings.resize(static_cast<std::size_t>(count));
  const std::uint8_t* cursor = bytes.data() + kBslHeaderSize;
  for (std::size_t i = 0; i < log.pings.size(); ++i) {
    PingRecord& ping = log.pings[i];
    ping.t = load_le<double>(cursor);
    ping.lat = load_le<double>(cursor + 8);
    ping.lon = load_le<double>(cursor + 16);
    ping.depth = load_le<float>(cursor + 24);
    ping.scanline.resize(width);
    const std::uint8_t* samples = cursor + 28;
    if constexpr (std::endian::native == std::endian::little) {
      std::memcpy(ping.scanline.data(), samples, std::size_t{4} * width);
    } else {
      for (std::uint32_t k = 0; k < width; ++k) ping.scanline[k] = load_le<float>(samples + 4 * k);
    }
    validate_ping(ping, i, width);
    check_time_order(log.pings, i);
    cursor += stride;
  }
  return log;
}

std::vector<std::uint8_t> write_log(const SurveyLog& log) {
  validate(log);
  const std::uint32_t width = log.config.scanline_width;
  const std::size_t stride = bsl_ping_stride(width);
  std::vector<std::uint8_t> out(kBslHeaderSize + stride * log.pings.size());
  std::memcpy(out.data(), kMagic, sizeof(kMagic));
  store_le<std::uint32_t>(out.data() + 4, width);
  store_le<std::uint64_t>(out.data() + 8, log.pings.size());
  std::uint8_t* cursor = out.data() + kBslHeaderSize;
  for (const PingRecord& ping : log.pings) {
    store_le<double>(cursor, ping.t);
    store_le<double>(cursor + 8, ping.lat);
    store_le<double>(cursor + 16, ping.lon);
    store_le<float>(cursor + 24, ping.depth);
    for (std::uint32_t k = 0; k < width; ++k) store_le<float>(cursor + 28 + 4 * k, ping.scanline[k]);
    cursor += stride;
  }
  return out;
}

SurveyLog parse_csv(std::string_view text, const SensorConfig& config) {
  config.validate();
  const std::uint32_t width = config.scanline_width;
  const std::size_t columns = 4 + std::size_t{width};

  SurveyLog log;
  log.config = config;

  auto next_line = [&text]() -> std::optional<std::string_view> {
    if (text.empty()) return std::nullopt;
    const std::size_t nl = text.find('\n');
    std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    return line;
  };

  const auto header = next_line();
  if (!header || *header != expected_csv_header(width)) {
    throw Error(Errc::HeaderMismatch, "expected header t,lat,lon,depth,i0..i" +
                                          std::to_string(width - 1));
  }

  std::size_t row = 0;
  std::vector<std::string_view> fields;
  fields.reserve(columns);
  while (auto line = next_line()) {
    if (line->empty()) continue;
    ++row;
    fields.clear();
    std::string_view rest = *line;
    while (true) {
      const std::size_t comma = rest.find(',');
      fields.push_back(rest.substr(0, comma));
      if (comma == std::string_view::npos) break;
      rest.remove_prefix(comma + 1);
    }
    if (fields.size() != columns) {
      throw Error(Errc::FieldCount, "row " + std::to_string(row) + ": " +
                                        std::to_string(fields.size()) + " fields, expected " +
                                        std::to_string(columns));
    }
    auto fail = [row](std::size_t column) {
      return Error(Errc::NumericParse, "row " + std::to_string(row) + ", column " +
                                           std::to_string(column + 1) + ": not a number");
    };
    PingRecord ping;
    if (!parse_number(fields[0], ping.t)) throw fail(0);
    if (!parse_number(fields[1], ping.lat)) throw fail(1);
    if (!parse_number(fields[2], ping.lon)) throw fail(2);
    if (!parse_number(fields[3], ping.depth)) throw fail(3);
    ping.scanline.resize(width);
    for (std::uint32_t k = 0; k < width; ++k) {
      if (!parse_number(fields[4 + k], ping.scanline[k])) throw fail(4 + k);
    }
    log.pings.push_back(std::move(ping));
    validate_ping(log.pings.back(), log.pings.size() - 1, width);
    check_time_order(log.pings, log.pings.size() - 1);
  }
  return log;
}

std::string write_csv(const SurveyLog& log) {
  validate(log);
  std::string out = expected_csv_header(log.config.scanline_width);
  out += '\n';
  for (const PingRecord& ping : log.pings) {
    append_number(out, ping.t);
    out += ',';
    append_number(out, ping.lat);
    out += ',';
    append_number(out, ping.lon);
    out += ',';
    append_number(out, ping.depth);
    for (float sample : ping.scanline) {
      out += ',';
      append_number(out, sample);
    }
    out += '\n';
  }
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  in.seekg(0, std::ios::end);
  const auto size = in.tellg();
  if (size < 0) throw Error(Errc::Io, "cannot size " + path.string());
  in.seekg(0, std::ios::beg);
  std::vector<std::uint8_t> bytes(static_cast<std::size_t>(size));
  if (!bytes.empty() && !in.read(reinterpret_cast<char*>(bytes.data()), size)) {
    throw Error(Errc::Io, "short read on " + path.string());
  }
  return bytes;
}

void write_file(const std::filesystem::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write failed on " + path.string());
}

void write_file(const std::filesystem::path& path, std::string_view text) {
  write_file(path, std::span<const std::uint8_t>(reinterpret_cast<const std::uint8_t*>(text.data()),
                                                 text.size()));
}

SurveyLog load_log(const std::filesystem::path& path, const std::optional<SensorConfig>& config) {
  const auto bytes = read_file(path);
  if (path.extension() == ".csv") {
    const std::string_view text(reinterpret_cast<const char*>(bytes.data()), bytes.size());
    return parse_csv(text, config.value_or(SensorConfig{}));
  }
  return parse_log(bytes, config);
}

}  // namespace bathy
