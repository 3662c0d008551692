#include "diffusense/io.hpp"

#include <nlohmann/json.hpp>

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <sstream>
#include <vector>

#include "diffusense/detail/format.hpp"

namespace diffusense {
namespace {

constexpr const char* kRawMagic = "DIFFRAW1";

void atomic_write(const std::filesystem::path& path, const std::string& bytes) {
  const std::filesystem::path tmp = path.string() + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot open '" + tmp.string() + "' for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    if (!out) throw IoError("short write to '" + tmp.string() + "'");
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename '" + tmp.string() + "' to '" + path.string() + "'");
}

std::string read_bytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

template <typename T>
void append_le(std::string& out, T value) {
  char bytes[sizeof(T)];
  std::memcpy(bytes, &value, sizeof(T));
  out.append(bytes, sizeof(T));
}

template <typename T>
T read_le(const std::string& bytes, std::size_t offset) {
  T value;
  std::memcpy(&value, bytes.data() + offset, sizeof(T));
  return value;
}

// Little-endian hosts only; the on-disk formats are defined little-endian.
static_assert(std::endian::native == std::endian::little,
              "diffusense block files are little-endian");

std::string correlation_name(Correlation c) {
  return c == Correlation::uncorrelated ? "uncorrelated" : "identical";
}

}  // namespace

std::optional<BlockFormat> format_from_extension(const std::filesystem::path& path) {
  const std::string ext = path.extension().string();
  if (ext == ".raw" || ext == ".f64") return BlockFormat::raw;
  if (ext == ".wav") return BlockFormat::wav;
  return std::nullopt;
}

void write_raw_block(const SHSignalBlock& block, const std::filesystem::path& path) {
  validate(block);
  std::string bytes = std::string(kRawMagic) + " order=" + std::to_string(block.order) +
                      " samples=" + std::to_string(block.samples()) + "\n";
  for (Eigen::Index r = 0; r < block.channels(); ++r)
    for (Eigen::Index t = 0; t < block.samples(); ++t) append_le(bytes, block.data(r, t));
  atomic_write(path, bytes);
}

SHSignalBlock read_raw_block(const std::filesystem::path& path) {
  const std::string bytes = read_bytes(path);
  const std::size_t header_end = bytes.find('\n');
  if (header_end == std::string::npos) throw IoError("'" + path.string() + "': missing header");
  const std::string header = bytes.substr(0, header_end);

  int order = -1;
  long long samples = -1;
  char magic[16] = {};
  if (std::sscanf(header.c_str(), "%15s order=%d samples=%lld", magic, &order, &samples) != 3 ||
      std::string(magic) != kRawMagic)
    throw IoError("'" + path.string() + "': not a " + kRawMagic + " file");
  if (order < 0 || samples < 1)
    throw IoError("'" + path.string() + "': invalid header values");

  const Eigen::Index channels = channel_count(order);
  const std::size_t expected = static_cast<std::size_t>(channels) *
                               static_cast<std::size_t>(samples) * sizeof(double);
  if (bytes.size() - header_end - 1 != expected)
    throw IoError("'" + path.string() + "': payload size does not match header");

  SHSignalBlock block{order, Eigen::MatrixXd(channels, samples)};
  std::size_t offset = header_end + 1;
  for (Eigen::Index r = 0; r < channels; ++r)
    for (Eigen::Index t = 0; t < samples; ++t, offset += sizeof(double))
      block.data(r, t) = read_le<double>(bytes, offset);
  validate(block);
  return block;
}

void write_wav_block(const SHSignalBlock& block, const std::filesystem::path& path,
                     int sample_rate) {
  validate(block);
  if (sample_rate < 1) throw std::invalid_argument("write_wav_block: sample rate must be >= 1");
  const auto channels = static_cast<std::uint16_t>(block.channels());
  const auto frames = static_cast<std::uint32_t>(block.samples());
  const std::uint32_t data_bytes = frames * channels * 4u;

  std::string bytes;
  bytes.reserve(60 + data_bytes);
  bytes += "RIFF";
  append_le<std::uint32_t>(bytes, 4 + 26 + 12 + 8 + data_bytes);
  bytes += "WAVE";
  bytes += "fmt ";
  append_le<std::uint32_t>(bytes, 18);
  append_le<std::uint16_t>(bytes, 3);  // IEEE float
  append_le<std::uint16_t>(bytes, channels);
  append_le<std::uint32_t>(bytes, static_cast<std::uint32_t>(sample_rate));
  append_le<std::uint32_t>(bytes, static_cast<std::uint32_t>(sample_rate) * channels * 4u);
  append_le<std::uint16_t>(bytes, static_cast<std::uint16_t>(channels * 4u));
  append_le<std::uint16_t>(bytes, 32);
  append_le<std::uint16_t>(bytes, 0);  // no format extension
  bytes += "fact";
  append_le<std::uint32_t>(bytes, 4);
  append_le<std::uint32_t>(bytes, frames);
  bytes += "data";
  append_le<std::uint32_t>(bytes, data_bytes);
  for (std::uint32_t t = 0; t < frames; ++t)
    for (std::uint16_t ch = 0; ch < channels; ++ch)
      append_le<float>(bytes, static_cast<float>(block.data(ch, t)));
  atomic_write(path, bytes);
}

namespace {

LoadedSignal read_wav_signal(const std::filesystem::path& path) {
  const std::string bytes = read_bytes(path);
  if (bytes.size() < 12 || bytes.compare(0, 4, "RIFF") != 0 || bytes.compare(8, 4, "WAVE") != 0)
    throw IoError("'" + path.string() + "': not a RIFF/WAVE file");

  std::uint16_t format = 0, channels = 0, bits = 0;
  std::uint32_t rate = 0;
  std::size_t data_offset = 0, data_size = 0;
  std::size_t pos = 12;
  while (pos + 8 <= bytes.size()) {
    const std::string id = bytes.substr(pos, 4);
    const std::uint32_t size = read_le<std::uint32_t>(bytes, pos + 4);
    if (pos + 8 + size > bytes.size())
      throw IoError("'" + path.string() + "': truncated chunk '" + id + "'");
    if (id == "fmt ") {
      if (size < 16) throw IoError("'" + path.string() + "': malformed fmt chunk");
      format = read_le<std::uint16_t>(bytes, pos + 8);
      channels = read_le<std::uint16_t>(bytes, pos + 10);
      rate = read_le<std::uint32_t>(bytes, pos + 12);
      bits = read_le<std::uint16_t>(bytes, pos + 22);
    } else if (id == "data") {
      data_offset = pos + 8;
      data_size = size;
    }
    pos += 8 + size + (size % 2);  // chunks are word-aligned
  }
  if (format != 3 || bits != 32)
    throw IoError("'" + path.string() + "': only 32-bit float WAV is supported");
  if (channels == 0 || data_offset == 0)
    throw IoError("'" + path.string() + "': missing fmt or data chunk");

  const std::size_t frames = data_size / (static_cast<std::size_t>(channels) * 4u);
  if (frames == 0) throw IoError("'" + path.string() + "': empty data chunk");
  LoadedSignal signal;
  signal.sample_rate = static_cast<int>(rate);
  signal.data.resize(channels, static_cast<Eigen::Index>(frames));
  std::size_t offset = data_offset;
  for (std::size_t t = 0; t < frames; ++t)
    for (std::uint16_t ch = 0; ch < channels; ++ch, offset += 4)
      signal.data(ch, static_cast<Eigen::Index>(t)) = read_le<float>(bytes, offset);
  return signal;
}

}  // namespace

LoadedSignal read_signal(const std::filesystem::path& path, std::optional<BlockFormat> format) {
  if (!format) format = format_from_extension(path);
  if (!format)
    throw IoError("'" + path.string() + "': cannot infer format from extension; pass --format");
  if (*format == BlockFormat::wav) return read_wav_signal(path);
  SHSignalBlock block = read_raw_block(path);
  return {std::move(block.data), kDefaultSampleRate, block.order};
}

void write_block_metadata(const ScenarioConfig& config, BlockFormat format,
                          const std::filesystem::path& block_path) {
  nlohmann::json meta;
  meta["format"] = format == BlockFormat::raw ? "raw" : "wav";
  meta["order"] = config.order;
  meta["channels"] = channel_count(config.order);
  meta["samples"] = config.samples;
  meta["seed"] = config.seed;
  meta["beta"] = config.beta;
  meta["noise_power"] = noise_power(config);
  meta["correlation"] = correlation_name(config.correlation);
  meta["channel_convention"] = "ACN/N3D";
  meta["generator"] = kGeneratorName;
  if (format == BlockFormat::wav) meta["sample_rate"] = kDefaultSampleRate;
  write_text_file(block_path.string() + ".meta.json", meta.dump(2) + "\n");
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  atomic_write(path, text);
}

std::string read_text_file(const std::filesystem::path& path) { return read_bytes(path); }

}  // namespace diffusense
