#pragma once

#include <filesystem>
#include <optional>
#include <string>

#include "diffusense/block.hpp"
#include "diffusense/field.hpp"

namespace diffusense {

/// I/O failures distinct from validation errors; maps to its own exit status
/// in the CLI.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

enum class BlockFormat { raw, wav };

/// Picks raw for ".raw"/".f64", wav for ".wav"; nullopt otherwise.
std::optional<BlockFormat> format_from_extension(const std::filesystem::path& path);

inline constexpr int kDefaultSampleRate = 48000;

/// Multichannel signal loaded from disk; rows are channels.
struct LoadedSignal {
  Eigen::MatrixXd data;
  int sample_rate = kDefaultSampleRate;    // raw files carry no rate
  std::optional<int> declared_order;       // present for raw files
};

/// Raw-matrix block file: one text header line
///   DIFFRAW1 order=<L> samples=<T>
/// followed by row-major little-endian float64 data, rows = ACN channels.
/// Round trips bit-exactly.
void write_raw_block(const SHSignalBlock& block, const std::filesystem::path& path);
SHSignalBlock read_raw_block(const std::filesystem::path& path);

/// 32-bit float multichannel WAV, channels in ACN order, N3D normalization.
void write_wav_block(const SHSignalBlock& block, const std::filesystem::path& path,
                     int sample_rate = kDefaultSampleRate);

LoadedSignal read_signal(const std::filesystem::path& path,
                         std::optional<BlockFormat> format = std::nullopt);

/// JSON sidecar (<output>.meta.json) describing a simulated block.
void write_block_metadata(const ScenarioConfig& config, BlockFormat format,
                          const std::filesystem::path& block_path);

/// Atomic text-file write (write to a temp name, then rename).
void write_text_file(const std::filesystem::path& path, const std::string& text);

std::string read_text_file(const std::filesystem::path& path);

}  // namespace diffusense
