#pragma once

// On-disk formats.
//
// Frame file (.sbfm), little-endian, 19-byte header then payload:
//   offset 0  char[4] "SBFM"
//   offset 4  u16     version (1)
//   offset 6  u64     n_frames
//   offset 14 u32     n_dims
//   offset 18 u8      dtype (1 = f64)
//   offset 19 f64[n_frames * n_dims] row-major
//
// Model file: text header of "key: value" lines opened by "SBXMODEL 1" and
// closed by "end", followed by every layer's W (row-major), b and b_dec as
// little-endian f64. Doubles in the header use shortest round-trip form.

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sbx/dae.hpp"
#include "sbx/linalg.hpp"
#include "sbx/spectral.hpp"
#include "sbx/training.hpp"

namespace sbx {

inline constexpr std::uint16_t kFrameFileVersion = 1;
inline constexpr std::uint8_t kDtypeF64 = 1;
inline constexpr std::size_t kFrameHeaderBytes = 19;

void write_frames(std::ostream& out, const Matrix& frames);
Matrix read_frames(std::istream& in);
void write_frame_file(const std::filesystem::path& path, const Matrix& frames);
Matrix read_frame_file(const std::filesystem::path& path);

/// Comma-separated rows, one frame per line, no header.
void write_frame_csv(const std::filesystem::path& path, const Matrix& frames);
Matrix read_frame_csv(const std::filesystem::path& path);

/// Everything needed to turn raw spectra into features and back.
struct Model {
  Network net;
  GcnStats gcn;
  WarpKind warp_kind = WarpKind::None;
  double sample_rate = 48000.0;
  std::vector<Hyperparams> layer_hparams;
  std::optional<Hyperparams> finetune_hparams;

  WarpSpec warp_spec() const { return make_warp_spec(net.input_dim(), sample_rate, warp_kind); }

  bool operator==(const Model&) const = default;
};

void write_model(std::ostream& out, const Model& model);
Model read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const Model& model);
Model load_model(const std::filesystem::path& path);

/// Shortest decimal form that parses back to the identical double.
std::string format_double(double v);
double parse_double(const std::string& text);

}  // namespace sbx
