#include "sbx/io.hpp"

#include <array>
#include <bit>
#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

#include "sbx/error.hpp"
#include "sbx/rng.hpp"

namespace sbx {

namespace {

constexpr std::array<char, 4> kFrameMagic{'S', 'B', 'F', 'M'};
constexpr const char* kModelMagic = "SBXMODEL 1";

template <typename T>
void put_le(std::ostream& out, T value) {
  std::array<char, sizeof(T)> bytes;
  for (std::size_t i = 0; i < sizeof(T); ++i)
    bytes[i] = static_cast<char>((static_cast<std::uint64_t>(value) >> (8 * i)) & 0xFF);
  out.write(bytes.data(), bytes.size());
}

template <typename T>
T get_le(std::istream& in, const char* what) {
  std::array<unsigned char, sizeof(T)> bytes;
  if (!in.read(reinterpret_cast<char*>(bytes.data()), bytes.size()))
    throw FormatError(std::string("truncated input while reading ") + what);
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < sizeof(T); ++i) v |= static_cast<std::uint64_t>(bytes[i]) << (8 * i);
  return static_cast<T>(v);
}

void put_f64s(std::ostream& out, std::span<const double> values) {
  std::vector<char> buf(values.size() * 8);
  for (std::size_t i = 0; i < values.size(); ++i) {
    const auto bits = std::bit_cast<std::uint64_t>(values[i]);
    for (std::size_t b = 0; b < 8; ++b) buf[i * 8 + b] = static_cast<char>((bits >> (8 * b)) & 0xFF);
  }
  out.write(buf.data(), static_cast<std::streamsize>(buf.size()));
}

void get_f64s(std::istream& in, std::span<double> values, const char* what) {
  std::vector<unsigned char> buf(values.size() * 8);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size())))
    throw FormatError(std::string("truncated payload while reading ") + what);
  for (std::size_t i = 0; i < values.size(); ++i) {
    std::uint64_t bits = 0;
    for (std::size_t b = 0; b < 8; ++b) bits |= static_cast<std::uint64_t>(buf[i * 8 + b]) << (8 * b);
    values[i] = std::bit_cast<double>(bits);
  }
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw FormatError("cannot open '" + path.string() + "' for writing");
  return out;
}

std::ifstream open_in(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw FormatError("cannot open '" + path.string() + "'");
  return in;
}

}  // namespace

std::string format_double(double v) {
  std::array<char, 64> buf;
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), v);
  return std::string(buf.data(), res.ptr);
}

double parse_double(const std::string& text) {
  double v = 0.0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw FormatError("not a number: '" + text + "'");
  return v;
}

void write_frames(std::ostream& out, const Matrix& frames) {
  out.write(kFrameMagic.data(), kFrameMagic.size());
  put_le<std::uint16_t>(out, kFrameFileVersion);
  put_le<std::uint64_t>(out, frames.rows());
  put_le<std::uint32_t>(out, static_cast<std::uint32_t>(frames.cols()));
  put_le<std::uint8_t>(out, kDtypeF64);
  put_f64s(out, frames.data());
  if (!out) throw FormatError("write failed");
}

Matrix read_frames(std::istream& in) {
  std::array<char, 4> magic{};
  if (!in.read(magic.data(), magic.size()) || magic != kFrameMagic)
    throw FormatError("not a frame file (bad magic)");
  const auto version = get_le<std::uint16_t>(in, "version");
  if (version != kFrameFileVersion)
    throw FormatError("unsupported frame file version " + std::to_string(version));
  const auto n_frames = get_le<std::uint64_t>(in, "frame count");
  const auto n_dims = get_le<std::uint32_t>(in, "dimension");
  const auto dtype = get_le<std::uint8_t>(in, "dtype");
  if (dtype != kDtypeF64) throw FormatError("unsupported dtype tag " + std::to_string(dtype));
  Matrix m(n_frames, n_dims);
  get_f64s(in, m.data(), "frames");
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after payload");
  return m;
}

void write_frame_file(const std::filesystem::path& path, const Matrix& frames) {
  auto out = open_out(path);
  write_frames(out, frames);
}

Matrix read_frame_file(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_frames(in);
}

void write_frame_csv(const std::filesystem::path& path, const Matrix& frames) {
  auto out = open_out(path);
  for (std::size_t r = 0; r < frames.rows(); ++r) {
    const auto row = frames.row(r);
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out << ',';
      out << format_double(row[c]);
    }
    out << '\n';
  }
}

Matrix read_frame_csv(const std::filesystem::path& path) {
  auto in = open_in(path);
  std::vector<double> data;
  std::size_t rows = 0;
  std::size_t cols = 0;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::size_t count = 0;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      data.push_back(parse_double(cell));
      ++count;
    }
    if (rows == 0) cols = count;
    if (count != cols)
      throw FormatError("row " + std::to_string(rows + 1) + " has " + std::to_string(count) +
                        " values, expected " + std::to_string(cols));
    ++rows;
  }
  return Matrix(rows, cols, std::move(data));
}

// Model files.

namespace {

std::string format_hparams(const Hyperparams& hp) {
  std::ostringstream s;
  s << "lr=" << format_double(hp.lr) << " m=" << format_double(hp.momentum)
    << " b=" << hp.batch_size << " s=" << hp.seed
    << " d=" << (hp.mask_d ? format_double(*hp.mask_d) : std::string("NA"))
    << " max_epochs=" << hp.max_epochs << " patience=" << hp.patience
    << " decoder=" << to_string(hp.dec_act);
  return s.str();
}

std::uint64_t parse_u64(const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw FormatError("not an unsigned integer: '" + text + "'");
  return v;
}

Hyperparams parse_hparams(const std::string& text) {
  Hyperparams hp;
  std::istringstream s(text);
  std::string item;
  while (s >> item) {
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw FormatError("bad hyperparameter item '" + item + "'");
    const std::string key = item.substr(0, eq);
    const std::string value = item.substr(eq + 1);
    if (key == "lr") hp.lr = parse_double(value);
    else if (key == "m") hp.momentum = parse_double(value);
    else if (key == "b") hp.batch_size = parse_u64(value);
    else if (key == "s") hp.seed = parse_u64(value);
    else if (key == "d") hp.mask_d = value == "NA" ? std::nullopt : std::optional(parse_double(value));
    else if (key == "max_epochs") hp.max_epochs = parse_u64(value);
    else if (key == "patience") hp.patience = parse_u64(value);
    else if (key == "decoder") hp.dec_act = parse_activation(value);
    else throw FormatError("unknown hyperparameter '" + key + "'");
  }
  return hp;
}

std::vector<std::string> split_words(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream s(text);
  std::string w;
  while (s >> w) out.push_back(w);
  return out;
}

}  // namespace

void write_model(std::ostream& out, const Model& model) {
  const Network& net = model.net;
  if (net.empty()) throw DimensionError("cannot save an empty network");
  out << kModelMagic << '\n';
  out << "dims:";
  for (auto d : net.dims()) out << ' ' << d;
  out << "\nenc_activations:";
  for (const auto& l : net.layers()) out << ' ' << to_string(l.enc_act);
  out << "\ndec_activations:";
  for (const auto& l : net.layers()) out << ' ' << to_string(l.dec_act);
  out << "\ngcn_mean: " << format_double(model.gcn.mean);
  out << "\ngcn_scale: " << format_double(model.gcn.scale);
  out << "\ngcn_range: " << format_double(model.gcn.range);
  out << "\nwarp_kind: " << to_string(model.warp_kind);
  out << "\nwarp_sample_rate: " << format_double(model.sample_rate);
  out << "\nrng: " << SeededRng::kAlgorithm;
  for (std::size_t k = 0; k < model.layer_hparams.size(); ++k)
    out << "\nlayer_hparams." << k << ": " << format_hparams(model.layer_hparams[k]);
  if (model.finetune_hparams) out << "\nfinetune_hparams: " << format_hparams(*model.finetune_hparams);
  out << "\nend\n";
  for (const auto& l : net.layers()) {
    put_f64s(out, l.w.data());
    put_f64s(out, l.b);
    put_f64s(out, l.b_dec);
  }
  if (!out) throw FormatError("write failed");
}

Model read_model(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line != kModelMagic) throw FormatError("not a model file (bad magic)");
  std::map<std::string, std::string> header;
  bool closed = false;
  while (std::getline(in, line)) {
    if (line == "end") {
      closed = true;
      break;
    }
    const auto colon = line.find(':');
    if (colon == std::string::npos) throw FormatError("bad model header line '" + line + "'");
    std::string value = line.substr(colon + 1);
    if (!value.empty() && value.front() == ' ') value.erase(0, 1);
    header[line.substr(0, colon)] = value;
  }
  if (!closed) throw FormatError("model header not terminated");

  auto field = [&header](const std::string& key) -> const std::string& {
    const auto it = header.find(key);
    if (it == header.end()) throw FormatError("model header lacks '" + key + "'");
    return it->second;
  };

  std::vector<std::size_t> dims;
  for (const auto& w : split_words(field("dims"))) dims.push_back(parse_u64(w));
  if (dims.size() < 2) throw FormatError("model must have at least one layer");
  const auto enc = split_words(field("enc_activations"));
  const auto dec = split_words(field("dec_activations"));
  if (enc.size() != dims.size() - 1 || dec.size() != dims.size() - 1)
    throw FormatError("activation lists do not match layer count");
  if (field("rng") != SeededRng::kAlgorithm)
    throw FormatError("model was produced with generator '" + field("rng") + "'");

  Model model;
  model.gcn = {parse_double(field("gcn_mean")), parse_double(field("gcn_scale")),
               parse_double(field("gcn_range"))};
  model.warp_kind = parse_warp_kind(field("warp_kind"));
  model.sample_rate = parse_double(field("warp_sample_rate"));
  for (std::size_t k = 0;; ++k) {
    const auto it = header.find("layer_hparams." + std::to_string(k));
    if (it == header.end()) break;
    model.layer_hparams.push_back(parse_hparams(it->second));
  }
  if (const auto it = header.find("finetune_hparams"); it != header.end())
    model.finetune_hparams = parse_hparams(it->second);

  std::vector<LayerParams> layers;
  for (std::size_t k = 0; k + 1 < dims.size(); ++k) {
    LayerParams l(dims[k], dims[k + 1], parse_activation(enc[k]), parse_activation(dec[k]));
    get_f64s(in, l.w.data(), "layer weights");
    get_f64s(in, l.b, "encoder bias");
    get_f64s(in, l.b_dec, "decoder bias");
    layers.push_back(std::move(l));
  }
  if (in.peek() != std::char_traits<char>::eof()) throw FormatError("trailing bytes after model payload");
  model.net = Network(std::move(layers));
  return model;
}

void save_model(const std::filesystem::path& path, const Model& model) {
  auto out = open_out(path);
  write_model(out, model);
}

Model load_model(const std::filesystem::path& path) {
  auto in = open_in(path);
  return read_model(in);
}

}  // namespace sbx
