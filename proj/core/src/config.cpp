#include "sbx/config.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "sbx/error.hpp"
#include "sbx/io.hpp"

namespace sbx {

namespace {

std::string trim(const std::string& s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::string where(const ConfigSection& s) {
  return "[" + s.name + "] (line " + std::to_string(s.line) + ")";
}

std::uint64_t to_u64(const ConfigSection& s, const std::string& key, const std::string& text) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  const auto res = std::from_chars(text.data(), end, v);
  if (res.ec != std::errc{} || res.ptr != end)
    throw FormatError(where(s) + ": '" + key + "' expects an unsigned integer, got '" + text + "'");
  return v;
}

double to_double(const ConfigSection& s, const std::string& key, const std::string& text) {
  try {
    return parse_double(text);
  } catch (const FormatError&) {
    throw FormatError(where(s) + ": '" + key + "' expects a number, got '" + text + "'");
  }
}

bool is_absent(const std::string& v) {
  std::string lower = v;
  std::transform(lower.begin(), lower.end(), lower.begin(), [](unsigned char c) { return std::tolower(c); });
  return lower == "n.a" || lower == "n.a." || lower == "na" || lower == "none";
}

std::vector<std::string> split_list(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) out.push_back(trim(item));
  return out;
}

void reject_unknown(const ConfigSection& s, const std::set<std::string>& allowed) {
  for (const auto& [key, value] : s.values)
    if (!allowed.contains(key)) throw FormatError(where(s) + ": unknown key '" + key + "'");
}

const std::set<std::string> kHparamKeys{"lr", "m", "b", "s", "d", "max_epochs", "patience", "decoder"};

Hyperparams read_hparams(const ConfigSection& s, Hyperparams hp = {}) {
  for (const auto& [key, value] : s.values) {
    if (key == "lr") hp.lr = to_double(s, key, value);
    else if (key == "m") hp.momentum = to_double(s, key, value);
    else if (key == "b") hp.batch_size = to_u64(s, key, value);
    else if (key == "s") hp.seed = to_u64(s, key, value);
    else if (key == "d") hp.mask_d = is_absent(value) ? std::nullopt : std::optional(to_double(s, key, value));
    else if (key == "max_epochs") hp.max_epochs = to_u64(s, key, value);
    else if (key == "patience") hp.patience = to_u64(s, key, value);
    else if (key == "decoder") hp.dec_act = parse_activation(value);
  }
  try {
    hp.validate();
  } catch (const DomainError& e) {
    throw FormatError(where(s) + ": " + e.what());
  }
  return hp;
}

DataConfig read_data(const ConfigSection& s) {
  reject_unknown(s, {"warp", "sample_rate", "gcn_peak"});
  DataConfig d;
  for (const auto& [key, value] : s.values) {
    if (key == "warp") d.warp = parse_warp_kind(value);
    else if (key == "sample_rate") d.sample_rate = to_double(s, key, value);
    else if (key == "gcn_peak") d.gcn_peak = is_absent(value) ? std::nullopt : std::optional(to_double(s, key, value));
  }
  return d;
}

std::vector<std::size_t> to_sizes(const ConfigSection& s, const std::string& key,
                                  const std::string& text, char sep) {
  std::vector<std::size_t> out;
  for (const auto& item : split_list(text, sep)) out.push_back(to_u64(s, key, item));
  return out;
}

}  // namespace

std::vector<ConfigSection> parse_config(std::istream& in) {
  std::vector<ConfigSection> sections;
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw FormatError("line " + std::to_string(line_no) + ": unterminated section header");
      sections.push_back({trim(line.substr(1, line.size() - 2)), {}, line_no});
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw FormatError("line " + std::to_string(line_no) + ": expected 'key = value'");
    if (sections.empty()) throw FormatError("line " + std::to_string(line_no) + ": key outside any section");
    const std::string key = trim(line.substr(0, eq));
    if (!sections.back().values.emplace(key, trim(line.substr(eq + 1))).second)
      throw FormatError("line " + std::to_string(line_no) + ": duplicate key '" + key + "'");
  }
  return sections;
}

std::vector<ConfigSection> load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open config '" + path.string() + "'");
  return parse_config(in);
}

TrainingConfig training_config(const std::vector<ConfigSection>& sections) {
  TrainingConfig cfg;
  for (const auto& s : sections) {
    if (s.name == "data") {
      cfg.data = read_data(s);
    } else if (s.name == "layer") {
      auto allowed = kHparamKeys;
      allowed.insert("dims");
      reject_unknown(s, allowed);
      const auto it = s.values.find("dims");
      if (it == s.values.end()) throw FormatError(where(s) + ": missing 'dims'");
      const auto dims = to_sizes(s, "dims", it->second, '-');
      if (dims.size() != 2 || dims[0] == 0 || dims[1] == 0)
        throw FormatError(where(s) + ": dims must look like 'in-out'");
      if (cfg.dims.empty()) cfg.dims.push_back(dims[0]);
      if (cfg.dims.back() != dims[0])
        throw FormatError(where(s) + ": layer input " + std::to_string(dims[0]) +
                          " does not follow previous output " + std::to_string(cfg.dims.back()));
      cfg.dims.push_back(dims[1]);
      cfg.layers.push_back(read_hparams(s));
    } else if (s.name == "finetune") {
      reject_unknown(s, kHparamKeys);
      Hyperparams hp = read_hparams(s);
      if (hp.mask_d) throw FormatError(where(s) + ": fine-tuning uses clean inputs; set d = N.A");
      cfg.finetune = hp;
    } else {
      throw FormatError("unknown section [" + s.name + "]");
    }
  }
  if (cfg.layers.empty()) throw FormatError("config defines no [layer] blocks");
  return cfg;
}

Hyperparams finetune_hparams(const std::vector<ConfigSection>& sections) {
  for (const auto& s : sections) {
    if (s.name != "finetune") continue;
    reject_unknown(s, kHparamKeys);
    Hyperparams hp = read_hparams(s);
    if (hp.mask_d) throw FormatError(where(s) + ": fine-tuning uses clean inputs; set d = N.A");
    return hp;
  }
  throw FormatError("config has no [finetune] block");
}

ExperimentConfig experiment_config(const std::vector<ConfigSection>& sections) {
  ExperimentConfig cfg;
  for (const auto& s : sections) {
    if (s.name == "data") {
      cfg.data = read_data(s);
    } else if (s.name == "experiment") {
      reject_unknown(s, {"seeds", "bottleneck", "hidden", "depths", "k", "split"});
      for (const auto& [key, value] : s.values) {
        if (key == "seeds") {
          cfg.seeds.clear();
          for (const auto& item : split_list(value, ',')) cfg.seeds.push_back(to_u64(s, key, item));
        } else if (key == "bottleneck") {
          cfg.bottleneck = to_u64(s, key, value);
        } else if (key == "hidden") {
          cfg.hidden = is_absent(value) ? std::vector<std::size_t>{} : to_sizes(s, key, value, ',');
        } else if (key == "depths") {
          cfg.depths = to_sizes(s, key, value, ',');
        } else if (key == "k") {
          cfg.baseline_order = to_u64(s, key, value);
        } else if (key == "split") {
          const auto parts = split_list(value, ',');
          if (parts.size() != 3) throw FormatError(where(s) + ": split needs train,valid,test fractions");
          cfg.train_fraction = to_double(s, key, parts[0]);
          cfg.valid_fraction = to_double(s, key, parts[1]);
          const double test = to_double(s, key, parts[2]);
          if (cfg.train_fraction <= 0 || cfg.valid_fraction < 0 || test <= 0 ||
              std::abs(cfg.train_fraction + cfg.valid_fraction + test - 1.0) > 1e-9)
            throw FormatError(where(s) + ": split fractions must be positive and sum to 1");
        }
      }
    } else if (s.name == "pretrain") {
      reject_unknown(s, kHparamKeys);
      cfg.pretrain = read_hparams(s);
    } else if (s.name == "finetune") {
      reject_unknown(s, kHparamKeys);
      cfg.finetune = read_hparams(s);
      if (cfg.finetune.mask_d) throw FormatError(where(s) + ": fine-tuning uses clean inputs; set d = N.A");
    } else {
      throw FormatError("unknown section [" + s.name + "]");
    }
  }
  if (cfg.seeds.empty()) throw FormatError("[experiment]: at least one seed required");
  if (cfg.bottleneck == 0) throw FormatError("[experiment]: bottleneck must be positive");
  for (auto d : cfg.depths)
    if (d < 1 || d > cfg.hidden.size() + 1)
      throw FormatError("[experiment]: depth " + std::to_string(d) + " needs " +
                        std::to_string(d - 1) + " hidden widths");
  return cfg;
}

}  // namespace sbx
