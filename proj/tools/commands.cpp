#include "commands.hpp"

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "sbx/sbx.hpp"

namespace sbx::cli {

namespace {

template <typename Body>
int guarded(std::ostream& err, Body&& body) {
  try {
    return body();
  } catch (const FormatError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DimensionError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const DomainError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

std::ofstream open_text(const Path& path) {
  std::ofstream f(path, std::ios::trunc);
  if (!f) throw FormatError("cannot open '" + path.string() + "' for writing");
  return f;
}

Matrix read_optional(const std::optional<Path>& path) {
  return path ? read_frame_file(*path) : Matrix();
}

void write_finetune_report(std::ostream& csv, const TrainReport& r) {
  csv << "epoch,train_loss,valid_loss,best\n";
  for (const auto& e : r.epoch_losses)
    csv << e.epoch << ',' << format_double(e.train_loss) << ',' << format_double(e.valid_loss)
        << ',' << (e.epoch == r.best_epoch ? 1 : 0) << '\n';
}

// Seeds used when --seed overrides the config.
constexpr std::uint64_t kLayerSeedStream = 10;
constexpr std::uint64_t kFinetuneSeedStream = 99;

}  // namespace

int cmd_pretrain(const PretrainOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    TrainingConfig cfg = training_config(load_config(opt.config));
    if (opt.seed)
      for (std::size_t k = 0; k < cfg.layers.size(); ++k)
        cfg.layers[k].seed = SeededRng::derive(*opt.seed, kLayerSeedStream + k).next_u64();
    const Matrix train = read_frame_file(opt.train);
    const Matrix valid = read_optional(opt.valid);
    const PretrainOutcome result = pretrain_model(cfg, train, valid);
    save_model(opt.out, result.model);
    if (opt.report) {
      auto csv = open_text(*opt.report);
      csv << "layer,epoch,train_loss,valid_loss\n";
      for (std::size_t k = 0; k < result.reports.size(); ++k)
        for (const auto& e : result.reports[k].epoch_losses)
          csv << k << ',' << e.epoch << ',' << format_double(e.train_loss) << ','
              << format_double(e.valid_loss) << '\n';
    }
    for (std::size_t k = 0; k < result.reports.size(); ++k) {
      const auto& r = result.reports[k];
      out << "layer " << k << " (" << cfg.dims[k] << "-" << cfg.dims[k + 1]
          << "): epochs=" << r.stopped_epoch << " best_epoch=" << r.best_epoch
          << " best_valid_loss=" << format_double(r.best_valid_loss) << '\n';
    }
    return kExitOk;
  });
}

int cmd_finetune(const FinetuneOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    Hyperparams hp = finetune_hparams(load_config(opt.config));
    if (opt.seed) hp.seed = SeededRng::derive(*opt.seed, kFinetuneSeedStream).next_u64();
    Model model = load_model(opt.model);
    const Matrix train = read_frame_file(opt.train);
    const Matrix valid = read_optional(opt.valid);
    const TrainReport report = finetune_model(model, hp, train, valid);
    save_model(opt.out, model);
    if (opt.report) {
      auto csv = open_text(*opt.report);
      write_finetune_report(csv, report);
    }
    out << "finetune: epochs=" << report.stopped_epoch << " best_epoch=" << report.best_epoch
        << " best_valid_loss=" << format_double(report.best_valid_loss) << '\n';
    return kExitOk;
  });
}

int cmd_encode(const CodecOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Model model = load_model(opt.model);
    const Matrix features = extract_features(model, read_frame_file(opt.in));
    write_frame_file(opt.out, features);
    out << "encoded " << features.rows() << " frames to " << features.cols() << " dims\n";
    return kExitOk;
  });
}

int cmd_reconstruct(const CodecOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Model model = load_model(opt.model);
    const Matrix rec = reconstruct_logspec(model, read_frame_file(opt.in));
    write_frame_file(opt.out, rec);
    out << "reconstructed " << rec.rows() << " frames\n";
    return kExitOk;
  });
}

int cmd_warp(const CodecOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Model model = load_model(opt.model);
    const Matrix logspec = warp_frames(model, read_frame_file(opt.in));
    write_frame_file(opt.out, logspec);
    out << "warped " << logspec.rows() << " frames\n";
    return kExitOk;
  });
}

int cmd_eval(const EvalOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Matrix a = read_frame_file(opt.originals);
    const Matrix b = read_frame_file(opt.reconstructions);
    if (a.rows() != b.rows() || a.cols() != b.cols())
      throw DimensionError("originals " + a.shape() + " and reconstructions " + b.shape() +
                           " differ in shape");
    const CorpusLsd lsd = corpus_lsd(a, b, opt.domain);
    double mse_sum = 0.0;
    std::vector<double> mse(a.rows());
    for (std::size_t r = 0; r < a.rows(); ++r) {
      mse[r] = loss_mse(a.row(r), b.row(r));
      mse_sum += mse[r];
    }
    const double mean_mse = mse_sum / static_cast<double>(a.rows());
    if (opt.report) {
      auto csv = open_text(*opt.report);
      csv << "frame,lsd_db,mse\n";
      for (std::size_t r = 0; r < a.rows(); ++r)
        csv << r << ',' << format_double(lsd.per_frame[r]) << ',' << format_double(mse[r]) << '\n';
    }
    out << "frames=" << a.rows() << " mean_lsd_db=" << format_double(lsd.mean)
        << " mean_mse=" << format_double(mean_mse) << '\n';
    return kExitOk;
  });
}

namespace {

ExperimentConfig load_experiment(const ExperimentOptions& opt) {
  ExperimentConfig cfg = experiment_config(load_config(opt.config));
  if (opt.seed) cfg.seeds = {*opt.seed};
  return cfg;
}

template <typename Writer>
void emit_csv(const std::optional<Path>& path, std::ostream& out, Writer&& write) {
  if (path) {
    auto f = open_text(*path);
    write(f);
  } else {
    write(out);
  }
}

}  // namespace

int cmd_experiment_depth(const ExperimentOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_experiment(opt);
    const auto rows = run_depth_experiment(cfg, read_frame_file(opt.data));
    emit_csv(opt.out, out, [&rows](std::ostream& csv) {
      csv << "depth,seed,train_mse,valid_mse,test_mse\n";
      for (const auto& r : rows)
        csv << r.depth << ',' << r.seed << ',' << format_double(r.train_mse) << ','
            << format_double(r.valid_mse) << ',' << format_double(r.test_mse) << '\n';
    });
    return kExitOk;
  });
}

int cmd_experiment_baseline(const ExperimentOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const ExperimentConfig cfg = load_experiment(opt);
    const BaselineResult result = run_baseline_experiment(cfg, read_frame_file(opt.data));
    emit_csv(opt.out, out, [&result](std::ostream& csv) {
      csv << "method,k,seed,mean_lsd_db,mean_mse\n";
      for (const auto& r : result.rows)
        csv << r.method << ',' << r.k << ',' << r.seed << ',' << format_double(r.mean_lsd_db)
            << ',' << format_double(r.mean_mse) << '\n';
    });
    if (opt.dump_dir) {
      std::filesystem::create_directories(*opt.dump_dir);
      write_frame_file(*opt.dump_dir / "test_logspec.sbfm", result.test_logspec);
      write_frame_file(*opt.dump_dir / "dct_reconstruction.sbfm", result.dct_reconstruction);
      for (std::size_t i = 0; i < cfg.seeds.size(); ++i)
        write_frame_file(*opt.dump_dir / ("ae_reconstruction_seed" + std::to_string(cfg.seeds[i]) + ".sbfm"),
                         result.ae_reconstructions[i]);
    }
    return kExitOk;
  });
}

int cmd_synth(const SynthOptions& opt, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    const Matrix frames = make_synthetic_corpus(opt.seed, opt.frames, opt.bins);
    write_frame_file(opt.out, frames);
    out << "wrote " << frames.rows() << "x" << frames.cols() << " synthetic spectra\n";
    return kExitOk;
  });
}

int run(int argc, char** argv) {
  CLI::App app{"Tied-weight deep denoising auto-encoders for spectral bottleneck features"};
  app.require_subcommand(1);

  PretrainOptions pre;
  std::string pre_valid, pre_report;
  std::uint64_t pre_seed = 0;
  auto* pretrain = app.add_subcommand("pretrain", "Greedy layer-wise pretraining");
  pretrain->add_option("--config", pre.config, "Config with [data] and [layer] blocks")->required();
  pretrain->add_option("--train", pre.train, "Training spectra (.sbfm)")->required();
  auto* pre_valid_opt = pretrain->add_option("--valid", pre_valid, "Validation spectra (.sbfm)");
  pretrain->add_option("--out", pre.out, "Output model")->required();
  auto* pre_report_opt = pretrain->add_option("--report", pre_report, "Per-epoch loss CSV");
  auto* pre_seed_opt = pretrain->add_option("--seed", pre_seed, "Override layer seeds");

  FinetuneOptions ft;
  std::string ft_valid, ft_report;
  std::uint64_t ft_seed = 0;
  auto* finetune = app.add_subcommand("finetune", "Whole-network fine-tuning");
  finetune->add_option("--config", ft.config, "Config with a [finetune] block")->required();
  finetune->add_option("--model", ft.model, "Input model")->required();
  finetune->add_option("--train", ft.train, "Training spectra (.sbfm)")->required();
  auto* ft_valid_opt = finetune->add_option("--valid", ft_valid, "Validation spectra (.sbfm)");
  finetune->add_option("--out", ft.out, "Output model")->required();
  auto* ft_report_opt = finetune->add_option("--report", ft_report, "Per-epoch loss CSV");
  auto* ft_seed_opt = finetune->add_option("--seed", ft_seed, "Override the shuffling seed");

  CodecOptions codec;
  auto add_codec = [&app, &codec](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--model", codec.model, "Model file")->required();
    sub->add_option("--in", codec.in, "Input spectra (.sbfm)")->required();
    sub->add_option("--out", codec.out, "Output frames (.sbfm)")->required();
    return sub;
  };
  auto* encode = add_codec("encode", "Extract bottleneck features");
  auto* reconstruct = add_codec("reconstruct", "Reconstruct warped log spectra");
  auto* warp = add_codec("warp", "Write the warped log spectra a model sees");

  EvalOptions ev;
  std::string ev_report, ev_domain = "log";
  auto* eval = app.add_subcommand("eval", "Log-spectral distortion and MSE between two frame files");
  eval->add_option("originals", ev.originals, "Original frames")->required();
  eval->add_option("reconstructions", ev.reconstructions, "Reconstructed frames")->required();
  auto* ev_report_opt = eval->add_option("--report", ev_report, "Per-frame CSV");
  eval->add_option("--domain", ev_domain, "log (natural-log power) or linear (power)")
      ->check(CLI::IsMember({"log", "linear"}));

  ExperimentOptions ex;
  std::string ex_out, ex_dump;
  std::uint64_t ex_seed = 0;
  CLI::Option* ex_out_opt = nullptr;
  CLI::Option* ex_dump_opt = nullptr;
  CLI::Option* ex_seed_opt = nullptr;
  auto add_experiment = [&](const char* name, const char* help) {
    auto* sub = app.add_subcommand(name, help);
    sub->add_option("--config", ex.config, "Experiment config")->required();
    sub->add_option("--data", ex.data, "Spectra (.sbfm)")->required();
    ex_out_opt = sub->add_option("--out", ex_out, "Output CSV (default stdout)");
    ex_seed_opt = sub->add_option("--seed", ex_seed, "Run a single seed");
    return sub;
  };
  auto* exp_depth = add_experiment("exp-depth", "Reconstruction MSE versus depth");
  CLI::Option* depth_out = ex_out_opt;
  CLI::Option* depth_seed = ex_seed_opt;
  auto* exp_baseline = add_experiment("exp-baseline", "Auto-encoder versus truncated DCT cepstra");
  ex_dump_opt = exp_baseline->add_option("--dump-dir", ex_dump, "Write held-out frames and reconstructions");

  SynthOptions sy;
  auto* synth = app.add_subcommand("synth-data", "Generate a synthetic spectral corpus");
  synth->add_option("--seed", sy.seed, "Generator seed");
  synth->add_option("--frames", sy.frames, "Number of frames");
  synth->add_option("--bins", sy.bins, "Bins per frame");
  synth->add_option("--out", sy.out, "Output frames (.sbfm)")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  auto& out = std::cout;
  auto& err = std::cerr;
  if (pretrain->parsed()) {
    if (*pre_valid_opt) pre.valid = pre_valid;
    if (*pre_report_opt) pre.report = pre_report;
    if (*pre_seed_opt) pre.seed = pre_seed;
    return cmd_pretrain(pre, out, err);
  }
  if (finetune->parsed()) {
    if (*ft_valid_opt) ft.valid = ft_valid;
    if (*ft_report_opt) ft.report = ft_report;
    if (*ft_seed_opt) ft.seed = ft_seed;
    return cmd_finetune(ft, out, err);
  }
  if (encode->parsed()) return cmd_encode(codec, out, err);
  if (reconstruct->parsed()) return cmd_reconstruct(codec, out, err);
  if (warp->parsed()) return cmd_warp(codec, out, err);
  if (eval->parsed()) {
    if (*ev_report_opt) ev.report = ev_report;
    ev.domain = ev_domain == "linear" ? SpectrumDomain::Linear : SpectrumDomain::Log;
    return cmd_eval(ev, out, err);
  }
  if (exp_depth->parsed()) {
    if (*depth_out) ex.out = ex_out;
    if (*depth_seed) ex.seed = ex_seed;
    return cmd_experiment_depth(ex, out, err);
  }
  if (exp_baseline->parsed()) {
    if (*ex_out_opt) ex.out = ex_out;
    if (*ex_seed_opt) ex.seed = ex_seed;
    if (*ex_dump_opt) ex.dump_dir = ex_dump;
    return cmd_experiment_baseline(ex, out, err);
  }
  if (synth->parsed()) return cmd_synth(sy, out, err);
  return kExitUsage;
}

}  // namespace sbx::cli
