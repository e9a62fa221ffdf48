#include <gtest/gtest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "commands.hpp"
#include "sbx/sbx.hpp"

namespace sbx::cli {
namespace {

namespace fs = std::filesystem;

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::string> lines(const std::string& text) {
  std::vector<std::string> out;
  std::istringstream in(text);
  for (std::string line; std::getline(in, line);)
    if (!line.empty()) out.push_back(line);
  return out;
}

std::vector<std::string> fields(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  for (std::string f; std::getline(in, f, ',');) out.push_back(f);
  return out;
}

int run_binary(const std::string& args) {
  const std::string cmd = std::string(SBX_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

class CliTest : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("sbx_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
    fs::remove_all(dir_);
    fs::create_directories(dir_);
    write_frame_file(path("train.sbfm"), make_synthetic_corpus(1, 120, 16));
    write_frame_file(path("valid.sbfm"), make_synthetic_corpus(2, 30, 16));
    write_text("stack.cfg",
               "[data]\nwarp = bark\nsample_rate = 16000\n"
               "[layer]\ndims = 16-12\nlr = 0.05\nm = 0.9\nb = 10\ns = 1\nd = 0.1\nmax_epochs = 5\n"
               "[layer]\ndims = 12-8\nlr = 0.05\nm = 0.9\nb = 10\ns = 2\nd = 0.1\nmax_epochs = 5\n"
               "[layer]\ndims = 8-4\nlr = 0.05\nm = 0.9\nb = 10\ns = 3\nd = 0.1\nmax_epochs = 5\n"
               "[finetune]\nlr = 0.02\nm = 0.9\nb = 10\ns = 4\nd = N.A\nmax_epochs = 8\npatience = 3\n");
    write_text("experiment.cfg",
               "[data]\nwarp = bark\n"
               "[experiment]\nseeds = 1,2,3\nbottleneck = 4\nhidden = 12,8\nk = 4\n"
               "[pretrain]\nlr = 0.05\nm = 0.9\nb = 10\nd = 0.1\nmax_epochs = 3\n"
               "[finetune]\nlr = 0.02\nm = 0.9\nb = 10\nmax_epochs = 3\n");
  }
  void TearDown() override { fs::remove_all(dir_); }

  fs::path path(const std::string& name) const { return dir_ / name; }
  void write_text(const std::string& name, const std::string& text) const {
    std::ofstream(path(name)) << text;
  }

  int pretrain(const std::string& out_name, std::optional<Path> report = std::nullopt) {
    PretrainOptions opt{path("stack.cfg"), path("train.sbfm"), path("valid.sbfm"), path(out_name), report, {}};
    return cmd_pretrain(opt, out_, err_);
  }

  int finetune(const std::string& cfg, const std::string& in, const std::string& out_name,
               std::optional<Path> report = std::nullopt) {
    FinetuneOptions opt{path(cfg), path(in), path("train.sbfm"), path("valid.sbfm"), path(out_name), report, {}};
    return cmd_finetune(opt, out_, err_);
  }

  fs::path dir_;
  std::ostringstream out_, err_;
};

TEST_F(CliTest, PretrainBuildsConfiguredStack) {
  ASSERT_EQ(pretrain("model.sbx", path("pre.csv")), kExitOk) << err_.str();
  const Model m = load_model(path("model.sbx"));
  EXPECT_EQ(m.net.depth(), 3u);
  EXPECT_EQ(m.net.dims(), (std::vector<std::size_t>{16, 12, 8, 4}));
  EXPECT_EQ(m.warp_kind, WarpKind::Bark);
  EXPECT_EQ(m.sample_rate, 16000.0);
  EXPECT_EQ(m.layer_hparams.size(), 3u);
  const auto rows = lines(slurp(path("pre.csv")));
  EXPECT_EQ(rows.front(), "layer,epoch,train_loss,valid_loss");
  EXPECT_EQ(rows.size(), 1u + 3u * 6u);  // epoch 0 plus five updates per layer
}

TEST_F(CliTest, PretrainIsByteReproducible) {
  ASSERT_EQ(pretrain("a.sbx"), kExitOk);
  ASSERT_EQ(pretrain("b.sbx"), kExitOk);
  EXPECT_EQ(slurp(path("a.sbx")), slurp(path("b.sbx")));
}

TEST_F(CliTest, PretrainRejectsEmptyTrainingSet) {
  write_frame_file(path("empty.sbfm"), Matrix(0, 16));
  PretrainOptions opt{path("stack.cfg"), path("empty.sbfm"), std::nullopt, path("m.sbx"), std::nullopt, {}};
  EXPECT_EQ(cmd_pretrain(opt, out_, err_), kExitUsage);
  EXPECT_NE(err_.str().find("empty dataset"), std::string::npos);
}

TEST_F(CliTest, PretrainRejectsWidthMismatch) {
  write_frame_file(path("wide.sbfm"), make_synthetic_corpus(1, 20, 17));
  PretrainOptions opt{path("stack.cfg"), path("wide.sbfm"), std::nullopt, path("m.sbx"), std::nullopt, {}};
  EXPECT_EQ(cmd_pretrain(opt, out_, err_), kExitUsage);
}

TEST_F(CliTest, FinetuneWithZeroEpochsKeepsModelBytes) {
  ASSERT_EQ(pretrain("pre.sbx"), kExitOk);
  write_text("zero.cfg", "[finetune]\nlr = 0.01\nmax_epochs = 0\n");
  ASSERT_EQ(finetune("zero.cfg", "pre.sbx", "ft.sbx"), kExitOk) << err_.str();
  EXPECT_EQ(slurp(path("pre.sbx")), slurp(path("ft.sbx")));
}

TEST_F(CliTest, FinetuneReportMarksMinimum) {
  ASSERT_EQ(pretrain("pre.sbx"), kExitOk);
  ASSERT_EQ(finetune("stack.cfg", "pre.sbx", "ft.sbx", path("ft.csv")), kExitOk) << err_.str();
  const auto rows = lines(slurp(path("ft.csv")));
  ASSERT_GE(rows.size(), 2u);
  EXPECT_EQ(rows.front(), "epoch,train_loss,valid_loss,best");
  double min_valid = std::numeric_limits<double>::infinity(), best_valid = 0.0;
  int best_rows = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    ASSERT_EQ(f.size(), 4u);
    const double v = parse_double(f[2]);
    min_valid = std::min(min_valid, v);
    if (f[3] == "1") {
      ++best_rows;
      best_valid = v;
    }
  }
  EXPECT_EQ(best_rows, 1);
  EXPECT_EQ(best_valid, min_valid);
  const Model m = load_model(path("ft.sbx"));
  ASSERT_TRUE(m.finetune_hparams.has_value());
  EXPECT_EQ(m.finetune_hparams->max_epochs, 8u);
}

TEST_F(CliTest, EncodeAndReconstruct) {
  ASSERT_EQ(pretrain("m.sbx"), kExitOk);
  ASSERT_EQ(cmd_encode({path("m.sbx"), path("valid.sbfm"), path("codes.sbfm")}, out_, err_), kExitOk);
  const Matrix codes = read_frame_file(path("codes.sbfm"));
  EXPECT_EQ(codes.rows(), 30u);
  EXPECT_EQ(codes.cols(), 4u);
  for (double v : codes.data()) EXPECT_LT(std::abs(v), 1.0);

  ASSERT_EQ(cmd_reconstruct({path("m.sbx"), path("valid.sbfm"), path("rec.sbfm")}, out_, err_), kExitOk);
  ASSERT_EQ(cmd_warp({path("m.sbx"), path("valid.sbfm"), path("warped.sbfm")}, out_, err_), kExitOk);
  const Matrix rec = read_frame_file(path("rec.sbfm"));
  EXPECT_EQ(rec.cols(), 16u);
  const double lsd =
      corpus_lsd(read_frame_file(path("warped.sbfm")), rec, SpectrumDomain::Log).mean;
  EXPECT_TRUE(std::isfinite(lsd));
  EXPECT_GT(lsd, 0.0);
}

TEST_F(CliTest, EvalIdenticalAndScaled) {
  const Matrix a = make_synthetic_corpus(5, 10, 16);
  Matrix b = a;
  for (double& v : b.data()) v *= 10.0;
  write_frame_file(path("a.sbfm"), a);
  write_frame_file(path("b.sbfm"), b);

  EvalOptions same{path("a.sbfm"), path("a.sbfm"), path("same.csv"), SpectrumDomain::Linear};
  ASSERT_EQ(cmd_eval(same, out_, err_), kExitOk);
  EXPECT_NE(out_.str().find("mean_lsd_db=0 "), std::string::npos) << out_.str();
  const auto rows = lines(slurp(path("same.csv")));
  EXPECT_EQ(rows.front(), "frame,lsd_db,mse");
  EXPECT_EQ(rows.size(), 11u);

  out_.str("");
  EvalOptions scaled{path("a.sbfm"), path("b.sbfm"), path("scaled.csv"), SpectrumDomain::Linear};
  ASSERT_EQ(cmd_eval(scaled, out_, err_), kExitOk);
  for (std::size_t i = 1; i < 11; ++i)
    EXPECT_NEAR(parse_double(fields(lines(slurp(path("scaled.csv")))[i])[1]), 20.0, 1e-9);
}

TEST_F(CliTest, EvalRejectsMismatchedFrames) {
  write_frame_file(path("a.sbfm"), make_synthetic_corpus(5, 10, 16));
  write_frame_file(path("b.sbfm"), make_synthetic_corpus(5, 9, 16));
  EXPECT_EQ(cmd_eval({path("a.sbfm"), path("b.sbfm"), std::nullopt, SpectrumDomain::Log}, out_, err_),
            kExitUsage);
}

TEST_F(CliTest, DepthExperimentRows) {
  write_frame_file(path("corpus.sbfm"), make_synthetic_corpus(9, 100, 16));
  ExperimentOptions opt{path("experiment.cfg"), path("corpus.sbfm"), path("depth.csv"), std::nullopt, std::nullopt};
  ASSERT_EQ(cmd_experiment_depth(opt, out_, err_), kExitOk) << err_.str();
  const auto rows = lines(slurp(path("depth.csv")));
  EXPECT_EQ(rows.front(), "depth,seed,train_mse,valid_mse,test_mse");
  EXPECT_EQ(rows.size(), 10u);
  for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(fields(rows[i]).size(), 5u);

  opt.seed = 2;
  opt.out = path("single.csv");
  ASSERT_EQ(cmd_experiment_depth(opt, out_, err_), kExitOk);
  EXPECT_EQ(lines(slurp(path("single.csv"))).size(), 4u);
}

TEST_F(CliTest, BaselineExperimentRowsAndCrossCheck) {
  write_frame_file(path("corpus.sbfm"), make_synthetic_corpus(9, 100, 16));
  ExperimentOptions opt{path("experiment.cfg"), path("corpus.sbfm"), path("base.csv"), path("dump"), std::nullopt};
  ASSERT_EQ(cmd_experiment_baseline(opt, out_, err_), kExitOk) << err_.str();
  const auto rows = lines(slurp(path("base.csv")));
  EXPECT_EQ(rows.front(), "method,k,seed,mean_lsd_db,mean_mse");
  ASSERT_EQ(rows.size(), 7u);

  const double dct_lsd = corpus_lsd(read_frame_file(path("dump/test_logspec.sbfm")),
                                    read_frame_file(path("dump/dct_reconstruction.sbfm")),
                                    SpectrumDomain::Log)
                             .mean;
  int ae = 0, dct = 0;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    const auto f = fields(rows[i]);
    ASSERT_EQ(f.size(), 5u);
    EXPECT_EQ(f[1], "4");
    if (f[0] == "dct") {
      ++dct;
      EXPECT_NEAR(parse_double(f[3]), dct_lsd, 1e-9);
    } else {
      ++ae;
      const double ae_lsd = corpus_lsd(read_frame_file(path("dump/test_logspec.sbfm")),
                                       read_frame_file(path("dump/ae_reconstruction_seed" + f[2] + ".sbfm")),
                                       SpectrumDomain::Log)
                                .mean;
      EXPECT_NEAR(parse_double(f[3]), ae_lsd, 1e-9);
    }
  }
  EXPECT_EQ(ae, 3);
  EXPECT_EQ(dct, 3);
}

TEST_F(CliTest, BaselineRejectsUnequalK) {
  write_frame_file(path("corpus.sbfm"), make_synthetic_corpus(9, 100, 16));
  write_text("bad.cfg", "[experiment]\nbottleneck = 4\nhidden = 8\nk = 5\n");
  ExperimentOptions opt{path("bad.cfg"), path("corpus.sbfm"), std::nullopt, std::nullopt, std::nullopt};
  EXPECT_EQ(cmd_experiment_baseline(opt, out_, err_), kExitUsage);
}

TEST_F(CliTest, SynthMatchesLibrary) {
  ASSERT_EQ(cmd_synth({7, 25, 32, path("s.sbfm")}, out_, err_), kExitOk);
  EXPECT_EQ(read_frame_file(path("s.sbfm")), make_synthetic_corpus(7, 25, 32));
}

TEST_F(CliTest, BinaryExitCodes) {
  EXPECT_EQ(run_binary("--help"), 0);
  EXPECT_EQ(run_binary(""), kExitUsage);
  EXPECT_EQ(run_binary("pretrain --config x"), kExitUsage);
  EXPECT_EQ(run_binary("eval " + path("nope").string() + " " + path("nope").string()), kExitUsage);
  const std::string synth = path("bin.sbfm").string();
  ASSERT_EQ(run_binary("synth-data --seed 3 --frames 40 --bins 16 --out " + synth), 0);
  EXPECT_EQ(run_binary("eval --domain linear " + synth + " " + synth), 0);
  EXPECT_EQ(run_binary("eval --domain cubic " + synth + " " + synth), kExitUsage);
  const std::string model = path("bin.sbx").string();
  EXPECT_EQ(run_binary("pretrain --config " + path("stack.cfg").string() + " --train " + synth +
                       " --out " + model + " --seed 5"),
            0);
  EXPECT_EQ(load_model(model).net.depth(), 3u);
  EXPECT_EQ(run_binary("exp-depth --config " + path("experiment.cfg").string() + " --data " + synth +
                       " --seed 1 --out " + path("d.csv").string()),
            0);
  EXPECT_EQ(lines(slurp(path("d.csv"))).size(), 4u);
}

}  // namespace
}  // namespace sbx::cli
