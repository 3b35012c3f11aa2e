#include "rockseg_cli/cli.hpp"

#include "oracles.hpp"

#include <gtest/gtest.h>

#include <json.hpp>

#include <sstream>

using namespace rockseg;
namespace fs = std::filesystem;

namespace {

struct Result {
    int code;
    std::string out;
    std::string err;
};

Result run_cli(std::vector<std::string> args)
{
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

std::string slurp(const fs::path& p) { return read_file_bytes(p); }

// Writes a small noisy fixture and returns (image, mask) paths.
std::pair<std::string, std::string> make_fixture(const fs::path& dir, const std::string& seed = "5")
{
    const auto img = (dir / "fx_img.pgm").string(), mask = (dir / "fx_mask.pgm").string();
    const auto r = run_cli({"synth", "--out", img, "--mask-out", mask, "--width", "48", "--height", "40",
                            "--n-pores", "6", "--noise-sigma", "0.05", "--seed", seed});
    EXPECT_EQ(r.code, 0) << r.err;
    return {img, mask};
}

} // namespace

TEST(Cli, UsageErrors)
{
    EXPECT_EQ(run_cli({}).code, cli::kUsage);
    const auto unknown = run_cli({"frobnicate"});
    EXPECT_EQ(unknown.code, cli::kUsage);
    EXPECT_NE(unknown.err.find("unknown subcommand 'frobnicate'"), std::string::npos);
    EXPECT_NE(unknown.err.find("Usage:"), std::string::npos);
    const auto dir = oracle::temp_dir("cli_usage");
    EXPECT_EQ(run_cli({"synth", "--out", (dir / "a.pgm").string(), "--mask-out", (dir / "b.pgm").string()}).code,
              cli::kUsage);
    EXPECT_EQ(run_cli({"synth", "--out", (dir / "a.pgm").string(), "--mask-out", (dir / "b.pgm").string(),
                       "--seed", "1", "--bogus"})
                  .code,
              cli::kUsage);
    EXPECT_EQ(run_cli({"synth", "--out", (dir / "a.pgm").string(), "--mask-out", (dir / "b.pgm").string(),
                       "--seed", "1", "--min-radius", "9", "--max-radius", "3"})
                  .code,
              cli::kUsage);
    EXPECT_FALSE(fs::exists(dir / "a.pgm"));
}

TEST(Cli, HelpAndVersion)
{
    EXPECT_EQ(run_cli({"--help"}).code, cli::kOk);
    const auto v = run_cli({"--version"});
    EXPECT_EQ(v.code, cli::kOk);
    EXPECT_NE(v.out.find(kVersion), std::string::npos);
}

TEST(Cli, OtsuOnConstantImageIsDegenerate)
{
    const auto dir = oracle::temp_dir("cli_const");
    save_pgm(GrayImage(8, 8, 8, 77), dir / "c.pgm");
    const auto r = run_cli({"segment", "--in", (dir / "c.pgm").string(), "--out", (dir / "l.pgm").string(),
                            "--method", "otsu"});
    EXPECT_EQ(r.code, cli::kDegenerate);
    EXPECT_NE(r.err.find("degenerate histogram"), std::string::npos);
}

TEST(Cli, DataErrors)
{
    const auto dir = oracle::temp_dir("cli_data");
    write_file_atomic(dir / "bad.pgm", "P2\n2 2\n255\n1 2 3");
    const auto r = run_cli({"denoise", "--in", (dir / "bad.pgm").string(), "--out", (dir / "o.pgm").string()});
    EXPECT_EQ(r.code, cli::kData);
    EXPECT_NE(r.err.find("truncated payload"), std::string::npos);
    EXPECT_EQ(run_cli({"augment", "--in", dir.string(), "--out", (dir / "aug").string(), "--n", "2", "--seed", "1"})
                  .code,
              cli::kData);
}

TEST(Cli, Selftest)
{
    const auto r = run_cli({"selftest"});
    EXPECT_EQ(r.code, cli::kOk) << r.out;
    const auto j = nlohmann::json::parse(r.out);
    EXPECT_TRUE(j["passed"].get<bool>());
    EXPECT_EQ(j["checks"].size(), 3u);
}

TEST(Cli, SynthReportAndSidecar)
{
    const auto dir = oracle::temp_dir("cli_synth");
    const auto [img, mask] = make_fixture(dir);
    const auto sidecar = nlohmann::json::parse(slurp(dir / "fx_img.json"));
    EXPECT_EQ(sidecar["seed"], 5);
    EXPECT_EQ(sidecar["radii"].size(), 6u);
    const auto loaded = load_pgm(img);
    EXPECT_EQ(loaded.width(), 48u);
    EXPECT_EQ(loaded.height(), 40u);

    const auto report_path = (dir / "r.json").string();
    ASSERT_EQ(run_cli({"synth", "--out", img, "--mask-out", mask, "--seed", "5", "--width", "48", "--height", "40",
                       "--n-pores", "6", "--noise-sigma", "0.05", "--report", report_path})
                  .code,
              0);
    const auto rep = nlohmann::json::parse(slurp(report_path));
    EXPECT_EQ(rep["version"], kVersion);
    EXPECT_EQ(rep["seed"], 5);
    EXPECT_EQ(rep["params"]["n_pores"], 6);
    EXPECT_DOUBLE_EQ(rep["porosity"].get<double>(), porosity(image_to_mask(load_pgm(mask))));
}

TEST(Cli, PipelineStages)
{
    const auto dir = oracle::temp_dir("cli_pipeline");
    const auto [img, mask] = make_fixture(dir);
    const auto den = (dir / "den.pgm").string();
    auto r = run_cli({"denoise", "--in", img, "--out", den, "--method", "median", "--window", "3"});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(load_pgm(den), median_filter(load_pgm(img), 3));
    auto rep = nlohmann::json::parse(r.out);
    EXPECT_EQ(rep["inputs"][img], cli::file_checksum(img));

    for (std::string method : {"otsu", "kmeans", "gmm", "watershed"}) {
        const auto out = (dir / (method + ".pgm")).string();
        r = run_cli({"segment", "--in", den, "--out", out, "--method", method});
        ASSERT_EQ(r.code, 0) << method << ": " << r.err;
        EXPECT_TRUE(fs::exists(out));
    }
    const auto seg = (dir / "otsu_mask.pgm").string();
    const auto den_img = load_pgm(den);
    save_pgm(mask_to_image(binarize(den_img, otsu_threshold(den_img), true)), seg);

    r = run_cli({"metrics", "--pred", seg, "--truth", mask});
    ASSERT_EQ(r.code, 0) << r.err;
    rep = nlohmann::json::parse(r.out);
    const auto c = confusion(image_to_mask(load_pgm(seg)), image_to_mask(load_pgm(mask)));
    EXPECT_EQ(rep["tp"], c.tp);
    EXPECT_EQ(rep["tn"], c.tn);
    EXPECT_DOUBLE_EQ(rep["jaccard"].get<double>(), jaccard(c).value);
    EXPECT_NEAR(1.0 - rep["iou_loss"].get<double>(), jaccard(c).value, 1e-12);
    EXPECT_TRUE(rep["degeneracy_flags"].empty());

    const auto soft = dir / "p.soft";
    save_soft(SoftPrediction::one_hot(image_to_mask(load_pgm(seg)), 2), soft);
    r = run_cli({"metrics", "--pred", seg, "--truth", mask, "--soft", soft.string()});
    ASSERT_EQ(r.code, 0) << r.err;
    EXPECT_EQ(nlohmann::json::parse(r.out)["iou_loss_source"], "soft");

    r = run_cli({"morph", "--mask", mask, "--mask", seg});
    ASSERT_EQ(r.code, 0) << r.err;
    rep = nlohmann::json::parse(r.out);
    ASSERT_EQ(rep["reports"].size(), 2u);
    EXPECT_DOUBLE_EQ(rep["reports"][0]["porosity"].get<double>(), porosity(image_to_mask(load_pgm(mask))));

    r = run_cli({"morph", "--mask", mask, "--report-format", "csv"});
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("mask,porosity,", 0), 0u);
    EXPECT_EQ(std::count(r.out.begin(), r.out.end(), '\n'), 2);
}

TEST(Cli, MetricsFlagsEmptyMasks)
{
    const auto dir = oracle::temp_dir("cli_empty_metrics");
    save_pgm(GrayImage(4, 4, 8, 0), dir / "e.pgm");
    const auto r = run_cli({"metrics", "--pred", (dir / "e.pgm").string(), "--truth", (dir / "e.pgm").string()});
    ASSERT_EQ(r.code, 0);
    const auto rep = nlohmann::json::parse(r.out);
    EXPECT_TRUE(rep["iou_loss"].is_null());
    const auto flags = rep["degeneracy_flags"].dump();
    EXPECT_NE(flags.find("precision"), std::string::npos);
    EXPECT_NE(flags.find("iou_loss"), std::string::npos);
}

TEST(Cli, DiffuseModes)
{
    const auto dir = oracle::temp_dir("cli_diffuse");
    const auto [img, mask] = make_fixture(dir);
    EXPECT_EQ(run_cli({"diffuse", "--mode", "forward", "--out", (dir / "f.pgm").string(), "--seed", "1"}).code,
              cli::kUsage);
    EXPECT_EQ(run_cli({"diffuse", "--mode", "forward", "--in", img, "--out", (dir / "f.pgm").string(), "--t",
                       "2000", "--seed", "1"})
                  .code,
              cli::kUsage);
    EXPECT_EQ(run_cli({"diffuse", "--mode", "sample", "--oracle", "0.3", "--out", (dir / "s.pgm").string(),
                       "--seed", "1"})
                  .code,
              cli::kUsage);
    auto r = run_cli({"diffuse", "--mode", "sample", "--oracle", "0.3,0.04", "--T", "200", "--width", "64",
                      "--height", "64", "--out", (dir / "s.pgm").string(), "--seed", "1"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rep = nlohmann::json::parse(r.out);
    EXPECT_NEAR(rep["field_mean"].get<double>(), 0.3, 0.02);
    EXPECT_NEAR(rep["field_variance"].get<double>(), 0.04, 0.004);
}

TEST(Cli, SameSeedSameBytes)
{
    const auto d1 = oracle::temp_dir("cli_det_1"), d2 = oracle::temp_dir("cli_det_2");
    for (const auto& d : {d1, d2}) {
        make_fixture(d, "123");
        ASSERT_EQ(run_cli({"diffuse", "--mode", "forward", "--in", (d / "fx_img.pgm").string(), "--t", "100",
                           "--out", (d / "noised.pgm").string(), "--seed", "9"})
                      .code,
                  0);
        ASSERT_EQ(run_cli({"augment", "--in", d.string(), "--out", (d / "aug").string(), "--n", "4", "--T", "100",
                           "--seed", "9"})
                      .code,
                  0);
    }
    const auto t1 = oracle::tree_bytes(d1), t2 = oracle::tree_bytes(d2);
    EXPECT_EQ(t1.size(), 13u);
    EXPECT_EQ(t1, t2);

    const auto d3 = oracle::temp_dir("cli_det_3");
    make_fixture(d3, "124");
    EXPECT_NE(slurp(d1 / "fx_img.pgm"), slurp(d3 / "fx_img.pgm"));
}

TEST(Cli, AugmentManifest)
{
    const auto dir = oracle::temp_dir("cli_augment");
    make_fixture(dir);
    const auto r = run_cli({"augment", "--in", dir.string(), "--out", (dir / "aug").string(), "--n", "3", "--T",
                            "40", "--seed", "2", "--classical-only"});
    ASSERT_EQ(r.code, 0) << r.err;
    const auto rep = nlohmann::json::parse(r.out);
    EXPECT_EQ(rep["params"]["t_mix"], 10);
    const auto manifest = nlohmann::json::parse(slurp(dir / "aug" / "manifest.json"));
    EXPECT_EQ(manifest["seed"], 2);
    EXPECT_EQ(manifest["outputs"].size(), 3u);
    for (const auto& o : manifest["outputs"])
        EXPECT_EQ(o["source"], 0);
}

TEST(Cli, LabelsToImageSpreadsLevels)
{
    const LabelMap l(3, 1, 3, std::vector<std::uint32_t>{0, 1, 2});
    const auto img = cli::labels_to_image(l);
    EXPECT_EQ(img[0], 0);
    EXPECT_EQ(img[1], 128);
    EXPECT_EQ(img[2], 255);
}
