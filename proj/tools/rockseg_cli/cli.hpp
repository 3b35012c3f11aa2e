#pragma once

// The `rockseg` command line front end. Kept as a header so the test suites
// can drive it in-process.
//
// Exit codes: 0 success, 1 usage error, 2 data or I/O error, 3 numerical
// degeneracy.

#include <rockseg/rockseg.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace rockseg::cli {

namespace fs = std::filesystem;
using nlohmann::json;

enum ExitCode : int { kOk = 0, kUsage = 1, kData = 2, kDegenerate = 3 };

/// FNV-1a 64-bit over the file bytes, as 16 hex digits.
inline std::string file_checksum(const fs::path& path)
{
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : read_file_bytes(path)) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    std::ostringstream os;
    os << std::hex << std::setw(16) << std::setfill('0') << h;
    return os.str();
}

inline void require_output_path(const fs::path& p)
{
    const auto parent = p.has_parent_path() ? p.parent_path() : fs::path(".");
    if (!fs::is_directory(parent))
        throw DataError("output directory does not exist: " + parent.string());
}

inline PgmFormat parse_format(const std::string& s)
{
    return s == "ascii" ? PgmFormat::ascii : PgmFormat::binary;
}

/// Labels spread over the 8-bit range: label * 255 / (num_labels - 1).
inline GrayImage labels_to_image(const LabelMap& labels)
{
    GrayImage img(labels.width(), labels.height(), 8);
    const double step = labels.num_labels() > 1 ? 255.0 / (labels.num_labels() - 1) : 0.0;
    for (std::size_t i = 0; i < labels.size(); ++i)
        img[i] = quantize(labels[i] * step, 255);
    return img;
}

struct Options {
    std::string report;

    // shared
    std::string in, out, format = "binary";
    std::uint64_t seed = 0;

    // synth
    std::string mask_out;
    std::size_t width = 128, height = 128, n_pores = 10;
    std::int64_t min_radius = 3, max_radius = 8;
    double noise_sigma = 0.0;
    int bit_depth = 8;

    // denoise
    std::string denoise_method = "median";
    int window = 3;
    double sigma = 1.0, amount = 1.0;

    // segment
    std::string segment_method = "otsu";
    std::size_t k = 2;
    double low_q = 0.1, high_q = 0.9, tol = 1e-6;
    int max_iter = 100;
    bool pore_is_dark = true;

    // metrics
    std::string pred, truth, soft;

    // morph
    std::vector<std::string> masks;
    std::size_t min_pixels = 5;
    std::string report_format = "json";

    // diffuse / augment
    std::string mode = "forward";
    int t = 1, T = 1000;
    double beta_start = 1e-4, beta_end = 0.02;
    std::string oracle;
    std::size_t n_out = 0;
    int t_mix = -1;
    bool classical_only = false;
};

class Runner {
public:
    Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

    int run(std::vector<std::string> args)
    {
        CLI::App app{"rockseg: rock image segmentation, augmentation and morphology toolkit", "rockseg"};
        app.require_subcommand(1, 1);
        app.set_version_flag("--version", kVersion);
        setup(app);

        const std::string first = args.empty() ? std::string() : args.front();
        std::reverse(args.begin(), args.end());
        try {
            app.parse(args);
        } catch (const CLI::ParseError& e) {
            if (e.get_exit_code() == 0)
                return app.exit(e, out_, err_) == 0 ? kOk : kUsage;
            if (app.get_subcommands().empty() && !first.empty() && !first.starts_with("-"))
                err_ << "rockseg: error: unknown subcommand '" << first << "'\n";
            else
                err_ << "rockseg: error: " << e.what() << "\n";
            err_ << app.help();
            return kUsage;
        }

        try {
            dispatch(app);
        } catch (const DegenerateInput& e) {
            return fail(kDegenerate, e.what());
        } catch (const DataError& e) {
            return fail(kData, e.what());
        } catch (const InvalidArgument& e) {
            return fail(kUsage, e.what());
        } catch (const fs::filesystem_error& e) {
            return fail(kData, e.what());
        } catch (const Error& e) {
            return fail(kData, e.what());
        }
        return exit_code_;
    }

private:
    int fail(int code, const std::string& what)
    {
        err_ << "rockseg: error: " << what << "\n";
        return code;
    }

    void setup(CLI::App& app)
    {
        auto add_report = [&](CLI::App* sub) {
            sub->add_option("--report", o_.report, "write the JSON report here instead of stdout");
        };
        auto add_seed = [&](CLI::App* sub) {
            sub->add_option("--seed", o_.seed, "64-bit seed for all random draws")->required();
        };
        auto formats = CLI::IsMember({"ascii", "binary"});

        auto* synth = app.add_subcommand("synth", "generate a synthetic pore/matrix fixture");
        synth->add_option("--out", o_.out, "output image PGM")->required();
        synth->add_option("--mask-out", o_.mask_out, "output ground-truth mask PGM")->required();
        synth->add_option("--width", o_.width)->check(CLI::PositiveNumber);
        synth->add_option("--height", o_.height)->check(CLI::PositiveNumber);
        synth->add_option("--n-pores", o_.n_pores);
        synth->add_option("--min-radius", o_.min_radius);
        synth->add_option("--max-radius", o_.max_radius);
        synth->add_option("--noise-sigma", o_.noise_sigma, "noise std as a fraction of the range");
        synth->add_option("--bit-depth", o_.bit_depth)->check(CLI::IsMember({8, 16}));
        synth->add_option("--format", o_.format)->check(formats);
        add_seed(synth);
        add_report(synth);

        auto* den = app.add_subcommand("denoise", "median / gaussian / unsharp / dual filtering");
        den->add_option("--in", o_.in)->required()->check(CLI::ExistingFile);
        den->add_option("--out", o_.out)->required();
        den->add_option("--method", o_.denoise_method)->check(CLI::IsMember({"median", "gaussian", "unsharp", "dual"}));
        den->add_option("--window", o_.window, "median window (odd)");
        den->add_option("--sigma", o_.sigma, "gaussian sigma in pixels");
        den->add_option("--amount", o_.amount, "unsharp amount");
        den->add_option("--format", o_.format)->check(formats);
        add_report(den);

        auto* seg = app.add_subcommand("segment", "classical segmentation");
        seg->add_option("--in", o_.in)->required()->check(CLI::ExistingFile);
        seg->add_option("--out", o_.out, "label image PGM")->required();
        seg->add_option("--method", o_.segment_method)->check(CLI::IsMember({"otsu", "kmeans", "gmm", "watershed"}));
        seg->add_option("--k", o_.k);
        seg->add_option("--low-q", o_.low_q);
        seg->add_option("--high-q", o_.high_q);
        seg->add_option("--tol", o_.tol);
        seg->add_option("--max-iter", o_.max_iter);
        seg->add_option("--pore-is-dark", o_.pore_is_dark, "otsu: pores lie at or below the threshold")
            ->default_str("true");
        seg->add_option("--format", o_.format)->check(formats);
        add_report(seg);

        auto* met = app.add_subcommand("metrics", "confusion-based scores of a predicted mask");
        met->add_option("--pred", o_.pred)->required()->check(CLI::ExistingFile);
        met->add_option("--truth", o_.truth)->required()->check(CLI::ExistingFile);
        met->add_option("--soft", o_.soft, "soft prediction file for the IoU loss")->check(CLI::ExistingFile);
        add_report(met);

        auto* mor = app.add_subcommand("morph", "porosity, connectivity, aspect ratio, fractal dimension");
        mor->add_option("--mask", o_.masks, "mask PGM (repeatable)")->required()->check(CLI::ExistingFile);
        mor->add_option("--min-pixels", o_.min_pixels)->check(CLI::PositiveNumber);
        mor->add_option("--report-format", o_.report_format)->check(CLI::IsMember({"json", "csv"}));
        add_report(mor);

        auto* dif = app.add_subcommand("diffuse", "forward noising or oracle sampling");
        dif->add_option("--mode", o_.mode)->check(CLI::IsMember({"forward", "sample"}));
        dif->add_option("--in", o_.in)->check(CLI::ExistingFile);
        dif->add_option("--out", o_.out)->required();
        dif->add_option("--t", o_.t, "forward: target step");
        dif->add_option("--T", o_.T, "number of schedule steps");
        dif->add_option("--beta-start", o_.beta_start);
        dif->add_option("--beta-end", o_.beta_end);
        dif->add_option("--oracle", o_.oracle, "sample: Gaussian target as mu,sigma2 in field units");
        dif->add_option("--width", o_.width);
        dif->add_option("--height", o_.height);
        dif->add_option("--bit-depth", o_.bit_depth)->check(CLI::IsMember({8, 16}));
        dif->add_option("--format", o_.format)->check(formats);
        add_seed(dif);
        add_report(dif);

        auto* aug = app.add_subcommand("augment", "generate augmented image/mask pairs");
        aug->add_option("--in", o_.in, "directory of NAME_img.pgm / NAME_mask.pgm pairs")
            ->required()
            ->check(CLI::ExistingDirectory);
        aug->add_option("--out", o_.out, "output directory")->required();
        aug->add_option("--n", o_.n_out)->required();
        aug->add_option("--t-mix", o_.t_mix, "partial noising depth (default T/4)");
        aug->add_option("--T", o_.T);
        aug->add_option("--beta-start", o_.beta_start);
        aug->add_option("--beta-end", o_.beta_end);
        aug->add_flag("--classical-only", o_.classical_only, "rotations and flips only");
        add_seed(aug);
        add_report(aug);

        auto* st = app.add_subcommand("selftest", "run the built-in analytic checks");
        add_report(st);
    }

    void dispatch(const CLI::App& app)
    {
        const auto* sub = app.get_subcommands().front();
        const auto name = sub->get_name();
        json report = {{"tool", "rockseg"}, {"version", kVersion}, {"command", name}};
        if (name == "synth")
            synth(report);
        else if (name == "denoise")
            denoise(report);
        else if (name == "segment")
            segment(report);
        else if (name == "metrics")
            metrics(report);
        else if (name == "morph")
            morph(report);
        else if (name == "diffuse")
            diffuse(report);
        else if (name == "augment")
            augment(report);
        else
            selftest(report);
        if (!csv_.empty())
            emit(csv_);
        else
            emit(report.dump(2) + "\n");
    }

    void emit(const std::string& text)
    {
        if (o_.report.empty()) {
            out_ << text;
        } else {
            require_output_path(o_.report);
            write_file_atomic(o_.report, text);
        }
    }

    json inputs(std::initializer_list<std::string> paths)
    {
        json j = json::object();
        for (const auto& p : paths)
            if (!p.empty())
                j[p] = file_checksum(p);
        return j;
    }

    void synth(json& report)
    {
        require_output_path(o_.out);
        require_output_path(o_.mask_out);
        FixtureParams p{o_.width, o_.height, o_.n_pores, o_.min_radius, o_.max_radius, o_.noise_sigma, o_.bit_depth};
        Rng rng(o_.seed);
        const auto fx = synth_fixture(p, rng);
        save_pgm(fx.image, o_.out, parse_format(o_.format));
        save_pgm(mask_to_image(fx.mask), o_.mask_out, parse_format(o_.format));

        json radii = json::array(), disks = json::array();
        for (const auto& d : fx.disks) {
            radii.push_back(d.radius);
            disks.push_back({{"cx", d.cx}, {"cy", d.cy}, {"radius", d.radius}});
        }
        const json sidecar = {{"seed", o_.seed},
                              {"n_pores", o_.n_pores},
                              {"radii", radii},
                              {"noise_sigma", o_.noise_sigma},
                              {"width", o_.width},
                              {"height", o_.height},
                              {"bit_depth", o_.bit_depth},
                              {"disks", disks}};
        write_file_atomic(fs::path(o_.out).replace_extension(".json"), sidecar.dump(2) + "\n");

        report["seed"] = o_.seed;
        report["params"] = {{"width", o_.width},           {"height", o_.height},
                            {"n_pores", o_.n_pores},       {"min_radius", o_.min_radius},
                            {"max_radius", o_.max_radius}, {"noise_sigma", o_.noise_sigma},
                            {"bit_depth", o_.bit_depth},   {"format", o_.format}};
        report["outputs"] = {o_.out, o_.mask_out};
        report["porosity"] = porosity(fx.mask);
    }

    void denoise(json& report)
    {
        require_output_path(o_.out);
        report["inputs"] = inputs({o_.in});
        const auto img = load_pgm(o_.in);
        GrayImage res;
        json params = {{"method", o_.denoise_method}};
        if (o_.denoise_method == "median") {
            res = median_filter(img, o_.window);
            params["window"] = o_.window;
        } else if (o_.denoise_method == "gaussian") {
            res = gaussian_blur(img, o_.sigma);
            params["sigma"] = o_.sigma;
        } else if (o_.denoise_method == "unsharp") {
            res = unsharp_mask(img, o_.sigma, o_.amount);
            params["sigma"] = o_.sigma;
            params["amount"] = o_.amount;
        } else {
            res = dual_filter(img, o_.sigma, o_.amount, o_.window);
            params["sigma"] = o_.sigma;
            params["amount"] = o_.amount;
            params["window"] = o_.window;
        }
        params["format"] = o_.format;
        save_pgm(res, o_.out, parse_format(o_.format));
        report["params"] = params;
        report["outputs"] = {o_.out};
    }

    void segment(json& report)
    {
        require_output_path(o_.out);
        report["inputs"] = inputs({o_.in});
        const auto img = load_pgm(o_.in);
        const auto& m = o_.segment_method;
        json params = {{"method", m}};
        json result;
        LabelMap labels;
        if (m == "otsu") {
            const auto t = otsu_threshold(img);
            const auto mask = binarize(img, t, o_.pore_is_dark);
            labels = LabelMap(mask.width(), mask.height(), 2,
                              std::vector<std::uint32_t>(mask.values().begin(), mask.values().end()));
            params["pore_is_dark"] = o_.pore_is_dark;
            result["threshold"] = t;
        } else if (m == "kmeans") {
            auto km = kmeans_intensity(img, o_.k, o_.max_iter, o_.tol);
            params.update({{"k", o_.k}, {"max_iter", o_.max_iter}, {"tol", o_.tol}});
            result = {{"centroids", km.centroids}, {"iterations", km.iterations}, {"converged", km.converged}};
            labels = std::move(km.labels);
        } else if (m == "gmm") {
            auto g = gmm_em(img, o_.k, o_.max_iter, o_.tol);
            params.update({{"k", o_.k}, {"max_iter", o_.max_iter}, {"tol", o_.tol}});
            result = {{"weights", g.params.weights},
                      {"means", g.params.means},
                      {"variances", g.params.variances},
                      {"iterations", g.iterations},
                      {"converged", g.converged},
                      {"log_likelihood", g.loglik_trace.back()}};
            labels = std::move(g.labels);
        } else {
            const auto markers = generate_markers(img, o_.low_q, o_.high_q);
            labels = watershed(img, markers);
            params.update({{"low_q", o_.low_q}, {"high_q", o_.high_q}});
            result["labels"] = {{"pore", kPoreMarker}, {"matrix", kMatrixMarker}};
        }
        params["format"] = o_.format;
        save_pgm(labels_to_image(labels), o_.out, parse_format(o_.format));
        result["num_labels"] = labels.num_labels();
        report["params"] = params;
        report["result"] = result;
        report["outputs"] = {o_.out};
    }

    void metrics(json& report)
    {
        report["inputs"] = inputs({o_.pred, o_.truth, o_.soft});
        const auto pred = image_to_mask(load_pgm(o_.pred));
        const auto truth = image_to_mask(load_pgm(o_.truth));
        if (!pred.same_shape(truth))
            throw DataError("prediction and truth differ in size");
        const auto c = confusion(pred, truth);
        const auto p = precision(c), r = recall(c), a = accuracy(c), f = f1(c), j = jaccard(c);

        std::optional<double> loss;
        if (!o_.soft.empty()) {
            const auto s = load_soft(o_.soft);
            if (s.width() != truth.width() || s.height() != truth.height() || s.classes() > 2)
                throw DataError("soft prediction does not match the truth mask (size or class count)");
            loss = iou_loss(s, SoftPrediction::one_hot(truth, s.classes()));
        } else if (c.tp + c.fp + c.fn > 0) {
            loss = iou_loss(SoftPrediction::one_hot(pred, 1), SoftPrediction::one_hot(truth, 1));
        }

        json flags = json::array();
        const std::pair<const char*, Score> named[] = {
            {"precision", p}, {"recall", r}, {"accuracy", a}, {"f1", f}, {"jaccard", j}};
        for (const auto& [n, s] : named)
            if (s.degenerate)
                flags.push_back(n);
        if (!loss)
            flags.push_back("iou_loss");

        report.update({{"tp", c.tp},
                       {"fp", c.fp},
                       {"fn", c.fn},
                       {"tn", c.tn},
                       {"precision", p.value},
                       {"recall", r.value},
                       {"accuracy", a.value},
                       {"f1", f.value},
                       {"jaccard", j.value},
                       {"iou_loss", loss ? json(*loss) : json(nullptr)},
                       {"iou_loss_source", o_.soft.empty() ? "hard" : "soft"},
                       {"degeneracy_flags", flags}});
    }

    static json morph_json(const MorphReport& r)
    {
        auto opt = [](const std::optional<double>& v) { return v ? json(*v) : json(nullptr); };
        return {{"porosity", r.porosity},
                {"component_count", r.component_count},
                {"largest_component_fraction", r.largest_component_fraction},
                {"mean_aspect_ratio", opt(r.mean_aspect_ratio)},
                {"fractal_dimension", opt(r.fractal_dimension)},
                {"fit_r2", opt(r.fit_r2)},
                {"excluded_small_components", r.excluded_small_components},
                {"fractal_flagged", !r.fractal_dimension.has_value()}};
    }

    void morph(json& report)
    {
        json items = json::array();
        std::ostringstream csv;
        csv << std::setprecision(17);
        csv << "mask,porosity,component_count,largest_component_fraction,mean_aspect_ratio,"
               "fractal_dimension,fit_r2,excluded_small_components\n";
        json in = json::object();
        for (const auto& path : o_.masks) {
            in[path] = file_checksum(path);
            const auto r = morph_report(image_to_mask(load_pgm(path)), o_.min_pixels);
            auto j = morph_json(r);
            j["mask"] = path;
            items.push_back(j);
            auto cell = [&](const std::optional<double>& v) {
                if (v)
                    csv << *v;
            };
            csv << path << ',' << r.porosity << ',' << r.component_count << ',' << r.largest_component_fraction << ',';
            cell(r.mean_aspect_ratio);
            csv << ',';
            cell(r.fractal_dimension);
            csv << ',';
            cell(r.fit_r2);
            csv << ',' << r.excluded_small_components << '\n';
        }
        report["inputs"] = in;
        report["params"] = {{"min_pixels", o_.min_pixels}};
        report["reports"] = items;
        if (o_.report_format == "csv")
            csv_ = csv.str();
    }

    json schedule_json(const VarianceSchedule& s) const
    {
        return {{"T", s.steps()},
                {"beta_start", o_.beta_start},
                {"beta_end", o_.beta_end},
                {"kind", "linear"},
                {"alpha_bar_T", s.alpha_bar(s.steps())}};
    }

    void diffuse(json& report)
    {
        require_output_path(o_.out);
        const auto sched = make_linear_schedule(o_.T, o_.beta_start, o_.beta_end);
        Rng rng(o_.seed);
        report["seed"] = o_.seed;
        report["schedule"] = schedule_json(sched);
        json params = {{"mode", o_.mode}, {"format", o_.format}};
        if (o_.mode == "forward") {
            if (o_.in.empty())
                throw InvalidArgument("diffuse --mode forward requires --in");
            report["inputs"] = inputs({o_.in});
            const auto img = load_pgm(o_.in);
            const auto noised = forward_jump(to_field(img), o_.t, sched, rng);
            save_pgm(from_field(noised.x_t, img.bit_depth()), o_.out, parse_format(o_.format));
            params["t"] = o_.t;
            params["alpha_bar_t"] = sched.alpha_bar(o_.t);
        } else {
            if (o_.oracle.empty())
                throw InvalidArgument("diffuse --mode sample requires --oracle mu,sigma2");
            const auto comma = o_.oracle.find(',');
            double mu = 0.0, s2 = 0.0;
            try {
                if (comma == std::string::npos)
                    throw std::invalid_argument("missing comma");
                mu = std::stod(o_.oracle.substr(0, comma));
                s2 = std::stod(o_.oracle.substr(comma + 1));
            } catch (const std::exception&) {
                throw InvalidArgument("--oracle expects mu,sigma2");
            }
            const GaussianOraclePredictor oracle(mu, s2, sched);
            const auto field = sample(o_.width, o_.height, 1, oracle, sched, rng);
            double mean = 0.0, sq = 0.0;
            for (double v : field.values()) {
                mean += v;
                sq += v * v;
            }
            mean /= static_cast<double>(field.size());
            save_pgm(from_field(field, o_.bit_depth), o_.out, parse_format(o_.format));
            params.update({{"oracle_mu", mu}, {"oracle_sigma2", s2}, {"width", o_.width}, {"height", o_.height},
                           {"bit_depth", o_.bit_depth}});
            report["field_mean"] = mean;
            report["field_variance"] = sq / static_cast<double>(field.size()) - mean * mean;
        }
        report["params"] = params;
        report["outputs"] = {o_.out};
    }

    void augment(json& report)
    {
        const auto sched = make_linear_schedule(o_.T, o_.beta_start, o_.beta_end);
        const int t_mix = o_.t_mix > 0 ? o_.t_mix : std::max(1, o_.T / 4);

        std::vector<fs::path> images;
        for (const auto& e : fs::directory_iterator(o_.in)) {
            const auto name = e.path().filename().string();
            if (e.is_regular_file() && name.size() > 8 && name.ends_with("_img.pgm"))
                images.push_back(e.path());
        }
        std::sort(images.begin(), images.end());
        if (images.empty())
            throw DataError("no NAME_img.pgm files in " + o_.in);

        std::vector<PairedSample> samples;
        json in = json::object();
        for (const auto& img_path : images) {
            auto name = img_path.filename().string();
            const auto mask_path = img_path.parent_path() / (name.substr(0, name.size() - 8) + "_mask.pgm");
            if (!fs::exists(mask_path))
                throw DataError("missing mask for " + img_path.string());
            in[img_path.string()] = file_checksum(img_path);
            in[mask_path.string()] = file_checksum(mask_path);
            auto img = load_pgm(img_path);
            auto mask = image_to_mask(load_pgm(mask_path));
            if (!img.same_shape(mask))
                throw DataError("image and mask differ in size: " + name);
            samples.emplace_back(std::move(img), std::move(mask));
        }

        // Desk-scale predictor: Gaussian oracle matched to the per-channel
        // moments of the stacked input pairs.
        std::vector<double> mu(2, 0.0), var(2, 0.0);
        double count = 0.0;
        for (const auto& s : samples) {
            const auto f = stack_pair(s);
            for (std::size_t c = 0; c < 2; ++c)
                for (double v : f.channel(c)) {
                    mu[c] += v;
                    var[c] += v * v;
                }
            count += static_cast<double>(f.plane_size());
        }
        for (std::size_t c = 0; c < 2; ++c) {
            mu[c] /= count;
            var[c] = std::max(1e-6, var[c] / count - mu[c] * mu[c]);
        }
        const GaussianOraclePredictor oracle(mu, var, sched);

        DatasetOptions opt{o_.n_out, t_mix, o_.seed, o_.classical_only};
        const auto manifest = generate_dataset(samples, opt, oracle, sched, o_.out);

        report["seed"] = o_.seed;
        report["inputs"] = in;
        report["schedule"] = schedule_json(sched);
        report["params"] = {{"n", o_.n_out}, {"t_mix", t_mix}, {"classical_only", o_.classical_only},
                            {"oracle_mu", mu}, {"oracle_sigma2", var}};
        report["manifest"] = (fs::path(o_.out) / "manifest.json").string();
        report["outputs"] = manifest["outputs"].size();
    }

    void selftest(json& report)
    {
        json checks = json::array();
        bool all = true;
        for (const auto& c : run_selftest()) {
            checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
            all = all && c.passed;
        }
        report["checks"] = checks;
        report["passed"] = all;
        if (!all) {
            err_ << "rockseg: error: selftest failed\n";
            exit_code_ = kDegenerate;
        }
    }

    std::ostream& out_;
    std::ostream& err_;
    Options o_;
    std::string csv_;
    int exit_code_ = kOk;
};

inline int run(const std::vector<std::string>& args, std::ostream& out = std::cout, std::ostream& err = std::cerr)
{
    return Runner(out, err).run(args);
}

} // namespace rockseg::cli
