#pragma once

// Paired (image, mask) augmentation: lossless dihedral transforms and
// diffusion-based resampling with the mask carried as a second channel.

#include "diffusion.hpp"
#include "error.hpp"
#include "field.hpp"
#include "image.hpp"
#include "pgm.hpp"
#include "rng.hpp"

#include <json.hpp>

#include <cstdio>
#include <filesystem>
#include <string>
#include <type_traits>
#include <vector>

namespace rockseg {

struct PairedSample {
    GrayImage image;
    BinaryMask mask;

    PairedSample() = default;
    PairedSample(GrayImage img, BinaryMask m) : image(std::move(img)), mask(std::move(m))
    {
        require_same_shape(image, mask, "paired sample");
    }

    friend bool operator==(const PairedSample&, const PairedSample&) = default;
};

namespace detail {

// Counterclockwise quarter turn: (x, y) -> (y, W - 1 - x), output is H x W.
template <class G>
G rotate_ccw(const G& in)
{
    const auto W = in.width(), H = in.height();
    std::vector<typename G::value_type> data(in.size());
    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < W; ++x)
            data[(W - 1 - x) * H + y] = in(x, y);
    if constexpr (std::is_same_v<G, GrayImage>)
        return GrayImage(H, W, in.bit_depth(), std::move(data));
    else
        return G(H, W, std::move(data));
}

template <class G>
G mirror(const G& in, bool horizontal)
{
    G out = in;
    const auto W = in.width(), H = in.height();
    for (std::size_t y = 0; y < H; ++y)
        for (std::size_t x = 0; x < W; ++x)
            out(x, y) = horizontal ? in(W - 1 - x, y) : in(x, H - 1 - y);
    return out;
}

} // namespace detail

/// Counterclockwise rotation by quarter_turns * 90 degrees (any integer, taken mod 4).
inline PairedSample rotate90(const PairedSample& s, int quarter_turns)
{
    const int q = ((quarter_turns % 4) + 4) % 4;
    PairedSample out = s;
    for (int i = 0; i < q; ++i) {
        out.image = detail::rotate_ccw(out.image);
        out.mask = detail::rotate_ccw(out.mask);
    }
    return out;
}

/// Mirror across the vertical axis.
inline PairedSample hflip(const PairedSample& s)
{
    return {detail::mirror(s.image, true), detail::mirror(s.mask, true)};
}

/// Mirror across the horizontal axis.
inline PairedSample vflip(const PairedSample& s)
{
    return {detail::mirror(s.image, false), detail::mirror(s.mask, false)};
}

/// One of the 8 dihedral transforms: rotate first, then optionally hflip.
struct Dihedral {
    int quarter_turns = 0;
    bool flip = false;

    int index() const noexcept { return quarter_turns * 2 + (flip ? 1 : 0); }

    template <class G>
    G apply(const G& g) const
    {
        G out = g;
        for (int i = 0; i < quarter_turns; ++i)
            out = detail::rotate_ccw(out);
        return flip ? detail::mirror(out, true) : out;
    }

    PairedSample apply(const PairedSample& s) const { return {apply(s.image), apply(s.mask)}; }

    static Dihedral from_index(int i) { return {i / 2, (i % 2) != 0}; }
};

/// Draws quarter_turns uniform in {0..3}, then the flip coin.
inline Dihedral random_dihedral(Rng& rng)
{
    Dihedral d;
    d.quarter_turns = static_cast<int>(rng.uniform_int(4));
    d.flip = rng.uniform_int(2) == 1;
    return d;
}

inline PairedSample random_augment(const PairedSample& s, Rng& rng, Dihedral* applied = nullptr)
{
    const auto d = random_dihedral(rng);
    if (applied)
        *applied = d;
    return d.apply(s);
}

/// Channel 0: normalized image; channel 1: mask as -1 (matrix) / +1 (pore).
inline RealField stack_pair(const PairedSample& s)
{
    const auto img = to_field(s.image);
    RealField f(s.image.width(), s.image.height(), 2);
    auto c0 = f.channel(0);
    auto c1 = f.channel(1);
    for (std::size_t i = 0; i < c0.size(); ++i) {
        c0[i] = img[i];
        c1[i] = s.mask[i] ? 1.0 : -1.0;
    }
    return f;
}

/// Inverse of stack_pair: image re-quantized, mask is pore where channel 1 > 0.
inline PairedSample unstack_pair(const RealField& f, int bit_depth)
{
    detail::require(f.channels() == 2, "paired field must have two channels");
    RealField img(f.width(), f.height(), 1);
    BinaryMask mask(f.width(), f.height());
    auto c0 = f.channel(0);
    auto c1 = f.channel(1);
    for (std::size_t i = 0; i < c0.size(); ++i) {
        img[i] = c0[i];
        mask[i] = c1[i] > 0.0;
    }
    return {from_field(img, bit_depth), std::move(mask)};
}

/// Noises the stacked pair to t_mix, then runs the reverse chain back to 0.
template <NoisePredictor P>
PairedSample diffusion_augment(const PairedSample& s, int t_mix, const P& predictor,
                               const VarianceSchedule& sched, Rng& rng)
{
    sched.check_step(t_mix);
    auto noised = forward_jump(stack_pair(s), t_mix, sched, rng);
    auto x0 = reverse_chain(std::move(noised.x_t), t_mix, predictor, sched, rng);
    return unstack_pair(x0, s.image.bit_depth());
}

inline double mask_porosity(const BinaryMask& m)
{
    std::size_t n = 0;
    for (auto v : m.values())
        n += v != 0;
    return static_cast<double>(n) / static_cast<double>(m.size());
}

struct DatasetOptions {
    std::size_t n_out = 0;
    int t_mix = 1;
    std::uint64_t seed = 0;
    bool classical_only = false;
};

inline std::string dataset_stem(std::size_t index)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "%04zu", index);
    return buf;
}

/// Writes n_out augmented pairs as NNNN_img.pgm / NNNN_mask.pgm plus
/// manifest.json into out_dir. Output i uses its own stream
/// Rng(substream_seed(seed, i)): first the source index, then (unless
/// classical_only) the diffusion draws, then the dihedral transform.
template <NoisePredictor P>
nlohmann::json generate_dataset(const std::vector<PairedSample>& samples, const DatasetOptions& opt,
                                const P& predictor, const VarianceSchedule& sched,
                                const std::filesystem::path& out_dir)
{
    detail::require(!samples.empty(), "generate_dataset needs at least one input pair");
    if (!opt.classical_only)
        sched.check_step(opt.t_mix);

    std::error_code ec;
    std::filesystem::create_directories(out_dir, ec);
    if (ec)
        throw DataError("cannot create " + out_dir.string());

    nlohmann::json outputs = nlohmann::json::array();
    for (std::size_t i = 0; i < opt.n_out; ++i) {
        Rng rng(substream_seed(opt.seed, i));
        const auto source = static_cast<std::size_t>(rng.uniform_int(samples.size()));
        PairedSample s = samples[source];
        if (!opt.classical_only)
            s = diffusion_augment(s, opt.t_mix, predictor, sched, rng);
        Dihedral d;
        s = random_augment(s, rng, &d);

        const auto stem = dataset_stem(i);
        save_pgm(s.image, out_dir / (stem + "_img.pgm"), PgmFormat::binary);
        save_pgm(mask_to_image(s.mask), out_dir / (stem + "_mask.pgm"), PgmFormat::binary);
        outputs.push_back({{"index", i},
                           {"source", source},
                           {"image", stem + "_img.pgm"},
                           {"mask", stem + "_mask.pgm"},
                           {"width", s.image.width()},
                           {"height", s.image.height()},
                           {"quarter_turns", d.quarter_turns},
                           {"hflip", d.flip},
                           {"porosity", mask_porosity(s.mask)}});
    }
    nlohmann::json manifest = {{"seed", opt.seed},
                               {"t_mix", opt.t_mix},
                               {"classical_only", opt.classical_only},
                               {"n_out", opt.n_out},
                               {"outputs", outputs}};
    write_file_atomic(out_dir / "manifest.json", manifest.dump(2) + "\n");
    return manifest;
}

} // namespace rockseg
