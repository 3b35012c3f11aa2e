#pragma once

// Soft prediction files: one line of JSON header, then raw little-endian
// float64 samples.
//
//   {"format":"rockseg-soft","version":1,"width":W,"height":H,"classes":C,"dtype":"float64le"}\n
//   W*H*C doubles, class-major planes, each plane row-major

#include "error.hpp"
#include "metrics.hpp"
#include "pgm.hpp"

#include <json.hpp>

#include <bit>
#include <cstring>
#include <filesystem>
#include <string>

namespace rockseg {

namespace detail {

inline std::uint64_t to_le(std::uint64_t v) noexcept
{
    if constexpr (std::endian::native == std::endian::little)
        return v;
    else
        return __builtin_bswap64(v);
}

} // namespace detail

inline std::string encode_soft(const SoftPrediction& p)
{
    const nlohmann::json header = {{"format", "rockseg-soft"}, {"version", 1},
                                   {"width", p.width()},       {"height", p.height()},
                                   {"classes", p.classes()},   {"dtype", "float64le"}};
    std::string out = header.dump() + "\n";
    for (double v : p.values()) {
        const auto bits = detail::to_le(std::bit_cast<std::uint64_t>(v));
        char buf[8];
        std::memcpy(buf, &bits, 8);
        out.append(buf, 8);
    }
    return out;
}

inline SoftPrediction decode_soft(std::string_view bytes)
{
    const auto nl = bytes.find('\n');
    if (nl == std::string_view::npos)
        throw DataError("soft prediction: missing header line");
    nlohmann::json header;
    try {
        header = nlohmann::json::parse(bytes.substr(0, nl));
    } catch (const nlohmann::json::exception&) {
        throw DataError("soft prediction: malformed header");
    }
    if (header.value("format", "") != "rockseg-soft" || header.value("dtype", "") != "float64le")
        throw DataError("soft prediction: unsupported format or dtype");
    std::size_t w = 0, h = 0, c = 0;
    try {
        w = header.at("width").get<std::size_t>();
        h = header.at("height").get<std::size_t>();
        c = header.at("classes").get<std::size_t>();
    } catch (const nlohmann::json::exception&) {
        throw DataError("soft prediction: header lacks width, height or classes");
    }
    const auto payload = bytes.substr(nl + 1);
    const std::size_t n = w * h * c;
    if (payload.size() != n * 8)
        throw DataError("soft prediction: payload size does not match header");
    std::vector<double> data(n);
    for (std::size_t i = 0; i < n; ++i) {
        std::uint64_t bits;
        std::memcpy(&bits, payload.data() + 8 * i, 8);
        data[i] = std::bit_cast<double>(detail::to_le(bits));
    }
    try {
        return SoftPrediction(w, h, c, std::move(data));
    } catch (const InvalidArgument& e) {
        throw DataError(std::string("soft prediction: ") + e.what());
    }
}

inline SoftPrediction load_soft(const std::filesystem::path& path)
{
    return decode_soft(read_file_bytes(path));
}

inline void save_soft(const SoftPrediction& p, const std::filesystem::path& path)
{
    write_file_atomic(path, encode_soft(p));
}

} // namespace rockseg
