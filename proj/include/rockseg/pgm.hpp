#pragma once

// Netpbm PGM reader/writer: P2 (ASCII) and P5 (binary), maxval 255 or
// 65535. 16-bit P5 samples are big-endian.

#include "error.hpp"
#include "image.hpp"

#include <cctype>
#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>

namespace rockseg {

enum class PgmFormat { ascii, binary };

namespace detail {

class PgmCursor {
public:
    explicit PgmCursor(std::string_view bytes) : bytes_(bytes) {}

    void skip_space_and_comments()
    {
        while (pos_ < bytes_.size()) {
            const char c = bytes_[pos_];
            if (c == '#') {
                while (pos_ < bytes_.size() && bytes_[pos_] != '\n')
                    ++pos_;
            } else if (std::isspace(static_cast<unsigned char>(c))) {
                ++pos_;
            } else {
                break;
            }
        }
    }

    // Returns false at end of input.
    bool read_uint(std::uint64_t& out)
    {
        skip_space_and_comments();
        if (pos_ >= bytes_.size())
            return false;
        const char* first = bytes_.data() + pos_;
        const char* last = bytes_.data() + bytes_.size();
        auto [ptr, ec] = std::from_chars(first, last, out);
        if (ec != std::errc{} || ptr == first)
            throw DataError("malformed PGM: expected unsigned integer");
        pos_ += static_cast<std::size_t>(ptr - first);
        return true;
    }

    std::string_view take(std::size_t n)
    {
        auto s = bytes_.substr(pos_, n);
        pos_ += s.size();
        return s;
    }

    std::size_t pos() const noexcept { return pos_; }
    void advance(std::size_t n) noexcept { pos_ += n; }
    std::size_t remaining() const noexcept { return bytes_.size() - pos_; }
    std::string_view rest() const noexcept { return bytes_.substr(pos_); }

private:
    std::string_view bytes_;
    std::size_t pos_ = 0;
};

} // namespace detail

inline GrayImage decode_pgm(std::string_view bytes)
{
    if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5'))
        throw DataError("malformed header: expected P2 or P5 magic");
    const bool binary = bytes[1] == '5';

    detail::PgmCursor cur(bytes);
    cur.advance(2);
    std::uint64_t width = 0, height = 0, maxval = 0;
    if (!cur.read_uint(width) || !cur.read_uint(height) || !cur.read_uint(maxval))
        throw DataError("malformed header: missing width, height or maxval");
    if (width == 0 || height == 0)
        throw DataError("malformed header: zero dimension");
    if (maxval != 255 && maxval != 65535)
        throw DataError("unsupported maxval " + std::to_string(maxval));

    const int depth = maxval == 255 ? 8 : 16;
    const std::size_t n = width * height;
    std::vector<std::uint16_t> data(n);

    if (binary) {
        // Exactly one whitespace byte separates the header from the raster.
        if (cur.remaining() == 0 || !std::isspace(static_cast<unsigned char>(cur.rest()[0])))
            throw DataError("malformed header: missing separator before raster");
        cur.advance(1);
        const std::size_t bytes_per = depth == 8 ? 1 : 2;
        if (cur.remaining() < n * bytes_per)
            throw DataError("truncated payload");
        const auto raster = cur.take(n * bytes_per);
        for (std::size_t i = 0; i < n; ++i) {
            if (depth == 8) {
                data[i] = static_cast<unsigned char>(raster[i]);
            } else {
                const auto hi = static_cast<unsigned char>(raster[2 * i]);
                const auto lo = static_cast<unsigned char>(raster[2 * i + 1]);
                data[i] = static_cast<std::uint16_t>((hi << 8) | lo);
            }
        }
    } else {
        for (std::size_t i = 0; i < n; ++i) {
            std::uint64_t v = 0;
            if (!cur.read_uint(v))
                throw DataError("truncated payload");
            if (v > maxval)
                throw DataError("malformed payload: sample exceeds maxval");
            data[i] = static_cast<std::uint16_t>(v);
        }
    }
    return GrayImage(width, height, depth, std::move(data));
}

inline std::string encode_pgm(const GrayImage& img, PgmFormat format)
{
    std::string out;
    out += format == PgmFormat::ascii ? "P2\n" : "P5\n";
    out += std::to_string(img.width()) + " " + std::to_string(img.height()) + "\n";
    out += std::to_string(img.max_value()) + "\n";

    if (format == PgmFormat::binary) {
        for (auto v : img.values()) {
            if (img.bit_depth() == 16)
                out.push_back(static_cast<char>(v >> 8));
            out.push_back(static_cast<char>(v & 0xFF));
        }
        return out;
    }
    for (std::size_t y = 0; y < img.height(); ++y) {
        for (std::size_t x = 0; x < img.width(); ++x) {
            if (x)
                out.push_back(' ');
            out += std::to_string(img(x, y));
        }
        out.push_back('\n');
    }
    return out;
}

inline std::string read_file_bytes(const std::filesystem::path& path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw DataError("cannot open " + path.string());
    return std::string(std::istreambuf_iterator<char>(in), {});
}

/// Writes through a sibling temp file and renames it into place, so readers
/// never observe a partially written file.
inline void write_file_atomic(const std::filesystem::path& path, std::string_view bytes)
{
    auto tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw DataError("cannot write " + path.string());
        out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
        if (!out)
            throw DataError("write failed for " + path.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec) {
        std::filesystem::remove(tmp, ec);
        throw DataError("cannot write " + path.string());
    }
}

inline GrayImage load_pgm(const std::filesystem::path& path)
{
    return decode_pgm(read_file_bytes(path));
}

inline void save_pgm(const GrayImage& img, const std::filesystem::path& path,
                     PgmFormat format = PgmFormat::binary)
{
    write_file_atomic(path, encode_pgm(img, format));
}

/// Mask as an 8-bit image: pore 255, matrix 0.
inline GrayImage mask_to_image(const BinaryMask& mask)
{
    GrayImage img(mask.width(), mask.height(), 8);
    for (std::size_t i = 0; i < mask.size(); ++i)
        img[i] = mask[i] ? 255 : 0;
    return img;
}

/// Any nonzero pixel is pore.
inline BinaryMask image_to_mask(const GrayImage& img)
{
    BinaryMask mask(img.width(), img.height());
    for (std::size_t i = 0; i < img.size(); ++i)
        mask[i] = img[i] != 0;
    return mask;
}

} // namespace rockseg
