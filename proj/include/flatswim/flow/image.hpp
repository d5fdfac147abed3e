#pragma once

// Grayscale images and their PGM/PNG files.

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <vector>

namespace flatswim::flow {

template <class T>
struct Image {
    std::size_t width = 0;
    std::size_t height = 0;
    std::vector<T> data;  // row-major, row 0 at the top

    Image() = default;
    Image(std::size_t w, std::size_t h, T fill = T{}) : width(w), height(h), data(w * h, fill) {}

    T& at(std::size_t x, std::size_t y) { return data[y * width + x]; }
    const T& at(std::size_t x, std::size_t y) const { return data[y * width + x]; }
    bool empty() const { return data.empty(); }
    friend bool operator==(const Image&, const Image&) = default;
};

using GrayImage = Image<std::uint8_t>;
using FloatImage = Image<float>;

FloatImage to_float(const GrayImage& img);
/// Rounds and clamps to [0, 255].
GrayImage to_gray(const FloatImage& img);

/// Integer translation: out(x, y) = in(x − dx, y − dy), `fill` where undefined.
template <class T>
Image<T> shifted(const Image<T>& in, long dx, long dy, T fill = T{}) {
    Image<T> out(in.width, in.height, fill);
    const auto w = static_cast<long>(in.width);
    const auto h = static_cast<long>(in.height);
    for (long y = 0; y < h; ++y)
        for (long x = 0; x < w; ++x) {
            const long sx = x - dx;
            const long sy = y - dy;
            if (sx >= 0 && sx < w && sy >= 0 && sy < h)
                out.at(static_cast<std::size_t>(x), static_cast<std::size_t>(y)) =
                    in.at(static_cast<std::size_t>(sx), static_cast<std::size_t>(sy));
        }
    return out;
}

/// Binary PGM (P5, maxval 255).
void write_pgm(const std::filesystem::path& path, const GrayImage& img);
GrayImage read_pgm(const std::filesystem::path& path);

/// 8-bit grayscale PNG.
void write_png(const std::filesystem::path& path, const GrayImage& img);
GrayImage read_png(const std::filesystem::path& path);

/// Dispatch on the extension: .pgm or .png.
void write_image(const std::filesystem::path& path, const GrayImage& img);
GrayImage read_image(const std::filesystem::path& path);

}  // namespace flatswim::flow
