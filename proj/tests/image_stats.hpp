#pragma once

#include <cmath>
#include <cstddef>

#include "flatswim/flow/image.hpp"

namespace test {

// Lag where the normalized autocorrelation along (dx, dy) first falls below
// 1/e, interpolated linearly, over pixels at least `border` from the edge.
inline double correlation_length(const flatswim::flow::GrayImage& img, int dx, int dy, std::size_t border, int max_lag = 60) {
    double sum = 0.0;
    std::size_t n = 0;
    for (std::size_t y = border; y + border < img.height; ++y)
        for (std::size_t x = border; x + border < img.width; ++x) {
            sum += img.at(x, y);
            ++n;
        }
    const double mean = sum / static_cast<double>(n);
    const auto r = [&](int lag) {
        double num = 0.0;
        double den = 0.0;
        for (std::size_t y = border; y + border < img.height; ++y)
            for (std::size_t x = border; x + border < img.width; ++x) {
                const double a = img.at(x, y) - mean;
                const long xs = static_cast<long>(x) + lag * dx;
                const long ys = static_cast<long>(y) + lag * dy;
                if (xs < 0 || ys < 0 || xs >= static_cast<long>(img.width) || ys >= static_cast<long>(img.height))
                    continue;
                num += a * (img.at(static_cast<std::size_t>(xs), static_cast<std::size_t>(ys)) - mean);
                den += a * a;
            }
        return num / den;
    };
    const double level = std::exp(-1.0);
    double prev = 1.0;
    for (int lag = 1; lag <= max_lag; ++lag) {
        const double c = r(lag);
        if (c < level) return lag - 1 + (prev - level) / (prev - c);
        prev = c;
    }
    return max_lag;
}

}  // namespace test
