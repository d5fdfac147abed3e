#include "flatswim/flow/piv.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <memory>
#include <mutex>
#include <stdexcept>
#include <string>

#include "flatswim/parallel.hpp"

namespace flatswim::flow {

void PivParams::validate() const {
    if (final_window < 8) throw std::invalid_argument("piv: final_window must be >= 8 px");
    if (step < 1 || step > final_window) throw std::invalid_argument("piv: step must be in [1, final_window]");
    if (levels < 1) throw std::invalid_argument("piv: levels must be >= 1");
    if (final_passes < 1) throw std::invalid_argument("piv: final_passes must be >= 1");
    if (!(mm_per_vector > 0.0)) throw std::invalid_argument("piv: mm_per_vector must be > 0");
    if (!(outlier_threshold > 0.0) || !(outlier_epsilon > 0.0))
        throw std::invalid_argument("piv: outlier parameters must be > 0");
}

double subpixel_peak(double left, double center, double right) {
    if (left > 0.0 && center > 0.0 && right > 0.0) {
        const double ll = std::log(left);
        const double lc = std::log(center);
        const double lr = std::log(right);
        const double den = 2.0 * (ll - 2.0 * lc + lr);
        if (den < 0.0) return std::clamp((ll - lr) / den, -0.5, 0.5);
    }
    const double den = 2.0 * (left - 2.0 * center + right);
    if (den < 0.0) return std::clamp((left - right) / den, -0.5, 0.5);
    return 0.0;
}

namespace {

std::mutex& planner_mutex() {
    static std::mutex m;
    return m;
}

struct FftwFree {
    void operator()(void* p) const { fftw_free(p); }
};
template <class T>
using FftwBuffer = std::unique_ptr<T[], FftwFree>;

template <class T>
FftwBuffer<T> fftw_alloc(std::size_t n) {
    return FftwBuffer<T>(static_cast<T*>(fftw_malloc(sizeof(T) * n)));
}

// Plans for one window size; executed on per-worker buffers.
class Correlator {
public:
    explicit Correlator(int n) : n_(n), half_(n / 2 + 1) {
        auto re = fftw_alloc<double>(size());
        auto sp = fftw_alloc<fftw_complex>(spectrum_size());
        std::lock_guard lock(planner_mutex());
        forward_ = fftw_plan_dft_r2c_2d(n, n, re.get(), sp.get(), FFTW_ESTIMATE);
        inverse_ = fftw_plan_dft_c2r_2d(n, n, sp.get(), re.get(), FFTW_ESTIMATE);
    }
    ~Correlator() {
        std::lock_guard lock(planner_mutex());
        fftw_destroy_plan(forward_);
        fftw_destroy_plan(inverse_);
    }
    Correlator(const Correlator&) = delete;
    Correlator& operator=(const Correlator&) = delete;

    std::size_t size() const { return static_cast<std::size_t>(n_) * n_; }
    std::size_t spectrum_size() const { return static_cast<std::size_t>(n_) * half_; }
    int n() const { return n_; }

    struct Buffers {
        FftwBuffer<double> a, b, corr;
        FftwBuffer<fftw_complex> fa, fb;
    };
    Buffers make_buffers() const {
        return {fftw_alloc<double>(size()), fftw_alloc<double>(size()), fftw_alloc<double>(size()),
                fftw_alloc<fftw_complex>(spectrum_size()), fftw_alloc<fftw_complex>(spectrum_size())};
    }

    // Circular cross-correlation of buf.a and buf.b into buf.corr; index k
    // holds sum_x a(x)·b(x + k).
    void correlate(Buffers& buf) const {
        fftw_execute_dft_r2c(forward_, buf.a.get(), buf.fa.get());
        fftw_execute_dft_r2c(forward_, buf.b.get(), buf.fb.get());
        for (std::size_t k = 0; k < spectrum_size(); ++k) {
            const double ar = buf.fa[k][0];
            const double ai = -buf.fa[k][1];
            const double br = buf.fb[k][0];
            const double bi = buf.fb[k][1];
            buf.fa[k][0] = ar * br - ai * bi;
            buf.fa[k][1] = ar * bi + ai * br;
        }
        fftw_execute_dft_c2r(inverse_, buf.fa.get(), buf.corr.get());
    }

private:
    int n_;
    int half_;
    fftw_plan forward_{};
    fftw_plan inverse_{};
};

struct Grid {
    std::size_t nx = 0;
    std::size_t ny = 0;
    std::vector<double> xs;
    std::vector<double> ys;
};

// Window centres (pixel-centre coordinates) for a window size and step, centred in the image.
std::vector<double> axis_centres(std::size_t extent, int window, int step) {
    const auto e = static_cast<long>(extent);
    const long count = (e - window) / step + 1;
    const long margin = (e - window - (count - 1) * step) / 2;
    std::vector<double> out;
    for (long k = 0; k < count; ++k)
        out.push_back(static_cast<double>(margin + k * step) + 0.5 * (window - 1));
    return out;
}

// Bilinear lookup of a displacement field on a (possibly coarser) grid, clamped to its extent.
Vec2 interpolate(const Grid& g, const std::vector<Vec2>& d, double x, double y) {
    const auto locate = [](const std::vector<double>& axis, double v) -> std::pair<std::size_t, double> {
        if (axis.size() == 1 || v <= axis.front()) return {0, 0.0};
        if (v >= axis.back()) return {axis.size() - 2, 1.0};
        const auto hi = std::upper_bound(axis.begin(), axis.end(), v);
        const auto i = static_cast<std::size_t>(hi - axis.begin()) - 1;
        return {i, (v - axis[i]) / (axis[i + 1] - axis[i])};
    };
    const auto [i, tx] = locate(g.xs, x);
    const auto [j, ty] = locate(g.ys, y);
    const std::size_t i1 = g.nx > 1 ? i + 1 : i;
    const std::size_t j1 = g.ny > 1 ? j + 1 : j;
    const auto at = [&](std::size_t a, std::size_t b) { return d[b * g.nx + a]; };
    const Vec2 lo = at(i, j) * (1.0 - tx) + at(i1, j) * tx;
    const Vec2 hi = at(i, j1) * (1.0 - tx) + at(i1, j1) * tx;
    return lo * (1.0 - ty) + hi * ty;
}

// Copies a window with top-left (x0, y0) into dst, subtracting the mean of
// the in-image pixels; pixels outside the image read as the mean.
void extract(const FloatImage& img, long x0, long y0, int n, double* dst) {
    double sum = 0.0;
    long count = 0;
    const auto w = static_cast<long>(img.width);
    const auto h = static_cast<long>(img.height);
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            const long ix = x0 + x;
            const long iy = y0 + y;
            const bool inside = ix >= 0 && ix < w && iy >= 0 && iy < h;
            const double v = inside ? img.at(static_cast<std::size_t>(ix), static_cast<std::size_t>(iy)) : 0.0;
            dst[y * n + x] = v;
            if (inside) {
                sum += v;
                ++count;
            }
        }
    const double mean = count > 0 ? sum / static_cast<double>(count) : 0.0;
    for (int y = 0; y < n; ++y)
        for (int x = 0; x < n; ++x) {
            const long ix = x0 + x;
            const long iy = y0 + y;
            const bool inside = ix >= 0 && ix < w && iy >= 0 && iy < h;
            dst[y * n + x] = inside ? dst[y * n + x] - mean : 0.0;
        }
}

// Correlation peak as a signed sub-pixel shift.
Vec2 peak_shift(const double* c, int n) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < static_cast<std::size_t>(n) * n; ++k)
        if (c[k] > c[best]) best = k;
    const int py = static_cast<int>(best) / n;
    const int px = static_cast<int>(best) % n;
    const auto at = [&](int x, int y) { return c[((y + n) % n) * n + ((x + n) % n)]; };
    const double dx = subpixel_peak(at(px - 1, py), at(px, py), at(px + 1, py));
    const double dy = subpixel_peak(at(px, py - 1), at(px, py), at(px, py + 1));
    const int sx = px > n / 2 ? px - n : px;
    const int sy = py > n / 2 ? py - n : py;
    return {sx + dx, sy + dy};
}

// Normalized median test; replaces outliers by the neighbour median in place.
std::size_t replace_outliers(const Grid& g, std::vector<Vec2>& d, const std::vector<std::uint8_t>& valid,
                             double threshold, double eps) {
    std::vector<Vec2> out = d;
    std::size_t replaced = 0;
    std::vector<double> nx_vals;
    std::vector<double> ny_vals;
    const auto median = [](std::vector<double> v) {
        const auto mid = v.begin() + static_cast<long>(v.size() / 2);
        std::nth_element(v.begin(), mid, v.end());
        if (v.size() % 2 == 1) return *mid;
        const double upper = *mid;
        const double lower = *std::max_element(v.begin(), mid);
        return 0.5 * (lower + upper);
    };
    for (std::size_t j = 0; j < g.ny; ++j)
        for (std::size_t i = 0; i < g.nx; ++i) {
            const std::size_t idx = j * g.nx + i;
            if (!valid[idx]) continue;
            nx_vals.clear();
            ny_vals.clear();
            for (long dj = -1; dj <= 1; ++dj)
                for (long di = -1; di <= 1; ++di) {
                    if (di == 0 && dj == 0) continue;
                    const long ii = static_cast<long>(i) + di;
                    const long jj = static_cast<long>(j) + dj;
                    if (ii < 0 || jj < 0 || ii >= static_cast<long>(g.nx) || jj >= static_cast<long>(g.ny)) continue;
                    const std::size_t n = static_cast<std::size_t>(jj) * g.nx + static_cast<std::size_t>(ii);
                    if (!valid[n]) continue;
                    nx_vals.push_back(d[n].x);
                    ny_vals.push_back(d[n].y);
                }
            if (nx_vals.size() < 3) continue;
            const Vec2 m{median(nx_vals), median(ny_vals)};
            std::vector<double> rx;
            std::vector<double> ry;
            for (std::size_t k = 0; k < nx_vals.size(); ++k) {
                rx.push_back(std::abs(nx_vals[k] - m.x));
                ry.push_back(std::abs(ny_vals[k] - m.y));
            }
            const double r0x = std::abs(d[idx].x - m.x) / (median(rx) + eps);
            const double r0y = std::abs(d[idx].y - m.y) / (median(ry) + eps);
            if (std::hypot(r0x, r0y) > threshold) {
                out[idx] = m;
                ++replaced;
            }
        }
    d = std::move(out);
    return replaced;
}

struct PassResult {
    Grid grid;
    std::vector<Vec2> disp;
    std::vector<std::uint8_t> valid;
    std::size_t replaced = 0;
};

PassResult run_pass(const FloatImage& a, const FloatImage& b, int window, int step, const PassResult* predictor,
                    const PivParams& params) {
    PassResult r;
    r.grid.xs = axis_centres(a.width, window, step);
    r.grid.ys = axis_centres(a.height, window, step);
    r.grid.nx = r.grid.xs.size();
    r.grid.ny = r.grid.ys.size();
    const std::size_t count = r.grid.nx * r.grid.ny;
    r.disp.assign(count, Vec2{});
    r.valid.assign(count, 1);

    const Correlator corr(window);
    const unsigned workers = params.workers == 0 ? default_workers() : params.workers;
    std::vector<Correlator::Buffers> buffers;
    for (unsigned w = 0; w < std::max(1u, workers); ++w) buffers.push_back(corr.make_buffers());

    parallel_for(count, workers, [&](std::size_t idx, unsigned worker) {
        const double cx = r.grid.xs[idx % r.grid.nx];
        const double cy = r.grid.ys[idx / r.grid.nx];
        if (params.mask && params.mask->contains(cx, cy)) {
            r.valid[idx] = 0;
            return;
        }
        const Vec2 pred = predictor ? interpolate(predictor->grid, predictor->disp, cx, cy) : Vec2{};
        const long px = std::lround(pred.x);
        const long py = std::lround(pred.y);
        const long ax = -(px / 2);
        const long ay = -(py / 2);
        const long bx = px + ax;
        const long by = py + ay;
        const long x0 = std::lround(cx - 0.5 * (window - 1));
        const long y0 = std::lround(cy - 0.5 * (window - 1));
        auto& buf = buffers[worker];
        extract(a, x0 + ax, y0 + ay, window, buf.a.get());
        extract(b, x0 + bx, y0 + by, window, buf.b.get());
        corr.correlate(buf);
        const Vec2 s = peak_shift(buf.corr.get(), window);
        r.disp[idx] = Vec2{static_cast<double>(px), static_cast<double>(py)} + s;
    });

    if (std::none_of(r.valid.begin(), r.valid.end(), [](std::uint8_t v) { return v != 0; }))
        throw std::invalid_argument("piv: mask covers every interrogation window");
    r.replaced = replace_outliers(r.grid, r.disp, r.valid, params.outlier_threshold, params.outlier_epsilon);
    // Masked nodes carry no data but must not disturb the next predictor.
    for (std::size_t k = 0; k < count; ++k)
        if (!r.valid[k]) r.disp[k] = Vec2{};
    return r;
}

}  // namespace

DisplacementGrid piv_correlate(const FloatImage& a, const FloatImage& b, const PivParams& params) {
    params.validate();
    if (a.width != b.width || a.height != b.height) throw std::invalid_argument("piv: image dimensions differ");
    if (a.width < static_cast<std::size_t>(params.final_window) ||
        a.height < static_cast<std::size_t>(params.final_window))
        throw std::invalid_argument("piv: images smaller than the final window");

    const auto min_extent = static_cast<long>(std::min(a.width, a.height));
    std::optional<PassResult> prev;
    for (int level = 0; level < params.levels; ++level) {
        const int scale = 1 << (params.levels - 1 - level);
        const int window = params.final_window * scale;
        if (window > min_extent) continue;
        const bool final_level = level == params.levels - 1;
        const int step = final_level ? params.step : window / 2;
        const int passes = final_level ? params.final_passes : 1;
        for (int p = 0; p < passes; ++p) {
            PassResult next = run_pass(a, b, window, step, prev ? &*prev : nullptr, params);
            prev = std::move(next);
        }
    }

    DisplacementGrid out;
    out.nx = prev->grid.nx;
    out.ny = prev->grid.ny;
    out.xs = prev->grid.xs;
    out.ys = prev->grid.ys;
    out.displacement = prev->disp;
    out.valid = prev->valid;
    out.mm_per_vector = params.mm_per_vector;
    out.step = params.step;
    out.outliers_replaced = prev->replaced;
    for (std::size_t k = 0; k < out.displacement.size(); ++k)
        if (!out.valid[k])
            out.displacement[k] = {std::numeric_limits<double>::quiet_NaN(), std::numeric_limits<double>::quiet_NaN()};
    return out;
}

DisplacementGrid piv_correlate(const GrayImage& a, const GrayImage& b, const PivParams& params) {
    return piv_correlate(to_float(a), to_float(b), params);
}

void write_displacement_csv(const std::filesystem::path& path, const DisplacementGrid& grid) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out << "i,j,x_mm,y_mm,u,v,valid\n" << std::setprecision(10);
    const double s = grid.mm_per_px();
    for (std::size_t j = 0; j < grid.ny; ++j)
        for (std::size_t i = 0; i < grid.nx; ++i) {
            const Vec2 d = grid.at(i, j);
            out << i << ',' << j << ',' << grid.xs[i] * s << ',' << grid.ys[j] * s << ',';
            if (grid.is_valid(i, j)) out << d.x << ',' << d.y << ",1\n";
            else out << "nan,nan,0\n";
        }
}

}  // namespace flatswim::flow
