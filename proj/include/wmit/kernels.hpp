#pragma once

// Data-parallel sweeps used by every module: point-wise evaluation over grids,
// panel integrals with a prefix sum, and chunked Monte Carlo streams.
//
// Each kernel has a serial reference (`*_serial`) and an OpenMP version. Results are
// bitwise identical across the two and across thread counts: every output element is
// computed by the same code, and random streams are keyed by chunk index, not thread.

#include <cstddef>
#include <cstdint>
#include <exception>
#include <mutex>
#include <random>
#include <span>
#include <vector>

#ifdef WMIT_HAVE_OPENMP
#include <omp.h>
#endif

namespace wmit::kernels {

enum class Exec { serial, parallel };

/// Captures the first exception thrown inside a parallel region and rethrows it outside.
class ExceptionSink {
  public:
    template <class F>
    void run(F&& f) noexcept {
        try {
            f();
        } catch (...) {
            std::lock_guard lock(mu_);
            if (!first_) first_ = std::current_exception();
        }
    }
    void rethrow() const {
        if (first_) std::rethrow_exception(first_);
    }

  private:
    std::mutex mu_;
    std::exception_ptr first_;
};

template <class F>
std::vector<double> map_serial(std::span<const double> xs, F&& f) {
    std::vector<double> out(xs.size());
    for (std::size_t i = 0; i < xs.size(); ++i) out[i] = f(xs[i]);
    return out;
}

template <class F>
std::vector<double> map_parallel(std::span<const double> xs, F&& f) {
    std::vector<double> out(xs.size());
    ExceptionSink sink;
    const auto n = static_cast<std::ptrdiff_t>(xs.size());
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < n; ++i) {
        sink.run([&] { out[static_cast<std::size_t>(i)] = f(xs[static_cast<std::size_t>(i)]); });
    }
    sink.rethrow();
    return out;
}

template <class F>
std::vector<double> map(std::span<const double> xs, F&& f, Exec exec = Exec::parallel) {
    return exec == Exec::serial ? map_serial(xs, f) : map_parallel(xs, f);
}

/// Index-based variant: out[i] = f(i) for i in [0, n).
template <class F>
std::vector<double> generate(std::size_t n, F&& f, Exec exec = Exec::parallel) {
    std::vector<double> out(n);
    if (exec == Exec::serial) {
        for (std::size_t i = 0; i < n; ++i) out[i] = f(i);
        return out;
    }
    ExceptionSink sink;
    const auto m = static_cast<std::ptrdiff_t>(n);
#pragma omp parallel for schedule(dynamic, 4)
    for (std::ptrdiff_t i = 0; i < m; ++i) {
        sink.run([&] { out[static_cast<std::size_t>(i)] = f(static_cast<std::size_t>(i)); });
    }
    sink.rethrow();
    return out;
}

/// Cumulative integral at each point: out[i] = integral of the panels up to points[i],
/// where panel_integral(a, b) integrates over [a, b] and the first panel starts at `origin`.
/// Panels are independent (parallel); the prefix sum is serial.
template <class PanelFn>
std::vector<double> cumulative(double origin, std::span<const double> points, PanelFn&& panel_integral,
                               Exec exec = Exec::parallel) {
    const auto panels = generate(
        points.size(),
        [&](std::size_t i) {
            const double a = i == 0 ? origin : points[i - 1];
            return panel_integral(a, points[i]);
        },
        exec);
    std::vector<double> out(points.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < points.size(); ++i) {
        acc += panels[i];
        out[i] = acc;
    }
    return out;
}

inline constexpr std::size_t kChunk = 4096;

/// Independent generator for (seed, stream). Distinct streams never share state.
inline std::mt19937_64 make_stream(std::uint64_t seed, std::uint64_t stream) {
    std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                      static_cast<std::uint32_t>(stream), static_cast<std::uint32_t>(stream >> 32),
                      0x57a17u};
    return std::mt19937_64(seq);
}

/// Uniform on the open interval (0, 1) with 53-bit resolution.
inline double uniform_open(std::mt19937_64& rng) {
    return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53;
}

/// count draws of draw(rng); chunk c uses stream c, so output depends only on (count, seed).
template <class Draw>
std::vector<double> draw_serial(std::size_t count, std::uint64_t seed, Draw&& draw) {
    std::vector<double> out(count);
    const std::size_t chunks = (count + kChunk - 1) / kChunk;
    for (std::size_t c = 0; c < chunks; ++c) {
        auto rng = make_stream(seed, c);
        const std::size_t end = std::min(count, (c + 1) * kChunk);
        for (std::size_t i = c * kChunk; i < end; ++i) out[i] = draw(rng);
    }
    return out;
}

template <class Draw>
std::vector<double> draw_parallel(std::size_t count, std::uint64_t seed, Draw&& draw) {
    std::vector<double> out(count);
    const auto chunks = static_cast<std::ptrdiff_t>((count + kChunk - 1) / kChunk);
    ExceptionSink sink;
#pragma omp parallel for schedule(dynamic, 1)
    for (std::ptrdiff_t c = 0; c < chunks; ++c) {
        sink.run([&] {
            auto rng = make_stream(seed, static_cast<std::uint64_t>(c));
            const std::size_t begin = static_cast<std::size_t>(c) * kChunk;
            const std::size_t end = std::min(count, begin + kChunk);
            for (std::size_t i = begin; i < end; ++i) out[i] = draw(rng);
        });
    }
    sink.rethrow();
    return out;
}

template <class Draw>
std::vector<double> draw(std::size_t count, std::uint64_t seed, Draw&& d, Exec exec = Exec::parallel) {
    return exec == Exec::serial ? draw_serial(count, seed, d) : draw_parallel(count, seed, d);
}

inline int max_threads() {
#ifdef WMIT_HAVE_OPENMP
    return omp_get_max_threads();
#else
    return 1;
#endif
}

}  // namespace wmit::kernels
