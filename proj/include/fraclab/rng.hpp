#pragma once

// Counter-based random streams (Philox4x32-10, Salmon et al. SC 2011).
// Every sampled path owns an independent stream keyed by
// (master_seed, stream_id, path_index), so batches are bit-reproducible
// for any worker count and scheduling order.

#include <cmath>
#include <cstdint>
#include <array>

namespace fraclab {

struct SeedSpec {
    std::uint64_t master_seed = 0;
    std::uint64_t stream_id = 0;
};

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

}  // namespace detail

// Derived stream for an independent sub-experiment (coarse/fine grids,
// per-module tags, ...).
inline SeedSpec substream(SeedSpec s, std::uint64_t tag) {
    return {s.master_seed, detail::splitmix64(s.stream_id ^ detail::splitmix64(tag))};
}

class PathRng {
public:
    PathRng(SeedSpec seed, std::uint64_t path_index) {
        std::uint64_t k = detail::splitmix64(seed.master_seed);
        k = detail::splitmix64(k ^ seed.stream_id);
        k = detail::splitmix64(k ^ path_index);
        key_[0] = static_cast<std::uint32_t>(k);
        key_[1] = static_cast<std::uint32_t>(k >> 32);
        counter_ = {0, 0, 0, 0};
        buf_pos_ = 2;  // empty
    }

    std::uint64_t next_u64() {
        if (buf_pos_ >= 2) refill();
        return buf_[buf_pos_++];
    }

    // Uniform on the open interval (0,1); never returns an exact endpoint.
    double uniform01() {
        return (double(next_u64() >> 11) + 0.5) * 0x1.0p-53;
    }

    double normal() { return ziggurat(); }

private:
    static void mulhilo(std::uint32_t a, std::uint32_t b, std::uint32_t& lo, std::uint32_t& hi) {
        const std::uint64_t p = std::uint64_t(a) * b;
        lo = static_cast<std::uint32_t>(p);
        hi = static_cast<std::uint32_t>(p >> 32);
    }

    void refill() {
        static constexpr std::uint32_t kW32A = 0x9E3779B9u, kW32B = 0xBB67AE85u;
        static constexpr std::uint32_t kM4x32A = 0xD2511F53u, kM4x32B = 0xCD9E8D57u;
        std::array<std::uint32_t, 4> c = counter_;
        std::uint32_t k0 = key_[0], k1 = key_[1];
        for (int round = 0; round < 10; ++round) {
            std::uint32_t lo0, hi0, lo1, hi1;
            mulhilo(kM4x32A, c[0], lo0, hi0);
            mulhilo(kM4x32B, c[2], lo1, hi1);
            c = {hi1 ^ c[1] ^ k0, lo1, hi0 ^ c[3] ^ k1, lo0};
            k0 += kW32A;
            k1 += kW32B;
        }
        buf_[0] = (std::uint64_t(c[1]) << 32) | c[0];
        buf_[1] = (std::uint64_t(c[3]) << 32) | c[2];
        buf_pos_ = 0;
        if (++counter_[0] == 0 && ++counter_[1] == 0 && ++counter_[2] == 0) ++counter_[3];
    }

    // Ziggurat (Marsaglia-Tsang, 256 layers; strips indexed with X[] decreasing).
    struct ZigTables {
        std::array<double, 257> x{};
        std::array<double, 257> f{};
        ZigTables() {
            const double r = 3.6541528853610088;
            const double fr = std::exp(-0.5 * r * r);
            const double v = r * fr + std::sqrt(std::atan(1.0) * 2.0) * std::erfc(r / std::sqrt(2.0));
            x[0] = v / fr;
            x[1] = r;
            for (int i = 2; i < 256; ++i)
                x[i] = std::sqrt(-2.0 * std::log(v / x[i - 1] + std::exp(-0.5 * x[i - 1] * x[i - 1])));
            x[256] = 0.0;
            for (int i = 0; i <= 256; ++i) f[i] = std::exp(-0.5 * x[i] * x[i]);
            f[256] = 1.0;
        }
    };

    static const ZigTables& zig() {
        static const ZigTables t;
        return t;
    }

    double ziggurat() {
        const ZigTables& t = zig();
        for (;;) {
            const std::uint64_t u = next_u64();
            const int i = int(u & 0xFF);
            const bool neg = (u & 0x100) != 0;
            const double mag = double(u >> 11) * 0x1.0p-53;  // [0,1)
            const double x = mag * t.x[i];
            if (x < t.x[i + 1]) return neg ? -x : x;
            if (i == 0) {
                // tail beyond r
                const double r = t.x[1];
                double xe, ye;
                do {
                    xe = -std::log(uniform01()) / r;
                    ye = -std::log(uniform01());
                } while (ye + ye < xe * xe);
                return neg ? -(r + xe) : (r + xe);
            }
            const double fx = std::exp(-0.5 * x * x);
            if (uniform01() * (t.f[i + 1] - t.f[i]) < fx - t.f[i]) return neg ? -x : x;
        }
    }

    std::array<std::uint32_t, 4> counter_{};
    std::array<std::uint32_t, 2> key_{};
    std::array<std::uint64_t, 2> buf_{};
    unsigned buf_pos_ = 2;
};

}  // namespace fraclab
