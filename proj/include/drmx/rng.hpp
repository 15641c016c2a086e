#ifndef DRMX_RNG_HPP
#define DRMX_RNG_HPP

#include <cstdint>
#include <random>

namespace drmx {

// mt19937_64 with hand-rolled bounded/real draws. The std distributions are
// implementation-defined, which would break the byte-identical-output
// determinism contract across standard libraries.
class Rng {
public:
    explicit Rng(uint64_t seed)
        : engine_(seed), seed_mix_(seed * 0x9e3779b97f4a7c15ULL + 0x2545f4914f6cdd1dULL) {}

    uint64_t next_u64() { return engine_(); }

    // uniform in [0, n)
    uint64_t below(uint64_t n) {
        uint64_t limit = UINT64_MAX - UINT64_MAX % n;
        uint64_t x;
        do {
            x = engine_();
        } while (x >= limit);
        return x % n;
    }

    int range(int lo, int hi) { // inclusive
        return lo + static_cast<int>(below(static_cast<uint64_t>(hi - lo + 1)));
    }

    double uniform01() { return (engine_() >> 11) * 0x1.0p-53; }

    // standard normal via Box-Muller
    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u, v, s;
        do {
            u = 2.0 * uniform01() - 1.0;
            v = 2.0 * uniform01() - 1.0;
            s = u * u + v * v;
        } while (s >= 1.0 || s == 0.0);
        double m = std::sqrt(-2.0 * std::log(s) / s);
        spare_ = v * m;
        have_spare_ = true;
        return u * m;
    }

    // independent substream for a named purpose
    Rng substream(uint64_t tag) const {
        uint64_t z = seed_mix_ ^ (tag + 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return Rng(z ^ (z >> 31));
    }

private:
    std::mt19937_64 engine_;
    uint64_t seed_mix_ = 0;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

} // namespace drmx

#endif
