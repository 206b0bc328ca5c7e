#pragma once

#include <cmath>
#include <cstdint>
#include <vector>

namespace isenet {

// Deterministic xoshiro256** generator. std::mt19937_64 would also be
// reproducible, but the standard distributions are not, so both the raw
// stream and every derived draw live here.
class Rng {
   public:
    explicit Rng(uint64_t seed) {
        // splitmix64 seeding as recommended for the xoshiro family
        uint64_t x = seed;
        for (auto& si : s_) {
            x += 0x9e3779b97f4a7c15ULL;
            uint64_t z = x;
            z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
            z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
            si = z ^ (z >> 31);
        }
    }

    // Independent substream, e.g. one per epoch or per record.
    Rng split(uint64_t stream) const {
        uint64_t mix = s_[0] ^ (stream * 0x9e3779b97f4a7c15ULL + 0x853c49e6748fea9bULL);
        return Rng(mix ^ (s_[1] + stream));
    }

    uint64_t next() {
        uint64_t result = rotl(s_[1] * 5, 7) * 9;
        uint64_t t = s_[1] << 17;
        s_[2] ^= s_[0];
        s_[3] ^= s_[1];
        s_[1] ^= s_[2];
        s_[0] ^= s_[3];
        s_[2] ^= t;
        s_[3] = rotl(s_[3], 45);
        return result;
    }

    // uniform in [0, 1)
    double uniform() { return static_cast<double>(next() >> 11) * 0x1.0p-53; }

    // uniform integer in [0, bound)
    uint64_t uniform_int(uint64_t bound) {
        // rejection sampling to avoid modulo bias
        uint64_t threshold = (0ULL - bound) % bound;
        for (;;) {
            uint64_t r = next();
            if (r >= threshold) return r % bound;
        }
    }

    double normal() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = uniform(), u2 = uniform();
        while (u1 <= 1e-300) u1 = uniform();
        double mag = std::sqrt(-2.0 * std::log(u1));
        spare_ = mag * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return mag * std::cos(2.0 * M_PI * u2);
    }

    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (std::size_t i = v.size(); i > 1; --i) {
            std::size_t j = static_cast<std::size_t>(uniform_int(i));
            std::swap(v[i - 1], v[j]);
        }
    }

    // k distinct indices from [0, n), ascending
    std::vector<std::size_t> sample_without_replacement(std::size_t n, std::size_t k) {
        // Floyd's algorithm, then sort via the boolean mask
        std::vector<bool> chosen(n, false);
        for (std::size_t j = n - k; j < n; ++j) {
            std::size_t t = static_cast<std::size_t>(uniform_int(j + 1));
            if (chosen[t])
                chosen[j] = true;
            else
                chosen[t] = true;
        }
        std::vector<std::size_t> out;
        out.reserve(k);
        for (std::size_t i = 0; i < n; ++i)
            if (chosen[i]) out.push_back(i);
        return out;
    }

   private:
    static uint64_t rotl(uint64_t x, int k) { return (x << k) | (x >> (64 - k)); }
    uint64_t s_[4];
    bool have_spare_ = false;
    double spare_ = 0.0;
};

}  // namespace isenet
