#pragma once

#include <complex>
#include <cstdint>
#include <vector>

namespace pmech {

// Deterministic splitmix64-based generator. All property tests and the
// verification suites draw from this so that a run is reproducible from a
// single 64-bit seed independent of the standard library implementation.
class Rng {
  public:
    explicit Rng(std::uint64_t seed) : state_(seed) {}

    std::uint64_t next_u64() {
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ull);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ull;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebull;
        return z ^ (z >> 31);
    }

    // uniform in [0,1)
    double uniform() {
        return static_cast<double>(next_u64() >> 11) * 0x1.0p-53;
    }

    double uniform(double a, double b) { return a + (b - a) * uniform(); }

    int uniform_int(int lo, int hi) {  // inclusive bounds
        return lo + static_cast<int>(next_u64() % static_cast<std::uint64_t>(hi - lo + 1));
    }

    // Box-Muller; one value per call keeps the stream layout simple.
    double normal() {
        double u1 = 0.0;
        while (u1 <= 1e-300) u1 = uniform();
        double u2 = uniform();
        return std::sqrt(-2.0 * std::log(u1)) * std::cos(6.283185307179586476925287 * u2);
    }

    std::complex<double> complex_normal() {
        double re = normal();
        double im = normal();
        return {re, im};
    }

    std::vector<double> uniform_vector(int m, double a, double b) {
        std::vector<double> v(static_cast<std::size_t>(m));
        for (auto& x : v) x = uniform(a, b);
        return v;
    }

    // Independent substream (e.g. one per verification suite).
    Rng fork(std::uint64_t salt) {
        std::uint64_t mixed = state_ ^ (0x632be59bd9b4e019ull * (salt + 1));
        Rng r(mixed);
        r.next_u64();
        return r;
    }

  private:
    std::uint64_t state_;
};

}  // namespace pmech
