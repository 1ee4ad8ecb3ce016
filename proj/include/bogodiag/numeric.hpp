#pragma once

#include <charconv>
#include <cmath>
#include <complex>
#include <cstdint>
#include <random>
#include <string>

namespace bogodiag {

// Shortest decimal string that parses back to the same double. Used by every
// report writer so the same value always prints the same way.
inline std::string format_double(double x) {
    char buf[32];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), x);
    (void)ec;
    return std::string(buf, ptr);
}

// Deterministic RNG. Gaussians go through an explicit Box-Muller so streams
// do not depend on the standard library's distribution internals.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : eng_(seed) {}

    double uniform() { // [0,1)
        return static_cast<double>(eng_() >> 11) * 0x1.0p-53;
    }

    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }

    double gaussian() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u1 = 0.0;
        while (u1 <= 0.0) u1 = uniform();
        double u2 = uniform();
        double r = std::sqrt(-2.0 * std::log(u1));
        spare_ = r * std::sin(2.0 * M_PI * u2);
        have_spare_ = true;
        return r * std::cos(2.0 * M_PI * u2);
    }

    std::complex<double> complex_gaussian() {
        double re = gaussian();
        double im = gaussian();
        return {re, im};
    }

    std::uint64_t integer() { return eng_(); }

    int integer(int lo, int hi) { // inclusive bounds
        return lo + static_cast<int>(eng_() % static_cast<std::uint64_t>(hi - lo + 1));
    }

private:
    std::mt19937_64 eng_;
    bool have_spare_ = false;
    double spare_ = 0.0;
};

// C(n+k, k) with overflow guard; callers treat values above `cap` as "too big".
inline long basis_count(int n, int k, long cap) {
    long result = 1;
    for (int i = 1; i <= k; ++i) {
        result = result * (n + i) / i;
        if (result > cap) return cap + 1;
    }
    return result;
}

} // namespace bogodiag
