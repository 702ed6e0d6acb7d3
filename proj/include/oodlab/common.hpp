#ifndef OODLAB_COMMON_HPP
#define OODLAB_COMMON_HPP

#include <cmath>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

namespace oodlab {

// Absolute tolerance for probability-mass comparisons.
inline constexpr double kMassTol = 1e-12;
// File masses may be hand-written; they must sum to 1 within this before
// exact renormalization.
inline constexpr double kLoadTol = 1e-9;
// Equality of suprema built from up to ~1e4 float products.
inline constexpr double kSupTol = 1e-9;
// Hypothesis enumeration cap.
inline constexpr std::size_t kSpaceCap = 10'000'000;
// Split enumeration cap for counting searches.
inline constexpr std::size_t kSplitCap = 1'000'000;

struct Error : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct DomainParameterError : Error {
    using Error::Error;
};
struct EvaluationError : Error {
    using Error::Error;
};
struct SizeCapError : Error {
    using Error::Error;
};
struct ParseError : Error {
    using Error::Error;
};
struct NoCounterexampleError : Error {
    using Error::Error;
};
struct RealizabilityError : Error {
    using Error::Error;
};
struct InfeasibleError : Error {
    using Error::Error;
};

/// Deterministic 64-bit generator. Streams are reproducible across runs and
/// platforms; every sampling call takes an explicit seed.
class Rng {
public:
    explicit Rng(std::uint64_t seed) : state_(seed + 0x9e3779b97f4a7c15ULL) {}

    std::uint64_t next_u64() {
        // splitmix64
        std::uint64_t z = (state_ += 0x9e3779b97f4a7c15ULL);
        z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
        z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
        return z ^ (z >> 31);
    }

    /// Uniform in [0, 1) with 53 random bits.
    double uniform01() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    /// Uniform integer in [0, n).
    std::uint64_t below(std::uint64_t n) { return next_u64() % n; }

private:
    std::uint64_t state_;
};

inline bool nearly_equal(double a, double b, double tol = kMassTol) {
    return std::abs(a - b) <= tol;
}

inline double sigmoid(double t) { return 1.0 / (1.0 + std::exp(-t)); }

inline int sign_of(double x) { return x > 0 ? 1 : (x < 0 ? -1 : 0); }

}  // namespace oodlab

#endif
