#include "d2d/filters.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

namespace d2d {

namespace {

constexpr double pi = std::numbers::pi;

void normalize(std::vector<double>& taps)
{
    const double e = std::inner_product(taps.begin(), taps.end(), taps.begin(), 0.0);
    if (e <= 0)
        throw std::invalid_argument("filter has zero energy");
    const double s = 1.0 / std::sqrt(e);
    for (auto& t : taps)
        t *= s;
}

} // namespace

double PrototypeFilter::energy() const
{
    return std::inner_product(taps.begin(), taps.end(), taps.begin(), 0.0);
}

double rrc_impulse(double t, double rolloff)
{
    constexpr double eps = 1e-10;
    if (std::abs(t) < eps)
        return 1.0 - rolloff + 4.0 * rolloff / pi;
    if (rolloff > 0 && std::abs(std::abs(t) - 1.0 / (4.0 * rolloff)) < eps) {
        const double a = pi / (4.0 * rolloff);
        return rolloff / std::sqrt(2.0) *
               ((1.0 + 2.0 / pi) * std::sin(a) + (1.0 - 2.0 / pi) * std::cos(a));
    }
    const double x = 4.0 * rolloff * t;
    return (std::sin(pi * t * (1.0 - rolloff)) + x * std::cos(pi * t * (1.0 + rolloff))) /
           (pi * t * (1.0 - x * x));
}

PrototypeFilter rrc_filter(double rolloff, int overlap_factor, int samples_per_symbol)
{
    if (!(rolloff >= 0.0 && rolloff <= 1.0))
        throw std::invalid_argument("RRC rolloff must lie in [0, 1]");
    if (overlap_factor < 1 || samples_per_symbol < 1)
        throw std::invalid_argument("RRC overlap factor and samples per symbol must be >= 1");

    const int len = overlap_factor * samples_per_symbol;
    const double center = 0.5 * (len - 1);
    PrototypeFilter f;
    f.taps.resize(static_cast<std::size_t>(len));
    for (int k = 0; k < len; ++k)
        f.taps[k] = rrc_impulse((k - center) / samples_per_symbol, rolloff);
    // Exact symmetry regardless of rounding in the two halves.
    for (int k = 0; k < len / 2; ++k)
        f.taps[len - 1 - k] = f.taps[k];
    normalize(f.taps);
    f.overlap_factor = overlap_factor;
    f.samples_per_symbol = samples_per_symbol;
    f.name = "rrc";
    f.rolloff = rolloff;
    return f;
}

PrototypeFilter phydyas_filter(int overlap_factor, int samples_per_symbol)
{
    if (overlap_factor != 4)
        throw std::invalid_argument("PHYDYAS filter is only available for overlap factor 4");
    if (samples_per_symbol < 1)
        throw std::invalid_argument("samples per symbol must be >= 1");

    // Frequency samples H_0..H_3 of the K = 4 design.
    constexpr std::array<double, 4> H{1.0, 0.97195983, 0.70710678118654752, 0.23514695};
    const int K = overlap_factor;
    const int len = K * samples_per_symbol;
    PrototypeFilter f;
    f.taps.resize(static_cast<std::size_t>(len));
    for (int k = 0; k < len; ++k) {
        // Half-sample grid keeps the tap vector exactly even-symmetric.
        const double x = (k + 0.5) / len;
        double v = H[0];
        for (int i = 1; i < K; ++i)
            v += 2.0 * ((i % 2) ? -1.0 : 1.0) * H[i] * std::cos(2.0 * pi * i * x);
        f.taps[k] = v;
    }
    normalize(f.taps);
    f.overlap_factor = K;
    f.samples_per_symbol = samples_per_symbol;
    f.name = "phydyas";
    return f;
}

PrototypeFilter lapped_sine_filter(int M, LappedIndexing indexing)
{
    if (M < 1)
        throw std::invalid_argument("lapped filter needs M >= 1");
    const double shift = indexing == LappedIndexing::Symmetric ? 0.5 : -0.5;
    PrototypeFilter f;
    f.taps.resize(static_cast<std::size_t>(2 * M));
    for (int k = 0; k < 2 * M; ++k)
        f.taps[k] = -std::sin((k + shift) * pi / (2.0 * M));
    normalize(f.taps);
    f.overlap_factor = 2;
    f.samples_per_symbol = M;
    f.name = indexing == LappedIndexing::Symmetric ? "lapped-sine" : "lapped-sine-asymmetric";
    return f;
}

PrototypeFilter gfdm_circular_filter(const PrototypeFilter& base, int block_symbols, int M)
{
    if (block_symbols < 1 || M < 1)
        throw std::invalid_argument("GFDM block needs N_b >= 1 and M >= 1");
    const std::size_t len = static_cast<std::size_t>(block_symbols) * static_cast<std::size_t>(M);
    PrototypeFilter f;
    f.taps.assign(len, 0.0);
    for (std::size_t k = 0; k < base.taps.size(); ++k)
        f.taps[k % len] += base.taps[k];
    normalize(f.taps);
    f.overlap_factor = base.overlap_factor;
    f.samples_per_symbol = M;
    f.name = "gfdm-circular";
    f.rolloff = base.rolloff;
    return f;
}

} // namespace d2d
