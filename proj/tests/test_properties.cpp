#include "doctest.h"

#include "d2d/allocation.hpp"
#include "d2d/interference.hpp"
#include "d2d/waveforms.hpp"

#include <cmath>
#include <numbers>
#include <random>

using namespace d2d;

namespace {

constexpr int kCases = 100;

SymbolGrid random_grid(WaveformKind kind, int rows, int cols, std::mt19937_64& rng)
{
    SymbolGrid g(rows, cols);
    const auto s = draw_symbols(kind, g.values().size(), rng);
    std::copy(s.begin(), s.end(), g.values().begin());
    return g;
}

double max_abs(const std::vector<cplx>& v)
{
    double m = 0;
    for (auto x : v)
        m = std::max(m, std::abs(x));
    return m;
}

// Small configs so a hundred cases stay quick.
WaveformConfig small(WaveformKind kind) { return preset(kind, 16, 2); }

// Half-sine prototype of length M: a perfect-reconstruction OQAM pulse.
WaveformConfig half_sine_oqam(int M)
{
    auto c = preset(WaveformKind::OQAM, M, 0);
    c.filter.taps.assign(static_cast<std::size_t>(M), 0.0);
    for (int k = 0; k < M; ++k)
        c.filter.taps[static_cast<std::size_t>(k)] =
            std::sin(std::numbers::pi * (k + 0.5) / M) / std::sqrt(M / 2.0);
    c.filter.overlap_factor = 1;
    c.filter.name = "half-sine";
    c.overlap_factor = 1;
    return c;
}

double oqam_recovery_error(const WaveformConfig& c, int rows, std::mt19937_64& rng)
{
    const auto grid = random_grid(WaveformKind::OQAM, rows, c.M, rng);
    const auto out = oqam_demodulate(c, synthesize(c, grid), rows);
    // gain from an isolated symbol
    SymbolGrid one(rows, c.M);
    one(rows / 2, c.M / 2) = 1.0;
    const double gain = oqam_demodulate(c, synthesize(c, one), rows)(rows / 2, c.M / 2).real();
    double err = 0;
    for (int n = 0; n < rows; ++n)
        for (int m = 0; m < c.M; ++m)
            err = std::max(err, std::abs(out(n, m).real() / gain - grid(n, m).real()));
    return err;
}

} // namespace

TEST_CASE("synthesis is linear for every waveform")
{
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(-2, 2);
    for (int t = 0; t < kCases; ++t) {
        const auto kind = kAllWaveforms[static_cast<std::size_t>(t) % kAllWaveforms.size()];
        const auto c = small(kind);
        const int rows = kind == WaveformKind::GFDM ? 2 * c.block_symbols : 3;
        const auto a = random_grid(kind, rows, c.M, rng);
        const auto b = random_grid(kind, rows, c.M, rng);
        const double x = u(rng), y = u(rng);
        SymbolGrid mix(rows, c.M);
        for (std::size_t i = 0; i < mix.values().size(); ++i)
            mix.values()[i] = x * a.values()[i] + y * b.values()[i];
        const auto sa = synthesize(c, a), sb = synthesize(c, b), sm = synthesize(c, mix);
        REQUIRE(sm.size() == sa.size());
        std::vector<cplx> diff(sm.size());
        for (std::size_t k = 0; k < sm.size(); ++k)
            diff[k] = sm.samples[k] - (x * sa.samples[k] + y * sb.samples[k]);
        CAPTURE(t);
        CHECK(max_abs(diff) <= 1e-10 * std::max(1.0, max_abs(sm.samples)));
    }
}

TEST_CASE("moving a subcarrier multiplies the signal by a complex exponential")
{
    std::mt19937_64 rng(6);
    const WaveformKind kinds[] = {WaveformKind::OFDM, WaveformKind::FMT, WaveformKind::GFDM};
    for (int t = 0; t < kCases; ++t) {
        const auto kind = kinds[t % 3];
        const auto c = small(kind);
        const int rows = kind == WaveformKind::GFDM ? c.block_symbols : 2;
        std::uniform_int_distribution<int> col(0, c.M - 1);
        const int m = col(rng), m2 = col(rng);
        const auto sym = draw_symbols(kind, static_cast<std::size_t>(rows), rng);
        SymbolGrid g1(rows, c.M), g2(rows, c.M);
        for (int n = 0; n < rows; ++n) {
            g1(n, m) = sym[static_cast<std::size_t>(n)];
            g2(n, m2) = sym[static_cast<std::size_t>(n)];
        }
        const auto s1 = synthesize(c, g1), s2 = synthesize(c, g2);
        REQUIRE(s1.first_index == s2.first_index);
        double err = 0;
        for (std::size_t i = 0; i < s1.size(); ++i) {
            const double k = static_cast<double>(s1.first_index + static_cast<std::ptrdiff_t>(i));
            const cplx rot = std::polar(1.0, 2 * std::numbers::pi * k * (m2 - m) / c.M);
            err = std::max(err, std::abs(s2.samples[i] - s1.samples[i] * rot));
        }
        CAPTURE(t);
        CHECK(err <= 1e-10 * std::max(1.0, max_abs(s1.samples)));
    }
}

TEST_CASE("OFDM round trip recovers the grid")
{
    std::mt19937_64 rng(7);
    std::uniform_int_distribution<int> rows(1, 6);
    for (int t = 0; t < kCases; ++t) {
        const auto c = t % 2 ? preset(WaveformKind::OFDM) : small(WaveformKind::OFDM);
        const int n = rows(rng);
        const auto g = random_grid(WaveformKind::OFDM, n, c.M, rng);
        const auto back = ofdm_demodulate(c, synthesize(c, g), n);
        double err = 0;
        for (std::size_t i = 0; i < g.values().size(); ++i)
            err = std::max(err, std::abs(back.values()[i] - g.values()[i]));
        CAPTURE(t);
        CHECK(err <= 1e-10);
    }
}

TEST_CASE("OQAM with a perfect-reconstruction prototype is real-orthogonal")
{
    std::mt19937_64 rng(8);
    for (int t = 0; t < kCases; ++t) {
        const int M = 8 + 4 * (t % 5);
        CAPTURE(t);
        CHECK(oqam_recovery_error(half_sine_oqam(M), 6, rng) <= 1e-8);
    }
}

TEST_CASE("OQAM with PHYDYAS is near-orthogonal")
{
    std::mt19937_64 rng(9);
    const auto c = preset(WaveformKind::OQAM, 32, 0);
    for (int t = 0; t < 5; ++t)
        CHECK(oqam_recovery_error(c, 16, rng) <= 2e-3);
}

TEST_CASE("total interference is linear in the power vector")
{
    std::mt19937_64 rng(10);
    std::uniform_real_distribution<double> u(0, 1);
    InterferenceTable t(WaveformKind::FMT, -30, 30, {-4, 0, 4}, {-1.0, -0.5, 0.0, 0.5, 1.0});
    for (auto& v : t.values())
        v = std::pow(10.0, -6 * u(rng));
    const BandMap bands{{10, 11, 12, 13}, {0, 1, 2, 3, 4, 5, 20, 21, 22, 23, 24, 25}};
    std::uniform_int_distribution<int> ti(0, 2);
    for (int c = 0; c < kCases; ++c) {
        std::vector<double> p1(4), p2(4), mix(4);
        const double a = 2 * u(rng), b = 2 * u(rng);
        for (std::size_t i = 0; i < 4; ++i) {
            p1[i] = u(rng);
            p2[i] = u(rng);
            mix[i] = a * p1[i] + b * p2[i];
        }
        const Offset off{t.dt_grid()[static_cast<std::size_t>(ti(rng))], 2 * u(rng) - 1};
        const double lhs = total_interference(t, mix, bands, off);
        const double rhs =
            a * total_interference(t, p1, bands, off) + b * total_interference(t, p2, bands, off);
        CAPTURE(c);
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-12));
    }
}

TEST_CASE("optimal rate is nondecreasing in the interference threshold")
{
    std::mt19937_64 rng(11);
    std::uniform_real_distribution<double> u(0, 1);
    for (int c = 0; c < kCases; ++c) {
        std::vector<double> omega(12);
        for (auto& o : omega)
            o = std::pow(10.0, -4 + 3 * u(rng));
        const double lo = std::pow(10.0, -5 + 4 * u(rng));
        const double hi = lo * (1 + 10 * u(rng));
        const auto p_lo = AllocationProblem::uniform(omega, 1.0, lo, 1e-6);
        const auto p_hi = AllocationProblem::uniform(omega, 1.0, hi, 1e-6);
        CAPTURE(c);
        CHECK(objective_bits(p_hi, solve(p_hi).powers) >=
              objective_bits(p_lo, solve(p_lo).powers) - 1e-9);
    }
}
