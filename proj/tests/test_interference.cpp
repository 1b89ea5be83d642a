#include "doctest.h"

#include "d2d/interference.hpp"
#include "oracles.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

using namespace d2d;

namespace {

double db(double v) { return 10 * std::log10(v); }

IncumbentConfig incumbent(int N = 20)
{
    IncumbentConfig inc;
    inc.observed_symbols = N;
    return inc;
}

TableGrids small_grids(int dmin, int dmax, std::vector<int> dt, std::vector<double> df)
{
    TableGrids g;
    g.min_distance = dmin;
    g.max_distance = dmax;
    g.dt_grid = std::move(dt);
    g.df_grid = std::move(df);
    return g;
}

std::string slurp(const std::string& path)
{
    std::ifstream in(path, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("instantaneous: OFDM self-capture over one symbol is 1")
{
    const auto inc = incumbent(1);
    const auto s = single_subcarrier_signal(preset(WaveformKind::OFDM), 17, 1, 3);
    CHECK(instantaneous_interference(s, inc, 17, {}) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("instantaneous: OFDM over N symbols sums per-symbol captures")
{
    const auto inc = incumbent(20);
    const auto s = single_subcarrier_signal(preset(WaveformKind::OFDM), 40, 20, 8);
    CHECK(instantaneous_interference(s, inc, 40, {}) == doctest::Approx(20.0).epsilon(1e-12));
    for (int l : {0, 39, 41, 100, 179})
        CHECK(instantaneous_interference(s, inc, l, {}) < 1e-20);
}

TEST_CASE("instantaneous: OFDM inside the CP leaks below -100 dB")
{
    const auto inc = incumbent(20);
    const auto s = single_subcarrier_signal(preset(WaveformKind::OFDM), 40, 20, 8);
    for (int dt = 0; dt <= 12; ++dt)
        for (int l : {38, 39, 41, 42, 60})
            CHECK(instantaneous_interference(s, inc, l, {dt, 0.0}) / 20 < 1e-10);
}

TEST_CASE("instantaneous: errors")
{
    const auto inc = incumbent(20);
    const auto s = single_subcarrier_signal(preset(WaveformKind::OFDM), 40, 20, 8);
    CHECK_THROWS_AS(instantaneous_interference(s, inc, 180, {}), std::out_of_range);
    CHECK_THROWS_AS(instantaneous_interference(s, inc, -1, {}), std::out_of_range);
    // a negative delay needs samples past the end of a 20-symbol stream
    CHECK_THROWS_AS(instantaneous_interference(s, inc, 40, {-13, 0.0}), std::invalid_argument);
    const auto short_sig = single_subcarrier_signal(preset(WaveformKind::OFDM), 40, 5, 8);
    CHECK_THROWS_AS(instantaneous_interference(short_sig, inc, 40, {}), std::invalid_argument);
}

TEST_CASE("mean: one trial equals one instantaneous evaluation over N")
{
    const auto inc = incumbent();
    for (auto k : kAllWaveforms) {
        const auto c = preset(k);
        const Offset off{-30, 0.4};
        const int d = 2;
        std::mt19937_64 rng(77);
        const auto sig = draw_observation_signal(c, inc, kMonteCarloSlot, off, rng);
        const int l = ((kMonteCarloSlot - d) % 180 + 180) % 180;
        const double ref = instantaneous_interference(sig, inc, l, off) / inc.observed_symbols;
        CHECK(mean_interference(c, inc, d, off, 1, 77) == doctest::Approx(ref).epsilon(1e-14));
    }
}

TEST_CASE("mean: observation signal has unit realized power over the observed span")
{
    const auto inc = incumbent();
    for (auto k : kAllWaveforms) {
        std::mt19937_64 rng(1);
        const Offset off{25, 0.0};
        const auto sig = draw_observation_signal(preset(k), inc, 4, off, rng);
        double p = 0;
        const long long span = 20LL * 192;
        for (long long kk = -off.delta_t; kk < span - off.delta_t; ++kk)
            p += std::norm(sig.samples[static_cast<std::size_t>(kk - sig.first_index)]);
        CHECK(p / span == doctest::Approx(1.0).epsilon(1e-12));
    }
}

TEST_CASE("mean: OFDM distance 0 captures all power")
{
    const auto inc = incumbent();
    CHECK(mean_interference(preset(WaveformKind::OFDM), inc, 0, {}, 50, 5) ==
          doctest::Approx(1.0).epsilon(1e-12));
    CHECK_THROWS_AS(mean_interference(preset(WaveformKind::OFDM), inc, 0, {}, 0, 5),
                    std::invalid_argument);
    CHECK_THROWS_AS(mean_interference(preset(WaveformKind::OFDM), inc, 0, {97, 0}, 1, 5),
                    std::invalid_argument);
}

TEST_CASE("mean: deterministic given the seed")
{
    const auto inc = incumbent();
    const auto c = preset(WaveformKind::GFDM);
    CHECK(mean_interference(c, inc, 1, {10, 0.2}, 20, 99) ==
          mean_interference(c, inc, 1, {10, 0.2}, 20, 99));
}

TEST_CASE("analytic: OFDM exact self-capture and orthogonality")
{
    const auto inc = incumbent();
    const auto c = preset(WaveformKind::OFDM);
    CHECK(analytic_mean_interference(c, inc, 0, {}) == doctest::Approx(1.0).epsilon(1e-12));
    for (int d : {-5, -1, 1, 2, 89})
        CHECK(analytic_mean_interference(c, inc, d, {}) < 1e-20);
}

TEST_CASE("analytic: OFDM matches the closed-form Dirichlet oracle")
{
    const auto inc = incumbent();
    const auto c = preset(WaveformKind::OFDM);
    std::mt19937_64 rng(11);
    std::uniform_int_distribution<int> dt(-96, 96), dist(-8, 8);
    std::uniform_real_distribution<double> df(-1, 1);
    for (int i = 0; i < 30; ++i) {
        const Offset off{dt(rng), df(rng)};
        const int d = dist(rng);
        const double ref = oracle::ofdm_closed_form(180, 12, 20, d, off.delta_t, off.delta_f);
        CHECK(analytic_mean_interference(c, inc, d, off) ==
              doctest::Approx(ref).epsilon(1e-9));
    }
}

TEST_CASE("analytic: FMT distance 1, offset (48, 0) regression")
{
    const auto inc = incumbent();
    const auto c = preset(WaveformKind::FMT);
    const double frozen = 0.073499194126709771;
    const double a = analytic_mean_interference(c, inc, 1, {48, 0.0});
    CHECK(a == doctest::Approx(frozen).epsilon(1e-10));
    const double mc = mean_interference(c, inc, 1, {48, 0.0}, 10000, 2024);
    CHECK(std::abs(db(mc) - db(a)) < 0.1);
}

TEST_CASE("build_table: shape, non-negativity and agreement with single cells")
{
    const auto inc = incumbent();
    std::vector<int> dts;
    for (int i = 0; i < 25; ++i)
        dts.push_back(-96 + 8 * i);
    for (auto k : kAllWaveforms) {
        const auto c = preset(k);
        const auto t = build_table(c, inc, small_grids(-10, 10, dts, {0.0}), 1);
        CHECK(t.distance_count() == 21);
        CHECK(t.values().size() == 21u * 25u * 1u);
        for (double v : t.values())
            CHECK(v >= 0);
        for (int d : {-10, -3, 0, 4, 10})
            for (std::size_t ti : {0u, 7u, 12u, 24u})
                CHECK(t.entry(d, ti, 0) ==
                      doctest::Approx(analytic_mean_interference(c, inc, d, {dts[ti], 0.0}))
                          .epsilon(1e-10));
    }
}

TEST_CASE("build_table: fractional offsets agree with single cells")
{
    const auto inc = incumbent();
    const auto c = preset(WaveformKind::OQAM);
    const auto t = build_table(c, inc, small_grids(-3, 3, {-50, 0, 17}, {-0.7, 0.25, 1.0}), 1);
    for (int d = -3; d <= 3; ++d)
        for (std::size_t ti = 0; ti < 3; ++ti)
            for (std::size_t fi = 0; fi < 3; ++fi)
                CHECK(t.entry(d, ti, fi) ==
                      doctest::Approx(analytic_mean_interference(
                                          c, inc, d, {t.dt_grid()[ti], t.df_grid()[fi]}))
                          .epsilon(1e-10));
}

TEST_CASE("build_table: thread count does not change the result")
{
    const auto inc = incumbent();
    const auto g = default_grids(inc, -4, 4, 8, 1.0, 0.25);
    const auto a = build_table(preset(WaveformKind::GFDM), inc, g, 1);
    const auto b = build_table(preset(WaveformKind::GFDM), inc, g, 3);
    CHECK(a.values() == b.values());
}

TEST_CASE("build_table: OFDM CP region is flat zero")
{
    const auto inc = incumbent();
    const auto t = build_table(preset(WaveformKind::OFDM), inc, default_grids(inc, -10, 10), 1);
    const int f0 = 10;
    REQUIRE(t.df_grid()[f0] == 0.0);
    for (int dt = 0; dt <= 12; ++dt)
        for (int d = -10; d <= 10; ++d)
            if (d != 0)
                CHECK(t.entry(d, static_cast<std::size_t>(t.dt_index(dt)), f0) < 1e-10);
}

TEST_CASE("build_table: lapped leakage varies less than 3 dB over delta_t")
{
    const auto inc = incumbent();
    const auto t =
        build_table(preset(WaveformKind::LAPPED), inc, default_grids(inc, -10, 10, 1, 0, 1), 1);
    for (int d = -10; d <= 10; ++d) {
        double lo = 1e300, hi = 0;
        for (std::size_t ti = 0; ti < t.dt_grid().size(); ++ti) {
            lo = std::min(lo, t.entry(d, ti, 0));
            hi = std::max(hi, t.entry(d, ti, 0));
        }
        CHECK(db(hi) - db(lo) < 3.0);
    }
}

TEST_CASE("build_table: rejects offsets beyond half a symbol")
{
    const auto inc = incumbent();
    CHECK_THROWS_AS(build_table(preset(WaveformKind::OFDM), inc, small_grids(-1, 1, {97}, {0.0})),
                    std::invalid_argument);
    CHECK_THROWS_AS(build_table(preset(WaveformKind::OFDM), inc, small_grids(-1, 1, {}, {0.0})),
                    std::invalid_argument);
}

TEST_CASE("default grids")
{
    const auto g = default_grids(incumbent(), -10, 10);
    CHECK(g.dt_grid.size() == 193);
    CHECK(g.dt_grid.front() == -96);
    CHECK(g.dt_grid.back() == 96);
    CHECK(g.df_grid.size() == 21);
    CHECK(g.df_grid[10] == 0.0);
    CHECK(g.df_grid[13] == 0.3);
    CHECK(g.df_grid.front() == -1.0);
}

TEST_CASE("shift_lookup: worked example and identity")
{
    const auto inc = incumbent();
    const auto t = build_table(preset(WaveformKind::OQAM), inc,
                               small_grids(-5, 5, {0, 30}, {-1.0, -0.5, 0.0, 0.5, 1.0}), 1);
    // d = -2 at delta_f = 1 reads distance -1 at delta_f = 0
    CHECK(shift_lookup(t, -2, {30, 1.0}) == t.entry(-1, 1, 2));
    CHECK(shift_lookup(t, 3, {0, 0.0}) == t.entry(3, 0, 2));
    CHECK(shift_lookup(t, 3, {0, 0.5}) == t.entry(3, 0, 3));
    CHECK(shift_lookup(t, 3, {0, -0.5}) == t.entry(2, 0, 3));
    CHECK(shift_lookup(t, 3, {0, -0.5}) == doctest::Approx(t.entry(3, 0, 1)).epsilon(1e-9));
    // beyond the grid end via the shift identity
    CHECK(shift_lookup(t, 2, {0, 1.5}) == t.entry(3, 0, 3));
    CHECK_THROWS_AS(shift_lookup(t, 5, {0, 1.0}), std::out_of_range);
    CHECK_THROWS_AS(shift_lookup(t, 0, {1, 0.0}), std::invalid_argument);
}

TEST_CASE("shift_lookup: midpoint on a {0, 1} grid, checked against a dense table")
{
    const auto inc = incumbent();
    const auto c = preset(WaveformKind::FMT);
    const auto coarse = build_table(c, inc, small_grids(-3, 3, {0}, {0.0, 1.0}), 1);
    const double mid = shift_lookup(coarse, 0, {0, 0.5});
    CHECK(mid == doctest::Approx(0.5 * (coarse.entry(0, 0, 0) + coarse.entry(1, 0, 0))));

    // A dense grid interpolated the same way converges to the exact cell.
    std::vector<double> dense;
    for (int i = 0; i <= 50; ++i)
        dense.push_back(i / 50.0);
    const auto fine = build_table(c, inc, small_grids(-3, 3, {0}, dense), 1);
    const double exact = analytic_mean_interference(c, inc, 0, {0, 0.51});
    CHECK(shift_lookup(fine, 0, {0, 0.51}) == doctest::Approx(exact).epsilon(1e-3));
    // linear interpolation between the two dense neighbours
    CHECK(shift_lookup(fine, 0, {0, 0.51}) ==
          doctest::Approx(0.5 * (fine.entry(0, 0, 25) + fine.entry(0, 0, 26))).epsilon(1e-12));
}

TEST_CASE("shift identity holds for the analytic model")
{
    const auto inc = incumbent();
    for (auto k : kAllWaveforms) {
        const auto c = preset(k);
        CHECK(analytic_mean_interference(c, inc, 2, {13, 1.0}) ==
              doctest::Approx(analytic_mean_interference(c, inc, 3, {13, 0.0})).epsilon(1e-9));
    }
}

TEST_CASE("total_interference: trivial cases and the brute-force double loop")
{
    const auto inc = incumbent();
    const auto t = build_table(preset(WaveformKind::OQAM), inc,
                               default_grids(inc, -100, 100, 24, 1.0, 0.5), 1);
    BandMap one{{90}, {92}};
    const double p1[1] = {0.0};
    CHECK(total_interference(t, p1, one, {0, 0.0}) == 0.0);
    const double p2[1] = {2.5};
    CHECK(total_interference(t, p2, one, {24, 0.0}) == doctest::Approx(2.5 * t.entry(-2, 5, 2)));

    BandMap b;
    for (int k = 0; k < 180; ++k)
        (k >= 84 && k < 96 ? b.free : b.incumbent).push_back(k);
    std::vector<double> uni(12, 0.7);
    for (Offset off : {Offset{0, 0.0}, Offset{-48, 0.5}, Offset{72, -1.0}}) {
        double ref = 0;
        for (int m = 84; m < 96; ++m)
            for (int l = 0; l < 180; ++l)
                if (l < 84 || l >= 96)
                    ref += 0.7 * shift_lookup(t, m - l, off);
        CHECK(total_interference(t, uni, b, off) == doctest::Approx(ref).epsilon(1e-12));
    }
}

TEST_CASE("total_interference: band overlap and bad powers rejected")
{
    const auto inc = incumbent();
    const auto t = build_table(preset(WaveformKind::OFDM), inc, small_grids(-5, 5, {0}, {0.0}), 1);
    const double p[2] = {1.0, 1.0};
    try {
        total_interference(t, p, BandMap{{3, 4}, {4, 5}}, {});
        FAIL("overlap accepted");
    } catch (const std::invalid_argument& e) {
        CHECK(std::string(e.what()).find("4") != std::string::npos);
    }
    const double neg[2] = {1.0, -1.0};
    CHECK_THROWS_AS(total_interference(t, neg, BandMap{{3, 4}, {6}}, {}), std::invalid_argument);
    const double three[3] = {1, 1, 1};
    CHECK_THROWS_AS(total_interference(t, three, BandMap{{3, 4}, {6}}, {}), std::invalid_argument);
}

TEST_CASE("table json: exact round trip and deterministic bytes")
{
    const auto inc = incumbent();
    auto t = build_table(preset(WaveformKind::GFDM), inc, default_grids(inc, -3, 3, 32, 1, 0.5), 1);
    t.metadata.seed = 123;
    const auto dir = std::filesystem::temp_directory_path() / "d2d_table_test";
    std::filesystem::create_directories(dir);
    const auto p1 = (dir / "a.json").string(), p2 = (dir / "b.json").string();
    save_table(t, p1);
    const auto back = load_table(p1);
    CHECK(back.values() == t.values());
    CHECK(back.dt_grid() == t.dt_grid());
    CHECK(back.df_grid() == t.df_grid());
    CHECK(back.waveform() == WaveformKind::GFDM);
    CHECK(back.metadata.waveform.block_symbols == 5);
    CHECK(back.metadata.waveform.filter.rolloff == 0.2);
    CHECK(back.metadata.seed == 123);
    CHECK(back.metadata.method == "analytic");
    save_table(back, p2);
    CHECK(slurp(p1) == slurp(p2));
    CHECK_THROWS_AS(load_table((dir / "missing.json").string()), std::runtime_error);
    std::ofstream((dir / "bad.json").string()) << "{\"format\": 3}";
    CHECK_THROWS_AS(load_table((dir / "bad.json").string()), std::runtime_error);
    std::filesystem::remove_all(dir);
}
