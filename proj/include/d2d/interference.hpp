#pragma once

#include "d2d/waveforms.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace d2d {

/// OFDM receiver of the incumbent network.
struct IncumbentConfig {
    int M = 180;                    // FFT size, samples per useful symbol
    int cp_samples = 12;
    int observed_symbols = 20;      // N, receiver windows averaged per cell
    double subcarrier_spacing = 15e3;

    int symbol_samples() const { return M + cp_samples; }
    double symbol_duration() const { return 1.0 / subcarrier_spacing; }
    double sample_period() const { return symbol_duration() / M; }
};

void validate(const IncumbentConfig& incumbent);

/// D2D timing offset in samples (positive = D2D late) and frequency offset in
/// subcarrier spacings (positive = D2D shifted up).
struct Offset {
    int delta_t = 0;
    double delta_f = 0.0;
};

/// Interference table indexed by (distance, delta_t, delta_f). Distance is
/// D2D subcarrier minus incumbent subcarrier, so a positive frequency offset
/// adds to it. Values are linear watts per watt of D2D subcarrier power.
struct TableMetadata {
    IncumbentConfig incumbent;
    WaveformConfig waveform;
    std::uint64_t seed = 0;
    std::string method = "analytic"; // or "monte-carlo"
    int trials = 0;
};

class InterferenceTable {
public:
    InterferenceTable() = default;
    InterferenceTable(WaveformKind kind, int min_distance, int max_distance,
                      std::vector<int> dt_grid, std::vector<double> df_grid);

    WaveformKind waveform() const { return kind_; }
    int min_distance() const { return d_min_; }
    int max_distance() const { return d_max_; }
    std::size_t distance_count() const { return static_cast<std::size_t>(d_max_ - d_min_ + 1); }
    const std::vector<int>& dt_grid() const { return dt_; }
    const std::vector<double>& df_grid() const { return df_; }
    const std::vector<double>& values() const { return values_; }
    std::vector<double>& values() { return values_; }

    bool has_distance(int d) const { return d >= d_min_ && d <= d_max_; }
    /// Index of delta_t in the grid, or -1.
    int dt_index(int delta_t) const;

    double& at(std::size_t di, std::size_t ti, std::size_t fi)
    {
        return values_[(di * dt_.size() + ti) * df_.size() + fi];
    }
    double at(std::size_t di, std::size_t ti, std::size_t fi) const
    {
        return values_[(di * dt_.size() + ti) * df_.size() + fi];
    }
    /// Entry at an exact grid point with distance d.
    double entry(int d, std::size_t ti, std::size_t fi) const
    {
        return at(static_cast<std::size_t>(d - d_min_), ti, fi);
    }

    TableMetadata metadata;

private:
    WaveformKind kind_ = WaveformKind::OFDM;
    int d_min_ = 0;
    int d_max_ = 0;
    std::vector<int> dt_;
    std::vector<double> df_;
    std::vector<double> values_;
};

/// Incumbent subcarrier sets. B_f carries the D2D link, B_i must be protected.
struct BandMap {
    std::vector<int> free;
    std::vector<int> incumbent;
};

/// Throws std::invalid_argument naming any index present in both sets.
void validate(const BandMap& bands);

/// Windowed-DFT energy the incumbent receiver sees on subcarrier l, summed
/// over its N symbols. Receiver window n covers absolute samples
/// n(M+N_CP)+N_CP ... n(M+N_CP)+N_CP+M-1; the signal is delayed by delta_t
/// samples and rotated by exp(j 2 pi k delta_f / M) before projection.
/// Projection is (1/M) sum_k r[k] exp(-j 2 pi k l / M).
double instantaneous_interference(const ComplexSignal& signal, const IncumbentConfig& incumbent,
                                  int l, Offset offset);

/// Random D2D stream with only subcarrier slot `slot` active, covering every
/// receiver window at offset.delta_t, scaled to unit realized mean power over
/// the observed span [0, N(M+N_CP)) after the delay.
ComplexSignal draw_observation_signal(const WaveformConfig& config,
                                      const IncumbentConfig& incumbent, int slot, Offset offset,
                                      std::mt19937_64& rng);

/// Monte-Carlo estimate of the mean interference at (distance, offset),
/// divided by N. Trial t uses the t-th signal drawn from std::mt19937_64(seed).
double mean_interference(const WaveformConfig& config, const IncumbentConfig& incumbent,
                         int distance, Offset offset, int trials, std::uint64_t seed);

/// D2D slot used by the Monte-Carlo path; the analytic path uses slot 0.
inline constexpr int kMonteCarloSlot = 3;

/// Exact expectation of the same quantity for i.i.d. zero-mean unit-variance
/// symbols: the sum over symbols of squared projection coefficients.
double analytic_mean_interference(const WaveformConfig& config,
                                  const IncumbentConfig& incumbent, int distance, Offset offset);

struct TableGrids {
    int min_distance = -10;
    int max_distance = 10;
    std::vector<int> dt_grid;
    std::vector<double> df_grid;
};

/// delta_t over [-(M+N_CP)/2, (M+N_CP)/2] in `dt_step` sample steps and
/// delta_f over [-df_max, df_max] in `df_step` steps.
TableGrids default_grids(const IncumbentConfig& incumbent, int min_distance, int max_distance,
                         int dt_step = 1, double df_max = 1.0, double df_step = 0.1);

/// Fills every cell with analytic_mean_interference. threads = 0 picks the
/// hardware concurrency.
InterferenceTable build_table(const WaveformConfig& config, const IncumbentConfig& incumbent,
                              const TableGrids& grids, unsigned threads = 0);

/// Table value at (distance, offset). The frequency offset is split into
/// integer and fractional parts; the integer part moves the distance and the
/// fraction is interpolated linearly on the delta_f axis, using
/// T(d, f + 1) = T(d + 1, f) to bracket values past the grid ends.
/// offset.delta_t must be a grid point.
double shift_lookup(const InterferenceTable& table, int distance, Offset offset);

/// Sum over m in B_f, l in B_i of P_m * lookup(m - l, offset). powers[i]
/// belongs to bands.free[i].
double total_interference(const InterferenceTable& table, std::span<const double> powers,
                          const BandMap& bands, Offset offset);

/// Table cache, JSON text.
void save_table(const InterferenceTable& table, const std::string& path);
InterferenceTable load_table(const std::string& path);
std::string table_to_json(const InterferenceTable& table);

} // namespace d2d
