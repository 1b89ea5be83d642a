#pragma once

#include "d2d/allocation.hpp"
#include "d2d/rate.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace d2d {

/// Per-waveform parameter overrides on top of the built-in presets.
struct WaveformOverride {
    std::optional<int> samples_per_symbol; // P (FMT)
    std::optional<int> cp_samples;         // OFDM, GFDM
    std::optional<int> overlap_factor;     // K
    std::optional<int> block_symbols;      // N_b (GFDM)
    std::optional<double> rolloff;         // FMT, GFDM
    std::optional<std::string> indexing;   // LAPPED: "symmetric" or "asymmetric"
};

struct ScenarioConfig {
    IncumbentConfig incumbent;
    int incumbent_subcarriers = 180;

    // Contiguous free band of M_f subcarriers starting at center - M_f / 2,
    // unless explicit index lists are given.
    int free_subcarriers = 12;
    int free_center = 90;
    std::vector<int> free_indices;
    std::vector<int> incumbent_indices;

    WaveformKind waveform = WaveformKind::OQAM;
    std::vector<WaveformKind> figure_waveforms{kAllWaveforms.begin(), kAllWaveforms.end()};
    std::map<WaveformKind, WaveformOverride> overrides;

    double total_power = 1.0;            // P_t, W
    double interference_threshold = 1e-3; // I_th for `allocate`, W
    double noise = 1e-6;                 // sigma^2, W
    std::vector<double> fig6_thresholds{1.0, 1e-3};
    double fig7_db_min = -40, fig7_db_max = 10, fig7_db_step = 1;
    int fig7_symbols = 14;               // 1 TTI

    int free_symbols = 14;               // N_f for `allocate`
    int fig6_min_symbols = 1, fig6_max_symbols = 100;
    int fig4_neighbors = 10;             // subcarriers each side
    int fig5_max_distance = 10;

    int dt_step = 1;
    double df_max = 1.0;
    double df_step = 0.1;

    std::uint64_t seed = 1;
    unsigned threads = 0;
    std::string cache_dir = "cache";     // empty: no disk cache
    std::string output_dir = "out";

    std::optional<std::vector<double>> omega_override;
};

/// Throws std::invalid_argument with a precise message.
void validate(const ScenarioConfig& config);

/// Reads a JSON config; absent keys keep their defaults, unknown keys throw.
ScenarioConfig load_config(const std::string& path);
ScenarioConfig parse_config(const std::string& json_text);

BandMap band_map(const ScenarioConfig& config);
WaveformConfig waveform_config(const ScenarioConfig& config, WaveformKind kind);
/// Grids covering every distance between the free and incumbent bands.
TableGrids table_grids(const ScenarioConfig& config);

/// True when a stored table was built for exactly this configuration.
bool table_matches(const InterferenceTable& table, const ScenarioConfig& config,
                   WaveformKind kind);

/// Lazily built or cache-loaded tables for one scenario.
class TableSet {
public:
    explicit TableSet(ScenarioConfig config, bool force_rebuild = false);

    const InterferenceTable& get(WaveformKind kind);
    /// Cache file used for kind, or empty without a cache directory.
    std::string cache_path(WaveformKind kind) const;
    /// Whether the last get() of kind reused the disk cache.
    bool reused(WaveformKind kind) const;
    /// Omega factors of kind for this scenario's bands, computed once.
    const std::vector<double>& omegas(WaveformKind kind);

private:
    ScenarioConfig config_;
    bool force_;
    std::map<WaveformKind, InterferenceTable> tables_;
    std::map<WaveformKind, bool> reused_;
    std::map<WaveformKind, std::vector<double>> omegas_;
};

struct WaveformSolution {
    AllocationProblem problem;
    AllocationResult result;
};

/// Omega from the table (or the override) and the optimal allocation at I_th.
WaveformSolution solve_waveform(const ScenarioConfig& config, TableSet& tables, WaveformKind kind,
                                double interference_threshold);

enum class FigureId { Fig3, Fig4, Fig5a, Fig5b, Fig6a, Fig6b, Fig7 };
std::string_view to_string(FigureId id);
FigureId parse_figure(std::string_view name);

struct FigureData {
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;

    std::size_t column(std::string_view name) const;
    std::string to_csv() const;
};

FigureData compute_figure(const ScenarioConfig& config, FigureId id, TableSet& tables);

/// Report JSON text for `allocate`.
std::string allocation_report(const ScenarioConfig& config, TableSet& tables);

/// CLI verbs. Each returns the path written; `out` empty picks a default
/// under the output (tables: cache) directory.
std::string run_table(const ScenarioConfig& config, const std::string& out, bool force_rebuild);
std::string run_figure(const ScenarioConfig& config, FigureId id, const std::string& out,
                       bool force_rebuild);
std::string run_allocation(const ScenarioConfig& config, const std::string& out,
                           bool force_rebuild);

} // namespace d2d
