#pragma once

#include "d2d/filters.hpp"

#include <array>
#include <complex>
#include <cstdint>
#include <random>
#include <span>
#include <string_view>
#include <vector>

namespace d2d {

using cplx = std::complex<double>;

enum class WaveformKind { OFDM, FMT, OQAM, LAPPED, GFDM };

inline constexpr std::array<WaveformKind, 5> kAllWaveforms{
    WaveformKind::OFDM, WaveformKind::FMT, WaveformKind::OQAM, WaveformKind::LAPPED,
    WaveformKind::GFDM};

std::string_view to_string(WaveformKind kind);
/// Accepts the lower-case names produced by to_string (plus "ofdm/oqam").
WaveformKind parse_waveform(std::string_view name);

struct WaveformConfig {
    WaveformKind kind = WaveformKind::OFDM;
    int M = 180;                 // subcarriers / FFT size
    int samples_per_symbol = 180;
    int cp_samples = 0;
    int overlap_factor = 1;
    int block_symbols = 1;       // GFDM only
    PrototypeFilter filter;      // empty for OFDM
    double sample_period = 1.0 / (15e3 * 180);
};

/// D2D waveform defaults for an incumbent with M subcarriers and n_cp CP samples:
///
///   OFDM    P = M        CP = n_cp  rectangular
///   FMT     P = M + n_cp CP = 0     RRC 0.2, K = 6
///   OQAM    P = M        CP = 0     PHYDYAS, K = 4
///   LAPPED  P = M        CP = 0     sine, K = 2
///   GFDM    P = M        CP = n_cp  circular RRC 0.2, K = 5, N_b = 5
WaveformConfig preset(WaveformKind kind, int M = 180, int n_cp = 12,
                      double subcarrier_spacing = 15e3);

/// Checks the structural consistency of a config; throws std::invalid_argument.
void validate(const WaveformConfig& config);

/// Row-major N x M grid of modulated symbols d_m[n]. For OQAM the rows are
/// half-symbols carrying real PAM values.
class SymbolGrid {
public:
    SymbolGrid() = default;
    SymbolGrid(int time_symbols, int subcarriers);

    int time_symbols() const { return n_; }
    int subcarriers() const { return m_; }

    cplx& operator()(int n, int m) { return values_[index(n, m)]; }
    const cplx& operator()(int n, int m) const { return values_[index(n, m)]; }

    std::span<const cplx> values() const { return values_; }
    std::span<cplx> values() { return values_; }

private:
    std::size_t index(int n, int m) const
    {
        return static_cast<std::size_t>(n) * static_cast<std::size_t>(m_) +
               static_cast<std::size_t>(m);
    }

    int n_ = 0;
    int m_ = 0;
    std::vector<cplx> values_;
};

/// Complex baseband samples. first_index is the absolute sample index of
/// samples[0] on the incumbent time axis (receiver symbol 0 starts at 0).
struct ComplexSignal {
    std::vector<cplx> samples;
    double sample_period = 1.0 / (15e3 * 180);
    std::ptrdiff_t first_index = 0;

    std::size_t size() const { return samples.size(); }
};

/// Samples between consecutive grid rows (GFDM: N_b rows share one block).
int symbol_hop(const WaveformConfig& config);

/// Sample distance between the starts of consecutive rows' pulses; for GFDM
/// the distance between consecutive blocks.
int block_hop(const WaveformConfig& config);

/// Rows of the grid that form one independently shaped unit (N_b for GFDM).
int rows_per_block(const WaveformConfig& config);

/// Length of synthesize() output for a grid of N rows.
std::size_t synthesized_length(const WaveformConfig& config, int time_symbols);

/// Transmit signal of the whole grid. Subcarrier phases are referenced to the
/// absolute sample index, so x_m[k] = a_m[k] exp(j 2 pi k m / M) holds for
/// OFDM, FMT and GFDM with a_m independent of m.
ComplexSignal synthesize(const WaveformConfig& config, const SymbolGrid& grid);

/// Grid columns that together occupy one incumbent-spaced subcarrier slot.
/// LAPPED channels sit on a half-spacing grid, so slot s uses channels 2s and
/// 2s + 1 (centered on incumbent bin s); every other waveform uses column s.
std::vector<int> slot_channels(const WaveformConfig& config, int slot);

/// Unit-variance i.i.d. symbols: QPSK, or PAM +-1 for OQAM.
std::vector<cplx> draw_symbols(WaveformKind kind, std::size_t count, std::mt19937_64& rng);

/// Mean |x|^2 over all samples.
double mean_power(const ComplexSignal& signal);

/// Only subcarrier m carries `symbols` (one per row); the result is scaled to
/// unit mean power over its whole duration. All-zero input is returned as is.
ComplexSignal single_subcarrier_signal(const WaveformConfig& config, int m,
                                       std::span<const cplx> symbols);

/// As above with `count` i.i.d. symbols drawn from `seed`.
ComplexSignal single_subcarrier_signal(const WaveformConfig& config, int m, int count,
                                       std::uint64_t seed);

/// CP removal + DFT. Recovers an N x M grid from an OFDM signal.
SymbolGrid ofdm_demodulate(const WaveformConfig& config, const ComplexSignal& signal,
                           int time_symbols);

/// Matched OQAM demodulation with the conjugate phase pattern removed. The
/// real part of each output carries the PAM symbol.
SymbolGrid oqam_demodulate(const WaveformConfig& config, const ComplexSignal& signal,
                           int time_symbols);

} // namespace d2d
