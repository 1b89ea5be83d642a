#pragma once

#include "d2d/allocation.hpp"

namespace d2d {

/// Free time-frequency resource left by the incumbent.
struct ResourceWindow {
    int free_symbols = 14;     // N_f, incumbent OFDM symbols
    int free_subcarriers = 12; // M_f
};

/// Data symbols each D2D subcarrier can carry inside the window once the
/// filter transients and block structure are accounted for. Exact integer
/// arithmetic, clamped at 0. K is the overlap factor, N_b the GFDM block size.
///
///   OFDM    N_f
///   FMT     N_f - K + 1
///   OQAM    floor(N_f (M+N_CP)/M - K + 1/2)
///   LAPPED  floor(N_f (M+N_CP)/M - 1)
///   GFDM    N_b floor(N_f (M+N_CP) / (N_b M + N_CP))
int useful_symbols(WaveformKind kind, const ResourceWindow& window,
                   const IncumbentConfig& incumbent, int K, int N_b);

/// Preset K and N_b.
int useful_symbols(WaveformKind kind, const ResourceWindow& window,
                   const IncumbentConfig& incumbent);

/// n_useful * sum_m log2(1 + P_m / sigma_m^2).
double total_bits(const AllocationResult& result, const AllocationProblem& problem, int n_useful);

} // namespace d2d
