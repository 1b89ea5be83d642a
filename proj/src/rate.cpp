#include "d2d/rate.hpp"

#include <algorithm>
#include <stdexcept>

namespace d2d {

namespace {

long long floor_div(long long a, long long b)
{
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

} // namespace

int useful_symbols(WaveformKind kind, const ResourceWindow& w, const IncumbentConfig& inc, int K,
                   int N_b)
{
    if (w.free_symbols < 1 || w.free_subcarriers < 1)
        throw std::invalid_argument("resource window needs N_f >= 1 and M_f >= 1");
    validate(inc);
    const long long Nf = w.free_symbols;
    const long long M = inc.M;
    const long long S = inc.symbol_samples();
    long long n = 0;
    switch (kind) {
    case WaveformKind::OFDM:
        n = Nf;
        break;
    case WaveformKind::FMT:
        n = Nf - K + 1;
        break;
    case WaveformKind::OQAM:
        // floor((2 N_f S - 2 K M + M) / (2 M))
        n = floor_div(2 * Nf * S - 2LL * K * M + M, 2 * M);
        break;
    case WaveformKind::LAPPED:
        n = floor_div(Nf * S - M, M);
        break;
    case WaveformKind::GFDM:
        if (N_b < 1)
            throw std::invalid_argument("GFDM block size must be >= 1");
        n = N_b * floor_div(Nf * S, N_b * M + inc.cp_samples);
        break;
    }
    return static_cast<int>(std::max(0LL, n));
}

int useful_symbols(WaveformKind kind, const ResourceWindow& window, const IncumbentConfig& inc)
{
    const auto cfg = preset(kind, inc.M, inc.cp_samples, inc.subcarrier_spacing);
    return useful_symbols(kind, window, inc, cfg.overlap_factor, cfg.block_symbols);
}

double total_bits(const AllocationResult& result, const AllocationProblem& problem, int n_useful)
{
    if (n_useful < 0)
        throw std::invalid_argument("useful symbol count must be >= 0");
    if (n_useful == 0)
        return 0.0;
    return n_useful * objective_bits(problem, result.powers);
}

} // namespace d2d
