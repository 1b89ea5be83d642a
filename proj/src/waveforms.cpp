#include "d2d/waveforms.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace d2d {

namespace {

constexpr double pi = std::numbers::pi;

/// e^{j 2 pi r / period} for r in [0, period).
class Twiddles {
public:
    explicit Twiddles(long long period) : period_(period), table_(static_cast<std::size_t>(period))
    {
        for (long long r = 0; r < period; ++r)
            table_[static_cast<std::size_t>(r)] = std::polar(1.0, 2.0 * pi * double(r) / double(period));
    }

    cplx operator()(long long r) const
    {
        r %= period_;
        if (r < 0)
            r += period_;
        return table_[static_cast<std::size_t>(r)];
    }

private:
    long long period_;
    std::vector<cplx> table_;
};

struct ActiveSymbol {
    int m;
    cplx d;
};

std::vector<ActiveSymbol> active_in_row(const SymbolGrid& grid, int n)
{
    std::vector<ActiveSymbol> out;
    for (int m = 0; m < grid.subcarriers(); ++m)
        if (grid(n, m) != cplx{})
            out.push_back({m, grid(n, m)});
    return out;
}

// OQAM phase pattern theta_m[n] = j^(m+n).
cplx oqam_phase(int n, int m)
{
    switch ((n + m) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
    }
}

} // namespace

std::string_view to_string(WaveformKind kind)
{
    switch (kind) {
    case WaveformKind::OFDM: return "ofdm";
    case WaveformKind::FMT: return "fmt";
    case WaveformKind::OQAM: return "oqam";
    case WaveformKind::LAPPED: return "lapped";
    case WaveformKind::GFDM: return "gfdm";
    }
    return "?";
}

WaveformKind parse_waveform(std::string_view name)
{
    for (auto k : kAllWaveforms)
        if (name == to_string(k))
            return k;
    if (name == "ofdm/oqam" || name == "ofdm-oqam")
        return WaveformKind::OQAM;
    throw std::invalid_argument("unknown waveform '" + std::string(name) + "'");
}

WaveformConfig preset(WaveformKind kind, int M, int n_cp, double subcarrier_spacing)
{
    if (M < 1 || n_cp < 0)
        throw std::invalid_argument("preset needs M >= 1 and N_CP >= 0");
    WaveformConfig c;
    c.kind = kind;
    c.M = M;
    c.sample_period = 1.0 / (subcarrier_spacing * M);
    switch (kind) {
    case WaveformKind::OFDM:
        c.samples_per_symbol = M;
        c.cp_samples = n_cp;
        break;
    case WaveformKind::FMT:
        c.samples_per_symbol = M + n_cp;
        c.overlap_factor = 6;
        c.filter = rrc_filter(0.2, 6, M + n_cp);
        break;
    case WaveformKind::OQAM:
        c.samples_per_symbol = M;
        c.overlap_factor = 4;
        c.filter = phydyas_filter(4, M);
        break;
    case WaveformKind::LAPPED:
        c.samples_per_symbol = M;
        c.overlap_factor = 2;
        c.filter = lapped_sine_filter(M);
        break;
    case WaveformKind::GFDM:
        c.samples_per_symbol = M;
        c.cp_samples = n_cp;
        c.overlap_factor = 5;
        c.block_symbols = 5;
        c.filter = gfdm_circular_filter(rrc_filter(0.2, 5, M), 5, M);
        break;
    }
    return c;
}

void validate(const WaveformConfig& c)
{
    if (c.M < 1)
        throw std::invalid_argument("waveform needs M >= 1");
    if (c.cp_samples < 0)
        throw std::invalid_argument("CP length must be >= 0");
    switch (c.kind) {
    case WaveformKind::OFDM:
        return;
    case WaveformKind::FMT:
        if (c.samples_per_symbol < 1)
            throw std::invalid_argument("FMT needs samples_per_symbol >= 1");
        break;
    case WaveformKind::OQAM:
        if (c.M % 2 != 0)
            throw std::invalid_argument("OQAM needs an even number of subcarriers");
        break;
    case WaveformKind::LAPPED:
        if (c.filter.size() != static_cast<std::size_t>(2 * c.M))
            throw std::invalid_argument("lapped filter must have exactly 2M taps");
        break;
    case WaveformKind::GFDM:
        if (c.block_symbols < 1)
            throw std::invalid_argument("GFDM needs N_b >= 1");
        if (c.filter.size() != static_cast<std::size_t>(c.block_symbols) * c.M)
            throw std::invalid_argument("GFDM circular filter must have N_b*M taps");
        break;
    }
    if (c.filter.size() == 0)
        throw std::invalid_argument("waveform filter is empty");
}

SymbolGrid::SymbolGrid(int time_symbols, int subcarriers)
    : n_(time_symbols), m_(subcarriers)
{
    if (time_symbols < 0 || subcarriers < 1)
        throw std::invalid_argument("symbol grid needs N >= 0 and M >= 1");
    values_.assign(static_cast<std::size_t>(n_) * static_cast<std::size_t>(m_), cplx{});
}

int symbol_hop(const WaveformConfig& c)
{
    switch (c.kind) {
    case WaveformKind::OFDM: return c.M + c.cp_samples;
    case WaveformKind::FMT: return c.samples_per_symbol;
    case WaveformKind::OQAM: return c.M / 2;
    case WaveformKind::LAPPED: return c.M;
    case WaveformKind::GFDM: return c.M;
    }
    return 0;
}

int block_hop(const WaveformConfig& c)
{
    if (c.kind == WaveformKind::GFDM)
        return c.block_symbols * c.M + c.cp_samples;
    return symbol_hop(c);
}

int rows_per_block(const WaveformConfig& c)
{
    return c.kind == WaveformKind::GFDM ? c.block_symbols : 1;
}

std::size_t synthesized_length(const WaveformConfig& c, int N)
{
    if (N <= 0)
        return 0;
    const auto n = static_cast<std::size_t>(N);
    switch (c.kind) {
    case WaveformKind::OFDM:
        return n * static_cast<std::size_t>(c.M + c.cp_samples);
    case WaveformKind::FMT:
    case WaveformKind::OQAM:
    case WaveformKind::LAPPED:
        return (n - 1) * static_cast<std::size_t>(symbol_hop(c)) + c.filter.size();
    case WaveformKind::GFDM:
        return n / static_cast<std::size_t>(c.block_symbols) *
               static_cast<std::size_t>(block_hop(c));
    }
    return 0;
}

ComplexSignal synthesize(const WaveformConfig& c, const SymbolGrid& grid)
{
    validate(c);
    if (grid.subcarriers() != c.M)
        throw std::invalid_argument("symbol grid has " + std::to_string(grid.subcarriers()) +
                                    " subcarriers, waveform expects " + std::to_string(c.M));
    const int N = grid.time_symbols();
    if (c.kind == WaveformKind::GFDM && N % c.block_symbols != 0)
        throw std::invalid_argument("GFDM grid rows must be a multiple of N_b = " +
                                    std::to_string(c.block_symbols));
    if (c.kind == WaveformKind::OQAM)
        for (const auto& v : grid.values())
            if (v.imag() != 0.0)
                throw std::invalid_argument("OQAM grid must hold real PAM symbols");

    ComplexSignal out;
    out.sample_period = c.sample_period;
    out.samples.assign(synthesized_length(c, N), cplx{});
    auto& x = out.samples;
    const long long M = c.M;
    const auto& g = c.filter.taps;
    const auto L = static_cast<long long>(g.size());

    if (c.kind == WaveformKind::LAPPED) {
        // exp(j (k - 1/2 + M/2)(m - 1/2) pi / M) = exp(j 2 pi q / 8M),
        // q = (2k - 1 + M)(2m - 1).
        const Twiddles tw(8 * M);
        for (int n = 0; n < N; ++n) {
            const auto act = active_in_row(grid, n);
            if (act.empty())
                continue;
            const long long start = n * M;
            for (long long i = 0; i < L; ++i) {
                const long long k = start + i;
                cplx s{};
                for (const auto& a : act)
                    s += a.d * tw((2 * k - 1 + M) * (2LL * a.m - 1));
                x[static_cast<std::size_t>(k)] += g[static_cast<std::size_t>(i)] * s;
            }
        }
        return out;
    }

    const Twiddles tw(M);
    switch (c.kind) {
    case WaveformKind::OFDM: {
        const long long S = M + c.cp_samples;
        for (int n = 0; n < N; ++n) {
            const auto act = active_in_row(grid, n);
            for (long long j = 0; j < S && !act.empty(); ++j) {
                const long long k = n * S + j;
                cplx s{};
                for (const auto& a : act)
                    s += a.d * tw(k * a.m);
                x[static_cast<std::size_t>(k)] = s;
            }
        }
        break;
    }
    case WaveformKind::FMT: {
        const long long P = c.samples_per_symbol;
        for (int n = 0; n < N; ++n) {
            const auto act = active_in_row(grid, n);
            for (long long i = 0; i < L && !act.empty(); ++i) {
                const long long k = n * P + i;
                cplx s{};
                for (const auto& a : act)
                    s += a.d * tw(k * a.m);
                x[static_cast<std::size_t>(k)] += g[static_cast<std::size_t>(i)] * s;
            }
        }
        break;
    }
    case WaveformKind::OQAM: {
        // exp(j 2 pi m (k - (L-1)/2) / M) = exp(j 2 pi k m / M) * exp(-j pi m (L-1) / M)
        const Twiddles half(2 * M);
        const long long hop = M / 2;
        for (int n = 0; n < N; ++n) {
            auto act = active_in_row(grid, n);
            for (auto& a : act)
                a.d *= oqam_phase(n, a.m) * half(-a.m * (L - 1));
            for (long long i = 0; i < L && !act.empty(); ++i) {
                const long long k = n * hop + i;
                cplx s{};
                for (const auto& a : act)
                    s += a.d * tw(k * a.m);
                x[static_cast<std::size_t>(k)] += g[static_cast<std::size_t>(i)] * s;
            }
        }
        break;
    }
    case WaveformKind::GFDM: {
        const long long Nb = c.block_symbols;
        const long long core = Nb * M;
        const long long S = block_hop(c);
        const long long cp = c.cp_samples;
        for (int b = 0; b < N / c.block_symbols; ++b) {
            std::vector<std::vector<ActiveSymbol>> act(static_cast<std::size_t>(Nb));
            bool any = false;
            for (long long n = 0; n < Nb; ++n) {
                act[static_cast<std::size_t>(n)] = active_in_row(grid, static_cast<int>(b * Nb + n));
                any = any || !act[static_cast<std::size_t>(n)].empty();
            }
            if (!any)
                continue;
            for (long long j = 0; j < S; ++j) {
                const long long k = b * S + j;
                const long long kl = ((j - cp) % core + core) % core;
                cplx s{};
                for (long long n = 0; n < Nb; ++n) {
                    const auto& row = act[static_cast<std::size_t>(n)];
                    if (row.empty())
                        continue;
                    const double gv = g[static_cast<std::size_t>(((kl - n * M) % core + core) % core)];
                    cplx t{};
                    for (const auto& a : row)
                        t += a.d * tw(k * a.m);
                    s += gv * t;
                }
                x[static_cast<std::size_t>(k)] = s;
            }
        }
        break;
    }
    case WaveformKind::LAPPED:
        break;
    }
    return out;
}

std::vector<int> slot_channels(const WaveformConfig& c, int slot)
{
    if (c.kind == WaveformKind::LAPPED) {
        if (slot < 0 || 2 * slot + 1 >= c.M)
            throw std::out_of_range("lapped slot " + std::to_string(slot) + " out of range");
        return {2 * slot, 2 * slot + 1};
    }
    if (slot < 0 || slot >= c.M)
        throw std::out_of_range("slot " + std::to_string(slot) + " out of range");
    return {slot};
}

std::vector<cplx> draw_symbols(WaveformKind kind, std::size_t count, std::mt19937_64& rng)
{
    // Bits come straight from the engine output, which is fully specified,
    // so sequences are identical across standard library implementations.
    std::vector<cplx> out(count);
    const double a = 1.0 / std::sqrt(2.0);
    for (std::size_t i = 0; i < count; ++i) {
        const auto bits = rng();
        if (kind == WaveformKind::OQAM)
            out[i] = (bits >> 63) ? cplx{1, 0} : cplx{-1, 0};
        else
            out[i] = {(bits >> 63) ? a : -a, ((bits >> 62) & 1) ? a : -a};
    }
    return out;
}

double mean_power(const ComplexSignal& s)
{
    if (s.samples.empty())
        return 0.0;
    double acc = 0;
    for (const auto& v : s.samples)
        acc += std::norm(v);
    return acc / static_cast<double>(s.samples.size());
}

ComplexSignal single_subcarrier_signal(const WaveformConfig& c, int m,
                                       std::span<const cplx> symbols)
{
    if (m < 0 || m >= c.M)
        throw std::out_of_range("subcarrier " + std::to_string(m) + " outside [0, " +
                                std::to_string(c.M) + ")");
    SymbolGrid grid(static_cast<int>(symbols.size()), c.M);
    for (std::size_t n = 0; n < symbols.size(); ++n)
        grid(static_cast<int>(n), m) = symbols[n];
    auto sig = synthesize(c, grid);
    const double p = mean_power(sig);
    if (p > 0) {
        const double s = 1.0 / std::sqrt(p);
        for (auto& v : sig.samples)
            v *= s;
    }
    return sig;
}

ComplexSignal single_subcarrier_signal(const WaveformConfig& c, int m, int count,
                                       std::uint64_t seed)
{
    std::mt19937_64 rng(seed);
    const auto sym = draw_symbols(c.kind, static_cast<std::size_t>(count), rng);
    return single_subcarrier_signal(c, m, sym);
}

SymbolGrid ofdm_demodulate(const WaveformConfig& c, const ComplexSignal& sig, int N)
{
    const long long M = c.M;
    const long long S = M + c.cp_samples;
    if (sig.samples.size() < static_cast<std::size_t>(N * S))
        throw std::invalid_argument("signal too short for OFDM demodulation");
    const Twiddles tw(M);
    SymbolGrid out(N, c.M);
    for (int n = 0; n < N; ++n) {
        const long long k0 = n * S + c.cp_samples;
        for (long long m = 0; m < M; ++m) {
            cplx acc{};
            for (long long i = 0; i < M; ++i) {
                const long long k = k0 + i;
                acc += sig.samples[static_cast<std::size_t>(k)] * tw(-(k + sig.first_index) * m);
            }
            out(n, static_cast<int>(m)) = acc / double(M);
        }
    }
    return out;
}

SymbolGrid oqam_demodulate(const WaveformConfig& c, const ComplexSignal& sig, int N)
{
    validate(c);
    const long long M = c.M;
    const auto& g = c.filter.taps;
    const auto L = static_cast<long long>(g.size());
    const long long hop = M / 2;
    if (sig.samples.size() < synthesized_length(c, N))
        throw std::invalid_argument("signal too short for OQAM demodulation");
    const Twiddles tw(M);
    const Twiddles half(2 * M);
    SymbolGrid out(N, c.M);
    for (int n = 0; n < N; ++n) {
        for (long long m = 0; m < M; ++m) {
            cplx acc{};
            for (long long i = 0; i < L; ++i) {
                const long long k = n * hop + i;
                acc += sig.samples[static_cast<std::size_t>(k)] * g[static_cast<std::size_t>(i)] *
                       tw(-k * m);
            }
            acc *= half(m * (L - 1)) * std::conj(oqam_phase(n, static_cast<int>(m)));
            out(n, static_cast<int>(m)) = acc;
        }
    }
    return out;
}

} // namespace d2d
