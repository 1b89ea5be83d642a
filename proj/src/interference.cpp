#include "d2d/interference.hpp"

#include <fftw3.h>

#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <mutex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <thread>

namespace d2d {

namespace {

constexpr double pi = std::numbers::pi;
constexpr double kGridTol = 1e-9;

long long floor_div(long long a, long long b)
{
    long long q = a / b;
    if ((a % b != 0) && ((a < 0) != (b < 0)))
        --q;
    return q;
}

int bin_of(int distance, int slot, int M)
{
    // distance = m - l  =>  l = m - distance (mod M)
    return ((slot - distance) % M + M) % M;
}

/// exp(j 2 pi k (delta_f - l) / M) over every receiver window, flattened.
class ReceiverKernel {
public:
    ReceiverKernel(const IncumbentConfig& inc, int l, double delta_f)
        : M_(inc.M), S_(inc.symbol_samples()), cp_(inc.cp_samples), N_(inc.observed_symbols)
    {
        phase_.resize(static_cast<std::size_t>(N_) * static_cast<std::size_t>(M_));
        const double nu = delta_f - l;
        for (int w = 0; w < N_; ++w)
            for (int i = 0; i < M_; ++i) {
                const long long k = static_cast<long long>(w) * S_ + cp_ + i;
                const double cycles = std::fmod(static_cast<double>(k) * nu, static_cast<double>(M_));
                phase_[static_cast<std::size_t>(w) * M_ + i] = std::polar(1.0, 2.0 * pi * cycles / M_);
            }
    }

    double energy(const ComplexSignal& sig, int delta_t) const
    {
        double total = 0;
        for (int w = 0; w < N_; ++w) {
            const long long k0 = static_cast<long long>(w) * S_ + cp_;
            const long long src0 = k0 - delta_t - sig.first_index;
            if (src0 < 0 || src0 + M_ > static_cast<long long>(sig.samples.size()))
                throw std::invalid_argument("signal too short to cover receiver window " +
                                            std::to_string(w) + " at delta_t = " +
                                            std::to_string(delta_t));
            cplx y{};
            const cplx* x = sig.samples.data() + src0;
            const cplx* ph = phase_.data() + static_cast<std::size_t>(w) * M_;
            for (int i = 0; i < M_; ++i)
                y += x[i] * ph[i];
            total += std::norm(y / static_cast<double>(M_));
        }
        return total;
    }

private:
    int M_, S_, cp_, N_;
    std::vector<cplx> phase_;
};

/// Unit responses of one D2D subcarrier slot, repeating every `hop` samples.
/// scale brings the steady-state mean power of the slot to exactly 1.
struct PulseSet {
    std::vector<std::vector<cplx>> pulses;
    long long hop = 0;
    double scale = 1.0;
};

PulseSet unit_pulses(const WaveformConfig& c)
{
    validate(c);
    PulseSet ps;
    ps.hop = block_hop(c);
    const int rows = rows_per_block(c);
    for (int ch : slot_channels(c, 0))
        for (int n = 0; n < rows; ++n) {
            SymbolGrid grid(rows, c.M);
            grid(n, ch) = 1.0;
            ps.pulses.push_back(synthesize(c, grid).samples);
        }
    double energy = 0;
    for (const auto& p : ps.pulses)
        for (const auto& v : p)
            energy += std::norm(v);
    ps.scale = 1.0 / std::sqrt(energy / static_cast<double>(ps.hop));
    return ps;
}

void check_offset(const IncumbentConfig& inc, Offset off)
{
    if (2 * std::abs(off.delta_t) > inc.symbol_samples())
        throw std::invalid_argument("delta_t = " + std::to_string(off.delta_t) +
                                    " exceeds half an incumbent symbol");
    if (!std::isfinite(off.delta_f))
        throw std::invalid_argument("delta_f must be finite");
}

template <class Fn>
void parallel_for(std::size_t count, unsigned threads, Fn&& fn)
{
    if (threads == 0)
        threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
    if (threads <= 1) {
        for (std::size_t i = 0; i < count; ++i)
            fn(i);
        return;
    }
    std::atomic<std::size_t> next{0};
    std::exception_ptr error;
    std::mutex error_mutex;
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t)
        pool.emplace_back([&] {
            for (std::size_t i = next++; i < count; i = next++) {
                try {
                    fn(i);
                } catch (...) {
                    std::lock_guard lock(error_mutex);
                    if (!error)
                        error = std::current_exception();
                }
            }
        });
    for (auto& th : pool)
        th.join();
    if (error)
        std::rethrow_exception(error);
}

std::mutex& fftw_planner_mutex()
{
    static std::mutex m;
    return m;
}

/// Squared window projections |(1/M) sum_i p[tau+i] e^{j2pi i df/M} e^{-j2pi i l/M}|^2
/// for every tau with overlap, all M bins. Row tau + M - 1.
std::vector<double> window_projection_table(const std::vector<cplx>& pulse, int M, double delta_f,
                                            double scale)
{
    const long long L = static_cast<long long>(pulse.size());
    const long long rows = L + M - 1;
    std::vector<double> out(static_cast<std::size_t>(rows) * M);

    auto* in = fftw_alloc_complex(static_cast<std::size_t>(M));
    auto* spec = fftw_alloc_complex(static_cast<std::size_t>(M));
    fftw_plan plan;
    {
        std::lock_guard lock(fftw_planner_mutex());
        plan = fftw_plan_dft_1d(M, in, spec, FFTW_FORWARD, FFTW_ESTIMATE);
    }
    std::vector<cplx> rot(static_cast<std::size_t>(M));
    for (int i = 0; i < M; ++i)
        rot[i] = std::polar(scale / M, 2.0 * pi * i * delta_f / M);

    for (long long r = 0; r < rows; ++r) {
        const long long tau = r - (M - 1);
        for (int i = 0; i < M; ++i) {
            const long long j = tau + i;
            const cplx v = (j >= 0 && j < L) ? pulse[static_cast<std::size_t>(j)] * rot[i] : cplx{};
            in[i][0] = v.real();
            in[i][1] = v.imag();
        }
        fftw_execute_dft(plan, in, spec);
        double* row = out.data() + static_cast<std::size_t>(r) * M;
        for (int b = 0; b < M; ++b)
            row[b] = spec[b][0] * spec[b][0] + spec[b][1] * spec[b][1];
    }
    {
        std::lock_guard lock(fftw_planner_mutex());
        fftw_destroy_plan(plan);
    }
    fftw_free(in);
    fftw_free(spec);
    return out;
}

} // namespace

void validate(const IncumbentConfig& inc)
{
    if (inc.M < 1)
        throw std::invalid_argument("incumbent M must be positive");
    if (inc.cp_samples < 0)
        throw std::invalid_argument("incumbent N_CP must be >= 0");
    if (inc.observed_symbols < 1)
        throw std::invalid_argument("incumbent observation needs at least one symbol");
    if (!(inc.subcarrier_spacing > 0))
        throw std::invalid_argument("subcarrier spacing must be positive");
}

void validate(const BandMap& bands)
{
    std::vector<int> f = bands.free, i = bands.incumbent;
    std::sort(f.begin(), f.end());
    std::sort(i.begin(), i.end());
    std::vector<int> both;
    std::set_intersection(f.begin(), f.end(), i.begin(), i.end(), std::back_inserter(both));
    if (!both.empty()) {
        std::string msg = "free band B_f and incumbent band B_i overlap at subcarrier(s)";
        for (int k : both)
            msg += " " + std::to_string(k);
        throw std::invalid_argument(msg);
    }
    if (std::adjacent_find(f.begin(), f.end()) != f.end() ||
        std::adjacent_find(i.begin(), i.end()) != i.end())
        throw std::invalid_argument("band map lists a subcarrier twice");
}

InterferenceTable::InterferenceTable(WaveformKind kind, int min_distance, int max_distance,
                                     std::vector<int> dt_grid, std::vector<double> df_grid)
    : kind_(kind), d_min_(min_distance), d_max_(max_distance), dt_(std::move(dt_grid)),
      df_(std::move(df_grid))
{
    if (d_max_ < d_min_)
        throw std::invalid_argument("table distance range is empty");
    if (dt_.empty() || df_.empty())
        throw std::invalid_argument("table grids must be non-empty");
    values_.assign(distance_count() * dt_.size() * df_.size(), 0.0);
}

int InterferenceTable::dt_index(int delta_t) const
{
    auto it = std::find(dt_.begin(), dt_.end(), delta_t);
    return it == dt_.end() ? -1 : static_cast<int>(it - dt_.begin());
}

double instantaneous_interference(const ComplexSignal& signal, const IncumbentConfig& inc, int l,
                                  Offset offset)
{
    validate(inc);
    if (l < 0 || l >= inc.M)
        throw std::out_of_range("incumbent subcarrier " + std::to_string(l) + " outside [0, " +
                                std::to_string(inc.M) + ")");
    return ReceiverKernel(inc, l, offset.delta_f).energy(signal, offset.delta_t);
}

ComplexSignal draw_observation_signal(const WaveformConfig& c, const IncumbentConfig& inc,
                                      int slot, Offset offset, std::mt19937_64& rng)
{
    validate(c);
    validate(inc);
    const long long span = static_cast<long long>(inc.observed_symbols) * inc.symbol_samples();
    const long long lo = -offset.delta_t;
    const long long hi = lo + span;
    const long long hop = block_hop(c);
    const int rows_blk = rows_per_block(c);
    const long long pulse_len = static_cast<long long>(synthesized_length(c, rows_blk));

    const long long b_min = floor_div(lo - pulse_len, hop);
    const long long b_max = floor_div(hi, hop) + 1;
    const int rows = static_cast<int>((b_max - b_min + 1) * rows_blk);

    SymbolGrid grid(rows, c.M);
    for (int ch : slot_channels(c, slot)) {
        const auto sym = draw_symbols(c.kind, static_cast<std::size_t>(rows), rng);
        for (int n = 0; n < rows; ++n)
            grid(n, ch) = sym[static_cast<std::size_t>(n)];
    }
    auto sig = synthesize(c, grid);
    sig.first_index = b_min * hop;

    double p = 0;
    for (long long k = lo; k < hi; ++k)
        p += std::norm(sig.samples[static_cast<std::size_t>(k - sig.first_index)]);
    p /= static_cast<double>(span);
    if (p > 0) {
        const double s = 1.0 / std::sqrt(p);
        for (auto& v : sig.samples)
            v *= s;
    }
    return sig;
}

double mean_interference(const WaveformConfig& c, const IncumbentConfig& inc, int distance,
                         Offset offset, int trials, std::uint64_t seed)
{
    validate(inc);
    check_offset(inc, offset);
    if (trials < 1)
        throw std::invalid_argument("Monte-Carlo needs at least one trial");
    const int l = bin_of(distance, kMonteCarloSlot, inc.M);
    const ReceiverKernel kernel(inc, l, offset.delta_f);
    std::mt19937_64 rng(seed);
    double acc = 0;
    for (int t = 0; t < trials; ++t)
        acc += kernel.energy(draw_observation_signal(c, inc, kMonteCarloSlot, offset, rng),
                             offset.delta_t);
    return acc / trials / inc.observed_symbols;
}

double analytic_mean_interference(const WaveformConfig& c, const IncumbentConfig& inc,
                                  int distance, Offset offset)
{
    validate(inc);
    check_offset(inc, offset);
    const auto ps = unit_pulses(c);
    const int M = inc.M;
    const int l = bin_of(distance, 0, M);
    const ReceiverKernel kernel(inc, l, offset.delta_f);

    double total = 0;
    for (const auto& pulse : ps.pulses) {
        const auto L = static_cast<long long>(pulse.size());
        for (int w = 0; w < inc.observed_symbols; ++w) {
            const long long k0 = static_cast<long long>(w) * inc.symbol_samples() + inc.cp_samples;
            // pulse b occupies receiver samples [b*hop + dt, b*hop + dt + L)
            const long long b_lo = floor_div(k0 - offset.delta_t - L, ps.hop) + 1;
            const long long b_hi = floor_div(k0 + M - 1 - offset.delta_t, ps.hop);
            for (long long b = b_lo; b <= b_hi; ++b) {
                ComplexSignal one;
                one.first_index = b * ps.hop;
                one.samples.assign(pulse.begin(), pulse.end());
                // Pad so the single-window projection below stays in range.
                const long long need_lo = k0 - offset.delta_t;
                const long long front = std::max(0LL, one.first_index - need_lo);
                const long long back =
                    std::max(0LL, need_lo + M - (one.first_index + L));
                one.samples.insert(one.samples.begin(), static_cast<std::size_t>(front), cplx{});
                one.samples.insert(one.samples.end(), static_cast<std::size_t>(back), cplx{});
                one.first_index -= front;

                cplx y{};
                const long long src0 = need_lo - one.first_index;
                for (int i = 0; i < M; ++i) {
                    const long long k = k0 + i;
                    const double cycles =
                        std::fmod(static_cast<double>(k) * (offset.delta_f - l), static_cast<double>(M));
                    y += one.samples[static_cast<std::size_t>(src0 + i)] *
                         std::polar(1.0, 2.0 * pi * cycles / M);
                }
                total += std::norm(y * ps.scale / static_cast<double>(M));
            }
        }
    }
    return total / inc.observed_symbols;
}

TableGrids default_grids(const IncumbentConfig& inc, int min_distance, int max_distance,
                         int dt_step, double df_max, double df_step)
{
    if (dt_step < 1 || !(df_step > 0) || df_max < 0)
        throw std::invalid_argument("grid steps must be positive");
    TableGrids g;
    g.min_distance = min_distance;
    g.max_distance = max_distance;
    const int half = inc.symbol_samples() / 2;
    for (int dt = -half; dt <= half; dt += dt_step)
        g.dt_grid.push_back(dt);
    const int nf = static_cast<int>(std::llround(df_max / df_step));
    for (int i = -nf; i <= nf; ++i)
        g.df_grid.push_back(std::round(i * df_step * 1e12) / 1e12);
    return g;
}

InterferenceTable build_table(const WaveformConfig& c, const IncumbentConfig& inc,
                              const TableGrids& grids, unsigned threads)
{
    validate(inc);
    for (int dt : grids.dt_grid)
        check_offset(inc, {dt, 0.0});
    for (double df : grids.df_grid)
        check_offset(inc, {0, df});

    InterferenceTable table(c.kind, grids.min_distance, grids.max_distance, grids.dt_grid,
                            grids.df_grid);
    table.metadata.incumbent = inc;
    table.metadata.waveform = c;
    table.metadata.method = "analytic";

    const auto ps = unit_pulses(c);
    const int M = inc.M;
    const int N = inc.observed_symbols;
    const long long S = inc.symbol_samples();

    parallel_for(grids.df_grid.size(), threads, [&](std::size_t fi) {
        std::vector<std::vector<double>> proj;
        for (const auto& p : ps.pulses)
            proj.push_back(window_projection_table(p, M, grids.df_grid[fi], ps.scale));

        std::vector<double> acc(static_cast<std::size_t>(M));
        for (std::size_t ti = 0; ti < grids.dt_grid.size(); ++ti) {
            const long long dt = grids.dt_grid[ti];
            std::fill(acc.begin(), acc.end(), 0.0);
            for (std::size_t pi_ = 0; pi_ < ps.pulses.size(); ++pi_) {
                const auto L = static_cast<long long>(ps.pulses[pi_].size());
                const auto& G = proj[pi_];
                for (int w = 0; w < N; ++w) {
                    const long long k0 = w * S + inc.cp_samples;
                    const long long b_lo = floor_div(k0 - dt - L, ps.hop) + 1;
                    const long long b_hi = floor_div(k0 + M - 1 - dt, ps.hop);
                    for (long long b = b_lo; b <= b_hi; ++b) {
                        const long long tau = k0 - dt - b * ps.hop;
                        const double* row = G.data() + static_cast<std::size_t>(tau + M - 1) * M;
                        for (int k = 0; k < M; ++k)
                            acc[k] += row[k];
                    }
                }
            }
            for (int d = grids.min_distance; d <= grids.max_distance; ++d)
                table.at(static_cast<std::size_t>(d - grids.min_distance), ti, fi) =
                    acc[static_cast<std::size_t>(bin_of(d, 0, M))] / N;
        }
    });
    return table;
}

double shift_lookup(const InterferenceTable& table, int distance, Offset offset)
{
    const int ti = table.dt_index(offset.delta_t);
    if (ti < 0)
        throw std::invalid_argument("delta_t = " + std::to_string(offset.delta_t) +
                                    " is not on the table grid");
    const double whole = std::floor(offset.delta_f);
    const double frac = offset.delta_f - whole;
    const int d_eff = distance + static_cast<int>(whole);
    if (!table.has_distance(d_eff))
        throw std::out_of_range("effective distance " + std::to_string(d_eff) +
                                " (delta_f = " + std::to_string(offset.delta_f) +
                                ") falls outside the table");

    // Abscissa g + k on the delta_f axis of distance d_eff carries T(d_eff + k, g).
    // Among coincident abscissae the entry stored under d_eff itself wins,
    // then the grid point nearest 0.
    struct Point {
        double x = 0;
        double g = 0;
        bool shifted = false;
        double value = 0;
        bool valid = false;
    };
    Point lo, hi;
    const auto& df = table.df_grid();
    auto better = [](const Point& cur, const Point& cand, bool want_max) {
        if (!cur.valid)
            return true;
        if (std::abs(cand.x - cur.x) <= kGridTol) {
            if (cand.shifted != cur.shifted)
                return !cand.shifted;
            return std::abs(cand.g) < std::abs(cur.g);
        }
        return want_max ? cand.x > cur.x : cand.x < cur.x;
    };
    for (std::size_t fi = 0; fi < df.size(); ++fi) {
        const double g = df[fi];
        const double k_lo = std::floor(frac - g + kGridTol);
        const double k_hi = std::ceil(frac - g - kGridTol);
        for (double k : {k_lo, k_hi}) {
            const int d = d_eff + static_cast<int>(k);
            if (!table.has_distance(d))
                continue;
            const Point cand{g + k, g, k != 0, table.entry(d, static_cast<std::size_t>(ti), fi),
                             true};
            if (cand.x <= frac + kGridTol && better(lo, cand, true))
                lo = cand;
            if (cand.x >= frac - kGridTol && better(hi, cand, false))
                hi = cand;
        }
    }
    if (lo.valid && std::abs(lo.x - frac) <= kGridTol)
        return lo.value;
    if (hi.valid && std::abs(hi.x - frac) <= kGridTol)
        return hi.value;
    if (!lo.valid || !hi.valid)
        throw std::out_of_range("effective distance " + std::to_string(d_eff) +
                                " (delta_f = " + std::to_string(offset.delta_f) +
                                ") falls outside the table");
    const double t = (frac - lo.x) / (hi.x - lo.x);
    return lo.value + t * (hi.value - lo.value);
}

double total_interference(const InterferenceTable& table, std::span<const double> powers,
                          const BandMap& bands, Offset offset)
{
    validate(bands);
    if (powers.size() != bands.free.size())
        throw std::invalid_argument("one power per free subcarrier is required");
    double total = 0;
    for (std::size_t i = 0; i < powers.size(); ++i) {
        if (powers[i] < 0)
            throw std::invalid_argument("subcarrier powers must be non-negative");
        if (powers[i] == 0)
            continue;
        for (int l : bands.incumbent)
            total += powers[i] * shift_lookup(table, bands.free[i] - l, offset);
    }
    return total;
}

} // namespace d2d
