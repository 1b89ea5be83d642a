#include "d2d/allocation.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>
#include <string>

namespace d2d {

namespace {

struct Level {
    const AllocationProblem& p;

    double power(std::size_t m, double alpha, double beta) const
    {
        const double lambda = alpha * p.omegas[m] + beta;
        if (lambda <= 0)
            return std::numeric_limits<double>::infinity();
        return std::max(0.0, 1.0 / lambda - p.noise[m]);
    }

    std::vector<double> powers(double alpha, double beta) const
    {
        std::vector<double> out(p.size());
        for (std::size_t m = 0; m < p.size(); ++m)
            out[m] = power(m, alpha, beta);
        return out;
    }

    double used_power(double alpha, double beta) const
    {
        double s = 0;
        for (std::size_t m = 0; m < p.size(); ++m)
            s += power(m, alpha, beta);
        return s;
    }

    double used_interference(double alpha, double beta) const
    {
        double s = 0;
        for (std::size_t m = 0; m < p.size(); ++m)
            if (p.omegas[m] > 0)
                s += p.omegas[m] * power(m, alpha, beta);
        return s;
    }
};

/// Smallest x in [lo, hi] (to adjacent doubles) with feasible(x), given
/// feasible(hi) and a monotone predicate.
template <class Pred>
double bisect(double lo, double hi, Pred feasible)
{
    while (true) {
        const double mid = lo + 0.5 * (hi - lo);
        if (mid <= lo || mid >= hi)
            return hi;
        if (feasible(mid))
            hi = mid;
        else
            lo = mid;
    }
}

double beta_ceiling(const AllocationProblem& p)
{
    double v = 0;
    for (double s : p.noise)
        v = std::max(v, 1.0 / s);
    return v;
}

} // namespace

AllocationProblem AllocationProblem::uniform(std::vector<double> omegas, double total_power,
                                             double interference_threshold, double noise)
{
    AllocationProblem p;
    p.noise.assign(omegas.size(), noise);
    p.omegas = std::move(omegas);
    p.total_power = total_power;
    p.interference_threshold = interference_threshold;
    return p;
}

void validate(const AllocationProblem& p)
{
    if (p.omegas.empty())
        throw std::invalid_argument("allocation needs at least one subcarrier");
    if (p.noise.size() != p.omegas.size())
        throw std::invalid_argument("noise vector length " + std::to_string(p.noise.size()) +
                                    " does not match " + std::to_string(p.omegas.size()) +
                                    " subcarriers");
    if (!(p.total_power > 0) || !std::isfinite(p.total_power))
        throw std::invalid_argument("total power P_t must be positive");
    if (!(p.interference_threshold > 0) || !std::isfinite(p.interference_threshold))
        throw std::invalid_argument("interference threshold I_th must be positive");
    for (std::size_t m = 0; m < p.size(); ++m) {
        if (!(p.omegas[m] >= 0) || !std::isfinite(p.omegas[m]))
            throw std::invalid_argument("Omega_" + std::to_string(m) + " must be >= 0");
        if (!(p.noise[m] > 0) || !std::isfinite(p.noise[m]))
            throw std::invalid_argument("sigma^2_" + std::to_string(m) + " must be > 0");
    }
}

std::vector<double> omega_factors(const InterferenceTable& table, const BandMap& bands,
                                  double df_max)
{
    validate(bands);
    std::map<int, double> worst;
    auto worst_at = [&](int d) {
        auto it = worst.find(d);
        if (it != worst.end())
            return it->second;
        double v = 0;
        bool any = false;
        for (int dt : table.dt_grid())
            for (double df : table.df_grid()) {
                if (std::abs(df) > df_max + 1e-12)
                    continue;
                v = std::max(v, shift_lookup(table, d, {dt, df}));
                any = true;
            }
        if (!any)
            throw std::invalid_argument("no table offsets within the delta_f limit");
        worst.emplace(d, v);
        return v;
    };
    std::vector<double> omegas;
    omegas.reserve(bands.free.size());
    for (int m : bands.free) {
        double s = 0;
        for (int l : bands.incumbent)
            s += worst_at(m - l);
        omegas.push_back(s);
    }
    return omegas;
}

AllocationResult solve(const AllocationProblem& p)
{
    validate(p);
    const Level lv{p};
    const double Pt = p.total_power;
    const double Ith = p.interference_threshold;
    const double b_max = beta_ceiling(p);
    AllocationResult r;

    // A: interference slack, classical water-filling on P_t.
    const double beta_a = bisect(0.0, b_max, [&](double b) { return lv.used_power(0, b) <= Pt; });
    if (lv.used_interference(0, beta_a) <= Ith) {
        r.powers = lv.powers(0, beta_a);
        r.beta = beta_a;
        r.power_binds = true;
        return r;
    }

    // B: power slack, weighted water-filling on I_th.
    const bool all_weighted =
        std::all_of(p.omegas.begin(), p.omegas.end(), [](double o) { return o > 0; });
    double a_max = 0;
    for (std::size_t m = 0; m < p.size(); ++m)
        if (p.omegas[m] > 0)
            a_max = std::max(a_max, 1.0 / (p.omegas[m] * p.noise[m]));
    if (all_weighted) {
        const double alpha_b =
            bisect(0.0, a_max, [&](double a) { return lv.used_interference(a, 0) <= Ith; });
        if (lv.used_power(alpha_b, 0) <= Pt) {
            r.powers = lv.powers(alpha_b, 0);
            r.alpha = alpha_b;
            r.interference_binds = true;
            return r;
        }
    }

    // C: both budgets tight.
    auto beta_of = [&](double a) {
        if (lv.used_power(a, 0) <= Pt)
            return 0.0;
        return bisect(0.0, b_max, [&](double b) { return lv.used_power(a, b) <= Pt; });
    };
    const double alpha_c = bisect(0.0, a_max, [&](double a) {
        return lv.used_interference(a, beta_of(a)) <= Ith;
    });
    r.alpha = alpha_c;
    r.beta = beta_of(alpha_c);
    r.powers = lv.powers(r.alpha, r.beta);
    r.interference_binds = r.alpha > 0;
    r.power_binds = r.beta > 0;
    return r;
}

double kkt_residual(const AllocationProblem& p, const AllocationResult& r)
{
    if (r.powers.size() != p.size())
        return std::numeric_limits<double>::infinity();
    double res = 0;
    double used_p = 0, used_i = 0;
    for (std::size_t m = 0; m < p.size(); ++m) {
        const double P = r.powers[m];
        const double lambda = r.alpha * p.omegas[m] + r.beta;
        if (P > 0)
            res = std::max(res, std::abs(lambda * (P + p.noise[m]) - 1.0));
        else
            res = std::max(res, std::max(0.0, 1.0 - lambda * p.noise[m]));
        res = std::max(res, std::max(0.0, -P) / p.total_power);
        used_p += P;
        used_i += p.omegas[m] * P;
    }
    res = std::max(res, std::max(0.0, used_p - p.total_power) / p.total_power);
    res = std::max(res, std::max(0.0, used_i - p.interference_threshold) /
                            p.interference_threshold);
    res = std::max(res, std::max(0.0, -r.alpha * p.interference_threshold));
    res = std::max(res, std::max(0.0, -r.beta * p.total_power));
    res = std::max(res, std::abs(r.alpha * (p.interference_threshold - used_i)));
    res = std::max(res, std::abs(r.beta * (p.total_power - used_p)));
    return res;
}

double objective_bits(const AllocationProblem& p, const std::vector<double>& powers)
{
    double s = 0;
    for (std::size_t m = 0; m < p.size(); ++m)
        s += std::log1p(powers[m] / p.noise[m]);
    return s / std::numbers::ln2;
}

} // namespace d2d
