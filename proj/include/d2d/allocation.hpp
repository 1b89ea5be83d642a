#pragma once

#include "d2d/interference.hpp"

#include <limits>
#include <vector>

namespace d2d {

struct AllocationProblem {
    std::vector<double> omegas;     // maximum interference factor per free subcarrier
    double total_power = 1.0;       // P_t, W
    double interference_threshold = 1.0; // I_th, W
    std::vector<double> noise;      // sigma^2 per subcarrier, W

    /// Same noise level on every subcarrier.
    static AllocationProblem uniform(std::vector<double> omegas, double total_power,
                                     double interference_threshold, double noise);
    std::size_t size() const { return omegas.size(); }
};

/// Throws std::invalid_argument on violated invariants.
void validate(const AllocationProblem& problem);

struct AllocationResult {
    std::vector<double> powers;
    double alpha = 0.0; // multiplier of sum_m Omega_m P_m <= I_th
    double beta = 0.0;  // multiplier of sum_m P_m <= P_t
    bool interference_binds = false;
    bool power_binds = false;
};

/// Omega_m = sum over l in B_i of the table maximum over (delta_t, delta_f)
/// at distance m - l. Offsets with |delta_f| > df_max are skipped.
std::vector<double> omega_factors(const InterferenceTable& table, const BandMap& bands,
                                  double df_max = std::numeric_limits<double>::infinity());

/// Water level solution P_m = max(0, 1 / (alpha Omega_m + beta) - sigma_m^2)
/// of max sum log2(1 + P_m / sigma_m^2) subject to both budgets.
AllocationResult solve(const AllocationProblem& problem);

/// Largest violation of stationarity, primal and dual feasibility and
/// complementary slackness, each in relative form.
double kkt_residual(const AllocationProblem& problem, const AllocationResult& result);

/// sum_m log2(1 + P_m / sigma_m^2).
double objective_bits(const AllocationProblem& problem, const std::vector<double>& powers);

} // namespace d2d
