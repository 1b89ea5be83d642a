#pragma once

#include <string>
#include <vector>

namespace d2d {

/// Real-valued transmit prototype filter, always unit energy.
struct PrototypeFilter {
    std::vector<double> taps;
    int overlap_factor = 1;
    int samples_per_symbol = 1;
    std::string name;   // "rrc", "phydyas", "lapped-sine", "gfdm-circular"
    double rolloff = 0; // only meaningful for RRC-derived filters

    std::size_t size() const { return taps.size(); }
    double energy() const;
};

/// Continuous root-raised-cosine pulse evaluated at t (in symbol periods).
/// Removable singularities at t = 0 and |t| = 1/(4 rolloff) use their limits.
double rrc_impulse(double t, double rolloff);

/// K*P taps of an RRC pulse with symbol period P, centered on (K*P-1)/2.
PrototypeFilter rrc_filter(double rolloff, int overlap_factor, int samples_per_symbol);

/// PHYDYAS prototype built by frequency sampling. Only K = 4 is supported.
PrototypeFilter phydyas_filter(int overlap_factor, int samples_per_symbol);

enum class LappedIndexing {
    Symmetric, ///< -sin((k + 1/2) pi / 2M), even-symmetric about the center
    Asymmetric, ///< -sin((k - 1/2) pi / 2M)
};

/// 2M-tap sine window of the lapped filter bank.
PrototypeFilter lapped_sine_filter(int M, LappedIndexing indexing = LappedIndexing::Symmetric);

/// Periodizes `base` onto block_symbols*M samples (index wraps modulo the
/// block length) and renormalizes.
PrototypeFilter gfdm_circular_filter(const PrototypeFilter& base, int block_symbols, int M);

} // namespace d2d
