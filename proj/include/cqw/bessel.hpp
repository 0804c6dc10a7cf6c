#pragma once

#include <cstddef>
#include <vector>

namespace cqw::bessel {

/// J_0(x) .. J_max_order(x) for x >= 0.
///
/// Backward (Miller) recurrence normalized with J_0 + 2 sum J_2k = 1; a power
/// series is used for small arguments. Relative error is ~1e-14 for every
/// order whose value does not underflow.
std::vector<double> j_sequence(double x, std::size_t max_order);

/// exp(-x) I_0(x) .. exp(-x) I_max_order(x) for x >= 0, by backward recurrence
/// normalized with exp(-x) (I_0 + 2 sum I_k) = 1.
std::vector<double> scaled_i_sequence(double x, std::size_t max_order);

/// Order beyond which |J_n(x)| is below `threshold` for good (n > x is
/// required, so the sequence is already monotone there).
std::size_t j_cutoff_order(double x, double threshold);

}  // namespace cqw::bessel
