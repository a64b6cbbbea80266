#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace ccr::detail {

// Live flows of one leg at a fixed date, with ZCB coefficients folded in:
// value(x) = sum_f amount_f * exp(log_a_f - b_f * x).
struct LegKernel {
    bool foreign = false;
    std::size_t set = 0;
    std::vector<double> log_a;
    std::vector<double> b;
    std::vector<double> amount;
};

// Adds each leg's value on every path of the batch to out[set * n + p].
void revalue_batch(std::span<const LegKernel> legs, std::span<const double> xd, std::span<const double> xf,
                   std::span<const double> fx, double* out, std::vector<double>& scratch);

}  // namespace ccr::detail
