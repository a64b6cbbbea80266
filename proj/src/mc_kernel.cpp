#include "mc_kernel.hpp"

#include <cmath>

namespace ccr::detail {

void revalue_batch(std::span<const LegKernel> legs, std::span<const double> xd, std::span<const double> xf,
                   std::span<const double> fx, double* out, std::vector<double>& scratch) {
    const std::size_t n = xd.size();
    scratch.resize(n);
    double* leg = scratch.data();
    for (const LegKernel& k : legs) {
        const double* x = k.foreign ? xf.data() : xd.data();
        for (std::size_t p = 0; p < n; ++p) leg[p] = 0.0;
        for (std::size_t f = 0; f < k.amount.size(); ++f) {
            const double la = k.log_a[f];
            const double b = k.b[f];
            const double c = k.amount[f];
            for (std::size_t p = 0; p < n; ++p) leg[p] += c * std::exp(la - b * x[p]);
        }
        double* dst = out + k.set * n;
        if (k.foreign)
            for (std::size_t p = 0; p < n; ++p) dst[p] += fx[p] * leg[p];
        else
            for (std::size_t p = 0; p < n; ++p) dst[p] += leg[p];
    }
}

}  // namespace ccr::detail
