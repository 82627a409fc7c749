#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "exf/core/tensor.hpp"

namespace exf::core {

// Central finite differences against analytic gradients. loss_fn recomputes
// the scalar loss from the current parameter values; analytic[i] must be the
// already-computed gradient for params[i] at the unperturbed point.
inline double grad_check_max_rel_err(const std::function<double()>& loss_fn,
                                     const std::vector<Tensor*>& params,
                                     const std::vector<Tensor*>& analytic,
                                     double eps = 1e-5) {
    double max_err = 0.0;
    for (std::size_t p = 0; p < params.size(); ++p) {
        Tensor& t = *params[p];
        const Tensor& g = *analytic[p];
        for (std::size_t i = 0; i < t.size(); ++i) {
            const double saved = t[i];
            t[i] = saved + eps;
            const double up = loss_fn();
            t[i] = saved - eps;
            const double down = loss_fn();
            t[i] = saved;
            const double numeric = (up - down) / (2.0 * eps);
            const double a = g[i];
            const double err = std::abs(a - numeric) / std::max({std::abs(a), std::abs(numeric), 1e-8});
            max_err = std::max(max_err, err);
        }
    }
    return max_err;
}

}  // namespace exf::core
