#pragma once

#include <functional>

#include "lfsal/rng.hpp"
#include "lfsal/tensor.hpp"

// Central finite-difference gradient verification. The analytic gradient for
// `param` is compared against (L(w+eps) - L(w-eps)) / (2 eps) at randomly
// probed coordinates; relative error uses max(|analytic|, |numeric|, 1e-8)
// as the denominator. A probe whose step interval straddles a hinge (relu
// edge, pool argmax flip) carries no information about the tangent, so such
// probes are detected -- one-sided slopes splitting, or the central estimate
// drifting between step eps and eps/8 -- then redrawn, counted in
// `resampled`, and the full probe count is still delivered.

namespace lfsal {

struct FdReport {
    double max_rel_err = 0.0;
    std::size_t probes = 0;     // smooth probes actually scored
    std::size_t resampled = 0;  // hinge-straddling probes discarded and redrawn
};

// loss_fn must re-evaluate the scalar loss from current tensor contents;
// param is temporarily perturbed in place and restored.
FdReport finite_difference_check(Tensor& param, const Tensor& analytic_grad,
                                 const std::function<double()>& loss_fn, std::size_t probes,
                                 double eps, std::uint64_t seed);

}  // namespace lfsal
