// SPDX-License-Identifier: Apache-2.0
#ifndef DFRC_OPTIM_HPP
#define DFRC_OPTIM_HPP

#include <functional>
#include <vector>

#include "dfrc/common.hpp"

namespace dfrc::opt {

struct AdamParams {
    int max_iters = 1000;
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double eps = 1e-8;
};

struct DescentResult {
    VectorXd x;
    std::vector<double> trace;  // f(x_i) for i = 0..M-1 plus the final point
};

// Adam-style adaptive gradient descent on a smooth objective. Aborts on a
// non-finite objective or gradient value.
template <typename Objective, typename Gradient>
DescentResult adam_descend(const VectorXd& x0, Objective&& f, Gradient&& grad,
                           const AdamParams& p) {
    if (p.max_iters < 1) throw std::invalid_argument("adam needs at least one iteration");
    DescentResult out;
    out.x = x0;
    out.trace.reserve(static_cast<std::size_t>(p.max_iters) + 1);
    VectorXd m = VectorXd::Zero(x0.size());
    VectorXd v = VectorXd::Zero(x0.size());
    for (int i = 0; i < p.max_iters; ++i) {
        const double fx = f(out.x);
        if (!std::isfinite(fx)) throw std::runtime_error("non-finite objective in gradient descent");
        out.trace.push_back(fx);
        const VectorXd g = grad(out.x);
        if (!g.allFinite()) throw std::runtime_error("non-finite gradient in gradient descent");
        m = p.beta1 * m + (1.0 - p.beta1) * g;
        v = p.beta2 * v + (1.0 - p.beta2) * g.cwiseProduct(g);
        const double bc1 = 1.0 - std::pow(p.beta1, i + 1);
        const double bc2 = 1.0 - std::pow(p.beta2, i + 1);
        const VectorXd m_hat = m / bc1;
        const VectorXd v_hat = v / bc2;
        out.x -= p.learning_rate * (m_hat.array() / (v_hat.array().sqrt() + p.eps)).matrix();
    }
    out.trace.push_back(f(out.x));
    return out;
}

struct BisectionResult {
    double value = 0.0;  // largest point classified feasible
    int trials = 0;
};

// Bisection for a monotone feasibility predicate: pred is expected true at lo
// and false beyond some threshold; shrinks [lo, hi] until hi - lo <= tol.
template <typename Predicate>
BisectionResult bisect_threshold(double lo, double hi, double tol, Predicate&& pred) {
    if (!(tol > 0.0) || hi < lo) throw std::invalid_argument("bad bisection bracket");
    BisectionResult out;
    while (hi - lo > tol) {
        const double mid = 0.5 * (lo + hi);
        ++out.trials;
        if (pred(mid))
            lo = mid;
        else
            hi = mid;
    }
    out.value = lo;
    return out;
}

}  // namespace dfrc::opt

#endif  // DFRC_OPTIM_HPP
