// SPDX-License-Identifier: Apache-2.0
#ifndef DFRC_HRIS_OPT_HPP
#define DFRC_HRIS_OPT_HPP

#include <algorithm>
#include <vector>

#include "dfrc/model.hpp"
#include "dfrc/optim.hpp"

namespace dfrc {

struct PenaltyParams {
    double lambda1 = 10.0;
    double lambda2 = 1.0;
    double alpha1 = 4.0;
    int alpha2 = 10;
    double gamma_c = 1.0;  // linear threshold

    void validate() const {
        if (!(lambda1 > 0.0) || !(lambda2 > 0.0))
            throw std::invalid_argument("penalty weights must be strictly positive");
        if (alpha2 % 2 != 0) throw std::invalid_argument("box penalty exponent must be even");
        if (!(gamma_c > 0.0)) throw std::invalid_argument("comm threshold must be positive");
    }
};

using AgdParams = opt::AdamParams;

struct FgsParams {
    int z_max = 10;

    double delta_z() const { return 1.0 / z_max; }  // Z_max * delta_z = 1

    void validate() const {
        if (z_max < 1) throw std::invalid_argument("grid count must be at least 1");
    }
};

// Real quadratic-form data for the penalized objective at a fixed beamformer.
// All matrices are the real parts of the Hermitian originals, which is all a
// real beta can see.
struct PenaltyContext {
    MatrixXd c1;              // radar numerator, (1-b)^T c1 (1-b)
    MatrixXd ar2;             // |A_r|^2 = (1-b)^T ar2 (1-b)
    MatrixXd c2;              // HRIS interference, b^T c2 b
    std::vector<MatrixXd> c3; // per-user signal power
    std::vector<MatrixXd> d;  // per-user total received power
    double sigma2 = 1.0;

    Eigen::Index size() const { return c1.rows(); }
    Eigen::Index num_users() const { return static_cast<Eigen::Index>(c3.size()); }
};

inline PenaltyContext build_penalty_context(const PropagationMatrices& p, const VectorXcd& a_r,
                                            double sigma2) {
    PenaltyContext ctx;
    ctx.c1 = p.C1.real();
    ctx.ar2 = (a_r * a_r.adjoint()).real();
    ctx.c2 = p.C2.real();
    ctx.c3.reserve(p.C3.size());
    ctx.d.reserve(p.D.size());
    for (const auto& m : p.C3) ctx.c3.push_back(m.real());
    for (const auto& m : p.D) ctx.d.push_back(m.real());
    ctx.sigma2 = sigma2;
    return ctx;
}

inline double context_sinr_radar(const VectorXd& beta, const PenaltyContext& ctx) {
    const VectorXd one_minus = VectorXd::Ones(beta.size()) - beta;
    const double num = real_quad_form(one_minus, ctx.c1);
    const double interf = real_quad_form(one_minus, ctx.ar2) * real_quad_form(beta, ctx.c2);
    return num / (interf + ctx.sigma2);
}

inline VectorXd context_sinr_comm(const VectorXd& beta, const PenaltyContext& ctx) {
    VectorXd eta(ctx.num_users());
    for (Eigen::Index k = 0; k < ctx.num_users(); ++k) {
        const double num = real_quad_form(beta, ctx.c3[static_cast<std::size_t>(k)]);
        const double tot = real_quad_form(beta, ctx.d[static_cast<std::size_t>(k)]);
        eta(k) = num / (tot - num + ctx.sigma2);
    }
    return eta;
}

// f(beta) = -eta_r + lambda1 * alpha1^(Gamma_c - min_k eta_c)
//          + lambda2 * sum_l (2 beta_l - 1)^alpha2
// Defined for any real beta; the descent explores outside the box.
inline double penalty_objective(const VectorXd& beta, const PenaltyContext& ctx,
                                const PenaltyParams& p) {
    double f = -context_sinr_radar(beta, ctx);
    if (ctx.num_users() > 0) {
        const double eta_min = context_sinr_comm(beta, ctx).minCoeff();
        f += p.lambda1 * std::pow(p.alpha1, p.gamma_c - eta_min);
    }
    for (Eigen::Index l = 0; l < beta.size(); ++l)
        f += p.lambda2 * std::pow(2.0 * beta(l) - 1.0, p.alpha2);
    return f;
}

inline VectorXd penalty_gradient(const VectorXd& beta, const PenaltyContext& ctx,
                                 const PenaltyParams& p) {
    const Eigen::Index n = beta.size();
    const VectorXd one_minus = VectorXd::Ones(n) - beta;

    const double q1 = real_quad_form(one_minus, ctx.c1);
    const double qa = real_quad_form(one_minus, ctx.ar2);
    const double q2 = real_quad_form(beta, ctx.c2);
    const double den_r = qa * q2 + ctx.sigma2;
    const VectorXd dq1 = -2.0 * (ctx.c1 * one_minus);
    const VectorXd dqa = -2.0 * (ctx.ar2 * one_minus);
    const VectorXd dq2 = 2.0 * (ctx.c2 * beta);
    const VectorXd d_eta_r = (dq1 * den_r - q1 * (dqa * q2 + qa * dq2)) / (den_r * den_r);

    VectorXd grad = -d_eta_r;

    if (ctx.num_users() > 0) {
        const VectorXd eta_c = context_sinr_comm(beta, ctx);
        Eigen::Index k_min = 0;
        eta_c.minCoeff(&k_min);
        const auto k = static_cast<std::size_t>(k_min);
        const double num = real_quad_form(beta, ctx.c3[k]);
        const double tot = real_quad_form(beta, ctx.d[k]);
        const double den = tot - num + ctx.sigma2;
        const VectorXd dnum = 2.0 * (ctx.c3[k] * beta);
        const VectorXd dden = 2.0 * (ctx.d[k] * beta) - dnum;
        const VectorXd d_eta_c = (dnum * den - num * dden) / (den * den);
        const double g1 = std::pow(p.alpha1, p.gamma_c - eta_c(k_min));
        if (g1 > 0.0 && std::isfinite(g1))
            grad -= p.lambda1 * std::log(p.alpha1) * g1 * d_eta_c;
    }

    for (Eigen::Index l = 0; l < n; ++l)
        grad(l) += p.lambda2 * 2.0 * p.alpha2 * std::pow(2.0 * beta(l) - 1.0, p.alpha2 - 1);
    return grad;
}

// Slice-halving grid initialization. Starting from beta = 0, stage m writes a
// uniform grid value into the leading and trailing slices of length
// ceil(N/2^m) and keeps the stage minimizer; stages stop once the slice
// length reaches one. Returns the best candidate seen across all stages.
inline VectorXd fgs_initialize(const PenaltyContext& ctx, const FgsParams& fgs,
                               const PenaltyParams& pen) {
    fgs.validate();
    const Eigen::Index n = ctx.size();
    VectorXd current = VectorXd::Zero(n);
    VectorXd best = current;
    double best_f = penalty_objective(best, ctx, pen);

    const double dz = fgs.delta_z();
    Eigen::Index len = n;
    for (Eigen::Index divisor = 2; len > 1 || divisor == 2; divisor *= 2) {
        len = (n + divisor - 1) / divisor;  // ceil(N / 2^m)
        VectorXd stage_best;
        double stage_f = std::numeric_limits<double>::infinity();
        for (int slice = 0; slice < 2; ++slice) {
            const Eigen::Index start = slice == 0 ? 0 : n - len;
            if (slice == 1 && start == 0) break;  // slices coincide
            for (int z = 0; z <= fgs.z_max; ++z) {
                VectorXd cand = current;
                cand.segment(start, len).setConstant(z * dz);
                const double f = penalty_objective(cand, ctx, pen);
                if (f < stage_f) {
                    stage_f = f;
                    stage_best = cand;
                }
            }
        }
        if (stage_best.size() == 0) break;  // objective non-finite on every candidate
        current = stage_best;
        if (stage_f < best_f) {
            best_f = stage_f;
            best = stage_best;
        }
        if (len == 1) break;
    }
    return best;
}

struct AgdResult {
    VectorXd beta;              // final point, clamped to [0,1]
    std::vector<double> trace;  // objective per iteration
};

inline AgdResult agd_descend(const VectorXd& beta0, const PenaltyContext& ctx,
                             const AgdParams& agd, const PenaltyParams& pen) {
    auto obj = [&](const VectorXd& b) { return penalty_objective(b, ctx, pen); };
    auto grad = [&](const VectorXd& b) { return penalty_gradient(b, ctx, pen); };
    opt::DescentResult res = opt::adam_descend(beta0, obj, grad, agd);
    AgdResult out;
    out.beta = res.x.cwiseMax(0.0).cwiseMin(1.0);
    out.trace = std::move(res.trace);
    return out;
}

struct HrisOptResult {
    VectorXd beta;
    std::vector<double> trace;
    SinrReport report;
};

inline HrisOptResult optimize_hris(const PenaltyContext& ctx, const FgsParams& fgs,
                                   const AgdParams& agd, const PenaltyParams& pen) {
    pen.validate();
    const VectorXd beta0 = fgs_initialize(ctx, fgs, pen);
    AgdResult descent = agd_descend(beta0, ctx, agd, pen);

    HrisOptResult out;
    out.beta = std::move(descent.beta);
    out.trace = std::move(descent.trace);
    out.report.eta_r = context_sinr_radar(out.beta, ctx);
    out.report.eta_c = context_sinr_comm(out.beta, ctx);
    out.report.gamma_c = pen.gamma_c;
    out.report.comm_feasible =
        ctx.num_users() == 0 || out.report.eta_c.minCoeff() >= pen.gamma_c * (1.0 - 1e-3);
    return out;
}

}  // namespace dfrc

#endif  // DFRC_HRIS_OPT_HPP
