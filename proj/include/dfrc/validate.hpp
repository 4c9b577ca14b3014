// SPDX-License-Identifier: Apache-2.0
#ifndef DFRC_VALIDATE_HPP
#define DFRC_VALIDATE_HPP

#include <string>
#include <vector>

#include "dfrc/hris_opt.hpp"
#include "dfrc/model.hpp"
#include "dfrc/orchestrator.hpp"

namespace dfrc {

struct CheckResult {
    std::string name;
    bool pass = true;
    double worst = 0.0;
    double tol = 0.0;
    std::string detail;
};

struct RandomInstance {
    Channels channels;
    Beamformer beamformer;
    VectorXd beta;
};

// Random unit-scale instance: CN(0,1) channels, unit-norm precoder columns,
// beta uniform on the box.
inline RandomInstance random_instance(ComplexGaussian& gen, Eigen::Index n, Eigen::Index t,
                                      Eigen::Index k) {
    RandomInstance inst;
    inst.channels.G.resize(n, t);
    for (Eigen::Index c = 0; c < t; ++c)
        for (Eigen::Index r = 0; r < n; ++r) inst.channels.G(r, c) = gen();
    inst.channels.H.resize(k, n);
    for (Eigen::Index c = 0; c < n; ++c)
        for (Eigen::Index r = 0; r < k; ++r) inst.channels.H(r, c) = gen();
    const auto random_vec = [&](Eigen::Index len) {
        VectorXcd v(len);
        for (Eigen::Index i = 0; i < len; ++i) v(i) = gen();
        return v;
    };
    inst.channels.a_t = random_vec(t);
    inst.channels.a_h = random_vec(n);
    inst.channels.a_r = random_vec(n);
    inst.beamformer.W_c.resize(t, k);
    for (Eigen::Index c = 0; c < k; ++c) {
        VectorXcd w = random_vec(t);
        inst.beamformer.W_c.col(c) = w / w.norm();
    }
    VectorXcd wr = random_vec(t);
    inst.beamformer.w_r = wr / wr.norm();
    inst.beta.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) inst.beta(i) = gen.uniform01();
    return inst;
}

inline double rel_diff(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

struct DimList {
    std::vector<Eigen::Index> n{1, 4, 16};
    std::vector<Eigen::Index> t{1, 2, 8};
    std::vector<Eigen::Index> k{1, 2};
};

// Proposition-1 equivalence: the precoder-parameterized SINRs and the
// beta-quadratic forms agree on random instances.
inline CheckResult check_prop1_equivalence(std::uint64_t seed, int cases, double tol = 1e-9,
                                           const DimList& dims = {}) {
    ComplexGaussian gen(seed);
    CheckResult res{"proposition1_equivalence", true, 0.0, tol, ""};
    for (int c = 0; c < cases; ++c) {
        const Eigen::Index n = dims.n[static_cast<std::size_t>(c) % dims.n.size()];
        const Eigen::Index t = dims.t[static_cast<std::size_t>(c / 3) % dims.t.size()];
        const Eigen::Index k = dims.k[static_cast<std::size_t>(c / 9) % dims.k.size()];
        const RandomInstance inst = random_instance(gen, n, t, k);
        const double sigma2 = 0.5 + gen.uniform01();
        const HrisConfig hris(inst.beta);
        const CovarianceSet covs = CovarianceSet::from_beamformer(inst.beamformer);
        const PropagationMatrices prop = build_propagation_matrices(inst.channels, inst.beamformer);
        const MatrixXcd h_e = cascaded_channel(inst.channels, hris);

        const VectorXd eta_c_w = sinr_comm_wform(inst.beamformer, h_e, sigma2);
        const VectorXd eta_c_b = sinr_comm_beta(inst.beta, prop, inst.channels, covs, sigma2);
        for (Eigen::Index u = 0; u < k; ++u)
            res.worst = std::max(res.worst, rel_diff(eta_c_w(u), eta_c_b(u)));

        const double eta_r_w = sinr_radar(inst.beamformer, inst.channels, hris, sigma2);
        const double eta_r_b = sinr_radar_beta(inst.beta, prop, inst.channels.a_r, sigma2);
        res.worst = std::max(res.worst, rel_diff(eta_r_w, eta_r_b));
    }
    res.pass = res.worst <= tol;
    return res;
}

// Appendix quadratic identities: beta^T C3 beta = h^H R_k h,
// beta^T C2 beta = a_hat^H W W^H a_hat, A_r = (1-beta)^T a_r.
inline CheckResult check_appendix_identities(std::uint64_t seed, int cases, double tol = 1e-10,
                                             bool corrupt_c2 = false) {
    ComplexGaussian gen(seed);
    CheckResult res{"appendix_quadratic_identities", true, 0.0, tol, ""};
    const DimList dims;
    for (int c = 0; c < cases; ++c) {
        const Eigen::Index n = dims.n[static_cast<std::size_t>(c) % dims.n.size()];
        const Eigen::Index t = dims.t[static_cast<std::size_t>(c / 3) % dims.t.size()];
        const Eigen::Index k = dims.k[static_cast<std::size_t>(c / 9) % dims.k.size()];
        const RandomInstance inst = random_instance(gen, n, t, k);
        const HrisConfig hris(inst.beta);
        PropagationMatrices prop = build_propagation_matrices(inst.channels, inst.beamformer);
        if (corrupt_c2) prop.C2 *= 1.01;
        const MatrixXcd h_e = cascaded_channel(inst.channels, hris);
        const CascadedRadar cr = cascaded_radar(inst.channels, hris);

        for (Eigen::Index u = 0; u < k; ++u) {
            const VectorXcd h = h_e.row(u).adjoint();
            const double lhs = real_quad_form(inst.beta, prop.C3[static_cast<std::size_t>(u)].real());
            const double rhs = std::norm((h.adjoint() * inst.beamformer.column(u))(0));
            res.worst = std::max(res.worst, std::abs(lhs - rhs));
        }
        const double lhs2 = real_quad_form(inst.beta, prop.C2.real());
        const double rhs2 = (cr.a_hat.adjoint() * inst.beamformer.W()).squaredNorm();
        res.worst = std::max(res.worst, std::abs(lhs2 - rhs2));

        const VectorXd one_minus = VectorXd::Ones(n) - inst.beta;
        const cxd a_r_direct = (one_minus.cast<cxd>().transpose() * inst.channels.a_r)(0);
        res.worst = std::max(res.worst, std::abs(a_r_direct - cr.A_r));
    }
    res.pass = res.worst <= tol;
    return res;
}

// Analytic penalty gradient against central finite differences.
inline CheckResult check_gradient_fd(std::uint64_t seed, int cases, double tol = 1e-5,
                                     double fd_step = 1e-6) {
    ComplexGaussian gen(seed);
    CheckResult res{"penalty_gradient_vs_fd", true, 0.0, tol, ""};
    for (int c = 0; c < cases; ++c) {
        const Eigen::Index n = 2 + static_cast<Eigen::Index>(gen.engine()() % 14);
        const Eigen::Index t = 1 + static_cast<Eigen::Index>(gen.engine()() % 4);
        const Eigen::Index k = 1 + static_cast<Eigen::Index>(gen.engine()() % 2);
        const RandomInstance inst = random_instance(gen, n, t, k);
        const PropagationMatrices prop = build_propagation_matrices(inst.channels, inst.beamformer);
        const PenaltyContext ctx = build_penalty_context(prop, inst.channels.a_r, 1.0);
        PenaltyParams pen;
        pen.lambda1 = 0.5 + 10.0 * gen.uniform01();
        pen.lambda2 = 0.1 + 2.0 * gen.uniform01();
        pen.gamma_c = 0.5 + gen.uniform01();

        const VectorXd g = penalty_gradient(inst.beta, ctx, pen);
        VectorXd fd(n);
        for (Eigen::Index i = 0; i < n; ++i) {
            VectorXd hi = inst.beta, lo = inst.beta;
            hi(i) += fd_step;
            lo(i) -= fd_step;
            fd(i) = (penalty_objective(hi, ctx, pen) - penalty_objective(lo, ctx, pen)) /
                    (2.0 * fd_step);
        }
        const double floor = 1e-6 * fd.cwiseAbs().maxCoeff() + 1e-30;
        for (Eigen::Index i = 0; i < n; ++i) {
            const double denom = std::max(std::abs(fd(i)), floor);
            res.worst = std::max(res.worst, std::abs(g(i) - fd(i)) / denom);
        }
    }
    res.pass = res.worst <= tol;
    return res;
}

// Closed-form SINRs against the link-level estimator on a given design.
inline CheckResult check_monte_carlo(const Channels& ch, const Beamformer& bf,
                                     const HrisConfig& hris, double sigma2,
                                     std::int64_t samples, std::uint64_t seed,
                                     double rel_tol = 0.02) {
    CheckResult res{"monte_carlo_consistency", true, 0.0, rel_tol, ""};
    const McEstimate mc = monte_carlo_sinr(ch, bf, hris, sigma2, samples, seed);
    const CovarianceSet covs = CovarianceSet::from_beamformer(bf);
    const MatrixXcd h_e = cascaded_channel(ch, hris);
    const VectorXd eta_c = sinr_comm(covs, h_e, sigma2);
    const double eta_r = sinr_radar(bf, ch, hris, sigma2);
    for (Eigen::Index k = 0; k < eta_c.size(); ++k)
        res.worst = std::max(res.worst, rel_diff(eta_c(k), mc.eta_c(k)));
    res.worst = std::max(res.worst, rel_diff(eta_r, mc.eta_r));
    res.pass = res.worst <= rel_tol;
    return res;
}

}  // namespace dfrc

#endif  // DFRC_VALIDATE_HPP
