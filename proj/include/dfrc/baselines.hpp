// SPDX-License-Identifier: Apache-2.0
#ifndef DFRC_BASELINES_HPP
#define DFRC_BASELINES_HPP

#include <vector>

#include "dfrc/orchestrator.hpp"

namespace dfrc {

enum class SystemKind { kHris, kBsOnly, kBsRis, kHrisGa, kHrisAgdNoFgs };

inline const char* to_string(SystemKind k) {
    switch (k) {
        case SystemKind::kHris: return "hris";
        case SystemKind::kBsOnly: return "bs_only";
        case SystemKind::kBsRis: return "bs_ris";
        case SystemKind::kHrisGa: return "hris_ga";
        default: return "hris_agd";
    }
}

struct SystemResult {
    SystemKind system = SystemKind::kHris;
    bool feasible = false;
    bool converged = false;
    int outer_iters = 0;
    Beamformer beamformer;
    VectorXd beta;  // empty when the system has no surface
    SinrReport report;
    double gamma_r_star = 0.0;
    VectorXd rank_ratios;
};

// BS-only DFRC: the array senses through the direct two-way path (matched
// receive combining, gain ||a_t||^2, no reflective interference) and serves
// users over direct line-of-sight steering channels.
inline SystemResult solve_bs_only(const Scene& scene, const RunConfig& config) {
    scene.validate();
    const VectorXcd a_t = steering_vector(scene.bs, scene.target());
    FeasibilityProblem fp;
    fp.a_t = a_t;
    fp.a_bar_h = VectorXcd();  // no interference path
    fp.a_bar_r = a_t.norm();   // two-way amplitude gain
    fp.gamma_c = config.penalty.gamma_c;
    fp.sigma2 = scene.noise_power;
    fp.p_t = scene.per_antenna_power;
    for (const auto& user : scene.users) fp.h_hat.push_back(steering_vector(scene.bs, user));

    SystemResult out;
    out.system = SystemKind::kBsOnly;
    const sdp::AdmmConicSolver solver(config.bs.probe);
    try {
        BsDesign design = solve_bs(fp, config.bs, solver);
        out.beamformer = design.beamformer;
        out.gamma_r_star = design.gamma_r_star;
        out.rank_ratios = design.rank_ratios;
        out.feasible = out.converged = true;
        out.outer_iters = 1;

        const double at2 = a_t.squaredNorm();
        out.report.eta_r =
            at2 * std::norm((a_t.adjoint() * out.beamformer.w_r)(0)) / scene.noise_power;
        MatrixXcd h_e(scene.num_users(), scene.num_bs_antennas());
        for (Eigen::Index k = 0; k < scene.num_users(); ++k)
            h_e.row(k) = fp.h_hat[static_cast<std::size_t>(k)].adjoint();
        out.report.eta_c = sinr_comm_wform(out.beamformer, h_e, scene.noise_power);
        out.report.gamma_c = config.penalty.gamma_c;
        out.report.comm_feasible =
            out.report.min_eta_c() >= config.penalty.gamma_c * (1.0 - 1e-3);
    } catch (const CommInfeasibleError&) {
        out.feasible = false;
    }
    return out;
}

// BS-RIS DFRC: the surface reflects everything (beta = 1), sensing happens at
// an ideal single-element receiver beside the surface.
inline SystemResult solve_bs_ris(const Scene& scene, const Channels& channels,
                                 const RunConfig& config) {
    scene.validate();
    const Eigen::Index n = scene.num_hris_elements();
    const HrisConfig ris(VectorXd::Ones(n));
    const CascadedRadar cr = cascaded_radar(channels, ris);
    const MatrixXcd h_e = cascaded_channel(channels, ris);

    // side receiver: one ideal element at the surface center
    const double k_wave = 2.0 * kPi / scene.hris.wavelength;
    const double dist = (scene.hris.centroid() - scene.target()).norm();
    const cxd a_side = std::polar(1.0, -k_wave * dist);

    FeasibilityProblem fp;
    fp.a_t = channels.a_t;
    fp.a_bar_h = cr.a_hat;
    fp.a_bar_r = a_side;
    fp.gamma_c = config.penalty.gamma_c;
    fp.sigma2 = scene.noise_power;
    fp.p_t = scene.per_antenna_power;
    for (Eigen::Index k = 0; k < h_e.rows(); ++k) fp.h_hat.push_back(h_e.row(k).adjoint());

    SystemResult out;
    out.system = SystemKind::kBsRis;
    out.beta = ris.beta;
    const sdp::AdmmConicSolver solver(config.bs.probe);
    try {
        BsDesign design = solve_bs(fp, config.bs, solver);
        out.beamformer = design.beamformer;
        out.gamma_r_star = design.gamma_r_star;
        out.rank_ratios = design.rank_ratios;
        out.feasible = out.converged = true;
        out.outer_iters = 1;

        const double a2 = std::norm(a_side);
        const double num = a2 * std::norm((channels.a_t.adjoint() * out.beamformer.w_r)(0));
        const double interf = a2 * (cr.a_hat.adjoint() * out.beamformer.W()).squaredNorm();
        out.report.eta_r = num / (interf + scene.noise_power);
        out.report.eta_c = sinr_comm_wform(out.beamformer, h_e, scene.noise_power);
        out.report.gamma_c = config.penalty.gamma_c;
        out.report.comm_feasible =
            out.report.min_eta_c() >= config.penalty.gamma_c * (1.0 - 1e-3);
    } catch (const CommInfeasibleError&) {
        out.feasible = false;
    }
    return out;
}

// Full-system entry point shared by the CLI runners.
inline SystemResult run_system(SystemKind kind, const Scene& scene, const Channels& channels,
                               RunConfig config) {
    SystemResult out;
    switch (kind) {
        case SystemKind::kBsOnly:
            return solve_bs_only(scene, config);
        case SystemKind::kBsRis:
            return solve_bs_ris(scene, channels, config);
        case SystemKind::kHrisGa:
            config.hris_method = HrisMethod::kGa;
            break;
        case SystemKind::kHrisAgdNoFgs:
            config.hris_method = HrisMethod::kAgdRandomInit;
            break;
        case SystemKind::kHris:
            config.hris_method = HrisMethod::kFgsAgd;
            break;
    }
    RunResult run_res = run(scene, channels, config);
    out.system = kind;
    out.converged = run_res.converged;
    out.outer_iters = run_res.outer_iters;
    out.beamformer = run_res.beamformer;
    out.beta = run_res.beta;
    if (!run_res.history.empty()) {
        const HrisConfig hris(out.beta);
        out.report.eta_r = sinr_radar(out.beamformer, channels, hris, scene.noise_power);
        out.report.eta_c = sinr_comm(CovarianceSet::from_beamformer(out.beamformer),
                                     cascaded_channel(channels, hris), scene.noise_power);
        out.report.gamma_c = config.penalty.gamma_c;
        out.report.comm_feasible =
            out.report.min_eta_c() >= config.penalty.gamma_c * (1.0 - 1e-3);
        out.feasible = out.report.comm_feasible;
        for (auto it = run_res.history.rbegin(); it != run_res.history.rend(); ++it)
            if (it->bs_feasible) {
                out.gamma_r_star = it->gamma_r_star;
                out.rank_ratios = it->rank_ratios;
                break;
            }
    }
    return out;
}

}  // namespace dfrc

#endif  // DFRC_BASELINES_HPP
