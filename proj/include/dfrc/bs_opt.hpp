// SPDX-License-Identifier: Apache-2.0
#ifndef DFRC_BS_OPT_HPP
#define DFRC_BS_OPT_HPP

#include <optional>
#include <string>
#include <vector>

#include "dfrc/model.hpp"
#include "dfrc/optim.hpp"
#include "dfrc/sdp.hpp"

namespace dfrc {

// One transmit-covariance feasibility instance at a trial radar SINR.
// a_bar_h/a_bar_r parameterize the radar return path: eta_r =
// |a_bar_r|^2 a_t^H R_{K+1} a_t / (|a_bar_r|^2 a_bar_h^H R a_bar_h + sigma2).
// A zero a_bar_h models systems with no reflective interference path.
struct FeasibilityProblem {
    VectorXcd a_t;
    VectorXcd a_bar_h;
    cxd a_bar_r = 1.0;
    std::vector<VectorXcd> h_hat;  // cascaded user channels, h_hat_k
    double gamma_r = 0.0;
    double gamma_c = 1.0;
    double sigma2 = 1.0;
    double p_t = 1.0;

    Eigen::Index num_antennas() const { return a_t.size(); }
    Eigen::Index num_users() const { return static_cast<Eigen::Index>(h_hat.size()); }

    void validate() const {
        if (a_t.size() < 1) throw std::invalid_argument("feasibility problem needs antennas");
        if (gamma_r < 0.0) throw std::invalid_argument("trial radar SINR must be nonnegative");
        if (!(gamma_c > 0.0)) throw std::invalid_argument("comm threshold must be positive");
        if (!(sigma2 > 0.0) || !(p_t > 0.0))
            throw std::invalid_argument("noise and power must be positive");
        for (const auto& h : h_hat)
            if (h.size() != a_t.size()) throw std::invalid_argument("cascaded channel length mismatch");
        if (a_bar_h.size() != 0 && a_bar_h.size() != a_t.size())
            throw std::invalid_argument("cascaded reflect vector length mismatch");
    }
};

enum class FeasibilityStatus { kFeasible, kInfeasible, kNumericalFailure };

inline const char* to_string(FeasibilityStatus s) {
    switch (s) {
        case FeasibilityStatus::kFeasible: return "feasible";
        case FeasibilityStatus::kInfeasible: return "infeasible";
        default: return "numerical_failure";
    }
}

struct FeasibilityResult {
    FeasibilityStatus status = FeasibilityStatus::kInfeasible;
    std::optional<CovarianceSet> covs;
    double margin = 0.0;    // max-min constraint slack
    double residual = 0.0;  // ||Ax-b||_inf of the returned point
    int iterations = 0;
};

struct BsOptions {
    double delta_feas = 1e-7;
    double tol_bisect = 1e-3;  // linear SINR units
    sdp::SolverOptions probe;  // feasibility classification solves
    sdp::SolverOptions final_solve;  // extraction solve

    BsOptions() {
        probe.eps_abs = probe.eps_rel = 1e-9;
        probe.max_iters = 60000;
        final_solve.eps_abs = final_solve.eps_rel = 2e-11;
        final_solve.max_iters = 400000;
        final_solve.check_every = 50;
    }
};

// Thrown by bisect_gamma_r when the comm constraints alone are unsatisfiable.
struct CommInfeasibleError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

namespace detail {

// Assembles the conic program shared by the margin and extraction solves.
// Variables: K+1 Hermitian blocks, one nonneg slack per inequality row, plus
// the free margin variable in margin mode.
inline sdp::ConicProblem build_conic(const FeasibilityProblem& fp, bool margin_mode,
                                     double extraction_gamma_r = 0.0) {
    const Eigen::Index t = fp.num_antennas();
    const Eigen::Index k_users = fp.num_users();
    const Eigen::Index n_blocks = k_users + 1;
    const double ar2 = std::norm(fp.a_bar_r);
    const bool radar_row = margin_mode && fp.gamma_r > 0.0;

    sdp::ConicProblem p;
    p.psd_dims.assign(static_cast<std::size_t>(n_blocks), t);
    p.n_nonneg = (radar_row ? 1 : 0) + k_users;
    p.n_free = margin_mode ? 1 : 0;

    const Eigen::Index nv = p.num_vars();
    const Eigen::Index rows = t + (radar_row ? 1 : 0) + k_users;
    p.A = MatrixXd::Zero(rows, nv);
    p.b = VectorXd::Zero(rows);
    p.c = VectorXd::Zero(nv);

    const Eigen::Index slack0 = p.nonneg_offset();
    const Eigen::Index margin_idx = p.free_offset();

    // per-antenna power: sum_i [R_i]_jj = P_t  (diag entries lead each svec)
    for (Eigen::Index j = 0; j < t; ++j) {
        for (Eigen::Index i = 0; i < n_blocks; ++i)
            p.A(j, p.psd_offset(static_cast<std::size_t>(i)) + j) = 1.0;
        p.b(j) = fp.p_t;
    }

    Eigen::Index row = t;
    Eigen::Index slack = slack0;

    const MatrixXcd interf =
        fp.a_bar_h.size() ? MatrixXcd(fp.a_bar_h * fp.a_bar_h.adjoint()) : MatrixXcd::Zero(t, t);

    if (radar_row) {
        const MatrixXcd num = fp.a_t * fp.a_t.adjoint() / fp.gamma_r;
        for (Eigen::Index i = 0; i < n_blocks; ++i) {
            const MatrixXcd coeff = (i == n_blocks - 1) ? MatrixXcd(num - interf) : MatrixXcd(-interf);
            p.A.row(row).segment(p.psd_offset(static_cast<std::size_t>(i)), sdp::svec_size(t)) =
                sdp::svec(coeff).transpose();
        }
        p.A(row, slack) = -1.0;
        if (margin_mode) p.A(row, margin_idx) = -1.0;
        p.b(row) = fp.sigma2 / ar2;
        ++row;
        ++slack;
    }

    for (Eigen::Index k = 0; k < k_users; ++k) {
        const MatrixXcd hh = fp.h_hat[static_cast<std::size_t>(k)] *
                             fp.h_hat[static_cast<std::size_t>(k)].adjoint();
        for (Eigen::Index i = 0; i < n_blocks; ++i) {
            const MatrixXcd coeff = (i == k) ? MatrixXcd(hh / fp.gamma_c) : MatrixXcd(-hh);
            p.A.row(row).segment(p.psd_offset(static_cast<std::size_t>(i)), sdp::svec_size(t)) =
                sdp::svec(coeff).transpose();
        }
        p.A(row, slack) = -1.0;
        if (margin_mode) p.A(row, margin_idx) = -1.0;
        p.b(row) = fp.sigma2;
        ++row;
        ++slack;
    }

    if (margin_mode) {
        p.c(margin_idx) = -1.0;  // maximize the margin
    } else {
        // maximize g_r a_t^H R_{K+1} a_t - sum_i a_bar_h^H R_i a_bar_h
        const double g_r = 1.0 / std::max(extraction_gamma_r, 1e-12);
        const MatrixXcd num = fp.a_t * fp.a_t.adjoint() * g_r;
        for (Eigen::Index i = 0; i < n_blocks; ++i) {
            const MatrixXcd coeff = (i == n_blocks - 1) ? MatrixXcd(interf - num) : interf;
            p.c.segment(p.psd_offset(static_cast<std::size_t>(i)), sdp::svec_size(t)) =
                sdp::svec(coeff);
        }
        const double norm = p.c.norm();
        if (norm > 0.0) p.c /= norm;
    }
    return p;
}

inline CovarianceSet covariances_from_solution(const sdp::ConicProblem& p,
                                               const sdp::ConicSolution& sol) {
    std::vector<MatrixXcd> blocks;
    blocks.reserve(p.psd_dims.size());
    for (std::size_t i = 0; i < p.psd_dims.size(); ++i) blocks.push_back(sol.block(p, i));
    return CovarianceSet::from_blocks(std::move(blocks));
}

}  // namespace detail

// Decides whether PSD blocks meeting the per-antenna power and the
// rearranged SINR inequalities exist at the trial gamma_r, via the max-margin
// program: feasible iff the optimal common slack is >= -delta_feas.
inline FeasibilityResult check_feasibility(const FeasibilityProblem& fp, const BsOptions& opts,
                                           const sdp::ConicSolver& solver,
                                           sdp::WarmStart* warm = nullptr) {
    fp.validate();
    FeasibilityResult out;
    if (fp.gamma_r > 0.0 && std::norm(fp.a_bar_r) <= 1e-300) {
        out.status = FeasibilityStatus::kInfeasible;  // no receive path at all
        return out;
    }
    if (fp.gamma_r == 0.0 && fp.num_users() == 0) {
        // no inequality rows; equal-power blocks witness feasibility
        const Eigen::Index t = fp.num_antennas();
        out.status = FeasibilityStatus::kFeasible;
        out.covs = CovarianceSet::from_blocks({MatrixXcd(fp.p_t * MatrixXcd::Identity(t, t))});
        return out;
    }
    const sdp::ConicProblem p = detail::build_conic(fp, /*margin_mode=*/true);
    const sdp::ConicSolution sol = solver.solve(p, warm);
    out.iterations = sol.iterations;
    out.residual = sol.constraint_residual;
    out.margin = sol.x(p.free_offset());
    if (!sol.converged) {
        out.status = FeasibilityStatus::kNumericalFailure;
        return out;
    }
    if (out.margin >= -opts.delta_feas) {
        out.status = FeasibilityStatus::kFeasible;
        out.covs = detail::covariances_from_solution(p, sol);
    } else {
        out.status = FeasibilityStatus::kInfeasible;
    }
    return out;
}

struct BisectTrial {
    double gamma_r = 0.0;
    FeasibilityStatus status = FeasibilityStatus::kInfeasible;
    double margin = 0.0;
    int iterations = 0;
};

struct BisectResult {
    double gamma_r_star = 0.0;
    CovarianceSet covs;
    std::vector<BisectTrial> trials;
};

// Loose but valid upper bracket: twice the interference-free coherent ceiling.
inline double radar_ceiling(const FeasibilityProblem& fp) {
    const double at2 = fp.a_t.squaredNorm();
    return std::norm(fp.a_bar_r) * fp.p_t * static_cast<double>(fp.num_antennas()) * at2 /
           fp.sigma2;
}

// Bisection over the trial radar SINR. Requires the comm constraints feasible
// on their own (gamma_r = 0); throws CommInfeasibleError otherwise. The
// returned covariances come from a final linear-objective solve at the last
// feasible trial, which lands on the (generically rank-one) optimal face
// rather than the interior max-margin point.
inline BisectResult bisect_gamma_r(FeasibilityProblem fp, const BsOptions& opts,
                                   const sdp::ConicSolver& solver, double lo = 0.0,
                                   double hi = -1.0) {
    BisectResult out;
    sdp::WarmStart warm;

    fp.gamma_r = lo;
    FeasibilityResult base = check_feasibility(fp, opts, solver, &warm);
    out.trials.push_back({lo, base.status, base.margin, base.iterations});
    if (base.status != FeasibilityStatus::kFeasible)
        throw CommInfeasibleError("comm constraints unsatisfiable at the current HRIS configuration");
    CovarianceSet last_feasible = *base.covs;

    if (hi < 0.0) hi = 2.0 * radar_ceiling(fp);
    int feasible_hi_guard = 0;
    while (hi > lo) {
        fp.gamma_r = hi;
        FeasibilityResult r = check_feasibility(fp, opts, solver, &warm);
        out.trials.push_back({hi, r.status, r.margin, r.iterations});
        if (r.status != FeasibilityStatus::kFeasible) break;
        last_feasible = *r.covs;
        lo = hi;
        hi *= 2.0;
        if (++feasible_hi_guard > 60) break;  // bracket blew past any physical value
    }

    while (hi - lo > opts.tol_bisect) {
        const double mid = 0.5 * (lo + hi);
        fp.gamma_r = mid;
        FeasibilityResult r = check_feasibility(fp, opts, solver, &warm);
        out.trials.push_back({mid, r.status, r.margin, r.iterations});
        if (r.status == FeasibilityStatus::kFeasible) {
            last_feasible = *r.covs;
            lo = mid;
        } else {
            hi = mid;
        }
    }

    out.gamma_r_star = lo;
    out.covs = std::move(last_feasible);

    // extraction solve at the settled gamma_r
    fp.gamma_r = lo;
    sdp::ConicProblem p = detail::build_conic(fp, /*margin_mode=*/false, lo);
    sdp::AdmmConicSolver final_solver(opts.final_solve);
    sdp::ConicSolution sol = final_solver.solve(p, nullptr);
    if (sol.converged) {
        CovarianceSet cand = detail::covariances_from_solution(p, sol);
        // accept only if it actually meets the constraints it was solved for
        bool ok = true;
        for (Eigen::Index k = 0; k < fp.num_users(); ++k) {
            const VectorXcd& h = fp.h_hat[static_cast<std::size_t>(k)];
            const double sig = std::real((h.adjoint() * cand.R_i[static_cast<std::size_t>(k)] * h)(0));
            const double tot = std::real((h.adjoint() * cand.R * h)(0));
            if (sig / fp.gamma_c < tot - sig + fp.sigma2 - 1e-6 * fp.sigma2) ok = false;
        }
        if (ok) out.covs = std::move(cand);
    }
    return out;
}

// Closed-form beam recovery:
//   w_k = (h_k^H R_k h_k)^(-1/2) R_k h_k
//   w_r = (a_t^H (R - sum_k R_k) a_t)^(-1/2) (R - sum_k R_k) a_t
inline Beamformer extract_beamformers(const CovarianceSet& covs,
                                      const std::vector<VectorXcd>& h_hat, const VectorXcd& a_t) {
    const Eigen::Index k_users = static_cast<Eigen::Index>(h_hat.size());
    if (covs.num_users() != k_users)
        throw std::invalid_argument("covariance block count does not match the user count");
    const Eigen::Index t = a_t.size();

    Beamformer bf;
    bf.W_c.resize(t, k_users);
    MatrixXcd r_radar = covs.R;
    for (Eigen::Index k = 0; k < k_users; ++k) {
        const auto& rk = covs.R_i[static_cast<std::size_t>(k)];
        const VectorXcd& h = h_hat[static_cast<std::size_t>(k)];
        const double qf = std::real((h.adjoint() * rk * h)(0));
        if (!(qf > 0.0))
            throw std::runtime_error("degenerate covariance: no power on user " + std::to_string(k));
        bf.W_c.col(k) = (rk * h) / std::sqrt(qf);
        r_radar -= rk;
    }
    const double qf_r = std::real((a_t.adjoint() * r_radar * a_t)(0));
    if (!(qf_r > 0.0)) throw std::runtime_error("degenerate covariance: no power on the target");
    bf.w_r = (r_radar * a_t) / std::sqrt(qf_r);
    return bf;
}

// Restores exact per-antenna power by rescaling the radar beam magnitudes
// (phases kept). The comm beams are untouched, so their SINR numerators are
// preserved; the perturbation is bounded by the rank-one defect of the
// radar covariance block.
inline Beamformer power_polish(Beamformer bf, double p_t) {
    for (Eigen::Index j = 0; j < bf.num_antennas(); ++j) {
        const double comm = bf.W_c.cols() ? bf.W_c.row(j).squaredNorm() : 0.0;
        const double target = std::max(p_t - comm, 0.0);
        const double phase = bf.w_r(j) == cxd(0, 0) ? 0.0 : std::arg(bf.w_r(j));
        bf.w_r(j) = std::polar(std::sqrt(target), phase);
    }
    return bf;
}

// Largest-eigenvalue share of each covariance block; 1 means exactly rank one.
inline VectorXd rank_one_diagnostic(const CovarianceSet& covs) {
    VectorXd ratios(static_cast<Eigen::Index>(covs.R_i.size()));
    for (std::size_t i = 0; i < covs.R_i.size(); ++i) {
        const double tr = std::real(covs.R_i[i].trace());
        if (tr <= 1e-300) {
            ratios(static_cast<Eigen::Index>(i)) = 1.0;
            continue;
        }
        Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(covs.R_i[i], Eigen::EigenvaluesOnly);
        ratios(static_cast<Eigen::Index>(i)) = eig.eigenvalues().maxCoeff() / tr;
    }
    return ratios;
}

struct BsDesign {
    Beamformer beamformer;
    CovarianceSet covs;
    double gamma_r_star = 0.0;
    VectorXd rank_ratios;
    std::vector<BisectTrial> trials;
};

// Full BS half-step: bisect, extract, polish.
inline BsDesign solve_bs(const FeasibilityProblem& base, const BsOptions& opts,
                         const sdp::ConicSolver& solver) {
    BisectResult bisect = bisect_gamma_r(base, opts, solver);

    BsDesign out;
    out.gamma_r_star = bisect.gamma_r_star;
    out.rank_ratios = rank_one_diagnostic(bisect.covs);
    out.trials = std::move(bisect.trials);

    MatrixXcd r_radar = bisect.covs.R;
    for (Eigen::Index k = 0; k < base.num_users(); ++k)
        r_radar -= bisect.covs.R_i[static_cast<std::size_t>(k)];
    const double qf_r = std::real((base.a_t.adjoint() * r_radar * base.a_t)(0));
    const double scale = base.p_t * static_cast<double>(base.num_antennas());

    Beamformer bf;
    if (qf_r > 1e-12 * scale) {
        bf = extract_beamformers(bisect.covs, base.h_hat, base.a_t);
    } else {
        // radar-dead design: comm beams per the closed form, radar beam takes
        // whatever per-antenna power remains
        bf.W_c.resize(base.num_antennas(), base.num_users());
        for (Eigen::Index k = 0; k < base.num_users(); ++k) {
            const auto& rk = bisect.covs.R_i[static_cast<std::size_t>(k)];
            const VectorXcd& h = base.h_hat[static_cast<std::size_t>(k)];
            const double qf = std::real((h.adjoint() * rk * h)(0));
            if (!(qf > 0.0))
                throw std::runtime_error("degenerate covariance: no power on user " + std::to_string(k));
            bf.W_c.col(k) = (rk * h) / std::sqrt(qf);
        }
        bf.w_r = VectorXcd::Zero(base.num_antennas());
    }
    out.beamformer = power_polish(std::move(bf), base.p_t);
    out.covs = std::move(bisect.covs);
    return out;
}

}  // namespace dfrc

#endif  // DFRC_BS_OPT_HPP
