// SPDX-License-Identifier: Apache-2.0
#ifndef DFRC_ORCHESTRATOR_HPP
#define DFRC_ORCHESTRATOR_HPP

#include <cmath>
#include <vector>

#include "dfrc/bs_opt.hpp"
#include "dfrc/hris_opt.hpp"
#include "dfrc/model.hpp"
#include "dfrc/scene.hpp"

namespace dfrc {

enum class HrisMethod { kFgsAgd, kAgdRandomInit, kGa };

struct GaParams {
    int population = 100;
    int generations = 500;
    double mutation_rate = -1.0;  // <0 resolves to 1/N
    double mutation_sigma = 0.1;
    int tournament = 3;
    double blend_alpha = 0.5;
};

struct RunConfig {
    PenaltyParams penalty;  // gamma_c carried here, in linear units
    AgdParams agd;
    FgsParams fgs;
    BsOptions bs;
    GaParams ga;
    HrisMethod hris_method = HrisMethod::kFgsAgd;
    double epsilon = 1e-3;
    int max_outer = 20;
    std::uint64_t seed = 1;
};

struct IterationRecord {
    int iter = 0;
    double f_value = 0.0;
    SinrReport report;
    double gamma_r_star = 0.0;
    VectorXd rank_ratios;
    bool bs_feasible = true;
    VectorXd beta;
    Beamformer beamformer;
};

struct AlternatingState {
    Scene scene;
    Channels channels;
    RunConfig config;
    int iteration = 0;
    VectorXd beta;
    Beamformer beamformer;
    CovarianceSet covs;
    PropagationMatrices prop;
    double f_value = 0.0;
    double lambda1_scale = 1.0;
    std::vector<IterationRecord> history;
};

namespace detail {

inline PenaltyParams scaled_penalty(const RunConfig& cfg, double lambda1_scale) {
    PenaltyParams p = cfg.penalty;
    p.lambda1 *= lambda1_scale;
    return p;
}

inline double state_objective(const AlternatingState& st) {
    const PenaltyContext ctx =
        build_penalty_context(st.prop, st.channels.a_r, st.scene.noise_power);
    return penalty_objective(st.beta, ctx, scaled_penalty(st.config, st.lambda1_scale));
}

// Uniform real standard normal from the project's seeded generator.
inline double std_normal(ComplexGaussian& gen) { return gen().real() * std::sqrt(2.0); }

}  // namespace detail

// Real-coded genetic optimizer for the penalized HRIS objective: tournament
// selection, blend crossover, Gaussian mutation clipped to the box, one elite
// carried per generation.
inline VectorXd ga_optimize_hris(const PenaltyContext& ctx, const PenaltyParams& pen,
                                 const GaParams& ga, std::uint64_t seed) {
    if (ga.population < 1 || ga.generations < 0)
        throw std::invalid_argument("bad genetic algorithm parameters");
    const Eigen::Index n = ctx.size();
    const double rate = ga.mutation_rate < 0.0 ? 1.0 / static_cast<double>(n) : ga.mutation_rate;
    ComplexGaussian gen(seed);

    std::vector<VectorXd> pop(static_cast<std::size_t>(ga.population));
    std::vector<double> fit(pop.size());
    for (auto& ind : pop) {
        ind.resize(n);
        for (Eigen::Index l = 0; l < n; ++l) ind(l) = gen.uniform01();
    }
    for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = penalty_objective(pop[i], ctx, pen);

    const auto tournament_pick = [&]() -> std::size_t {
        std::size_t best = static_cast<std::size_t>(gen.engine()() % pop.size());
        for (int t = 1; t < ga.tournament; ++t) {
            const std::size_t cand = static_cast<std::size_t>(gen.engine()() % pop.size());
            if (fit[cand] < fit[best]) best = cand;
        }
        return best;
    };

    for (int g = 0; g < ga.generations; ++g) {
        std::size_t elite = 0;
        for (std::size_t i = 1; i < pop.size(); ++i)
            if (fit[i] < fit[elite]) elite = i;

        std::vector<VectorXd> next;
        next.reserve(pop.size());
        next.push_back(pop[elite]);
        while (next.size() < pop.size()) {
            const VectorXd& p1 = pop[tournament_pick()];
            const VectorXd& p2 = pop[tournament_pick()];
            VectorXd child(n);
            for (Eigen::Index l = 0; l < n; ++l) {
                const double lov = std::min(p1(l), p2(l));
                const double hiv = std::max(p1(l), p2(l));
                const double d = hiv - lov;
                child(l) = lov - ga.blend_alpha * d +
                           gen.uniform01() * (d + 2.0 * ga.blend_alpha * d);
                if (gen.uniform01() < rate) child(l) += ga.mutation_sigma * detail::std_normal(gen);
                child(l) = std::clamp(child(l), 0.0, 1.0);
            }
            next.push_back(std::move(child));
        }
        pop = std::move(next);
        for (std::size_t i = 0; i < pop.size(); ++i) fit[i] = penalty_objective(pop[i], ctx, pen);
    }

    std::size_t best = 0;
    for (std::size_t i = 1; i < pop.size(); ++i)
        if (fit[i] < fit[best]) best = i;
    return pop[best];
}

// Matched-direction equal-power starting beamformer: each column points at its
// geometric target and carries P_t T/(K+1); unit-modulus steering entries make
// the per-antenna power exact.
inline Beamformer initial_beamformer(const Scene& scene, const Channels& ch) {
    const Eigen::Index t = scene.num_bs_antennas();
    const Eigen::Index k_users = scene.num_users();
    const double col_power = scene.per_antenna_power * static_cast<double>(t) /
                             static_cast<double>(k_users + 1);
    Beamformer bf;
    bf.W_c.resize(t, k_users);
    for (Eigen::Index k = 0; k < k_users; ++k) {
        const VectorXcd dir = steering_vector(scene.bs, scene.users[static_cast<std::size_t>(k)]);
        bf.W_c.col(k) = std::sqrt(col_power) * dir / dir.norm();
    }
    bf.w_r = std::sqrt(col_power) * ch.a_t / ch.a_t.norm();
    return bf;
}

inline AlternatingState initialize(const Scene& scene, const Channels& channels,
                                   const RunConfig& config) {
    scene.validate();
    config.penalty.validate();
    if (!(config.epsilon > 0.0)) throw std::invalid_argument("stopping threshold must be positive");
    AlternatingState st;
    st.scene = scene;
    st.channels = channels;
    st.config = config;
    st.beta = VectorXd::Zero(scene.num_hris_elements());
    st.beamformer = initial_beamformer(scene, channels);
    st.covs = CovarianceSet::from_beamformer(st.beamformer);
    st.prop = build_propagation_matrices(channels, st.beamformer);
    st.f_value = detail::state_objective(st);
    return st;
}

inline AlternatingState initialize(const Scene& scene, const RunConfig& config) {
    return initialize(scene, build_channels(scene), config);
}

// One outer iteration: HRIS half-step at fixed W, cascaded refresh, BS
// half-step at fixed beta, propagation-matrix update, report.
inline void step(AlternatingState& st) {
    const double sigma2 = st.scene.noise_power;
    const PenaltyParams pen = detail::scaled_penalty(st.config, st.lambda1_scale);
    const PenaltyContext ctx = build_penalty_context(st.prop, st.channels.a_r, sigma2);

    switch (st.config.hris_method) {
        case HrisMethod::kFgsAgd:
            st.beta = optimize_hris(ctx, st.config.fgs, st.config.agd, pen).beta;
            break;
        case HrisMethod::kAgdRandomInit: {
            ComplexGaussian gen(st.config.seed + static_cast<std::uint64_t>(st.iteration));
            VectorXd b0(ctx.size());
            for (Eigen::Index l = 0; l < b0.size(); ++l) b0(l) = gen.uniform01();
            st.beta = agd_descend(b0, ctx, st.config.agd, pen).beta;
            break;
        }
        case HrisMethod::kGa:
            st.beta = ga_optimize_hris(ctx, pen, st.config.ga,
                                       st.config.seed + static_cast<std::uint64_t>(st.iteration));
            break;
    }

    const HrisConfig hris(st.beta);
    const CascadedRadar cr = cascaded_radar(st.channels, hris);
    const MatrixXcd h_e = cascaded_channel(st.channels, hris);

    FeasibilityProblem fp;
    fp.a_t = st.channels.a_t;
    fp.a_bar_h = cr.a_hat;
    fp.a_bar_r = cr.A_r;
    fp.gamma_c = st.config.penalty.gamma_c;
    fp.sigma2 = sigma2;
    fp.p_t = st.scene.per_antenna_power;
    fp.h_hat.reserve(static_cast<std::size_t>(h_e.rows()));
    for (Eigen::Index k = 0; k < h_e.rows(); ++k) fp.h_hat.push_back(h_e.row(k).adjoint());

    IterationRecord rec;
    rec.iter = st.iteration + 1;
    const sdp::AdmmConicSolver solver(st.config.bs.probe);
    try {
        BsDesign design = solve_bs(fp, st.config.bs, solver);
        st.beamformer = design.beamformer;
        rec.gamma_r_star = design.gamma_r_star;
        rec.rank_ratios = design.rank_ratios;
        rec.bs_feasible = true;
    } catch (const CommInfeasibleError&) {
        // keep the previous beamformer and push beta toward comm feasibility
        st.lambda1_scale *= 10.0;
        rec.gamma_r_star = std::numeric_limits<double>::quiet_NaN();
        rec.rank_ratios = VectorXd();
        rec.bs_feasible = false;
    }

    st.covs = CovarianceSet::from_beamformer(st.beamformer);
    st.prop = build_propagation_matrices(st.channels, st.beamformer);
    st.f_value = detail::state_objective(st);

    rec.f_value = st.f_value;
    rec.report.eta_r = sinr_radar(st.beamformer, st.channels, hris, sigma2);
    rec.report.eta_c = sinr_comm(st.covs, h_e, sigma2);
    rec.report.gamma_c = st.config.penalty.gamma_c;
    rec.report.comm_feasible =
        rec.report.eta_c.size() == 0 ||
        rec.report.min_eta_c() >= st.config.penalty.gamma_c * (1.0 - 1e-3);
    rec.beta = st.beta;
    rec.beamformer = st.beamformer;
    st.history.push_back(std::move(rec));
    ++st.iteration;
}

struct RunResult {
    Beamformer beamformer;
    VectorXd beta;
    std::vector<IterationRecord> history;
    bool converged = false;
    int outer_iters = 0;
};

inline RunResult run(const Scene& scene, const Channels& channels, const RunConfig& config) {
    AlternatingState st = initialize(scene, channels, config);
    bool converged = false;
    while (st.iteration < config.max_outer) {
        const double prev_f = st.f_value;
        step(st);
        if (std::abs(st.f_value - prev_f) < config.epsilon) {
            converged = true;
            break;
        }
    }

    RunResult out;
    out.converged = converged;
    out.outer_iters = st.iteration;
    out.history = std::move(st.history);
    if (converged || out.history.empty()) {
        out.beamformer = st.beamformer;
        out.beta = st.beta;
    } else {
        // best comm-feasible iterate by radar SINR; last one if none feasible
        const IterationRecord* best = &out.history.back();
        for (const auto& rec : out.history)
            if (rec.report.comm_feasible &&
                (!best->report.comm_feasible || rec.report.eta_r > best->report.eta_r))
                best = &rec;
        out.beamformer = best->beamformer;
        out.beta = best->beta;
    }
    return out;
}

inline RunResult run(const Scene& scene, const RunConfig& config) {
    return run(scene, build_channels(scene), config);
}

}  // namespace dfrc

#endif  // DFRC_ORCHESTRATOR_HPP
