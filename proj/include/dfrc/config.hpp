// SPDX-License-Identifier: Apache-2.0
#ifndef DFRC_CONFIG_HPP
#define DFRC_CONFIG_HPP

#include <fstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfrc/baselines.hpp"
#include "dfrc/scene.hpp"

namespace dfrc {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class SweepKind { kNone, kPower, kThreshold };

struct ExperimentConfig {
    // scene
    double wavelength = 0.1;
    int bs_antennas = 8;
    int hris_elements = 16;
    Vector3d bs_center{0.0, 0.0, 30.0};
    Vector3d hris_center{0.0, 10.0, 3.0};
    std::vector<Vector3d> users{Vector3d(7.5, 10.0, 0.0)};
    Vector3d target{0.0, 0.0, 0.0};
    int grid_rows = 1;
    int grid_cols = 1;
    double grid_spacing_wavelengths = 10.0;
    double noise_power_db = 0.0;
    double p_t_db = 0.0;
    ChannelModel channel_model = ChannelModel::kLosPhase;

    double gamma_c_db = 5.0;

    // optimizer knobs
    PenaltyParams penalty;  // gamma_c filled from gamma_c_db
    AgdParams agd;
    FgsParams fgs;
    BsOptions bs;
    GaParams ga;
    double epsilon = 1e-3;
    int max_outer = 20;

    SweepKind sweep = SweepKind::kNone;
    std::vector<double> sweep_power_db{0.0, 5.0, 10.0, 15.0};
    std::vector<double> sweep_gamma_c_db{-5.0, -3.0, -1.0, 1.0, 3.0, 5.0};
    double sweep_p_t_db = 15.0;

    std::vector<SystemKind> systems{SystemKind::kHris};
    std::uint64_t seed = 1;
    std::string output_dir = "out";
    bool measure_wall_time = false;
    std::int64_t mc_samples = 1000000;

    Scene scene() const {
        Scene s;
        s.bs = ArrayLayout::uniform_linear(bs_antennas, wavelength / 2.0, bs_center,
                                           Vector3d(0, 1, 0), wavelength);
        s.hris = ArrayLayout::square_planar(hris_elements, wavelength, hris_center,
                                            Vector3d(0, 1, 0), Vector3d(0, 0, 1), wavelength);
        s.users = users;
        s.grid_rows = grid_rows;
        s.grid_cols = grid_cols;
        s.detect_grid.clear();
        const double spacing = grid_spacing_wavelengths * wavelength;
        for (int p = 0; p < grid_rows; ++p)
            for (int q = 0; q < grid_cols; ++q)
                s.detect_grid.push_back(target + Vector3d((p - (grid_rows - 1) / 2.0) * spacing,
                                                          (q - (grid_cols - 1) / 2.0) * spacing,
                                                          0.0));
        s.target_cell = (grid_rows / 2) * grid_cols + grid_cols / 2;
        s.noise_power = db2lin(noise_power_db);
        s.per_antenna_power = db2lin(p_t_db);
        s.channel_model = channel_model;
        s.seed = seed;
        return s;
    }

    RunConfig run_config() const {
        RunConfig rc;
        rc.penalty = penalty;
        rc.penalty.gamma_c = db2lin(gamma_c_db);
        rc.agd = agd;
        rc.fgs = fgs;
        rc.bs = bs;
        rc.ga = ga;
        rc.epsilon = epsilon;
        rc.max_outer = max_outer;
        rc.seed = seed;
        return rc;
    }

    void validate() const {
        if (bs_antennas < 1) throw ConfigError("scene.bs.antennas: must be >= 1");
        if (hris_elements < 1) throw ConfigError("scene.hris.elements: must be >= 1");
        const auto side = static_cast<int>(std::llround(std::sqrt(double(hris_elements))));
        if (side * side != hris_elements)
            throw ConfigError("scene.hris.elements: must be a square number");
        if (users.empty()) throw ConfigError("scene.users: at least one user required");
        if (!(wavelength > 0.0)) throw ConfigError("scene.wavelength: must be positive");
        if (grid_rows < 1 || grid_cols < 1) throw ConfigError("scene.grid: rows/cols must be >= 1");
        if (!(db2lin(gamma_c_db) > 0.0)) throw ConfigError("gamma_c_db: invalid");
        if (epsilon <= 0.0) throw ConfigError("orchestrator.epsilon: must be positive");
        if (max_outer < 1) throw ConfigError("orchestrator.max_outer: must be >= 1");
        if (sweep == SweepKind::kPower && sweep_power_db.empty())
            throw ConfigError("sweep.power_db: empty sweep list");
        if (sweep == SweepKind::kThreshold && sweep_gamma_c_db.empty())
            throw ConfigError("sweep.gamma_c_db: empty sweep list");
        if (systems.empty()) throw ConfigError("systems: at least one system required");
        if (mc_samples < 1) throw ConfigError("mc_samples: must be >= 1");
        try {
            penalty_with_gamma().validate();
        } catch (const std::exception& e) {
            throw ConfigError(std::string("hris_opt: ") + e.what());
        }
    }

    PenaltyParams penalty_with_gamma() const {
        PenaltyParams p = penalty;
        p.gamma_c = db2lin(gamma_c_db);
        return p;
    }
};

namespace detail {

inline Vector3d parse_vec3(const nlohmann::json& j, const std::string& field) {
    if (!j.is_array() || j.size() != 3)
        throw ConfigError(field + ": expected [x, y, z]");
    return Vector3d(j[0].get<double>(), j[1].get<double>(), j[2].get<double>());
}

inline SystemKind parse_system(const std::string& name) {
    if (name == "hris") return SystemKind::kHris;
    if (name == "bs_only") return SystemKind::kBsOnly;
    if (name == "bs_ris") return SystemKind::kBsRis;
    if (name == "hris_ga") return SystemKind::kHrisGa;
    if (name == "hris_agd") return SystemKind::kHrisAgdNoFgs;
    throw ConfigError("systems: unknown system '" + name + "'");
}

}  // namespace detail

inline ExperimentConfig config_from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    try {
        if (j.contains("scene")) {
            const auto& s = j.at("scene");
            c.wavelength = s.value("wavelength", c.wavelength);
            if (s.contains("bs")) {
                c.bs_antennas = s.at("bs").value("antennas", c.bs_antennas);
                if (s.at("bs").contains("center"))
                    c.bs_center = detail::parse_vec3(s.at("bs").at("center"), "scene.bs.center");
            }
            if (s.contains("hris")) {
                c.hris_elements = s.at("hris").value("elements", c.hris_elements);
                if (s.at("hris").contains("center"))
                    c.hris_center = detail::parse_vec3(s.at("hris").at("center"), "scene.hris.center");
            }
            if (s.contains("users")) {
                c.users.clear();
                for (const auto& u : s.at("users"))
                    c.users.push_back(detail::parse_vec3(u, "scene.users[]"));
            }
            if (s.contains("target")) c.target = detail::parse_vec3(s.at("target"), "scene.target");
            if (s.contains("grid")) {
                c.grid_rows = s.at("grid").value("rows", c.grid_rows);
                c.grid_cols = s.at("grid").value("cols", c.grid_cols);
                c.grid_spacing_wavelengths =
                    s.at("grid").value("spacing_wavelengths", c.grid_spacing_wavelengths);
            }
            c.noise_power_db = s.value("noise_power_db", c.noise_power_db);
            c.p_t_db = s.value("per_antenna_power_db", c.p_t_db);
            const std::string model = s.value("channel_model", std::string("los_phase"));
            if (model == "los_phase")
                c.channel_model = ChannelModel::kLosPhase;
            else if (model == "rayleigh")
                c.channel_model = ChannelModel::kRayleigh;
            else
                throw ConfigError("scene.channel_model: expected 'los_phase' or 'rayleigh'");
        }
        c.gamma_c_db = j.value("gamma_c_db", c.gamma_c_db);
        if (j.contains("hris_opt")) {
            const auto& h = j.at("hris_opt");
            c.penalty.lambda1 = h.value("lambda1", c.penalty.lambda1);
            c.penalty.lambda2 = h.value("lambda2", c.penalty.lambda2);
            c.penalty.alpha1 = h.value("alpha1", c.penalty.alpha1);
            c.penalty.alpha2 = h.value("alpha2", c.penalty.alpha2);
            if (h.contains("agd")) {
                const auto& a = h.at("agd");
                c.agd.max_iters = a.value("max_iters", c.agd.max_iters);
                c.agd.learning_rate = a.value("learning_rate", c.agd.learning_rate);
                c.agd.beta1 = a.value("beta1", c.agd.beta1);
                c.agd.beta2 = a.value("beta2", c.agd.beta2);
                c.agd.eps = a.value("eps", c.agd.eps);
            }
            if (h.contains("fgs")) c.fgs.z_max = h.at("fgs").value("z_max", c.fgs.z_max);
        }
        if (j.contains("bs_opt")) {
            const auto& b = j.at("bs_opt");
            c.bs.delta_feas = b.value("delta_feas", c.bs.delta_feas);
            c.bs.tol_bisect = b.value("tol_bisect", c.bs.tol_bisect);
            if (b.contains("probe")) {
                c.bs.probe.eps_abs = c.bs.probe.eps_rel = b.at("probe").value("eps", c.bs.probe.eps_abs);
                c.bs.probe.max_iters = b.at("probe").value("max_iters", c.bs.probe.max_iters);
            }
            if (b.contains("final")) {
                c.bs.final_solve.eps_abs = c.bs.final_solve.eps_rel =
                    b.at("final").value("eps", c.bs.final_solve.eps_abs);
                c.bs.final_solve.max_iters =
                    b.at("final").value("max_iters", c.bs.final_solve.max_iters);
            }
        }
        if (j.contains("ga")) {
            const auto& g = j.at("ga");
            c.ga.population = g.value("population", c.ga.population);
            c.ga.generations = g.value("generations", c.ga.generations);
            c.ga.mutation_rate = g.value("mutation_rate", c.ga.mutation_rate);
            c.ga.mutation_sigma = g.value("mutation_sigma", c.ga.mutation_sigma);
            c.ga.tournament = g.value("tournament", c.ga.tournament);
            c.ga.blend_alpha = g.value("blend_alpha", c.ga.blend_alpha);
        }
        if (j.contains("orchestrator")) {
            c.epsilon = j.at("orchestrator").value("epsilon", c.epsilon);
            c.max_outer = j.at("orchestrator").value("max_outer", c.max_outer);
        }
        if (j.contains("sweep")) {
            const auto& s = j.at("sweep");
            const std::string kind = s.value("kind", std::string("none"));
            if (kind == "none")
                c.sweep = SweepKind::kNone;
            else if (kind == "power")
                c.sweep = SweepKind::kPower;
            else if (kind == "threshold")
                c.sweep = SweepKind::kThreshold;
            else
                throw ConfigError("sweep.kind: expected 'none', 'power' or 'threshold'");
            if (s.contains("power_db")) c.sweep_power_db = s.at("power_db").get<std::vector<double>>();
            if (s.contains("gamma_c_db"))
                c.sweep_gamma_c_db = s.at("gamma_c_db").get<std::vector<double>>();
            c.sweep_p_t_db = s.value("p_t_db", c.sweep_p_t_db);
        }
        if (j.contains("systems")) {
            c.systems.clear();
            for (const auto& s : j.at("systems"))
                c.systems.push_back(detail::parse_system(s.get<std::string>()));
        }
        c.seed = j.value("seed", c.seed);
        c.output_dir = j.value("output_dir", c.output_dir);
        c.measure_wall_time = j.value("measure_wall_time", c.measure_wall_time);
        c.mc_samples = j.value("mc_samples", c.mc_samples);
    } catch (const ConfigError&) {
        throw;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }
    c.validate();
    return c;
}

inline ExperimentConfig load_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    nlohmann::json j;
    try {
        in >> j;
    } catch (const std::exception& e) {
        throw ConfigError(std::string("invalid JSON in ") + path + ": " + e.what());
    }
    return config_from_json(j);
}

}  // namespace dfrc

#endif  // DFRC_CONFIG_HPP
