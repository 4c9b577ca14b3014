// SPDX-License-Identifier: Apache-2.0
#ifndef DFRC_REPORT_HPP
#define DFRC_REPORT_HPP

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "dfrc/baselines.hpp"
#include "dfrc/orchestrator.hpp"

namespace dfrc {

// Deterministic double formatting shared by every emitted CSV.
inline std::string fmt(double v) {
    if (std::isnan(v)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

inline void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << content;
}

// Per-outer-iteration run report.
inline std::string run_report_csv(const std::vector<IterationRecord>& history,
                                  Eigen::Index k_users) {
    std::ostringstream os;
    os << "iter,f";
    os << ",eta_r_db";
    for (Eigen::Index k = 1; k <= k_users; ++k) os << ",eta_c_db_user" << k;
    os << ",gamma_r_star_db,rank_ratios\n";
    for (const auto& rec : history) {
        os << rec.iter << ',' << fmt(rec.f_value) << ',' << fmt(lin2db(rec.report.eta_r));
        for (Eigen::Index k = 0; k < k_users; ++k)
            os << ',' << fmt(k < rec.report.eta_c.size() ? lin2db(rec.report.eta_c(k)) : kDbFloor);
        os << ',' << fmt(std::isnan(rec.gamma_r_star) ? rec.gamma_r_star : lin2db(rec.gamma_r_star));
        os << ',';
        for (Eigen::Index i = 0; i < rec.rank_ratios.size(); ++i) {
            if (i) os << ';';
            os << fmt(rec.rank_ratios(i));
        }
        os << '\n';
    }
    return os.str();
}

struct SweepRow {
    std::string system;
    double p_t_db = 0.0;
    double gamma_c_db = 0.0;
    double eta_r_db = 0.0;
    double min_eta_c_db = 0.0;
    bool converged = false;
    int outer_iters = 0;
    double wall_ms = 0.0;
};

inline std::string sweep_csv(const std::vector<SweepRow>& rows) {
    std::ostringstream os;
    os << "system,p_t_db,gamma_c_db,eta_r_db,min_eta_c_db,converged,outer_iters,wall_ms\n";
    for (const auto& r : rows) {
        os << r.system << ',' << fmt(r.p_t_db) << ',' << fmt(r.gamma_c_db) << ','
           << fmt(r.eta_r_db) << ',' << fmt(r.min_eta_c_db) << ',' << (r.converged ? 1 : 0) << ','
           << r.outer_iters << ',' << fmt(r.wall_ms) << '\n';
    }
    return os.str();
}

// Optional HRIS descent trace.
inline std::string trace_csv(const std::vector<double>& f_trace, const std::vector<double>& eta_r_db,
                             const std::vector<double>& min_eta_c_db) {
    std::ostringstream os;
    os << "iteration,f_value,eta_r_db,min_eta_c_db\n";
    for (std::size_t i = 0; i < f_trace.size(); ++i) {
        os << i << ',' << fmt(f_trace[i]) << ','
           << fmt(i < eta_r_db.size() ? eta_r_db[i] : kDbFloor) << ','
           << fmt(i < min_eta_c_db.size() ? min_eta_c_db[i] : kDbFloor) << '\n';
    }
    return os.str();
}

// Optional bisection trial dump.
inline std::string trials_csv(const std::vector<BisectTrial>& trials) {
    std::ostringstream os;
    os << "gamma_r_trial,status,margin,iterations\n";
    for (const auto& t : trials)
        os << fmt(t.gamma_r) << ',' << to_string(t.status) << ',' << fmt(t.margin) << ','
           << t.iterations << '\n';
    return os.str();
}

inline std::string pattern_csv(const std::vector<double>& phi_deg,
                               const std::vector<double>& theta_deg, const VectorXd& power_db) {
    std::ostringstream os;
    os << "angle_deg_phi,angle_deg_theta,power_db\n";
    for (Eigen::Index i = 0; i < power_db.size(); ++i)
        os << fmt(phi_deg[static_cast<std::size_t>(i)]) << ','
           << fmt(theta_deg[static_cast<std::size_t>(i)]) << ',' << fmt(power_db(i)) << '\n';
    return os.str();
}

// Final design (beta + beamformer) as JSON.
inline nlohmann::json design_to_json(const VectorXd& beta, const Beamformer& bf) {
    nlohmann::json j;
    j["beta"] = std::vector<double>(beta.data(), beta.data() + beta.size());
    const MatrixXcd w = bf.W();
    std::vector<std::vector<double>> re(static_cast<std::size_t>(w.rows())),
        im(static_cast<std::size_t>(w.rows()));
    for (Eigen::Index r = 0; r < w.rows(); ++r)
        for (Eigen::Index c = 0; c < w.cols(); ++c) {
            re[static_cast<std::size_t>(r)].push_back(std::real(w(r, c)));
            im[static_cast<std::size_t>(r)].push_back(std::imag(w(r, c)));
        }
    j["W_real"] = re;
    j["W_imag"] = im;
    j["num_users"] = w.cols() - 1;
    return j;
}

struct Design {
    VectorXd beta;
    Beamformer beamformer;
};

inline Design design_from_json(const nlohmann::json& j) {
    Design d;
    const auto beta = j.at("beta").get<std::vector<double>>();
    d.beta = Eigen::Map<const VectorXd>(beta.data(), static_cast<Eigen::Index>(beta.size()));
    const auto re = j.at("W_real").get<std::vector<std::vector<double>>>();
    const auto im = j.at("W_imag").get<std::vector<std::vector<double>>>();
    const auto rows = static_cast<Eigen::Index>(re.size());
    if (rows == 0) throw std::runtime_error("design file has an empty beamformer");
    const auto cols = static_cast<Eigen::Index>(re.front().size());
    const Eigen::Index k_users = j.at("num_users").get<Eigen::Index>();
    if (cols != k_users + 1) throw std::runtime_error("design file beamformer width mismatch");
    MatrixXcd w(rows, cols);
    for (Eigen::Index r = 0; r < rows; ++r)
        for (Eigen::Index c = 0; c < cols; ++c)
            w(r, c) = cxd(re[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)],
                          im[static_cast<std::size_t>(r)][static_cast<std::size_t>(c)]);
    d.beamformer.W_c = w.leftCols(k_users);
    d.beamformer.w_r = w.col(k_users);
    return d;
}

inline void save_design(const std::string& path, const VectorXd& beta, const Beamformer& bf) {
    write_text_file(path, design_to_json(beta, bf).dump(2) + "\n");
}

inline Design load_design(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open design file: " + path);
    nlohmann::json j;
    in >> j;
    return design_from_json(j);
}

}  // namespace dfrc

#endif  // DFRC_REPORT_HPP
