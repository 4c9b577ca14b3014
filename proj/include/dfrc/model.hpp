// SPDX-License-Identifier: Apache-2.0
#ifndef DFRC_MODEL_HPP
#define DFRC_MODEL_HPP

#include <cstdint>
#include <vector>

#include "dfrc/common.hpp"
#include "dfrc/scene.hpp"

namespace dfrc {

// HRIS per-element configuration: beta_l of the incident signal amplitude is
// reflected, (1-beta_l) is routed to the RF chain. Phase vectors are kept so
// the signal model stays general, but the optimizer leaves them at zero.
struct HrisConfig {
    VectorXd beta;
    VectorXd psi;
    VectorXd gamma;

    HrisConfig() = default;
    explicit HrisConfig(VectorXd b)
        : beta(std::move(b)), psi(VectorXd::Zero(beta.size())), gamma(VectorXd::Zero(beta.size())) {}

    Eigen::Index size() const { return beta.size(); }

    // diag entries of the reflection matrix Psi(beta, psi)
    VectorXcd reflect_diag() const {
        VectorXcd d(beta.size());
        for (Eigen::Index l = 0; l < beta.size(); ++l) d(l) = std::polar(beta(l), psi.size() ? psi(l) : 0.0);
        return d;
    }

    // receive combining vector phi, [phi]_l = (1-beta_l) e^{j gamma_l}
    VectorXcd receive_vector() const {
        VectorXcd d(beta.size());
        for (Eigen::Index l = 0; l < beta.size(); ++l)
            d(l) = std::polar(1.0 - beta(l), gamma.size() ? gamma(l) : 0.0);
        return d;
    }

    void validate_box() const {
        if ((beta.array() < 0.0).any() || (beta.array() > 1.0).any())
            throw std::invalid_argument("beta outside [0,1]");
    }
};

// BS precoders: K communication columns plus one radar column.
struct Beamformer {
    MatrixXcd W_c;  // T x K
    VectorXcd w_r;  // T

    Eigen::Index num_antennas() const { return w_r.size(); }
    Eigen::Index num_users() const { return W_c.cols(); }

    MatrixXcd W() const {
        MatrixXcd w(w_r.size(), W_c.cols() + 1);
        if (W_c.cols() > 0) w.leftCols(W_c.cols()) = W_c;
        w.col(W_c.cols()) = w_r;
        return w;
    }

    VectorXcd column(Eigen::Index i) const {
        return i < W_c.cols() ? VectorXcd(W_c.col(i)) : w_r;
    }

    // max_j |[WW^H]_jj - P_t|
    double per_antenna_power_error(double p_t) const {
        const MatrixXcd w = W();
        double worst = 0.0;
        for (Eigen::Index j = 0; j < w.rows(); ++j)
            worst = std::max(worst, std::abs(w.row(j).squaredNorm() - p_t));
        return worst;
    }
};

// Transmit covariance R = sum_i R_i with R_i = w_i w_i^H for extracted designs,
// or the blocks returned by the semidefinite solver.
struct CovarianceSet {
    std::vector<MatrixXcd> R_i;  // K+1 Hermitian PSD blocks
    MatrixXcd R;                 // stored sum

    static CovarianceSet from_beamformer(const Beamformer& bf) {
        CovarianceSet c;
        const Eigen::Index k = bf.num_users();
        c.R_i.reserve(static_cast<std::size_t>(k) + 1);
        for (Eigen::Index i = 0; i <= k; ++i) {
            const VectorXcd w = bf.column(i);
            c.R_i.push_back(w * w.adjoint());
        }
        c.R = MatrixXcd::Zero(bf.num_antennas(), bf.num_antennas());
        for (const auto& r : c.R_i) c.R += r;
        return c;
    }

    static CovarianceSet from_blocks(std::vector<MatrixXcd> blocks) {
        CovarianceSet c;
        c.R_i = std::move(blocks);
        if (c.R_i.empty()) throw std::invalid_argument("covariance set needs at least one block");
        c.R = MatrixXcd::Zero(c.R_i.front().rows(), c.R_i.front().cols());
        for (const auto& r : c.R_i) c.R += r;
        return c;
    }

    Eigen::Index num_users() const { return static_cast<Eigen::Index>(R_i.size()) - 1; }
    const MatrixXcd& radar_block() const { return R_i.back(); }
};

// Hermitian matrices of the beta-quadratic SINR forms. D_k carries the
// beta-form of h_hat_k^H R h_hat_k so the penalty gradient stays analytic.
struct PropagationMatrices {
    MatrixXcd C1;               // N x N, radar numerator weight
    MatrixXcd C2;               // N x N, HRIS->cell interference
    std::vector<MatrixXcd> C3;  // per user, comm numerator
    std::vector<MatrixXcd> D;   // per user, total received comm power
};

struct SinrReport {
    double eta_r = 0.0;
    VectorXd eta_c;
    double gamma_c = 0.0;  // linear threshold the report was checked against
    bool comm_feasible = true;

    double min_eta_c() const { return eta_c.size() ? eta_c.minCoeff() : 0.0; }
};

// H_e(beta) = H Psi(beta) G, rows are h_hat_k^H.
inline MatrixXcd cascaded_channel(const Channels& ch, const HrisConfig& hris) {
    if (hris.size() != ch.num_hris_elements())
        throw std::invalid_argument("beta length does not match the HRIS element count");
    return ch.H * hris.reflect_diag().asDiagonal() * ch.G;
}

struct CascadedRadar {
    VectorXcd a_hat;  // T, a_hat_h with a_hat_h^H = a_h^H Psi(beta) G
    cxd A_r;          // phi(beta)^H a_r
};

inline CascadedRadar cascaded_radar(const Channels& ch, const HrisConfig& hris) {
    if (hris.size() != ch.num_hris_elements())
        throw std::invalid_argument("beta length does not match the HRIS element count");
    CascadedRadar out;
    const Eigen::RowVectorXcd row = ch.a_h.adjoint() * hris.reflect_diag().asDiagonal() * ch.G;
    out.a_hat = row.adjoint();
    out.A_r = (hris.receive_vector().conjugate().transpose() * ch.a_r)(0);
    return out;
}

// Covariance-parameterized per-user SINR:
// eta_c(k) = h^H R_k h / (h^H R h - h^H R_k h + sigma^2), h = h_hat_k(beta).
inline VectorXd sinr_comm(const CovarianceSet& covs, const MatrixXcd& h_e, double sigma2) {
    const Eigen::Index k_users = h_e.rows();
    if (covs.num_users() != k_users)
        throw std::invalid_argument("covariance block count does not match the user count");
    VectorXd eta(k_users);
    for (Eigen::Index k = 0; k < k_users; ++k) {
        const VectorXcd h = h_e.row(k).adjoint();
        const double sig = std::real((h.adjoint() * covs.R_i[static_cast<std::size_t>(k)] * h)(0));
        const double tot = std::real((h.adjoint() * covs.R * h)(0));
        const double den = tot - sig + sigma2;
        if (!(den > 0.0)) throw std::runtime_error("non-positive comm SINR denominator (broken PSD invariant)");
        eta(k) = sig / den;
    }
    return eta;
}

// Precoder-parameterized per-user SINR: desired power |[H_e W_c]_kk|^2 against
// inter-user powers, the radar leak and noise.
inline VectorXd sinr_comm_wform(const Beamformer& bf, const MatrixXcd& h_e, double sigma2) {
    const Eigen::Index k_users = h_e.rows();
    if (bf.num_users() != k_users)
        throw std::invalid_argument("precoder column count does not match the user count");
    const MatrixXcd m = h_e * bf.W_c;   // K x K
    const VectorXcd mr = h_e * bf.w_r;  // K
    VectorXd eta(k_users);
    for (Eigen::Index k = 0; k < k_users; ++k) {
        double interf = std::norm(mr(k));
        for (Eigen::Index i = 0; i < k_users; ++i)
            if (i != k) interf += std::norm(m(k, i));
        eta(k) = std::norm(m(k, k)) / (interf + sigma2);
    }
    return eta;
}

// Radar SINR, precoder form:
// |A_r|^2 |a_t^H w_r|^2 / (|A_r|^2 a_hat^H W W^H a_hat + sigma^2).
inline double sinr_radar(const Beamformer& bf, const Channels& ch, const HrisConfig& hris,
                         double sigma2) {
    const CascadedRadar cr = cascaded_radar(ch, hris);
    const double ar2 = std::norm(cr.A_r);
    const double num = ar2 * std::norm((ch.a_t.adjoint() * bf.w_r)(0));
    const MatrixXcd w = bf.W();
    const double interf = ar2 * (cr.a_hat.adjoint() * w).squaredNorm();
    return num / (interf + sigma2);
}

// Radar SINR, covariance form (same quantity through R_{K+1} and R).
inline double sinr_radar_cov(const CovarianceSet& covs, const Channels& ch, const HrisConfig& hris,
                             double sigma2) {
    const CascadedRadar cr = cascaded_radar(ch, hris);
    const double ar2 = std::norm(cr.A_r);
    const double num = ar2 * std::real((ch.a_t.adjoint() * covs.radar_block() * ch.a_t)(0));
    const double interf = ar2 * std::real((cr.a_hat.adjoint() * covs.R * cr.a_hat)(0));
    return num / (interf + sigma2);
}

// C1 = |a_t^H w_r|^2 a_r a_r^H
// C2 = B B^H with column i of B = conj(a_h) o (G w_i)
// C3_k = c c^H with c = conj(h_k) o (G w_k); D_k likewise over all columns.
// The conjugation pins h_hat_k^H = h_k^H Psi(beta) G so the quadratic forms
// below reproduce the precoder-parameterized SINRs exactly.
inline PropagationMatrices build_propagation_matrices(const Channels& ch, const Beamformer& bf) {
    PropagationMatrices p;
    const MatrixXcd w = bf.W();
    const MatrixXcd gw = ch.G * w;  // N x (K+1)

    const double radar_gain = std::norm((ch.a_t.adjoint() * bf.w_r)(0));
    p.C1 = radar_gain * (ch.a_r * ch.a_r.adjoint());

    const MatrixXcd b = ch.a_h.conjugate().asDiagonal() * gw;
    p.C2 = b * b.adjoint();

    const Eigen::Index k_users = bf.num_users();
    p.C3.reserve(static_cast<std::size_t>(k_users));
    p.D.reserve(static_cast<std::size_t>(k_users));
    for (Eigen::Index k = 0; k < k_users; ++k) {
        const VectorXcd hk_conj = ch.user_channel(k).conjugate();
        const VectorXcd c3 = hk_conj.asDiagonal() * VectorXcd(gw.col(k));
        p.C3.push_back(c3 * c3.adjoint());
        const MatrixXcd dk = hk_conj.asDiagonal() * gw;
        p.D.push_back(dk * dk.adjoint());
    }
    return p;
}

// eta_c(beta;k) = beta^T C3_k beta / (h_hat_k^H R h_hat_k - beta^T C3_k beta + sigma^2),
// with the denominator's total power recomputed from the cascaded channel at
// the evaluated beta. Accepts beta outside [0,1] (penalty landscape).
inline VectorXd sinr_comm_beta(const VectorXd& beta, const PropagationMatrices& p,
                               const Channels& ch, const CovarianceSet& covs, double sigma2) {
    const MatrixXcd h_e = cascaded_channel(ch, HrisConfig(beta));
    VectorXd eta(static_cast<Eigen::Index>(p.C3.size()));
    for (std::size_t k = 0; k < p.C3.size(); ++k) {
        const double num = real_quad_form(beta, p.C3[k].real());
        const VectorXcd h = h_e.row(static_cast<Eigen::Index>(k)).adjoint();
        const double tot = std::real((h.adjoint() * covs.R * h)(0));
        eta(static_cast<Eigen::Index>(k)) = num / (tot - num + sigma2);
    }
    return eta;
}

// eta_r(beta) = (1-beta)^T C1 (1-beta) / (|A_r(beta)|^2 beta^T C2 beta + sigma^2)
// with |A_r(beta)|^2 = (1-beta)^T a_r a_r^H (1-beta).
inline double sinr_radar_beta(const VectorXd& beta, const PropagationMatrices& p,
                              const VectorXcd& a_r, double sigma2) {
    const VectorXd one_minus = VectorXd::Ones(beta.size()) - beta;
    const double num = real_quad_form(one_minus, p.C1.real());
    const double ar2 = real_quad_form(one_minus, (a_r * a_r.adjoint()).real());
    const double interf = ar2 * real_quad_form(beta, p.C2.real());
    return num / (interf + sigma2);
}

// Link-level estimate of both SINR metrics from i.i.d. unit-power Gaussian
// symbols, waveform and noise. Returns raw power estimates plus standard
// errors so consistency checks can scale tolerances.
struct McEstimate {
    VectorXd comm_signal;
    VectorXd comm_interference;  // includes noise
    double radar_signal = 0.0;
    double radar_interference = 0.0;  // includes noise
    VectorXd eta_c;
    double eta_r = 0.0;
    VectorXd eta_c_rel_se;
    double eta_r_rel_se = 0.0;

    SinrReport report(double gamma_c_linear) const {
        SinrReport r;
        r.eta_r = eta_r;
        r.eta_c = eta_c;
        r.gamma_c = gamma_c_linear;
        r.comm_feasible = eta_c.size() == 0 || eta_c.minCoeff() >= gamma_c_linear * (1.0 - 1e-3);
        return r;
    }
};

inline McEstimate monte_carlo_sinr(const Channels& ch, const Beamformer& bf, const HrisConfig& hris,
                                   double sigma2, std::int64_t n_samples, std::uint64_t seed) {
    if (n_samples < 1) throw std::invalid_argument("monte carlo needs at least one sample");
    const Eigen::Index k_users = ch.num_users();

    const MatrixXcd h_e = cascaded_channel(ch, hris);
    const MatrixXcd m = h_e * bf.W_c;   // K x K desired/inter-user gains
    const VectorXcd mr = h_e * bf.w_r;  // K radar leak gains
    const CascadedRadar cr = cascaded_radar(ch, hris);
    const cxd radar_gain = cr.A_r * (ch.a_t.adjoint() * bf.w_r)(0);
    const Eigen::RowVectorXcd radar_leak_c = cr.A_r * (cr.a_hat.adjoint() * bf.W_c);
    const cxd radar_leak_s = cr.A_r * (cr.a_hat.adjoint() * bf.w_r)(0);

    ComplexGaussian gen(seed);
    const double noise_scale = std::sqrt(sigma2);

    VectorXd sig_acc = VectorXd::Zero(k_users), sig_sq = VectorXd::Zero(k_users);
    VectorXd int_acc = VectorXd::Zero(k_users), int_sq = VectorXd::Zero(k_users);
    double rsig_acc = 0.0, rsig_sq = 0.0, rint_acc = 0.0, rint_sq = 0.0;

    VectorXcd c(k_users);
    for (std::int64_t s_idx = 0; s_idx < n_samples; ++s_idx) {
        for (Eigen::Index k = 0; k < k_users; ++k) c(k) = gen();
        const cxd s = gen();
        for (Eigen::Index k = 0; k < k_users; ++k) {
            const double sig = std::norm(m(k, k) * c(k));
            cxd interf = mr(k) * s;
            for (Eigen::Index i = 0; i < k_users; ++i)
                if (i != k) interf += m(k, i) * c(i);
            interf += noise_scale * gen();
            const double ipow = std::norm(interf);
            sig_acc(k) += sig;
            sig_sq(k) += sig * sig;
            int_acc(k) += ipow;
            int_sq(k) += ipow * ipow;
        }
        const double rsig = std::norm(radar_gain * s);
        cxd rint = radar_leak_s * s;
        if (k_users > 0) rint += (radar_leak_c * c)(0);
        rint += noise_scale * gen();
        const double ripow = std::norm(rint);
        rsig_acc += rsig;
        rsig_sq += rsig * rsig;
        rint_acc += ripow;
        rint_sq += ripow * ripow;
    }

    const auto n = static_cast<double>(n_samples);
    const auto rel_se = [n](double acc, double sq) {
        const double mean = acc / n;
        if (mean <= 0.0) return 0.0;
        const double var = std::max(sq / n - mean * mean, 0.0);
        return std::sqrt(var / n) / mean;
    };

    McEstimate out;
    out.comm_signal = sig_acc / n;
    out.comm_interference = int_acc / n;
    out.radar_signal = rsig_acc / n;
    out.radar_interference = rint_acc / n;
    out.eta_c.resize(k_users);
    out.eta_c_rel_se.resize(k_users);
    for (Eigen::Index k = 0; k < k_users; ++k) {
        out.eta_c(k) = out.comm_interference(k) > 0.0 ? out.comm_signal(k) / out.comm_interference(k)
                                                      : 0.0;
        out.eta_c_rel_se(k) = std::hypot(rel_se(sig_acc(k), sig_sq(k)), rel_se(int_acc(k), int_sq(k)));
    }
    out.eta_r = out.radar_interference > 0.0 ? out.radar_signal / out.radar_interference : 0.0;
    out.eta_r_rel_se = std::hypot(rel_se(rsig_acc, rsig_sq), rel_se(rint_acc, rint_sq));
    return out;
}

// Far-field array response toward unit direction u, referenced to the centroid.
inline VectorXcd directional_response(const ArrayLayout& layout, const Vector3d& u) {
    const double k = 2.0 * kPi / layout.wavelength;
    const Vector3d c = layout.centroid();
    VectorXcd v(layout.size());
    for (Eigen::Index l = 0; l < layout.size(); ++l)
        v(l) = std::polar(1.0, k * u.dot(layout.positions.col(l) - c));
    return v;
}

// HRIS reflected power per direction: sum_i |a(dir)^H Psi(beta) G w_i|^2.
inline VectorXd hris_beampattern(const ArrayLayout& hris_layout, const Channels& ch,
                                 const HrisConfig& hris, const Beamformer& bf,
                                 const std::vector<Vector3d>& directions) {
    if (directions.empty()) throw std::invalid_argument("empty beampattern direction grid");
    const MatrixXcd excitation = hris.reflect_diag().asDiagonal() * (ch.G * bf.W());  // N x (K+1)
    VectorXd power(static_cast<Eigen::Index>(directions.size()));
    for (std::size_t d = 0; d < directions.size(); ++d) {
        const VectorXcd a = directional_response(hris_layout, directions[d]);
        power(static_cast<Eigen::Index>(d)) = (a.adjoint() * excitation).squaredNorm();
    }
    return power;
}

// BS transmit power per direction and per stream: |a_bs(dir)^H w_i|^2.
inline MatrixXd bs_beampattern(const ArrayLayout& bs_layout, const Beamformer& bf,
                               const std::vector<Vector3d>& directions) {
    if (directions.empty()) throw std::invalid_argument("empty beampattern direction grid");
    const MatrixXcd w = bf.W();
    MatrixXd power(static_cast<Eigen::Index>(directions.size()), w.cols());
    for (std::size_t d = 0; d < directions.size(); ++d) {
        const VectorXcd a = directional_response(bs_layout, directions[d]);
        for (Eigen::Index i = 0; i < w.cols(); ++i)
            power(static_cast<Eigen::Index>(d), i) = std::norm((a.adjoint() * w.col(i))(0));
    }
    return power;
}

}  // namespace dfrc

#endif  // DFRC_MODEL_HPP
