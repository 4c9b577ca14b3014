// SPDX-License-Identifier: Apache-2.0
#ifndef DFRC_SCENE_HPP
#define DFRC_SCENE_HPP

#include <cstdint>
#include <utility>
#include <vector>

#include "dfrc/common.hpp"

namespace dfrc {

// Antenna/element geometry. Positions in meters, one column per element.
struct ArrayLayout {
    Matrix3Xd positions;
    double wavelength = 0.1;

    Eigen::Index size() const { return positions.cols(); }

    Vector3d centroid() const { return positions.rowwise().mean(); }

    // Uniform linear array along `axis`, centered at `center`.
    static ArrayLayout uniform_linear(Eigen::Index count, double spacing, const Vector3d& center,
                                      const Vector3d& axis, double wavelength) {
        if (count < 1) throw std::invalid_argument("array needs at least one element");
        ArrayLayout a;
        a.wavelength = wavelength;
        a.positions.resize(3, count);
        const Vector3d u = axis.normalized();
        for (Eigen::Index i = 0; i < count; ++i) {
            const double offset = (static_cast<double>(i) - (count - 1) / 2.0) * spacing;
            a.positions.col(i) = center + offset * u;
        }
        return a;
    }

    // sqrt(count) x sqrt(count) planar array spanned by axis_a/axis_b.
    static ArrayLayout square_planar(Eigen::Index count, double spacing, const Vector3d& center,
                                     const Vector3d& axis_a, const Vector3d& axis_b,
                                     double wavelength) {
        const auto side = static_cast<Eigen::Index>(std::llround(std::sqrt(double(count))));
        if (side * side != count || count < 1)
            throw std::invalid_argument("planar array needs a square element count");
        ArrayLayout a;
        a.wavelength = wavelength;
        a.positions.resize(3, count);
        const Vector3d ua = axis_a.normalized();
        const Vector3d ub = axis_b.normalized();
        Eigen::Index l = 0;
        for (Eigen::Index i = 0; i < side; ++i) {
            for (Eigen::Index j = 0; j < side; ++j, ++l) {
                const double da = (static_cast<double>(i) - (side - 1) / 2.0) * spacing;
                const double db = (static_cast<double>(j) - (side - 1) / 2.0) * spacing;
                a.positions.col(l) = center + da * ua + db * ub;
            }
        }
        return a;
    }
};

enum class ChannelModel { kLosPhase, kRayleigh };

struct Scene {
    ArrayLayout bs;    // uniform linear, lambda/2 spacing
    ArrayLayout hris;  // square planar, lambda spacing
    std::vector<Vector3d> users;
    std::vector<Vector3d> detect_grid;  // P*Q cell centers, row-major
    Eigen::Index grid_rows = 1;
    Eigen::Index grid_cols = 1;
    Eigen::Index target_cell = 0;
    double noise_power = 1.0;       // sigma^2, linear watts
    double per_antenna_power = 1.0; // P_t, linear watts
    ChannelModel channel_model = ChannelModel::kLosPhase;
    std::uint64_t seed = 1;

    Eigen::Index num_bs_antennas() const { return bs.size(); }
    Eigen::Index num_hris_elements() const { return hris.size(); }
    Eigen::Index num_users() const { return static_cast<Eigen::Index>(users.size()); }
    const Vector3d& target() const { return detect_grid.at(static_cast<std::size_t>(target_cell)); }

    void validate() const {
        if (users.empty()) throw std::invalid_argument("scene needs at least one user");
        if (detect_grid.empty()) throw std::invalid_argument("scene needs a detection grid");
        if (grid_rows * grid_cols != static_cast<Eigen::Index>(detect_grid.size()))
            throw std::invalid_argument("detection grid size does not match rows*cols");
        if (target_cell < 0 || target_cell >= static_cast<Eigen::Index>(detect_grid.size()))
            throw std::invalid_argument("target cell outside the detection grid");
        if (!(noise_power > 0.0)) throw std::invalid_argument("noise power must be positive");
        if (!(per_antenna_power > 0.0)) throw std::invalid_argument("per-antenna power must be positive");
    }
};

struct Channels {
    MatrixXcd G;   // N x T, BS -> HRIS
    MatrixXcd H;   // K x N, rows are h_k^H (HRIS -> user k)
    VectorXcd a_t; // T, BS -> target cell
    VectorXcd a_h; // N, HRIS -> target cell
    VectorXcd a_r; // N, target cell -> HRIS

    Eigen::Index num_bs_antennas() const { return G.cols(); }
    Eigen::Index num_hris_elements() const { return G.rows(); }
    Eigen::Index num_users() const { return H.rows(); }

    // h_k as a column vector (H stores h_k^H as row k).
    VectorXcd user_channel(Eigen::Index k) const { return H.row(k).adjoint(); }
};

// Spherical-phase unit-amplitude steering vector: entry l = exp(-j 2pi/lambda |p_l - point|).
inline VectorXcd steering_vector(const ArrayLayout& layout, const Vector3d& point) {
    const double k = 2.0 * kPi / layout.wavelength;
    VectorXcd v(layout.size());
    for (Eigen::Index l = 0; l < layout.size(); ++l) {
        const double r = (layout.positions.col(l) - point).norm();
        if (r <= 0.0) throw std::invalid_argument("steering point coincides with an array element");
        v(l) = std::polar(1.0, -k * r);
    }
    return v;
}

inline Channels build_channels(const Scene& scene) {
    scene.validate();
    const Eigen::Index t = scene.num_bs_antennas();
    const Eigen::Index n = scene.num_hris_elements();
    const Eigen::Index k = scene.num_users();

    Channels ch;
    ch.G.resize(n, t);
    ch.H.resize(k, n);

    if (scene.channel_model == ChannelModel::kLosPhase) {
        for (Eigen::Index l = 0; l < n; ++l)
            ch.G.row(l) = steering_vector(scene.bs, scene.hris.positions.col(l)).transpose();
        for (Eigen::Index u = 0; u < k; ++u)
            ch.H.row(u) = steering_vector(scene.hris, scene.users[static_cast<std::size_t>(u)]).transpose();
    } else {
        ComplexGaussian gen(scene.seed);
        for (Eigen::Index c = 0; c < t; ++c)
            for (Eigen::Index r = 0; r < n; ++r) ch.G(r, c) = gen();
        for (Eigen::Index c = 0; c < n; ++c)
            for (Eigen::Index r = 0; r < k; ++r) ch.H(r, c) = gen();
    }

    const Vector3d& cell = scene.target();
    ch.a_t = steering_vector(scene.bs, cell);
    ch.a_h = steering_vector(scene.hris, cell);
    ch.a_r = ch.a_h;  // same cell, symmetric path geometry
    return ch;
}

// Table-I style default geometry, all positions derived from the wavelength.
inline Scene default_scene(Eigen::Index t = 8, Eigen::Index n = 16, double wavelength = 0.1) {
    Scene s;
    s.bs = ArrayLayout::uniform_linear(t, wavelength / 2.0, Vector3d(0, 0, 300 * wavelength),
                                       Vector3d(0, 1, 0), wavelength);
    s.hris = ArrayLayout::square_planar(n, wavelength, Vector3d(0, 100 * wavelength, 30 * wavelength),
                                        Vector3d(0, 1, 0), Vector3d(0, 0, 1), wavelength);
    s.users = {Vector3d(75 * wavelength, 100 * wavelength, 0)};
    s.detect_grid = {Vector3d(0, 0, 0)};
    return s;
}

}  // namespace dfrc

#endif  // DFRC_SCENE_HPP
