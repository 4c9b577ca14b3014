// SPDX-License-Identifier: Apache-2.0
#ifndef DFRC_COMMON_HPP
#define DFRC_COMMON_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <cstdint>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>

namespace dfrc {

using cxd = std::complex<double>;
using Eigen::Matrix3Xd;
using Eigen::MatrixXcd;
using Eigen::MatrixXd;
using Eigen::Vector3d;
using Eigen::VectorXcd;
using Eigen::VectorXd;

inline constexpr double kPi = 3.14159265358979323846;

// Floor used when emitting zero powers in dB (keeps CSV cells numeric).
inline constexpr double kDbFloor = -300.0;

inline double db2lin(double db) { return std::pow(10.0, db / 10.0); }

inline double lin2db(double lin) {
    if (!(lin > 0.0)) return kDbFloor;
    return std::max(10.0 * std::log10(lin), kDbFloor);
}

// Unit-power circularly-symmetric complex Gaussian source. Box-Muller on
// top of mt19937_64 so that a seed pins the exact bit stream, independent
// of the standard library's normal_distribution implementation.
class ComplexGaussian {
public:
    explicit ComplexGaussian(std::uint64_t seed) : rng_(seed) {}

    // CN(0,1): real and imaginary parts N(0, 1/2).
    cxd operator()() {
        const double u1 = uniform_open();
        const double u2 = uniform_open();
        const double r = std::sqrt(-std::log(u1));  // magnitude for variance 1
        return {r * std::cos(2.0 * kPi * u2), r * std::sin(2.0 * kPi * u2)};
    }

    double uniform01() { return uniform_open(); }

    std::mt19937_64& engine() { return rng_; }

private:
    double uniform_open() {
        // in (0,1]; avoids log(0)
        const std::uint64_t v = rng_();
        return (static_cast<double>(v >> 11) + 1.0) * 0x1.0p-53;
    }

    std::mt19937_64 rng_;
};

// beta^T Re(C) beta for Hermitian C and real beta (the imaginary part of a
// Hermitian quadratic form cancels on real vectors).
inline double real_quad_form(const VectorXd& beta, const MatrixXd& re_c) {
    return beta.dot(re_c * beta);
}

inline bool is_finite(const VectorXd& v) { return v.allFinite(); }

}  // namespace dfrc

#endif  // DFRC_COMMON_HPP
