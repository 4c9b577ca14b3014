// SPDX-License-Identifier: Apache-2.0
#ifndef DFRC_SDP_HPP
#define DFRC_SDP_HPP

#include <optional>
#include <vector>

#include "dfrc/common.hpp"

namespace dfrc::sdp {

// Isometric real vectorization of a Hermitian d x d matrix:
// [diag; sqrt(2) Re(upper); sqrt(2) Im(upper)], length d^2, preserving
// Re tr(A^H B) as the Euclidean dot product.
inline Eigen::Index svec_size(Eigen::Index d) { return d * d; }

inline VectorXd svec(const MatrixXcd& a) {
    const Eigen::Index d = a.rows();
    VectorXd v(svec_size(d));
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < d; ++i) v(idx++) = std::real(a(i, i));
    const double s = std::sqrt(2.0);
    for (Eigen::Index j = 1; j < d; ++j)
        for (Eigen::Index i = 0; i < j; ++i) {
            v(idx++) = s * std::real(a(i, j));
            v(idx++) = s * std::imag(a(i, j));
        }
    return v;
}

inline MatrixXcd unsvec(const Eigen::Ref<const VectorXd>& v, Eigen::Index d) {
    MatrixXcd a(d, d);
    Eigen::Index idx = 0;
    for (Eigen::Index i = 0; i < d; ++i) a(i, i) = v(idx++);
    const double s = 1.0 / std::sqrt(2.0);
    for (Eigen::Index j = 1; j < d; ++j)
        for (Eigen::Index i = 0; i < j; ++i) {
            const double re = v(idx++) * s;
            const double im = v(idx++) * s;
            a(i, j) = cxd(re, im);
            a(j, i) = cxd(re, -im);
        }
    return a;
}

// min c^T x  s.t.  A x = b,  x in (PSD blocks) x (nonneg orthant) x (free).
// Variable layout: [svec(block_0); ...; svec(block_{B-1}); nonneg; free].
struct ConicProblem {
    std::vector<Eigen::Index> psd_dims;
    Eigen::Index n_nonneg = 0;
    Eigen::Index n_free = 0;
    MatrixXd A;
    VectorXd b;
    VectorXd c;

    Eigen::Index num_vars() const {
        Eigen::Index n = n_nonneg + n_free;
        for (const auto d : psd_dims) n += svec_size(d);
        return n;
    }

    Eigen::Index psd_offset(std::size_t block) const {
        Eigen::Index off = 0;
        for (std::size_t i = 0; i < block; ++i) off += svec_size(psd_dims[i]);
        return off;
    }
    Eigen::Index nonneg_offset() const { return psd_offset(psd_dims.size()); }
    Eigen::Index free_offset() const { return nonneg_offset() + n_nonneg; }
};

struct ConicSolution {
    VectorXd x;  // cone-feasible iterate
    double objective = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double constraint_residual = 0.0;  // ||A x - b||_inf at the returned x
    int iterations = 0;
    bool converged = false;

    MatrixXcd block(const ConicProblem& p, std::size_t i) const {
        return unsvec(x.segment(p.psd_offset(i), svec_size(p.psd_dims[i])), p.psd_dims[i]);
    }
};

struct SolverOptions {
    double rho = 1.0;
    double alpha = 1.6;  // over-relaxation
    double eps_abs = 1e-9;
    double eps_rel = 1e-9;
    int max_iters = 60000;
    int check_every = 25;
    bool adaptive_rho = true;
};

struct WarmStart {
    VectorXd z;
    VectorXd u;
    double rho = 0.0;
};

class ConicSolver {
public:
    virtual ~ConicSolver() = default;
    virtual ConicSolution solve(const ConicProblem& problem, WarmStart* warm) const = 0;
};

// Two-block ADMM splitting the affine part from the cone:
//   x <- argmin { c^T x + rho/2 ||x - (z-u)||^2 : A x = b }
//   z <- Pi_cone(alpha x + (1-alpha) z + u),  u <- u + alpha x + (1-alpha) z - z.
// Rows of [A|b] are normalized once; the cached Cholesky of A A^T makes the
// affine projection a pair of triangular solves.
class AdmmConicSolver : public ConicSolver {
public:
    AdmmConicSolver() = default;
    explicit AdmmConicSolver(SolverOptions opts) : opts_(opts) {}

    ConicSolution solve(const ConicProblem& problem, WarmStart* warm = nullptr) const override {
        const Eigen::Index n = problem.num_vars();
        const Eigen::Index m = problem.A.rows();
        if (problem.A.cols() != n || problem.b.size() != m || problem.c.size() != n)
            throw std::invalid_argument("conic problem dimensions disagree");

        MatrixXd a = problem.A;
        VectorXd b = problem.b;
        for (Eigen::Index i = 0; i < m; ++i) {
            const double norm = a.row(i).norm();
            if (norm > 0.0) {
                a.row(i) /= norm;
                b(i) /= norm;
            }
        }

        Eigen::LLT<MatrixXd> llt;
        if (m > 0) {
            MatrixXd gram = a * a.transpose();
            gram.diagonal().array() += 1e-12;
            llt.compute(gram);
            if (llt.info() != Eigen::Success) throw std::runtime_error("singular constraint gram matrix");
        }

        double rho = opts_.rho;
        VectorXd z = VectorXd::Zero(n), u = VectorXd::Zero(n);
        if (warm && warm->z.size() == n && warm->u.size() == n) {
            z = warm->z;
            u = warm->u;
            if (warm->rho > 0.0) rho = warm->rho;
        }

        const auto project_affine = [&](const VectorXd& v) -> VectorXd {
            if (m == 0) return v;
            return v - a.transpose() * llt.solve(a * v - b);
        };

        ConicSolution sol;
        VectorXd x(n), z_prev(n);
        const double sqrt_n = std::sqrt(static_cast<double>(n));
        for (int it = 1; it <= opts_.max_iters; ++it) {
            x = project_affine(z - u - problem.c / rho);
            const VectorXd x_relaxed = opts_.alpha * x + (1.0 - opts_.alpha) * z;
            z_prev = z;
            z = project_cone(problem, x_relaxed + u);
            u += x_relaxed - z;

            if (it % opts_.check_every == 0 || it == opts_.max_iters) {
                const double r_primal = (x - z).norm();
                const double r_dual = rho * (z - z_prev).norm();
                const double eps_pri =
                    opts_.eps_abs * sqrt_n + opts_.eps_rel * std::max(x.norm(), z.norm());
                const double eps_dua = opts_.eps_abs * sqrt_n + opts_.eps_rel * rho * u.norm();
                if (r_primal <= eps_pri && r_dual <= eps_dua) {
                    sol.converged = true;
                    sol.iterations = it;
                    sol.primal_residual = r_primal;
                    sol.dual_residual = r_dual;
                    break;
                }
                if (opts_.adaptive_rho) {
                    if (r_primal > 10.0 * r_dual) {
                        rho *= 2.0;
                        u /= 2.0;
                    } else if (r_dual > 10.0 * r_primal) {
                        rho /= 2.0;
                        u *= 2.0;
                    }
                }
                sol.iterations = it;
                sol.primal_residual = r_primal;
                sol.dual_residual = r_dual;
            }
        }

        sol.x = z;  // cone-feasible by construction
        sol.objective = problem.c.dot(z);
        sol.constraint_residual = m > 0 ? (a * z - b).cwiseAbs().maxCoeff() : 0.0;
        if (warm) {
            warm->z = z;
            warm->u = u;
            warm->rho = rho;
        }
        return sol;
    }

    SolverOptions& options() { return opts_; }
    const SolverOptions& options() const { return opts_; }

private:
    static VectorXd project_cone(const ConicProblem& p, const VectorXd& v) {
        VectorXd out = v;
        for (std::size_t blk = 0; blk < p.psd_dims.size(); ++blk) {
            const Eigen::Index d = p.psd_dims[blk];
            const Eigen::Index off = p.psd_offset(blk);
            const MatrixXcd mat = unsvec(out.segment(off, svec_size(d)), d);
            Eigen::SelfAdjointEigenSolver<MatrixXcd> eig(mat);
            const VectorXd lam = eig.eigenvalues().cwiseMax(0.0);
            const MatrixXcd proj =
                eig.eigenvectors() * lam.asDiagonal() * eig.eigenvectors().adjoint();
            out.segment(off, svec_size(d)) = svec(proj);
        }
        out.segment(p.nonneg_offset(), p.n_nonneg) =
            out.segment(p.nonneg_offset(), p.n_nonneg).cwiseMax(0.0);
        return out;
    }

    SolverOptions opts_;
};

}  // namespace dfrc::sdp

#endif  // DFRC_SDP_HPP
