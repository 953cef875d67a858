// SPDX-License-Identifier: Apache-2.0
//
// risnoma: sum-rate optimization for RIS-assisted NOMA D2D links
// Copyright (C) 2026 The risnoma authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <Eigen/Eigenvalues>

#include "risnoma/common.hpp"

namespace risnoma {

/// Dense Hermitian matrix. Construction symmetrizes and rejects inputs that
/// are not Hermitian to 1e-12 (relative to their norm).
class HermitianMatrix {
public:
    HermitianMatrix() = default;

    explicit HermitianMatrix(const Eigen::MatrixXcd& m, double tol = 1e-12) {
        if (m.rows() != m.cols()) {
            throw DimensionError("HermitianMatrix: matrix is not square");
        }
        const double scale = std::max(1.0, m.norm());
        if ((m - m.adjoint()).norm() > tol * scale) {
            throw InvalidInput("HermitianMatrix: input is not Hermitian");
        }
        if (!m.allFinite()) {
            throw InvalidInput("HermitianMatrix: non-finite entry");
        }
        m_ = 0.5 * (m + m.adjoint());
    }

    static HermitianMatrix zero(int n) { return HermitianMatrix(Eigen::MatrixXcd::Zero(n, n)); }
    static HermitianMatrix identity(int n) { return HermitianMatrix(Eigen::MatrixXcd::Identity(n, n)); }

    /// scale * v v^H
    static HermitianMatrix outer(const ComplexVector& v, double scale = 1.0) {
        return HermitianMatrix(scale * (v * v.adjoint()));
    }

    int dim() const { return static_cast<int>(m_.rows()); }
    const Eigen::MatrixXcd& matrix() const { return m_; }
    Complex operator()(int r, int c) const { return m_(r, c); }

    /// Tr(this * other), real for Hermitian arguments.
    double trace_product(const HermitianMatrix& other) const { return trace_product(other.m_); }

    double trace_product(const Eigen::MatrixXcd& other) const {
        require_same_size(m_.rows(), other.rows(), "trace_product");
        return (m_.array() * other.transpose().array()).sum().real();
    }

    double frobenius() const { return m_.norm(); }

    HermitianMatrix operator+(const HermitianMatrix& o) const { return HermitianMatrix(m_ + o.m_); }
    HermitianMatrix operator-(const HermitianMatrix& o) const { return HermitianMatrix(m_ - o.m_); }
    HermitianMatrix operator*(double s) const { return HermitianMatrix(s * m_); }

private:
    Eigen::MatrixXcd m_;
};

// Hermitian n x n  <->  real symmetric 2n x 2n via [Re, -Im; Im, Re].
// The map preserves positive semidefiniteness and scales Frobenius norms by sqrt(2);
// it backs the eigensolver when the complex routine fails.

inline Eigen::MatrixXd to_real(const Eigen::MatrixXcd& h) {
    const Eigen::Index n = h.rows();
    Eigen::MatrixXd r(2 * n, 2 * n);
    r.topLeftCorner(n, n) = h.real();
    r.bottomRightCorner(n, n) = h.real();
    r.topRightCorner(n, n) = -h.imag();
    r.bottomLeftCorner(n, n) = h.imag();
    return r;
}

inline Eigen::MatrixXcd from_real(const Eigen::MatrixXd& r) {
    const Eigen::Index n = r.rows() / 2;
    Eigen::MatrixXcd h(n, n);
    h.real() = 0.5 * (r.topLeftCorner(n, n) + r.bottomRightCorner(n, n));
    h.imag() = 0.5 * (r.bottomLeftCorner(n, n) - r.topRightCorner(n, n));
    return 0.5 * (h + h.adjoint());
}

namespace detail {

/// Eigen-decomposition of a Hermitian matrix, values ascending. The complex
/// solver is tried first; the real embedding is the fallback.
struct HermitianEigen {
    Eigen::VectorXd values;
    Eigen::MatrixXcd vectors;
};

inline HermitianEigen hermitian_eigen(const Eigen::MatrixXcd& h) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(h);
    if (es.info() == Eigen::Success) {
        return {es.eigenvalues(), es.eigenvectors()};
    }
    const Eigen::Index n = h.rows();
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> rs(to_real(h));
    if (rs.info() != Eigen::Success) {
        std::ostringstream msg;
        msg << "eigensolver did not converge (n = " << n << ", |M|_F = " << h.norm()
            << ", max |entry| = " << h.cwiseAbs().maxCoeff() << ")";
        throw SolverError(msg.str());
    }
    // every eigenvalue of h appears twice in the embedding; keep one vector per pair
    HermitianEigen out{Eigen::VectorXd(n), Eigen::MatrixXcd(n, n)};
    for (Eigen::Index k = 0; k < n; ++k) {
        const Eigen::VectorXd v = rs.eigenvectors().col(2 * k + 1);
        out.values(k) = rs.eigenvalues()(2 * k + 1);
        ComplexVector z(n);
        for (Eigen::Index e = 0; e < n; ++e) {
            z(e) = Complex(v(e), v(n + e));
        }
        out.vectors.col(k) = z.normalized();
    }
    return out;
}

inline Eigen::MatrixXcd project_psd_raw(const Eigen::MatrixXcd& h) {
    const auto es = hermitian_eigen(h);
    const Eigen::VectorXd clamped = es.values.cwiseMax(0.0);
    Eigen::MatrixXcd p = es.vectors * clamped.asDiagonal() * es.vectors.adjoint();
    return 0.5 * (p + p.adjoint());
}

}  // namespace detail

/// Nearest PSD matrix in Frobenius norm: negative eigenvalues clamped to 0.
inline HermitianMatrix project_psd(const HermitianMatrix& m) {
    return HermitianMatrix(detail::project_psd_raw(m.matrix()), 1e-9);
}

/// Smallest eigenvalue of a Hermitian matrix.
inline double min_eigenvalue(const HermitianMatrix& m) { return detail::hermitian_eigen(m.matrix()).values(0); }

/// Eigenvector of the largest eigenvalue (unit norm) and that eigenvalue.
inline std::pair<ComplexVector, double> leading_eigenpair(const HermitianMatrix& m) {
    const auto es = detail::hermitian_eigen(m.matrix());
    const Eigen::Index n = m.dim();
    return {es.vectors.col(n - 1).normalized(), es.values(n - 1)};
}

/// Samples x ~ CN(0, m) for PSD m (negative eigenvalues are clamped).
class GaussianSampler {
public:
    explicit GaussianSampler(const HermitianMatrix& m) : n_(m.dim()) {
        const auto es = detail::hermitian_eigen(m.matrix());
        factor_ = es.vectors * es.values.cwiseMax(0.0).cwiseSqrt().asDiagonal();
    }

    ComplexVector operator()(std::mt19937_64& rng) const {
        std::normal_distribution<double> normal(0.0, std::sqrt(0.5));
        ComplexVector xi(n_);
        for (Eigen::Index k = 0; k < n_; ++k) {
            const double re = normal(rng);
            xi(k) = Complex(re, normal(rng));
        }
        return factor_ * xi;
    }

private:
    Eigen::Index n_;
    Eigen::MatrixXcd factor_;
};

/// Tr(a X) >= b.
struct TraceConstraint {
    HermitianMatrix a;
    double b = 0.0;
};

/// maximize Tr(objective X) subject to the trace inequalities, X_kk = 1 for
/// every index in `unit_diagonal`, and X PSD.
///
/// With `schur_block` the last row and column hold the auxiliary vector of
/// the block [Psi psi_bar; psi_bar^H 1]; its corner is pinned to 1.
struct SdpProblem {
    HermitianMatrix objective;
    std::vector<TraceConstraint> inequalities;
    std::vector<int> unit_diagonal;
    bool schur_block = false;

    int dim() const { return objective.dim(); }

    void validate() const {
        const int n = dim();
        require(n >= 1, "SdpProblem: empty objective");
        for (const auto& c : inequalities) {
            require_same_size(c.a.dim(), n, "SdpProblem constraint");
            require(std::isfinite(c.b), "SdpProblem: non-finite bound");
        }
        for (int k : unit_diagonal) {
            require(k >= 0 && k < n, "SdpProblem: diagonal index out of range");
        }
    }

    /// unit_diagonal plus the Schur corner, sorted and unique.
    std::vector<int> pinned_diagonal() const {
        std::vector<int> d = unit_diagonal;
        if (schur_block) {
            d.push_back(dim() - 1);
        }
        std::sort(d.begin(), d.end());
        d.erase(std::unique(d.begin(), d.end()), d.end());
        return d;
    }
};

/// Psi block of a Schur-augmented solution.
inline HermitianMatrix psi_block(const HermitianMatrix& x) {
    const int k = x.dim() - 1;
    return HermitianMatrix(x.matrix().topLeftCorner(k, k));
}

/// Auxiliary column psi_bar of a Schur-augmented solution.
inline ComplexVector aux_vector(const HermitianMatrix& x) {
    const int k = x.dim() - 1;
    return x.matrix().col(k).head(k);
}

struct SdpOptions {
    double tol = 1e-6;
    int max_iter = 5000;
    double over_relaxation = 1.6;
    double rho = 0.0;  ///< initial ADMM penalty; 0 picks 2 / n
    std::string residual_csv;  ///< per-iteration residual dump when non-empty
};

struct SolveStats {
    int iterations = 0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    double objective = 0.0;
    bool converged = false;
    bool infeasible = false;
};

struct SdpSolution {
    HermitianMatrix x;
    SolveStats stats;
};

namespace detail {

/// Euclidean projection onto {X : X_kk = 1 (k pinned), Tr(A_m X) >= b_m}.
/// Pinning is applied first; the half-spaces are then handled on the
/// remaining coordinates with Hildreth's method (exact for one constraint).
class AffineProjector {
public:
    AffineProjector(const SdpProblem& prob, const std::vector<int>& pinned) : pinned_(pinned) {
        for (const auto& c : prob.inequalities) {
            const double scale = c.a.frobenius();
            if (scale == 0.0) {
                if (c.b > 0.0) {
                    infeasible_ = true;
                }
                continue;
            }
            Eigen::MatrixXcd normal = c.a.matrix() / scale;
            double rhs = c.b / scale;
            for (int k : pinned_) {
                rhs -= normal(k, k).real();
                normal(k, k) = 0.0;
            }
            const double nn = normal.squaredNorm();
            if (nn <= 1e-28) {
                // constant on the pinned set
                if (rhs > 1e-12) {
                    infeasible_ = true;
                }
                continue;
            }
            normals_.push_back(std::move(normal));
            rhs_.push_back(rhs);
            norms2_.push_back(nn);
        }
    }

    bool infeasible() const { return infeasible_; }

    Eigen::MatrixXcd operator()(Eigen::MatrixXcd v) const {
        for (int k : pinned_) {
            v(k, k) = 1.0;
        }
        const std::size_t m = normals_.size();
        if (m == 0) {
            return v;
        }
        std::vector<double> mu(m, 0.0);
        const int sweeps = m == 1 ? 1 : 200;
        for (int s = 0; s < sweeps; ++s) {
            double moved = 0.0;
            for (std::size_t i = 0; i < m; ++i) {
                const double value = (normals_[i].conjugate().array() * v.array()).sum().real();
                const double delta = std::max(-mu[i], (rhs_[i] - value) / norms2_[i]);
                if (delta != 0.0) {
                    mu[i] += delta;
                    v += delta * normals_[i];
                    moved = std::max(moved, std::abs(delta));
                }
            }
            if (moved <= 1e-15) {
                break;
            }
        }
        return v;
    }

private:
    std::vector<int> pinned_;
    std::vector<Eigen::MatrixXcd> normals_;
    std::vector<double> rhs_;
    std::vector<double> norms2_;
    bool infeasible_ = false;
};

/// Congruence D Z D that sets the pinned diagonal entries to exactly 1; keeps PSD.
inline Eigen::MatrixXcd pin_diagonal(Eigen::MatrixXcd z, const std::vector<int>& pinned) {
    Eigen::VectorXd d = Eigen::VectorXd::Ones(z.rows());
    for (int k : pinned) {
        const double zk = z(k, k).real();
        if (zk > 1e-12) {
            d(k) = 1.0 / std::sqrt(zk);
        } else {
            return z;
        }
    }
    z = d.asDiagonal() * z * d.asDiagonal();
    for (int k : pinned) {
        z(k, k) = 1.0;
    }
    return 0.5 * (z + z.adjoint());
}

}  // namespace detail

/// Over-relaxed ADMM between the affine constraint set and the PSD cone.
///
/// Returns the PSD iterate with pinned diagonal entries rescaled to 1. An
/// optional initial matrix seeds the PSD iterate.
inline SdpSolution solve(const SdpProblem& prob, const SdpOptions& opt, const HermitianMatrix* initial = nullptr) {
    prob.validate();
    require(opt.tol > 0.0 && opt.max_iter >= 1, "solve: bad tolerance or iteration cap");
    const int n = prob.dim();
    const std::vector<int> pinned = prob.pinned_diagonal();
    const detail::AffineProjector project_affine(prob, pinned);

    SdpSolution out;
    if (project_affine.infeasible()) {
        out.x = HermitianMatrix::zero(n);
        out.stats.infeasible = true;
        return out;
    }

    const double c_norm = prob.objective.frobenius();
    const Eigen::MatrixXcd c = c_norm > 0.0 ? Eigen::MatrixXcd(prob.objective.matrix() / c_norm)
                                            : Eigen::MatrixXcd(Eigen::MatrixXcd::Zero(n, n));

    Eigen::MatrixXcd z = initial ? initial->matrix() : Eigen::MatrixXcd::Identity(n, n);
    require_same_size(z.rows(), n, "solve initial matrix");
    Eigen::MatrixXcd u = Eigen::MatrixXcd::Zero(n, n);
    double rho = opt.rho > 0.0 ? opt.rho : 2.0 / static_cast<double>(n);
    const double alpha = opt.over_relaxation;

    std::ofstream csv;
    if (!opt.residual_csv.empty()) {
        csv.open(opt.residual_csv);
        if (!csv) {
            throw Error("cannot open residual dump " + opt.residual_csv);
        }
        csv << "iteration,primal_residual,dual_residual,rho\n";
    }

    Eigen::MatrixXcd best_z = z;
    double best_score = std::numeric_limits<double>::infinity();
    double r = 0.0;
    double s = 0.0;
    int it = 0;
    for (it = 1; it <= opt.max_iter; ++it) {
        const Eigen::MatrixXcd x = project_affine(z - u + c / rho);
        const Eigen::MatrixXcd x_hat = alpha * x + (1.0 - alpha) * z;
        const Eigen::MatrixXcd z_old = z;
        z = detail::project_psd_raw(x_hat + u);
        u += x_hat - z;

        r = (x - z).norm();
        s = rho * (z - z_old).norm();
        const double r_scale = std::max({1.0, x.norm(), z.norm()});
        const double s_scale = std::max(1.0, rho * u.norm());
        if (csv) {
            csv << it << ',' << r << ',' << s << ',' << rho << '\n';
        }
        const double score = std::max(r / r_scale, s / s_scale);
        if (score < best_score) {
            best_score = score;
            best_z = z;
        }
        if (r <= opt.tol * r_scale && s <= opt.tol * s_scale) {
            out.stats.converged = true;
            best_z = z;
            break;
        }
        // a dual that grows without bound certifies an empty intersection
        if (it % 50 == 0 && rho * u.norm() > 1e8 * (1.0 + static_cast<double>(n))) {
            out.stats.infeasible = true;
            break;
        }
        if (it % 10 == 0) {
            if (r > 10.0 * s) {
                rho *= 2.0;
                u *= 0.5;
            } else if (s > 10.0 * r) {
                rho *= 0.5;
                u *= 2.0;
            }
        }
    }

    out.x = HermitianMatrix(detail::pin_diagonal(best_z, pinned), 1e-9);
    out.stats.iterations = std::min(it, opt.max_iter);
    out.stats.primal_residual = r;
    out.stats.dual_residual = s;
    out.stats.objective = prob.objective.trace_product(out.x);
    return out;
}

inline SdpSolution solve(const SdpProblem& prob, double tol = 1e-6, int max_iter = 5000) {
    SdpOptions opt;
    opt.tol = tol;
    opt.max_iter = max_iter;
    return solve(prob, opt);
}

}  // namespace risnoma
