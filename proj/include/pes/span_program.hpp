#pragma once

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <cmath>
#include <vector>

#include "pes/flow.hpp"
#include "pes/graph.hpp"

namespace pes {

/// Generic span program (H, V, tau, A) over binary inputs, with per-bit
/// basis-index sets for H_{j,0} and H_{j,1} plus always-on / always-off blocks.
struct SpanProgram {
    int dim_h = 0;
    int dim_v = 0;
    Eigen::MatrixXd A;       // dim_v x dim_h
    Eigen::VectorXd tau;     // dim_v
    int m = 0;               // input length
    std::vector<std::vector<int>> h_j1;  // basis indices of H_{j,1}
    std::vector<std::vector<int>> h_j0;  // basis indices of H_{j,0}
    std::vector<int> h_true;
    std::vector<int> h_false;

    /// Diagonal of the projector onto H(x) = (+) H_{j,x_j} (+) H_true.
    Eigen::VectorXd hx_mask(const std::vector<int>& x) const {
        Eigen::VectorXd mask = Eigen::VectorXd::Zero(dim_h);
        for (int j = 0; j < m; ++j)
            for (int i : (x[j] ? h_j1[j] : h_j0[j])) mask[i] = 1.0;
        for (int i : h_true) mask[i] = 1.0;
        return mask;
    }
};

inline Eigen::MatrixXd projector_Hx(const SpanProgram& p, const std::vector<int>& x) {
    return p.hx_mask(x).asDiagonal();
}

/// The st-connectivity span program: basis of H is the 2|E| directed edges
/// in the fixed (min,max,direction) order, A|u,v> = |u> - |v>, tau = |s>-|t>,
/// H_{i,1} spanned by both orientations of every edge in E_i.
inline SpanProgram build_stconn_program(const Graph& g, const EdgeAssociation& assoc) {
    SpanProgram p;
    p.dim_h = 2 * static_cast<int>(g.edges.size());
    p.dim_v = g.n;
    p.m = assoc.m;
    p.A = Eigen::MatrixXd::Zero(p.dim_v, p.dim_h);
    for (int idx = 0; idx < p.dim_h; ++idx) {
        auto [u, v] = g.directed_endpoints(idx);
        p.A(u, idx) += 1.0;
        p.A(v, idx) -= 1.0;
    }
    p.tau = Eigen::VectorXd::Zero(p.dim_v);
    p.tau[g.s] = 1.0;
    p.tau[g.t] = -1.0;
    p.h_j1.resize(p.m);
    p.h_j0.resize(p.m);  // H_{i,0} = {0}
    for (int i = 0; i < p.m; ++i)
        for (int e : assoc.assoc[i]) {
            p.h_j1[i].push_back(2 * e);
            p.h_j1[i].push_back(2 * e + 1);
        }
    return p;
}

inline SpanProgram build_stconn_program(const Graph& g) {
    return build_stconn_program(g, EdgeAssociation::singletons(g));
}

struct PositiveWitnessReport {
    Eigen::VectorXd w;  // in H(x)
    double w_plus = 0;
};

/// Minimum-norm solution of A Pi_x w = tau within H(x); errors if x is not a
/// 1-input (residual above 1e-8).
inline PositiveWitnessReport positive_witness(const SpanProgram& p, const std::vector<int>& x) {
    Eigen::VectorXd mask = p.hx_mask(x);
    Eigen::MatrixXd B = p.A * mask.asDiagonal();
    Eigen::BDCSVD<Eigen::MatrixXd> svd(B, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd.setThreshold(kRankCutoff);
    Eigen::VectorXd w = svd.solve(p.tau);
    w = mask.asDiagonal() * w;
    if ((p.A * w - p.tau).norm() > 1e-8) throw GraphError("positive_witness: not a 1-input");
    PositiveWitnessReport r;
    r.w = w;
    r.w_plus = w.squaredNorm();
    return r;
}

struct NegativeWitnessReport {
    Eigen::VectorXd omega;  // functional on V (as a column vector)
    double neg_error = 0;   // ||omega A Pi_Hx||^2
    double neg_size = 0;    // ||omega A||^2
};

namespace detail {

/// Columns spanning the null space of M (relative cutoff), possibly 0 columns.
inline Eigen::MatrixXd null_space(const Eigen::MatrixXd& M) {
    if (M.rows() == 0) return Eigen::MatrixXd::Identity(M.cols(), M.cols());
    Eigen::BDCSVD<Eigen::MatrixXd> svd(M, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > kRankCutoff * std::max(smax, 1e-300)) ++rank;
    return svd.matrixV().rightCols(M.cols() - rank);
}

}  // namespace detail

/// Optimal approximate negative witness: lexicographic least squares.
/// Stage 1 minimizes ||omega^T A Pi_Hx||^2 over {omega : <omega|tau> = 1};
/// stage 2 re-minimizes ||omega^T A||^2 over the stage-1 minimizer set.
inline NegativeWitnessReport approx_negative_witness(const SpanProgram& p,
                                                     const std::vector<int>& x) {
    double tau_sq = p.tau.squaredNorm();
    if (tau_sq <= 0) throw GraphError("approx_negative_witness: tau = 0 is ill-posed");
    Eigen::VectorXd mask = p.hx_mask(x);
    Eigen::MatrixXd B = p.A * mask.asDiagonal();  // dim_v x dim_h

    // Parametrize the constraint plane: omega = tau/|tau|^2 + Z c, Z spanning tau-perp.
    Eigen::MatrixXd Z = detail::null_space(p.tau.transpose());
    Eigen::VectorXd omega0 = p.tau / tau_sq;

    // Stage 1: min_c || B^T (omega0 + Z c) ||^2
    Eigen::MatrixXd Bt_Z = B.transpose() * Z;
    Eigen::BDCSVD<Eigen::MatrixXd> svd1(Bt_Z, Eigen::ComputeThinU | Eigen::ComputeThinV);
    svd1.setThreshold(kRankCutoff);
    Eigen::VectorXd c0 = svd1.solve(-B.transpose() * omega0);
    Eigen::VectorXd omega1 = omega0 + Z * c0;

    // Stage 2: within c = c0 + K d (K = null space of B^T Z), min || A^T (omega1 + Z K d) ||^2
    Eigen::MatrixXd K = detail::null_space(Bt_Z);
    Eigen::VectorXd omega = omega1;
    if (K.cols() > 0) {
        Eigen::MatrixXd At_ZK = p.A.transpose() * Z * K;
        Eigen::BDCSVD<Eigen::MatrixXd> svd2(At_ZK, Eigen::ComputeThinU | Eigen::ComputeThinV);
        svd2.setThreshold(kRankCutoff);
        Eigen::VectorXd d = svd2.solve(-p.A.transpose() * omega1);
        omega = omega1 + Z * K * d;
    }

    NegativeWitnessReport r;
    r.omega = omega;
    r.neg_error = (B.transpose() * omega).squaredNorm();
    r.neg_size = (p.A.transpose() * omega).squaredNorm();
    return r;
}

/// Residual of |w> = w_+ Pi_Hx (omega A)^dagger for the computed pair.
inline double verify_inverse_witness(const SpanProgram& p, const std::vector<int>& x) {
    auto pos = positive_witness(p, x);
    auto neg = approx_negative_witness(p, x);
    Eigen::VectorXd mask = p.hx_mask(x);
    Eigen::VectorXd rhs = pos.w_plus * (mask.asDiagonal() * (p.A.transpose() * neg.omega));
    return (pos.w - rhs).norm();
}

struct WitnessBounds {
    double W_plus = 0;
    double W_minus_tilde = 0;
};

/// Upper bounds for P_Gst on n vertices: w_+ = R/2 <= (n-1)/2 < n/2, and the
/// approximate negative witness size is at most c_minus * n^2 (validated on
/// small instances; c_minus is configuration).
inline WitnessBounds default_bounds_stconn(int n, double c_minus = 2.0) {
    if (n < 2) throw GraphError("default_bounds_stconn: n >= 2 required");
    WitnessBounds b;
    b.W_plus = n / 2.0;
    b.W_minus_tilde = c_minus * n * n;
    return b;
}

}  // namespace pes
