#pragma once

#include <Eigen/Dense>
#include <Eigen/Eigenvalues>
#include <cmath>
#include <complex>
#include <random>

#include "pes/span_program.hpp"

namespace pes {

constexpr double kPhaseZeroTol = 1e-9;  // eigenphase zero-bucket

/// H~ = H (+) span{|0^>}; the extra coordinate sits at index dim_h.
struct ExtendedSpace {
    int dim_h = 0;
    int dim() const { return dim_h + 1; }
    int zero_hat() const { return dim_h; }

    Eigen::VectorXcd zero_hat_state() const {
        Eigen::VectorXcd v = Eigen::VectorXcd::Zero(dim());
        v[zero_hat()] = 1.0;
        return v;
    }
    /// Embed a vector of H into H~.
    Eigen::VectorXd embed(const Eigen::VectorXd& w) const {
        Eigen::VectorXd v = Eigen::VectorXd::Zero(dim());
        v.head(dim_h) = w;
        return v;
    }
};

/// A~_alpha = (1/alpha)|tau><0^| - A, as a dim_v x (dim_h + 1) matrix.
inline Eigen::MatrixXd build_A_alpha(const SpanProgram& p, double alpha) {
    if (!(alpha > 0)) throw GraphError("build_A_alpha: alpha must be positive");
    Eigen::MatrixXd M(p.dim_v, p.dim_h + 1);
    M.leftCols(p.dim_h) = -p.A;
    M.col(p.dim_h) = p.tau / alpha;
    return M;
}

/// Orthogonal projector onto ker(A~_alpha), from right singular vectors with
/// singular value below the relative cutoff.
inline Eigen::MatrixXd kernel_projector(const Eigen::MatrixXd& a_alpha) {
    Eigen::BDCSVD<Eigen::MatrixXd> svd(a_alpha, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    double smax = sv.size() ? sv[0] : 0.0;
    int rank = 0;
    for (int i = 0; i < sv.size(); ++i)
        if (sv[i] > kRankCutoff * std::max(smax, 1e-300)) ++rank;
    Eigen::MatrixXd N = svd.matrixV().rightCols(a_alpha.cols() - rank);
    return N * N.transpose();
}

/// U = (2 Pi~_x - I)(2 Lambda_alpha - I) with a cached eigendecomposition.
/// U is real orthogonal; eigenpairs come from the real Schur form, so the
/// eigenbasis is orthonormal by construction.
struct ReflectionUnitary {
    double alpha = 0;
    ExtendedSpace space;
    Eigen::MatrixXd U;
    Eigen::VectorXd ext_mask;   // diag of Pi~_x
    Eigen::MatrixXd lambda;     // Lambda_alpha
    Eigen::VectorXd phases;     // eigenphases in (-pi, pi]
    Eigen::MatrixXcd vecs;      // orthonormal eigenvectors (columns)

    /// Indices of eigenphases with |phi| <= max(theta, zero tolerance).
    std::vector<int> low_phase_indices(double theta) const {
        double cut = std::max(theta, kPhaseZeroTol);
        std::vector<int> out;
        for (int i = 0; i < phases.size(); ++i)
            if (std::abs(phases[i]) <= cut) out.push_back(i);
        return out;
    }

    Eigen::VectorXcd apply_low_phase_projector(double theta, const Eigen::VectorXcd& psi) const {
        Eigen::VectorXcd out = Eigen::VectorXcd::Zero(psi.size());
        for (int i : low_phase_indices(theta)) {
            const auto col = vecs.col(i);
            out += col * col.dot(psi);  // dot conjugates the left argument
        }
        return out;
    }
};

namespace detail {

/// Eigendecomposition of a real orthogonal matrix via real Schur form.
inline void orthogonal_eigs(const Eigen::MatrixXd& U, Eigen::VectorXd& phases,
                            Eigen::MatrixXcd& vecs) {
    using namespace std::complex_literals;
    int n = static_cast<int>(U.rows());
    Eigen::RealSchur<Eigen::MatrixXd> schur(U);
    const Eigen::MatrixXd& T = schur.matrixT();
    const Eigen::MatrixXd& Q = schur.matrixU();
    phases.resize(n);
    vecs.resize(n, n);
    int i = 0;
    while (i < n) {
        bool two_block = (i + 1 < n) && std::abs(T(i + 1, i)) > 1e-12;
        if (!two_block) {
            phases[i] = T(i, i) > 0 ? 0.0 : M_PI;
            vecs.col(i) = Q.col(i).cast<std::complex<double>>();
            ++i;
        } else {
            double c = 0.5 * (T(i, i) + T(i + 1, i + 1));
            double s = T(i + 1, i);
            double phi = std::atan2(s, c);
            Eigen::VectorXcd v1 = (Q.col(i) - 1i * Q.col(i + 1)) / std::sqrt(2.0);
            Eigen::VectorXcd v2 = (Q.col(i) + 1i * Q.col(i + 1)) / std::sqrt(2.0);
            phases[i] = phi;
            vecs.col(i) = v1;
            phases[i + 1] = -phi;
            vecs.col(i + 1) = v2;
            i += 2;
        }
    }
}

}  // namespace detail

inline ReflectionUnitary build_U(const SpanProgram& p, const std::vector<int>& x, double alpha) {
    ReflectionUnitary ru;
    ru.alpha = alpha;
    ru.space.dim_h = p.dim_h;
    Eigen::MatrixXd a_alpha = build_A_alpha(p, alpha);
    ru.lambda = kernel_projector(a_alpha);
    ru.ext_mask = Eigen::VectorXd::Ones(p.dim_h + 1);
    ru.ext_mask.head(p.dim_h) = p.hx_mask(x);
    int d = p.dim_h + 1;
    Eigen::MatrixXd refl_pi = 2.0 * Eigen::MatrixXd(ru.ext_mask.asDiagonal()) -
                              Eigen::MatrixXd::Identity(d, d);
    Eigen::MatrixXd refl_lambda = 2.0 * ru.lambda - Eigen::MatrixXd::Identity(d, d);
    ru.U = refl_pi * refl_lambda;
    if ((ru.U.transpose() * ru.U - Eigen::MatrixXd::Identity(d, d)).norm() > 1e-9)
        throw GraphError("build_U: numerical failure, U not unitary");
    detail::orthogonal_eigs(ru.U, ru.phases, ru.vecs);
    return ru;
}

inline Eigen::MatrixXcd low_phase_projector(const ReflectionUnitary& u, double theta) {
    int d = static_cast<int>(u.U.rows());
    Eigen::MatrixXcd P = Eigen::MatrixXcd::Zero(d, d);
    for (int i : u.low_phase_indices(theta)) P += u.vecs.col(i) * u.vecs.col(i).adjoint();
    return P;
}

/// |0^> = a0 psi_plus + a_plus psi_minus with the stated closed forms.
struct WitnessDecomposition {
    Eigen::VectorXd psi_plus;
    Eigen::VectorXd psi_minus;
    double a0 = 0;
    double a_plus = 0;
};

inline WitnessDecomposition witness_decomposition(const ExtendedSpace& space,
                                                  const Eigen::VectorXd& w, double w_plus,
                                                  double alpha) {
    WitnessDecomposition d;
    Eigen::VectorXd zero_hat = Eigen::VectorXd::Zero(space.dim());
    zero_hat[space.zero_hat()] = 1.0;
    Eigen::VectorXd we = space.embed(w);
    d.psi_plus = zero_hat + we / alpha;
    d.psi_minus = zero_hat - (alpha / w_plus) * we;
    d.a0 = 1.0 / (1.0 + w_plus / (alpha * alpha));
    d.a_plus = 1.0 / (1.0 + (alpha * alpha) / w_plus);
    return d;
}

/// Parallel phase estimation resource plan. b follows the precision window;
/// r is the repetition count pushing out-of-window leakage below epsilon.
struct PhaseEstimationPlan {
    double theta = 0;
    double epsilon = 0;
    int b = 1;
    int r = 1;
    std::int64_t controlled_u_calls() const {
        return static_cast<std::int64_t>(r) * (((std::int64_t)1 << b) - 1);
    }
    std::int64_t oracle_cost() const { return 2 * controlled_u_calls(); }
};

namespace detail {

/// |A_b(phi)| = |(1/2^b) sum_k e^{ik phi}| (the all-zero ancilla amplitude).
inline double phase_kernel(int b, double phi) {
    double denom = std::sin(phi / 2.0);
    if (std::abs(denom) < 1e-15) return 1.0;
    double m = std::ldexp(1.0, b);  // 2^b
    return std::abs(std::sin(m * phi / 2.0) / (m * denom));
}

}  // namespace detail

/// Plans (b, r) so that |A_b(phi)|^(2r) <= epsilon for every eigenphase of U
/// outside the window. r comes from the worst actual eigenphase, with the
/// analytic kernel bound as a fallback when none lies outside.
inline PhaseEstimationPlan plan_phase_estimation(const ReflectionUnitary& u, double theta,
                                                 double epsilon) {
    if (!(theta > 0) || !(theta <= M_PI))
        throw GraphError("plan_phase_estimation: theta in (0, pi]");
    if (!(epsilon > 0 && epsilon < 1)) throw GraphError("plan_phase_estimation: bad epsilon");
    PhaseEstimationPlan plan;
    plan.theta = theta;
    plan.epsilon = epsilon;
    plan.b = std::max(1, (int)std::ceil(std::log2(2.0 * M_PI / theta)) + 1);
    double beta = 0.0;
    for (int i = 0; i < u.phases.size(); ++i) {
        double phi = std::abs(u.phases[i]);
        if (phi > std::max(theta, kPhaseZeroTol)) {
            double a = detail::phase_kernel(plan.b, phi);
            beta = std::max(beta, a * a);
        }
    }
    if (beta <= 0) {
        plan.r = 1;
        return plan;
    }
    if (beta >= 1.0) throw GraphError("plan_phase_estimation: kernel does not separate");
    plan.r = std::max(1, (int)std::ceil(std::log(1.0 / epsilon) / std::log(1.0 / beta)));
    return plan;
}

/// Exact probability of the all-zero ancilla outcome when D(U) runs on psi.
inline double zero_outcome_probability(const ReflectionUnitary& u,
                                       const PhaseEstimationPlan& plan,
                                       const Eigen::VectorXcd& psi) {
    double p = 0;
    for (int i = 0; i < u.phases.size(); ++i) {
        double a = detail::phase_kernel(plan.b, u.phases[i]);
        double amp2 = std::norm(u.vecs.col(i).dot(psi));
        p += amp2 * std::pow(a * a, plan.r);
    }
    return p;
}

struct PhaseEstimationOutcome {
    bool zero = false;
    Eigen::VectorXcd post_state;  // normalized; valid when zero
    double p_zero = 0;
    std::int64_t oracle_cost = 0;
};

/// Unnormalized B = |0> branch of the post-D(U) state: eigen-amplitudes
/// damped by the (complex) kernel value raised to the repetition count.
inline Eigen::VectorXcd phase_filtered(const ReflectionUnitary& u,
                                       const PhaseEstimationPlan& plan,
                                       const Eigen::VectorXcd& psi) {
    Eigen::VectorXcd filtered = Eigen::VectorXcd::Zero(psi.size());
    double m = std::ldexp(1.0, plan.b);
    for (int i = 0; i < u.phases.size(); ++i) {
        std::complex<double> amp = u.vecs.col(i).dot(psi);
        std::complex<double> ab;
        if (std::abs(u.phases[i]) < 1e-15) {
            ab = 1.0;
        } else {
            std::complex<double> num =
                std::exp(std::complex<double>(0, m * u.phases[i])) - 1.0;
            std::complex<double> den =
                std::exp(std::complex<double>(0, u.phases[i])) - 1.0;
            ab = num / den / m;
        }
        filtered += u.vecs.col(i) * (amp * std::pow(ab, plan.r));
    }
    return filtered;
}

/// Spectral model of one D(U) run: sample the all-zero ancilla outcome and,
/// on success, collapse onto the kernel-filtered state.
inline PhaseEstimationOutcome phase_estimation_run(const ReflectionUnitary& u,
                                                   const PhaseEstimationPlan& plan,
                                                   const Eigen::VectorXcd& psi,
                                                   std::mt19937_64& rng) {
    if (std::abs(psi.norm() - 1.0) > 1e-9)
        throw GraphError("phase_estimation_run: unnormalized input");
    PhaseEstimationOutcome out;
    out.oracle_cost = plan.oracle_cost();
    Eigen::VectorXcd filtered = phase_filtered(u, plan, psi);
    out.p_zero = filtered.squaredNorm();
    out.zero = std::uniform_real_distribution<double>(0.0, 1.0)(rng) < out.p_zero;
    if (out.zero && out.p_zero > 0) out.post_state = filtered / filtered.norm();
    return out;
}

struct IqaeResult {
    double estimate = 0;
    std::int64_t experiments = 0;  // applications of the underlying circuit
    bool failed = false;           // adversarial failure branch taken
};

/// Modeled iterative amplitude estimation: truth plus bounded noise, with an
/// adversarial failure branch of probability fail_prob.
inline IqaeResult iqae_estimate(double truth, double additive_err, double fail_prob,
                                std::mt19937_64& rng, double c_iqae = 10.0,
                                bool inject_failures = true) {
    if (!(additive_err > 0 && additive_err < 1)) throw GraphError("iqae: bad additive error");
    if (!(fail_prob > 0 && fail_prob < 1) && fail_prob != 0 && fail_prob != 1)
        throw GraphError("iqae: bad failure probability");
    IqaeResult r;
    double inner = (1.0 / std::max(fail_prob, 1e-300)) * std::log(1.0 / additive_err);
    r.experiments = (std::int64_t)std::ceil(
        (c_iqae / additive_err) * std::log(std::max(std::exp(1.0), inner)));
    std::uniform_real_distribution<double> unif(0.0, 1.0);
    if (inject_failures && unif(rng) < fail_prob) {
        r.failed = true;
        r.estimate = unif(rng);
    } else {
        double noise = inject_failures
                           ? std::uniform_real_distribution<double>(-additive_err,
                                                                    additive_err)(rng)
                           : 0.0;
        r.estimate = truth + noise;
    }
    return r;
}

/// Effective spectral gap check: for U = (2 Pi - I)(2 Lambda - I) and
/// Lambda w = 0, verifies ||P_Theta Pi w|| <= (Theta / 2) ||w||.
inline bool verify_effective_spectral_gap(const Eigen::MatrixXd& pi,
                                          const Eigen::MatrixXd& lambda,
                                          const Eigen::VectorXd& w, double theta,
                                          double slack = 1e-9) {
    if ((lambda * w).norm() > 1e-9 * std::max(1.0, w.norm()))
        throw GraphError("verify_effective_spectral_gap: Lambda w != 0");
    int d = static_cast<int>(pi.rows());
    Eigen::MatrixXd U = (2.0 * pi - Eigen::MatrixXd::Identity(d, d)) *
                        (2.0 * lambda - Eigen::MatrixXd::Identity(d, d));
    Eigen::VectorXd phases;
    Eigen::MatrixXcd vecs;
    detail::orthogonal_eigs(U, phases, vecs);
    Eigen::VectorXcd pw = (pi * w).cast<std::complex<double>>();
    double cut = std::max(theta, kPhaseZeroTol);
    double norm2 = 0;
    for (int i = 0; i < phases.size(); ++i)
        if (std::abs(phases[i]) <= cut) norm2 += std::norm(vecs.col(i).dot(pw));
    return std::sqrt(norm2) <= (theta / 2.0) * w.norm() + slack;
}

}  // namespace pes
