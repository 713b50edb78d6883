#ifndef DCE_ORACLE_HPP
#define DCE_ORACLE_HPP

#include <Eigen/Dense>
#include <cmath>
#include <complex>
#include <vector>

#include "dce/core.hpp"
#include "dce/errors.hpp"

// Brute-force Fock-basis evaluation of the photon distribution, used to
// validate the Legendre-based evaluator. Deliberately shares no code with the
// pdf module: no Legendre functions, no D+- algebra, only dense linear algebra.

namespace dce::oracle {

using Matrix = Eigen::MatrixXcd;

/// Squeezed-thermal parametrization of a covariance state: thermal occupancy
/// from the symplectic eigenvalue (1 + 2 nbar = 2 sqrt(Delta)), squeeze
/// magnitude from the eigenvalue ratio, theta the orientation of the
/// antisqueezed axis.
struct SqueezedThermalDecomposition {
    double n_bar = 0.0;
    double r = 0.0;
    double theta = 0.0;

    /// Rebuild the covariance entries; used by the reconstruction invariant.
    CovarianceState reconstruct() const {
        double nu = n_bar + 0.5; // symplectic eigenvalue
        double c = std::cos(theta), s = std::sin(theta);
        double lp = nu * std::exp(2.0 * r), lm = nu * std::exp(-2.0 * r);
        return {c * c * lp + s * s * lm, s * s * lp + c * c * lm,
                c * s * (lp - lm)};
    }
};

inline SqueezedThermalDecomposition decompose(const CovarianceState& state) {
    double tau = state.tau();
    double delta = state.delta();
    double root = std::sqrt(delta);
    SqueezedThermalDecomposition d;
    d.n_bar = std::max(0.0, root - 0.5);
    // eigenvalues of the 2x2 covariance matrix
    double diff = state.sigma_xx - state.sigma_pp;
    double r2 = std::sqrt(diff * diff + 4.0 * state.sigma_xp * state.sigma_xp);
    double lp = 0.5 * (tau + r2);
    d.r = 0.5 * std::log(lp / root);
    if (!(d.r > 0.0)) d.r = 0.0;
    d.theta = 0.5 * std::atan2(2.0 * state.sigma_xp, diff);
    return d;
}

namespace detail {

/// Scaling-and-squaring matrix exponential with a fixed Pade (6,6)
/// approximant; the 1-norm is scaled below 0.5 first, where the (6,6)
/// remainder is ~1e-17.
inline Matrix expm_pade6(const Matrix& a) {
    const int n = static_cast<int>(a.rows());
    double norm1 = 0.0;
    for (int j = 0; j < n; ++j) norm1 = std::max(norm1, a.col(j).cwiseAbs().sum());
    int s = 0;
    if (norm1 > 0.5) s = static_cast<int>(std::ceil(std::log2(norm1 / 0.5)));
    Matrix as = a / std::pow(2.0, s);

    // c_k = (12-k)! 6! / (12! k! (6-k)!)
    const double c[7] = {1.0, 0.5, 5.0 / 44.0, 1.0 / 66.0, 1.0 / 792.0,
                         1.0 / 15840.0, 1.0 / 665280.0};
    Matrix a2 = as * as;
    Matrix a4 = a2 * a2;
    Matrix id = Matrix::Identity(n, n);
    Matrix u = as * (c[1] * id + c[3] * a2 + c[5] * a4);
    Matrix v = c[0] * id + c[2] * a2 + c[4] * a4 + c[6] * (a4 * a2);
    Matrix x = (v - u).partialPivLu().solve(v + u);
    for (int i = 0; i < s; ++i) x = x * x;
    return x;
}

} // namespace detail

/// Mode-lowering operator in an n-dimensional number basis.
inline Matrix lowering_operator(int dim) {
    Matrix a = Matrix::Zero(dim, dim);
    for (int k = 1; k < dim; ++k) a(k - 1, k) = std::sqrt(static_cast<double>(k));
    return a;
}

/// Squeeze transformation exp((conj(zeta) a^2 - zeta a+^2)/2), zeta = r e^{2i theta}.
inline Matrix squeeze_operator(double r, double theta, int dim) {
    Matrix a = lowering_operator(dim);
    Matrix a2 = a * a;
    std::complex<double> zeta = r * std::exp(std::complex<double>(0.0, 2.0 * theta));
    Matrix gen = 0.5 * (std::conj(zeta) * a2 - zeta * a2.transpose().eval());
    return detail::expm_pade6(gen);
}

/// Max-abs deviation of U+U from identity on the interior block that
/// truncation has not corrupted.
inline double unitarity_defect(const Matrix& u, int interior) {
    Matrix d = u.adjoint() * u - Matrix::Identity(u.rows(), u.cols());
    interior = std::max(1, std::min<int>(interior, static_cast<int>(u.rows())));
    return d.topLeftCorner(interior, interior).cwiseAbs().maxCoeff();
}

/// Suggested truncation dimension for a decomposition.
inline int suggested_dim(const SqueezedThermalDecomposition& d) {
    return static_cast<int>(std::ceil(8.0 * (d.n_bar + 1.0) * std::exp(2.0 * d.r))) +
           20;
}

/// Photon distribution by explicit construction: squeeze the diagonal thermal
/// distribution and read the diagonal, f(m) = sum_k |U_mk|^2 p_k.
inline PhotonDistribution fock_pdf(const SqueezedThermalDecomposition& d, int dim) {
    if (dim < 2) throw DomainError("oracle", "dim", "dimension must be >= 2");
    Matrix u = squeeze_operator(d.r, d.theta, dim);
    std::vector<double> p(dim);
    if (d.n_bar <= 0.0) {
        p.assign(dim, 0.0);
        p[0] = 1.0;
    } else {
        double lr = std::log(d.n_bar / (d.n_bar + 1.0));
        for (int k = 0; k < dim; ++k)
            p[k] = std::exp(k * lr - std::log1p(d.n_bar));
    }
    PhotonDistribution dist;
    dist.method = PhotonDistribution::Method::oracle;
    dist.tau = d.reconstruct().tau();
    dist.values.assign(dim, 0.0);
    for (int k = 0; k < dim; ++k) {
        if (p[k] < 1e-300) continue;
        for (int m = 0; m < dim; ++m)
            dist.values[m] += std::norm(u(m, k)) * p[k];
    }
    double deficit = 1.0 - dist.sum();
    if (deficit > 1e-6)
        throw TruncationError("oracle", "dim",
                              "renormalization deficit " + std::to_string(deficit),
                              "increase the truncation dimension");
    dist.tail_bound = std::max(deficit, 0.0);
    dist.clamp_negatives();
    return dist;
}

} // namespace dce::oracle

#endif // DCE_ORACLE_HPP
