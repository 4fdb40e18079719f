#ifndef LONGWAVE_WATERWAVE_HPP
#define LONGWAVE_WATERWAVE_HPP

#include <algorithm>
#include <cmath>
#include <complex>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "longwave/errors.hpp"
#include "longwave/grid.hpp"
#include "longwave/peregrine.hpp"
#include "longwave/spectral.hpp"

// Reference Euler solver: the Zakharov-Craig-Sulem surface equations
//   zeta_t = (1/mu) G(eps zeta) Phi,
//   Phi_t  = -zeta - eps/2 Phi_x^2
//            + (eps/mu) [G(eps zeta)Phi + eps mu zeta_x Phi_x]^2
//              / (2 (1 + eps^2 mu zeta_x^2)),
// with the Dirichlet-Neumann operator computed from a sigma-coordinate
// solve of the scaled Laplace equation  mu phi_xx + phi_zz = 0  on
// Omega_t = {-1 < z < eps zeta}, bottom Neumann phi_z(-1) = 0.
//
// Vertical map: z = -1 + sigma (1 + eps zeta(x)), sigma in [0,1];
// Chebyshev collocation in sigma, Fourier collocation in x.  The flat-strip
// part of the transformed operator is diagonal per Fourier mode and is
// pre-factorized; surface-deformation terms are folded in by defect
// correction, so the solve is exact (to the residual tolerance) at any
// amplitude.

namespace longwave {

struct WaterWaveState {
    RealField zeta;
    RealField phi_s;  // periodic part of the surface potential trace
    double time = 0.0;
    // uniform background flow U: the potential is U x + periodic part.
    // U x is harmonic, satisfies the bottom condition, and its trace
    // evolution vanishes, so U is a constant of the motion; it lets the
    // periodic cell carry a velocity field with nonzero mean.
    double flow = 0.0;
};

// Chebyshev-Gauss-Lobatto nodes on [0,1] (ascending, sigma_0 = 0 bottom)
// with Clenshaw-Curtis weights (summing to 1) and differentiation matrices.
struct VerticalGrid {
    std::vector<double> sigma;
    std::vector<double> weights;
    Eigen::MatrixXd d1;  // d/dsigma
    Eigen::MatrixXd d2;

    explicit VerticalGrid(int nz) {
        if (nz < 4) throw std::invalid_argument("VerticalGrid: need nz >= 4");
        const int n = nz - 1;
        // standard Chebyshev points x_j = cos(j pi / n), mapped by
        // sigma = (1 - x)/2 so j = 0 lands on sigma = 0
        std::vector<double> x(nz);
        for (int j = 0; j <= n; ++j) x[j] = std::cos(M_PI * j / n);
        sigma.resize(nz);
        for (int j = 0; j <= n; ++j) sigma[j] = (1.0 - x[j]) / 2.0;

        Eigen::MatrixXd D(nz, nz);
        std::vector<double> c(nz, 1.0);
        c[0] = 2.0;
        c[n] = 2.0;
        for (int i = 0; i <= n; ++i) {
            double rowsum = 0.0;
            for (int j = 0; j <= n; ++j) {
                if (i == j) continue;
                const double sgn = ((i + j) % 2 == 0) ? 1.0 : -1.0;
                D(i, j) = (c[i] / c[j]) * sgn / (x[i] - x[j]);
                rowsum += D(i, j);
            }
            D(i, i) = -rowsum;  // negative sum trick
        }
        d1 = -2.0 * D;  // d sigma/d x = -1/2
        d2 = d1 * d1;

        // Clenshaw-Curtis weights on [-1,1], halved for [0,1]
        weights.assign(nz, 0.0);
        std::vector<double> theta(nz);
        for (int j = 0; j <= n; ++j) theta[j] = M_PI * j / n;
        std::vector<double> v(n - 1, 1.0);
        if (n % 2 == 0) {
            weights[0] = weights[n] = 1.0 / (n * n - 1.0);
            for (int k = 1; k <= n / 2 - 1; ++k)
                for (int i = 1; i < n; ++i)
                    v[i - 1] -= 2.0 * std::cos(2.0 * k * theta[i]) / (4.0 * k * k - 1.0);
            for (int i = 1; i < n; ++i)
                v[i - 1] -= std::cos(n * theta[i]) / (n * n - 1.0);
        } else {
            weights[0] = weights[n] = 1.0 / (n * n);
            for (int k = 1; k <= (n - 1) / 2; ++k)
                for (int i = 1; i < n; ++i)
                    v[i - 1] -= 2.0 * std::cos(2.0 * k * theta[i]) / (4.0 * k * k - 1.0);
        }
        for (int i = 1; i < n; ++i) weights[i] = 2.0 * v[i - 1] / n;
        for (double& w : weights) w *= 0.5;  // interval length 1

        if (!std::is_sorted(sigma.begin(), sigma.end()))
            throw std::logic_error("VerticalGrid: nodes not ascending");
    }

    int size() const { return static_cast<int>(sigma.size()); }
};

// Potential phi on the (x, sigma) tensor grid together with the zeta
// snapshot that defines the vertical map.  psi(i, j) = phi(x_j, sigma_i).
struct PotentialField {
    Grid1D grid;
    Eigen::MatrixXd psi;  // periodic part; add flow * x for the full potential
    RealField zeta;
    ModelParams params;
    double flow = 0.0;
};

class WaterWaveSolver {
public:
    WaterWaveSolver(const Grid1D& grid, const VerticalGrid& vg,
                    const ModelParams& p, double tol = 1e-9, int max_iter = 200)
        : grid_(grid), vg_(vg), p_(p), tol_(tol), max_iter_(max_iter) {
        const int nz = vg_.size();
        const int nm = grid.num_modes();
        mode_lu_.reserve(static_cast<std::size_t>(nm));
        for (int m = 0; m < nm; ++m) {
            const double k = grid.wavenumber(m);
            Eigen::MatrixXd A = vg_.d2;
            A.diagonal().array() -= p.mu * k * k;
            A.row(0) = vg_.d1.row(0);          // bottom Neumann
            A.row(nz - 1).setZero();           // surface Dirichlet
            A(nz - 1, nz - 1) = 1.0;
            mode_lu_.emplace_back(A);
        }
    }

    const Grid1D& grid() const { return grid_; }
    const VerticalGrid& vertical_grid() const { return vg_; }
    const ModelParams& params() const { return p_; }

    // Solve  mu phi_xx + phi_zz = 0,  phi_z(-1) = 0,  phi|surface = Phi,
    // for the periodic part; the background flow enters downstream
    // operators analytically.
    PotentialField solve_potential(const RealField& zeta, const RealField& phi_s,
                                   double flow = 0.0) const {
        check_depth(zeta, p_.eps);
        const int nz = vg_.size();
        const int n = grid_.size();

        // x-dependent metric coefficients of the sigma transform
        RealField h = p_.eps * zeta;
        h += 1.0;
        RealField hx = p_.eps * derivative(zeta, 1);
        RealField hxx = p_.eps * derivative(zeta, 2);
        Eigen::ArrayXd c1(n), c2(n), c3(n);
        for (int j = 0; j < n; ++j) {
            const double hh = h[j];
            c1[j] = hx[j] / hh;
            c2[j] = 1.0 / (hh * hh) - 1.0;
            c3[j] = 2.0 * c1[j] * c1[j] - hxx[j] / hh;
        }

        Eigen::MatrixXd psi;
        if (warm_valid_ && warm_.rows() == nz && warm_.cols() == n) {
            psi = warm_;
        } else {
            psi.resize(nz, n);
            for (int i = 0; i < nz; ++i)
                for (int j = 0; j < n; ++j) psi(i, j) = phi_s[j];
        }

        Eigen::MatrixXd psis, psiss, psix, psixs, psixx, rint(nz, n);
        Eigen::RowVectorXd dtop(n), dbot(n);
        bool converged = false;
        for (int it = 0; it < max_iter_; ++it) {
            psis = vg_.d1 * psi;
            psiss = vg_.d2 * psi;
            x_derivative_rows(psi, 1, psix);
            x_derivative_rows(psi, 2, psixx);
            psixs = vg_.d1 * psix;

            // residual of the full transformed operator at interior nodes
            double res = 0.0;
            for (int i = 0; i < nz; ++i) {
                const double s = vg_.sigma[i];
                for (int j = 0; j < n; ++j) {
                    const double a =
                        p_.mu * (psixx(i, j) - 2.0 * s * c1[j] * psixs(i, j) +
                                 s * s * c1[j] * c1[j] * psiss(i, j) +
                                 s * c3[j] * psis(i, j)) +
                        (1.0 + c2[j]) * psiss(i, j);
                    rint(i, j) = -a;
                    if (i > 0 && i < nz - 1) res = std::max(res, std::abs(a));
                }
            }
            for (int j = 0; j < n; ++j) {
                dtop[j] = phi_s[j] - psi(nz - 1, j);
                dbot[j] = -psis(0, j);
                res = std::max(res, std::abs(dtop[j]));
                res = std::max(res, std::abs(dbot[j]));
            }
            if (res <= tol_) {
                converged = true;
                break;
            }
            flat_solve_increment(rint, dtop, dbot, psi);
        }
        if (!converged)
            throw EllipticError("sigma-coordinate Laplace solve did not reach tolerance");

        warm_ = psi;
        warm_valid_ = true;
        return PotentialField{grid_, std::move(psi), zeta, p_, flow};
    }

    void reset_warm_start() const { warm_valid_ = false; }

    // G(eps zeta)Phi = -eps mu zeta_x (phi_x)|surf + (phi_z)|surf.
    RealField dirichlet_neumann(const RealField& zeta,
                                const RealField& phi_s) const {
        PotentialField pf = solve_potential(zeta, phi_s);
        return dirichlet_neumann(pf);
    }

    RealField dirichlet_neumann(const PotentialField& pf) const {
        const int nz = vg_.size();
        const int n = grid_.size();
        Eigen::MatrixXd psis = vg_.d1 * pf.psi;
        Eigen::MatrixXd psix;
        x_derivative_rows(pf.psi, 1, psix);

        RealField zx = derivative(pf.zeta, 1);
        RealField phix_top(grid_), out(grid_);
        for (int j = 0; j < n; ++j) {
            const double hh = 1.0 + p_.eps * pf.zeta[j];
            const double c1 = p_.eps * zx[j] / hh;
            phix_top[j] = psix(nz - 1, j) - c1 * psis(nz - 1, j) + pf.flow;
            out[j] = psis(nz - 1, j) / hh;
        }
        out -= (p_.eps * p_.mu) * dealias(zx * phix_top);
        return out;
    }

    std::pair<RealField, RealField> zcs_rhs(const WaterWaveState& st) const {
        PotentialField pf = solve_potential(st.zeta, st.phi_s, st.flow);
        RealField G = dirichlet_neumann(pf);

        RealField zx = derivative(st.zeta, 1);
        RealField px = derivative(st.phi_s, 1);
        px += st.flow;  // full trace derivative includes the background flow
        RealField num = G + (p_.eps * p_.mu) * dealias(zx * px);
        RealField num2 = dealias(num * num);

        RealField phi_t(grid_);
        for (int j = 0; j < grid_.size(); ++j) {
            const double den = 1.0 + p_.eps * p_.eps * p_.mu * zx[j] * zx[j];
            phi_t[j] = -st.zeta[j] + (p_.eps / p_.mu) * num2[j] / (2.0 * den);
        }
        phi_t -= (p_.eps * 0.5) * dealias(px * px);

        RealField zeta_t = (1.0 / p_.mu) * G;
        // int G dx = 0 identically (flux form); remove the solver-tolerance mean
        zeta_t += -mean(zeta_t);
        return {dealias(zeta_t), dealias(phi_t)};
    }

    WaterWaveState step(const WaterWaveState& st, double dt) const {
        if (!(dt > 0.0)) throw std::invalid_argument("step: dt must be > 0");
        auto [k1z, k1p] = zcs_rhs(st);
        WaterWaveState s2{st.zeta + (dt / 2.0) * k1z, st.phi_s + (dt / 2.0) * k1p,
                          st.time + dt / 2.0, st.flow};
        auto [k2z, k2p] = zcs_rhs(s2);
        WaterWaveState s3{st.zeta + (dt / 2.0) * k2z, st.phi_s + (dt / 2.0) * k2p,
                          st.time + dt / 2.0, st.flow};
        auto [k3z, k3p] = zcs_rhs(s3);
        WaterWaveState s4{st.zeta + dt * k3z, st.phi_s + dt * k3p, st.time + dt,
                          st.flow};
        auto [k4z, k4p] = zcs_rhs(s4);

        WaterWaveState out{
            st.zeta + (dt / 6.0) * (k1z + 2.0 * k2z + 2.0 * k3z + k4z),
            st.phi_s + (dt / 6.0) * (k1p + 2.0 * k2p + 2.0 * k3p + k4p),
            st.time + dt, st.flow};
        if (!out.zeta.all_finite() || !out.phi_s.all_finite() ||
            norm_linf(out.zeta) > 10.0)
            throw BlowUpError("water-wave solution exceeded amplitude guard");
        check_depth(out.zeta, p_.eps);
        return out;
    }

    // Conserved energy  (1/(2 mu)) int int (mu phi_x^2 + phi_z^2) dz dx
    // + (1/2) int zeta^2, evaluated as a volume integral so the background
    // flow is included; for zero flow this equals the surface form
    // (1/(2 mu)) int Phi G(eps zeta)Phi by the divergence theorem.
    double energy(const WaterWaveState& st) const {
        PotentialField pf = solve_potential(st.zeta, st.phi_s, st.flow);
        const int nz = vg_.size();
        const int n = grid_.size();
        Eigen::MatrixXd psis = vg_.d1 * pf.psi;
        Eigen::MatrixXd psix;
        x_derivative_rows(pf.psi, 1, psix);
        RealField zx = derivative(st.zeta, 1);
        double acc = 0.0;
        for (int j = 0; j < n; ++j) {
            const double hh = 1.0 + p_.eps * st.zeta[j];
            const double c1 = p_.eps * zx[j] / hh;
            double ax = 0.0, az = 0.0;
            for (int i = 0; i < nz; ++i) {
                const double w = vg_.weights[static_cast<std::size_t>(i)];
                const double px =
                    psix(i, j) - vg_.sigma[i] * c1 * psis(i, j) + st.flow;
                const double pz = psis(i, j) / hh;
                ax += w * px * px;
                az += w * pz * pz;
            }
            acc += hh * (0.5 * ax + az / (2.0 * p_.mu)) +
                   0.5 * st.zeta[j] * st.zeta[j];
        }
        return acc * grid_.dx();
    }

    // per-row spectral x-derivative of a (nz x n) matrix
    void x_derivative_rows(const Eigen::MatrixXd& in, int order,
                           Eigen::MatrixXd& out) const {
        const int nz = static_cast<int>(in.rows());
        const int n = static_cast<int>(in.cols());
        out.resize(nz, n);
        std::vector<double> row(static_cast<std::size_t>(n));
        Spectrum s;
        for (int i = 0; i < nz; ++i) {
            for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = in(i, j);
            detail::Fft::forward(row, s);
            const int nyq = n / 2;
            for (int m = 0; m <= nyq; ++m) {
                const double k = grid_.wavenumber(m);
                if (order == 1) {
                    s[static_cast<std::size_t>(m)] *= std::complex<double>(0.0, k);
                } else {
                    s[static_cast<std::size_t>(m)] *= -k * k;
                }
            }
            if (order == 1) s[static_cast<std::size_t>(nyq)] = 0.0;
            detail::Fft::inverse(s, n, row);
            for (int j = 0; j < n; ++j) out(i, j) = row[static_cast<std::size_t>(j)];
        }
    }

private:
    // Solve the flat-strip operator  mu d_x^2 + d_sigma^2  for the defect
    // correction: interior right side rint, boundary data dtop (Dirichlet
    // defect at sigma=1) and dbot (Neumann defect at sigma=0); adds the
    // correction onto psi.
    void flat_solve_increment(const Eigen::MatrixXd& rint,
                              const Eigen::RowVectorXd& dtop,
                              const Eigen::RowVectorXd& dbot,
                              Eigen::MatrixXd& psi) const {
        const int nz = vg_.size();
        const int n = grid_.size();
        const int nm = grid_.num_modes();

        // Fourier transform every sigma level of the right side + BC rows
        Eigen::MatrixXd re(nz, nm), im(nz, nm);
        std::vector<double> row(static_cast<std::size_t>(n));
        Spectrum s;
        for (int i = 0; i < nz; ++i) {
            const bool bottom = (i == 0);
            const bool top = (i == nz - 1);
            for (int j = 0; j < n; ++j) {
                row[static_cast<std::size_t>(j)] =
                    bottom ? dbot[j] : (top ? dtop[j] : rint(i, j));
            }
            detail::Fft::forward(row, s);
            for (int m = 0; m < nm; ++m) {
                re(i, m) = s[static_cast<std::size_t>(m)].real();
                im(i, m) = s[static_cast<std::size_t>(m)].imag();
            }
        }

        // back-substitute per mode
        for (int m = 0; m < nm; ++m) {
            re.col(m) = mode_lu_[static_cast<std::size_t>(m)].solve(re.col(m).eval());
            im.col(m) = mode_lu_[static_cast<std::size_t>(m)].solve(im.col(m).eval());
        }

        // inverse transform rows, accumulate into psi
        for (int i = 0; i < nz; ++i) {
            for (int m = 0; m < nm; ++m)
                s[static_cast<std::size_t>(m)] = {re(i, m), im(i, m)};
            detail::Fft::inverse(s, n, row);
            for (int j = 0; j < n; ++j) psi(i, j) += row[static_cast<std::size_t>(j)];
        }
    }

    Grid1D grid_;
    VerticalGrid vg_;
    ModelParams p_;
    double tol_;
    int max_iter_;
    std::vector<Eigen::PartialPivLU<Eigen::MatrixXd>> mode_lu_;
    mutable Eigen::MatrixXd warm_;
    mutable bool warm_valid_ = false;
};

// Exact depth-integrated horizontal velocity  int_{-1}^{eps zeta} phi_x dz,
// with the true horizontal derivative (sigma chain rule) and Clenshaw-Curtis
// quadrature in the vertical.
inline RealField momentum_density_exact(const PotentialField& pf,
                                        const WaterWaveSolver& solver) {
    const VerticalGrid& vg = solver.vertical_grid();
    const int nz = vg.size();
    const int n = pf.grid.size();
    Eigen::MatrixXd psis = vg.d1 * pf.psi;
    Eigen::MatrixXd psix;
    solver.x_derivative_rows(pf.psi, 1, psix);
    RealField zx = derivative(pf.zeta, 1);
    RealField out(pf.grid);
    for (int j = 0; j < n; ++j) {
        const double hh = 1.0 + pf.params.eps * pf.zeta[j];
        const double c1 = pf.params.eps * zx[j] / hh;
        double acc = 0.0;
        for (int i = 0; i < nz; ++i) {
            const double phix =
                psix(i, j) - vg.sigma[i] * c1 * psis(i, j) + pf.flow;
            acc += vg.weights[static_cast<std::size_t>(i)] * phix;
        }
        out[j] = hh * acc;  // dz = h dsigma
    }
    return out;
}

// Averaged velocity V-bar = momentum_density_exact / (1 + eps zeta).
inline RealField averaged_velocity(const PotentialField& pf,
                                   const WaterWaveSolver& solver) {
    RealField q = momentum_density_exact(pf, solver);
    for (int j = 0; j < q.size(); ++j)
        q[j] /= 1.0 + pf.params.eps * pf.zeta[j];
    return q;
}

}  // namespace longwave

#endif  // LONGWAVE_WATERWAVE_HPP
