#pragma once

#include "warpite/manifold.hpp"
#include "warpite/tolerances.hpp"

#include <Eigen/Dense>

#include <complex>
#include <vector>

namespace warpite {

struct DtnModeSample {
    double lambda = 0;
    int l = 0;
    Eigen::MatrixXd matrix;     // empty when is_pole
    double pole_distance = 0;   // estimated distance to the nearest mode Dirichlet eigenvalue
    bool is_pole = false;

    // Throws PoleProximity when the sample sits on a pole.
    const Eigen::MatrixXd& value() const;
};

struct DtnModeSampleComplex {
    std::complex<double> lambda;
    int l = 0;
    Eigen::MatrixXcd matrix;
};

struct DirichletEigenRecord {
    double lambda0 = 0;
    int l = 0;
    int j = 0;                          // index within the mode, from 1
    std::vector<double> boundary_data;  // d_nu phi per component, normalized in L2(M, n dV)
    long long mult_geometric = 1;
};

struct ResidueMatrix {
    double lambda0 = 0;
    int l = 0;
    Eigen::MatrixXd matrix;
};

// Prüfer state at the end of a shooting run: v = rho sin(theta), p v' = rho cos(theta).
struct PruferState {
    double theta = 0;
    double log_rho = 0;
    double theta_lambda = 0;  // d theta / d lambda
};

// Radial problem -(p v')' + q v = lambda w v with p = f^{d-1}, q = kappa f^{d-3}, w = n f^{d-1}.
class RadialSolver {
public:
    RadialSolver(const WarpedManifold& m, int l, Tolerances tol = {});

    const WarpedManifold& manifold() const { return m_; }
    int mode() const { return l_; }
    double kappa() const { return kappa_; }
    const Tolerances& tolerances() const { return tol_; }

    double p(double r) const;
    double q(double r) const;
    double w(double r) const;

    // Solution regular at the cap, or vanishing at the inner radius, carried to the outer radius.
    PruferState shoot_outward(double lambda) const;
    // Shell only: solution vanishing at the outer radius with p v' = -1 there, carried to the inner radius.
    PruferState shoot_inward(double lambda) const;

    // Number of mode Dirichlet eigenvalues <= lambda (phase winding count).
    int count(double lambda) const;
    // Signed phase mismatch to the nearest quantized value, scaled to a lambda distance.
    double pole_distance(double lambda) const;

    DtnModeSample dtn(double lambda) const;
    DtnModeSampleComplex dtn(std::complex<double> lambda) const;

    // Refines the j-th eigenvalue (theta(R) = j pi) within [lo, hi].
    double eigenvalue(int j, double lo, double hi) const;
    std::vector<double> boundary_data(double lambda0) const;
    std::vector<DirichletEigenRecord> spectrum(double lambda_max) const;

private:
    PruferState integrate(double r_from, double r_to, PruferState s, double lambda) const;

    const WarpedManifold& m_;
    int l_;
    int d_;
    double kappa_;
    Tolerances tol_;
};

DtnModeSample dtn_mode(const WarpedManifold& m, double lambda, int l, const Tolerances& tol = {});
DtnModeSampleComplex dtn_mode(const WarpedManifold& m, std::complex<double> lambda, int l, const Tolerances& tol = {});
std::vector<DirichletEigenRecord> dirichlet_spectrum_mode(const WarpedManifold& m, int l, double lambda_max,
                                                          const Tolerances& tol = {});
ResidueMatrix residue_mode(const WarpedManifold& m, const DirichletEigenRecord& rec);
std::vector<double> eigen_boundary_data(const WarpedManifold& m, int l, double lambda0, const Tolerances& tol = {});
// Number of mode-l Dirichlet eigenvalues in (0, lambda].
int dirichlet_count_mode(const WarpedManifold& m, int l, double lambda, const Tolerances& tol = {});

}  // namespace warpite
