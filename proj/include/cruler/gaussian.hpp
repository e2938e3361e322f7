#pragma once

#include <Eigen/Dense>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

#include "cruler/backend.hpp"
#include "cruler/lattice.hpp"

namespace cruler {

// p+ip superconductor on a rectangle: nearest-neighbor hopping t, pairing
// amplitude delta_p twisted by the vector potential (default (0, pi/2),
// i.e. real pairing along x and imaginary along y), chemical potential mu.
struct BdGModel {
    Lattice lattice;
    double t = 1.0;
    double delta_p = 1.0;
    double mu = 1.3;
    std::array<double, 2> vector_potential = {0.0, 1.5707963267948966};
};

// Fermionic Gaussian state on a set of Majorana modes. For a lattice state,
// site s carries modes 2s and 2s+1. Reduced states remember which global
// modes they live on, so quadratic forms can be embedded back.
struct MajoranaCovariance {
    std::vector<int> modes;
    Eigen::MatrixXd gamma;

    int mode_count() const { return static_cast<int>(modes.size()); }
    void check_antisymmetric(double tol = 1e-12) const;
    bool is_pure(double tol = 1e-8) const;
};

// K = (i/4) gamma^T k gamma + offset over `modes`; k real antisymmetric.
struct QuadraticForm {
    std::vector<int> modes;
    Eigen::MatrixXd coefficient;
    double offset = 0.0;
};

// Canonical pairing of a real antisymmetric matrix: M = O * D * O^T with
// D = blockdiag([[0, nu_j], [-nu_j, 0]]), nu_j >= 0, O orthogonal.
struct CanonicalPairs {
    Eigen::MatrixXd basis;  // O, columns ordered in canonical pairs
    Eigen::VectorXd values; // nu_j, one per pair
};

CanonicalPairs canonical_antisymmetric(const Eigen::MatrixXd& m);

// Single-particle Majorana matrix h with H = (i/4) gamma^T h gamma + const.
Eigen::MatrixXd bdg_majorana_matrix(const BdGModel& model);

// Ground state obtained by filling all negative-energy Bogoliubov modes.
// A Bogoliubov eigenvalue within 1e-10 of zero raises
// degenerate-ground-state: the reference state must be unique.
MajoranaCovariance ground_state_covariance(const BdGModel& model);

MajoranaCovariance reduce_covariance(const MajoranaCovariance& state, const Region& region);

double gaussian_entropy(const MajoranaCovariance& cov);

// Quadratic form reproducing cov as a Gibbs state: canonical block weight
// ln((1+nu)/(1-nu)), with near-pure blocks (nu >= 1 - eps_ker) assigned
// weight zero and no offset (K vanishes off the support).
QuadraticForm modular_generator(const MajoranaCovariance& cov, double eps_ker = 1e-12);

// <O1 O2> for the Gaussian state, exact by Wick contraction. Forms are
// zero-padded into the state's mode set.
std::complex<double> quad_moment(const MajoranaCovariance& state, const QuadraticForm& o1,
                                 const QuadraticForm& o2);

double quad_mean(const MajoranaCovariance& state, const QuadraticForm& o);

// J(A,B,C) = i<[K_AB, K_BC]> = -2 Im <K_AB K_BC>.
double gaussian_modular_commutator(const MajoranaCovariance& state, const Region& a,
                                   const Region& b, const Region& c,
                                   double eps_ker = 1e-12);

// Moments backend over a Gaussian reference state. Modular generators and
// their products against the covariance are cached per region.
class GaussianBackend : public StateBackend {
  public:
    GaussianBackend(MajoranaCovariance state, double eps_ker = 1e-12);

    int site_count() const override { return state_.mode_count() / 2; }
    double entropy(const Region& region) const override;
    bool has_moments() const override { return true; }
    std::complex<double> combo_moment(const ModularCombo& c1,
                                      const ModularCombo& c2) const override;
    double combo_mean(const ModularCombo& combo) const override;

    const MajoranaCovariance& state() const { return state_; }
    double eps_ker() const { return eps_ker_; }
    const QuadraticForm& modular_form(const Region& region) const;

  private:
    struct RegionData {
        QuadraticForm form;        // local coefficient over region modes
        Eigen::MatrixXd k_gamma;   // rows of k_embedded * Gamma on region modes
        double trace_k_gamma = 0.0;
        double entropy = 0.0;
    };

    const RegionData& data(const Region& region) const;
    void assemble(const ModularCombo& combo, Eigen::MatrixXd& k, Eigen::MatrixXd& p,
                  double& trace_kg, double& offset) const;

    MajoranaCovariance state_;
    double eps_ker_;
    mutable std::mutex cache_mutex_; // map references stay valid across inserts
    mutable std::map<Region, RegionData> cache_;
};

// CSV dump of a covariance matrix (row-major, header with mode count).
void write_covariance_csv(const MajoranaCovariance& cov, const std::string& path);

} // namespace cruler
