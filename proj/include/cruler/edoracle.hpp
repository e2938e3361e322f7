#pragma once

#include <Eigen/Dense>
#include <complex>
#include <vector>

#include "cruler/backend.hpp"
#include "cruler/gaussian.hpp"
#include "cruler/pairstates.hpp"

namespace cruler {

using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

// Dense statevector over qubit subsystems (each local dimension 2).
// Fermionic states enter through the Jordan-Wigner map with one qubit per
// fermionic mode; that ordering is fixed to the mode order of the input.
struct DenseState {
    int n_qubits = 0;
    ComplexVector amplitudes;

    void check_normalized(double tol = 1e-12) const;
};

struct DenseOperator {
    std::vector<int> support; // qubit indices, increasing
    ComplexMatrix matrix;     // 2^|support| square
};

// Hard desk-scale cap: product dimension 2^20.
inline constexpr int kMaxOracleQubits = 20;

DenseState statevector_from_pairstate(const PairState& state);

// Materializes a pure Gaussian state (impure covariances are rejected) as
// the ground state of the quadratic parent Hamiltonian built from the
// covariance. Cross-checks against Gaussian-path results are only
// meaningful for regions contiguous in the Jordan-Wigner order.
DenseState statevector_from_gaussian(const MajoranaCovariance& cov);

// Re-extracts the Majorana covariance from a dense state (round-trip check).
Eigen::MatrixXd covariance_from_statevector(const DenseState& state);

DenseOperator reduced_density(const DenseState& state, const std::vector<int>& qubits);

double dense_entropy(const DenseOperator& rho);

// -ln on eigenvalues >= eps_ker, zero on the rest (kernel convention).
DenseOperator dense_modular_hamiltonian(const DenseOperator& rho, double eps_ker = 1e-12);

// Applies an operator on `support` qubits to the full state.
ComplexVector apply_operator(const DenseState& state, const DenseOperator& op);

double dense_modular_commutator(const DenseState& state, const std::vector<int>& a,
                                const std::vector<int>& b, const std::vector<int>& c,
                                double eps_ker = 1e-12);

// Combo terms are lists of qubit subsystems with weights.
struct DenseCombo {
    std::vector<std::pair<std::vector<int>, double>> terms;
};

double dense_combo_mean(const DenseState& state, const DenseCombo& combo,
                        double eps_ker = 1e-12);
std::complex<double> dense_combo_moment(const DenseState& state, const DenseCombo& c1,
                                        const DenseCombo& c2, double eps_ker = 1e-12);
double dense_combo_variance(const DenseState& state, const DenseCombo& combo,
                            double eps_ker = 1e-12);

// Backend wrapper: "sites" map to fixed qubit groups. Used to validate the
// fast backends on desk-scale toys.
class DenseBackend : public StateBackend {
  public:
    DenseBackend(DenseState state, std::vector<std::vector<int>> site_qubits,
                 double eps_ker = 1e-12);

    int site_count() const override { return static_cast<int>(site_qubits_.size()); }
    double entropy(const Region& region) const override;
    bool has_moments() const override { return true; }
    std::complex<double> combo_moment(const ModularCombo& c1,
                                      const ModularCombo& c2) const override;
    double combo_mean(const ModularCombo& combo) const override;

  private:
    std::vector<int> qubits_of(const Region& region) const;
    DenseCombo lower(const ModularCombo& combo) const;

    DenseState state_;
    std::vector<std::vector<int>> site_qubits_;
    double eps_ker_;
};

} // namespace cruler
