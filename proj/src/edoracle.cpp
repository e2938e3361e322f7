#include "cruler/edoracle.hpp"

#include <Eigen/Eigenvalues>
#include <algorithm>
#include <bit>
#include <cmath>

namespace cruler {

namespace {

using Complex = std::complex<double>;

int checked_qubits(int n) {
    require(n >= 0 && n <= kMaxOracleQubits, "too-large",
            std::to_string(n) + " qubits exceeds the 2^20 oracle cap");
    return n;
}

} // namespace

void DenseState::check_normalized(double tol) const {
    const double norm = amplitudes.norm();
    require(std::abs(norm - 1.0) <= tol, "not-normalized",
            "statevector norm " + std::to_string(norm));
}

DenseState statevector_from_pairstate(const PairState& state) {
    const int n_qubits = checked_qubits(state.layout.n_qubits());
    DenseState out;
    out.n_qubits = n_qubits;
    out.amplitudes = ComplexVector::Zero(std::size_t(1) << n_qubits);

    // Product over bonds: an amplitude is nonzero only when every bond's
    // two qubits agree.
    const std::size_t dim = std::size_t(1) << n_qubits;
    for (std::size_t idx = 0; idx < dim; ++idx) {
        double amp = 1.0;
        for (const Bond& b : state.layout.bonds) {
            const bool bit_a = (idx >> b.qubit_a) & 1;
            const bool bit_b = (idx >> b.qubit_b) & 1;
            if (bit_a != bit_b) {
                amp = 0.0;
                break;
            }
            const double p = state.p_of_separation[b.separation - 1];
            amp *= bit_a ? std::sqrt(1.0 - p) : std::sqrt(p);
        }
        if (amp != 0.0) out.amplitudes(idx) = amp;
    }
    out.check_normalized(1e-10);
    return out;
}

namespace {

// Jordan-Wigner Majorana action: gamma_{2j} = Z_0..Z_{j-1} X_j,
// gamma_{2j+1} = Z_0..Z_{j-1} Y_j. Each maps a basis state to a single
// basis state with a phase.
struct MajoranaAction {
    std::size_t flip_mask;
    std::size_t parity_mask;
    bool is_y;

    Complex phase(std::size_t idx) const {
        Complex ph = (std::popcount(idx & parity_mask) & 1) ? -1.0 : 1.0;
        if (is_y) ph *= ((idx >> std::countr_zero(flip_mask)) & 1) ? Complex(0, -1) : Complex(0, 1);
        return ph;
    }
};

MajoranaAction majorana_action(int mode, int n_qubits) {
    const int j = mode / 2;
    MajoranaAction act;
    act.flip_mask = std::size_t(1) << j;
    act.parity_mask = (std::size_t(1) << j) - 1;
    act.is_y = (mode % 2) != 0;
    (void)n_qubits;
    return act;
}

} // namespace

DenseState statevector_from_gaussian(const MajoranaCovariance& cov) {
    const int n_modes = cov.mode_count();
    require(n_modes % 2 == 0, "too-large", "odd Majorana mode count");
    const int n_ferm = n_modes / 2;
    require(n_ferm <= 10, "too-large",
            "Gaussian materialization capped at 10 fermionic modes");
    cov.check_antisymmetric(1e-10);
    require(cov.is_pure(1e-8), "impure-input",
            "covariance is not a pure state (gamma^2 != -1)");

    const std::size_t dim = std::size_t(1) << n_ferm;

    // Parent Hamiltonian (i/4) gamma^T (-Gamma) gamma has the target state
    // as its unique ground state, with spectral gap 2.
    std::vector<MajoranaAction> acts;
    for (int a = 0; a < n_modes; ++a) acts.push_back(majorana_action(a, n_ferm));

    ComplexMatrix h = ComplexMatrix::Zero(dim, dim);
    for (int a = 0; a < n_modes; ++a) {
        for (int b = 0; b < n_modes; ++b) {
            const double coeff = -cov.gamma(a, b);
            if (coeff == 0.0 || a == b) continue;
            // (i/4) coeff gamma_a gamma_b applied column by column
            for (std::size_t col = 0; col < dim; ++col) {
                const Complex ph_b = acts[b].phase(col);
                const std::size_t mid = col ^ acts[b].flip_mask;
                const Complex ph_a = acts[a].phase(mid);
                const std::size_t row = mid ^ acts[a].flip_mask;
                h(row, col) += Complex(0, 0.25) * coeff * ph_a * ph_b;
            }
        }
    }

    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h);
    require(solver.info() == Eigen::Success, "too-large", "dense eigensolver failed");
    const Eigen::VectorXd& evals = solver.eigenvalues();
    require(evals(1) - evals(0) > 1e-8, "impure-input",
            "parent Hamiltonian ground state is degenerate");

    DenseState out;
    out.n_qubits = n_ferm;
    out.amplitudes = solver.eigenvectors().col(0);
    out.check_normalized(1e-10);
    return out;
}

Eigen::MatrixXd covariance_from_statevector(const DenseState& state) {
    const int n_modes = 2 * state.n_qubits;
    std::vector<MajoranaAction> acts;
    for (int a = 0; a < n_modes; ++a) acts.push_back(majorana_action(a, state.n_qubits));

    const std::size_t dim = state.amplitudes.size();
    Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(n_modes, n_modes);
    for (int a = 0; a < n_modes; ++a) {
        for (int b = a + 1; b < n_modes; ++b) {
            // <psi| gamma_a gamma_b |psi>
            Complex val = 0.0;
            for (std::size_t col = 0; col < dim; ++col) {
                if (state.amplitudes(col) == Complex(0.0)) continue;
                const Complex ph_b = acts[b].phase(col);
                const std::size_t mid = col ^ acts[b].flip_mask;
                const Complex ph_a = acts[a].phase(mid);
                const std::size_t row = mid ^ acts[a].flip_mask;
                val += std::conj(state.amplitudes(row)) * ph_a * ph_b * state.amplitudes(col);
            }
            // Gamma_ab = i<gamma_a gamma_b> for a != b
            gamma(a, b) = (Complex(0, 1) * val).real();
            gamma(b, a) = -gamma(a, b);
        }
    }
    return gamma;
}

DenseOperator reduced_density(const DenseState& state, const std::vector<int>& qubits) {
    for (int q : qubits)
        require(q >= 0 && q < state.n_qubits, "unknown-subsystem",
                "qubit " + std::to_string(q) + " not in the state");
    std::vector<int> sorted = qubits;
    std::sort(sorted.begin(), sorted.end());
    require(std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end(),
            "unknown-subsystem", "duplicate qubit in region");

    std::vector<int> env;
    for (int q = 0; q < state.n_qubits; ++q)
        if (!std::binary_search(sorted.begin(), sorted.end(), q)) env.push_back(q);

    const int nr = static_cast<int>(sorted.size());
    const int ne = static_cast<int>(env.size());
    const std::size_t dim_r = std::size_t(1) << nr;
    const std::size_t dim_e = std::size_t(1) << ne;

    auto scatter = [](std::size_t bits, const std::vector<int>& positions) {
        std::size_t out = 0;
        for (std::size_t i = 0; i < positions.size(); ++i)
            if ((bits >> i) & 1) out |= std::size_t(1) << positions[i];
        return out;
    };

    DenseOperator rho;
    rho.support = sorted;
    rho.matrix = ComplexMatrix::Zero(dim_r, dim_r);
    for (std::size_t e = 0; e < dim_e; ++e) {
        const std::size_t env_bits = scatter(e, env);
        for (std::size_t i = 0; i < dim_r; ++i) {
            const Complex ai = state.amplitudes(env_bits | scatter(i, sorted));
            if (ai == Complex(0.0)) continue;
            for (std::size_t j = 0; j < dim_r; ++j) {
                const Complex aj = state.amplitudes(env_bits | scatter(j, sorted));
                rho.matrix(i, j) += ai * std::conj(aj);
            }
        }
    }
    return rho;
}

double dense_entropy(const DenseOperator& rho) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix);
    double s = 0.0;
    for (int i = 0; i < solver.eigenvalues().size(); ++i) {
        const double lambda = solver.eigenvalues()(i);
        if (lambda > 1e-14) s -= lambda * std::log(lambda);
    }
    return s;
}

DenseOperator dense_modular_hamiltonian(const DenseOperator& rho, double eps_ker) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(rho.matrix);
    const Eigen::VectorXd& evals = solver.eigenvalues();
    Eigen::VectorXd logs = Eigen::VectorXd::Zero(evals.size());
    for (int i = 0; i < evals.size(); ++i)
        if (evals(i) >= eps_ker) logs(i) = -std::log(evals(i));
    DenseOperator k;
    k.support = rho.support;
    k.matrix = solver.eigenvectors() * logs.asDiagonal() *
               solver.eigenvectors().adjoint();
    return k;
}

ComplexVector apply_operator(const DenseState& state, const DenseOperator& op) {
    const int nr = static_cast<int>(op.support.size());
    const std::size_t dim_r = std::size_t(1) << nr;
    const std::size_t dim = state.amplitudes.size();

    ComplexVector out = ComplexVector::Zero(dim);
    std::size_t support_mask = 0;
    for (int q : op.support) support_mask |= std::size_t(1) << q;

    auto gather = [&op](std::size_t idx) {
        std::size_t bits = 0;
        for (std::size_t i = 0; i < op.support.size(); ++i)
            if ((idx >> op.support[i]) & 1) bits |= std::size_t(1) << i;
        return bits;
    };
    auto scatter = [&op](std::size_t bits) {
        std::size_t out_bits = 0;
        for (std::size_t i = 0; i < op.support.size(); ++i)
            if ((bits >> i) & 1) out_bits |= std::size_t(1) << op.support[i];
        return out_bits;
    };

    for (std::size_t idx = 0; idx < dim; ++idx) {
        const Complex a = state.amplitudes(idx);
        if (a == Complex(0.0)) continue;
        const std::size_t rest = idx & ~support_mask;
        const std::size_t col = gather(idx);
        for (std::size_t row = 0; row < dim_r; ++row) {
            const Complex m = op.matrix(row, col);
            if (m != Complex(0.0)) out(rest | scatter(row)) += m * a;
        }
    }
    return out;
}

double dense_modular_commutator(const DenseState& state, const std::vector<int>& a,
                                const std::vector<int>& b, const std::vector<int>& c,
                                double eps_ker) {
    auto disjoint = [](const std::vector<int>& u, const std::vector<int>& v) {
        for (int x : u)
            for (int y : v)
                if (x == y) return false;
        return true;
    };
    require(disjoint(a, b) && disjoint(b, c) && disjoint(a, c), "region-overlap",
            "modular commutator regions must be pairwise disjoint");

    auto join = [](std::vector<int> u, const std::vector<int>& v) {
        u.insert(u.end(), v.begin(), v.end());
        std::sort(u.begin(), u.end());
        return u;
    };
    DenseOperator kab = dense_modular_hamiltonian(reduced_density(state, join(a, b)), eps_ker);
    DenseOperator kbc = dense_modular_hamiltonian(reduced_density(state, join(b, c)), eps_ker);

    ComplexVector va = apply_operator(state, kab);
    ComplexVector vb = apply_operator(state, kbc);
    // i<[K_AB, K_BC]> = i(<K_AB K_BC> - conj) = -2 Im <K_AB K_BC>
    const Complex m = va.dot(vb); // conj(va) . vb
    return -2.0 * m.imag();
}

namespace {

ComplexVector apply_combo(const DenseState& state, const DenseCombo& combo, double eps_ker) {
    ComplexVector out = ComplexVector::Zero(state.amplitudes.size());
    for (const auto& [qubits, weight] : combo.terms) {
        if (qubits.empty()) continue;
        DenseOperator k = dense_modular_hamiltonian(reduced_density(state, qubits), eps_ker);
        out += weight * apply_operator(state, k);
    }
    return out;
}

} // namespace

double dense_combo_mean(const DenseState& state, const DenseCombo& combo, double eps_ker) {
    const ComplexVector v = apply_combo(state, combo, eps_ker);
    return state.amplitudes.dot(v).real();
}

std::complex<double> dense_combo_moment(const DenseState& state, const DenseCombo& c1,
                                        const DenseCombo& c2, double eps_ker) {
    const ComplexVector v1 = apply_combo(state, c1, eps_ker);
    const ComplexVector v2 = apply_combo(state, c2, eps_ker);
    return v1.dot(v2);
}

double dense_combo_variance(const DenseState& state, const DenseCombo& combo, double eps_ker) {
    const ComplexVector v = apply_combo(state, combo, eps_ker);
    const double second = v.squaredNorm();
    const double first = state.amplitudes.dot(v).real();
    return second - first * first;
}

DenseBackend::DenseBackend(DenseState state, std::vector<std::vector<int>> site_qubits,
                           double eps_ker)
    : state_(std::move(state)), site_qubits_(std::move(site_qubits)), eps_ker_(eps_ker) {
    state_.check_normalized(1e-10);
}

std::vector<int> DenseBackend::qubits_of(const Region& region) const {
    std::vector<int> qubits;
    for (int s : region.sites) {
        require(s >= 0 && s < site_count(), "unknown-subsystem",
                "site " + std::to_string(s) + " not in the backend");
        qubits.insert(qubits.end(), site_qubits_[s].begin(), site_qubits_[s].end());
    }
    std::sort(qubits.begin(), qubits.end());
    return qubits;
}

DenseCombo DenseBackend::lower(const ModularCombo& combo) const {
    DenseCombo out;
    for (const auto& [region, weight] : combo.terms)
        out.terms.emplace_back(qubits_of(region), weight);
    return out;
}

double DenseBackend::entropy(const Region& region) const {
    if (region.empty()) return 0.0;
    return dense_entropy(reduced_density(state_, qubits_of(region)));
}

std::complex<double> DenseBackend::combo_moment(const ModularCombo& c1,
                                                const ModularCombo& c2) const {
    return dense_combo_moment(state_, lower(c1), lower(c2), eps_ker_);
}

double DenseBackend::combo_mean(const ModularCombo& combo) const {
    return dense_combo_mean(state_, lower(combo), eps_ker_);
}

} // namespace cruler
