#pragma once

#include <array>
#include <optional>
#include <string>
#include <vector>

#include "cruler/backend.hpp"
#include "cruler/lattice.hpp"

namespace cruler {

// Delta(D) = S_AA'B + S_CC'B - S_AA' - S_CC', I(D) = S_AB + S_BC - S_B - S_ABC.
// Both are non-negative by strong subadditivity; small negative noise is
// clamped, anything below -tol_ssa signals a backend bug.
struct EntropyCombo {
    double delta = 0.0;
    double i_cond = 0.0;
    double raw_delta = 0.0;
    double raw_i = 0.0;
};

inline constexpr double kTolSsa = 1e-8;

EntropyCombo combo_delta_I(const StateBackend& backend, const ConformalRuler& ruler,
                           double tol_ssa = kTolSsa);

struct CEtaSolution {
    enum class Degenerate { none, delta_zero, i_zero, both_zero };

    double c_tot = 0.0;
    std::optional<double> eta; // empty means eta-undetermined
    Degenerate degenerate = Degenerate::none;
};

// Unique root of exp(-Delta x) + exp(-I x) = 1; c = 6/x*, eta = exp(-Delta x*).
// Bracketing bisection plus Newton polish down to |f - 1| < 1e-14.
CEtaSolution solve_c_eta(const EntropyCombo& combo);

struct CEtaProperties {
    double tangent_identity = 0.0;   // |(Delta-I) eta + I - (c/6) h(eta)|
    double slope_identity = 0.0;     // |Delta - I - (c/6)(ln eta - ln(1-eta))|
    double upper_bound_margin = 0.0; // 3(Delta+I)/ln2 - c, >= 0 when the bound holds
    bool bound_holds = false;
};

CEtaProperties c_eta_properties(const EntropyCombo& combo, const CEtaSolution& solution);

// Operator combinations of a conformal ruler.
ModularCombo delta_hat_combo(const ConformalRuler& ruler);
ModularCombo i_hat_combo(const ConformalRuler& ruler);

// K_D(x) = x Delta_hat + (1-x) I_hat; shared regions merge with summed weights.
ModularCombo kd_combo(const ConformalRuler& ruler, double x);

// sqrt(<O^2> - <O>^2) for the combo on the backend state.
double sigma_of_combo(const StateBackend& backend, const ModularCombo& combo);

struct SigmaScan {
    std::vector<double> xs;
    std::vector<double> sigmas;
    double eta_k = 0.0;
    double sigma_min = 0.0;
    bool flat_minimum = false; // whole scan indistinguishable from zero
};

// Coarse grid on [0,1] followed by golden-section refinement to width 1e-6
// around the global grid minimum. Unimodality is not assumed.
SigmaScan find_eta_K(const StateBackend& backend, const ConformalRuler& ruler,
                     int grid_n = 101);

// sigma^2(K_D(x)) is a quadratic polynomial in x; returns (a, b, c) with
// sigma^2 = a x^2 + b x + c, computed from the three base moments.
std::array<double, 3> sigma_squared_polynomial(const StateBackend& backend,
                                               const ConformalRuler& ruler);

struct ChiralityReport {
    double j_outer = 0.0; // J(AA', B, CC')
    double j_inner = 0.0; // J(A, B, C)
    double j_bulk = 0.0;  // j_outer - j_inner, the inferred bulk commutator
    double c_minus = 0.0; // 3 j_bulk / pi
    double eta_j = 0.0;
};

inline constexpr double kChiralityThreshold = 0.05;

// Solves J(AA',B,CC') = (pi c_-/3)(1 - eta_J), J(A,B,C) = -(pi c_-/3) eta_J
// jointly. Raises nonchiral-state when |c_-| falls below the threshold.
ChiralityReport eta_J_pair(const StateBackend& backend, const ConformalRuler& ruler,
                           double threshold = kChiralityThreshold);

double modular_commutator(const StateBackend& backend, const Region& a, const Region& b,
                          const Region& c);

struct BulkA1Residual {
    double scalar = 0.0;                // Delta(B, C, D)
    std::optional<double> vector_sigma; // sigma(Delta_hat(B, C, D)), moments backends
};

BulkA1Residual bulk_a1_residual(const StateBackend& backend, const Lattice& lattice,
                                const Region& b, const Region& c, const Region& d);

struct DeformationResidual {
    double d_delta = 0.0;
    double d_i = 0.0;
};

DeformationResidual deformation_residual(const StateBackend& backend, const Lattice& lattice,
                                         const ConformalRuler& ruler, const BulkMove& move);

struct GenericityReport {
    double gram_det = 0.0;           // det of the normalized 3x3 Gram matrix
    double commutator = 0.0;         // i<[Delta_1, Delta_2]>
    double chiral_prediction = 0.0;  // (pi c_-/3)(1 - eta_1 - eta_2)
};

struct SevenPartite {
    Region A, X, B, Y, C, Z, D;
};

// Gram determinant of the normalized {Delta_1|psi>, Delta_2|psi>, |psi>}
// plus the commutator against the chiral prediction.
GenericityReport genericity_gram(const StateBackend& backend, const SevenPartite& parts,
                                 double c_minus, double eta1, double eta2);

} // namespace cruler
