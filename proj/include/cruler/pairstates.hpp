#pragma once

#include <vector>

#include "cruler/backend.hpp"

namespace cruler {

// Entangled-pair arrangement on a circle of 2N sites, 2N-1 qubits per
// site: one bond of separation k to each of i+k and i-k for k < N, and a
// single diametral bond (k = N).
struct Bond {
    int qubit_a = 0;
    int qubit_b = 0;
    int site_a = 0;
    int site_b = 0;
    int separation = 0;
};

struct BondLayout {
    int n_half = 0; // N; the circle has 2N sites
    std::vector<Bond> bonds;

    int n_sites() const { return 2 * n_half; }
    int qubits_per_site() const { return 2 * n_half - 1; }
    int n_qubits() const { return n_sites() * qubits_per_site(); }
};

BondLayout build_bond_layout(int n_half);

// Each bond of separation k holds sqrt(p_k)|00> + sqrt(1-p_k)|11>, with
// bond strength chi_k = h(p_k).
struct PairState {
    BondLayout layout;
    std::vector<double> p_of_separation;   // index k-1, k = 1..N
    std::vector<double> chi_of_separation; // h(p_k)
};

struct ExoticWeights {
    double alpha = 0.0;
    double beta = 0.0;
    std::vector<double> chi; // chi_1..chi_N, nats
    bool valid = false;      // all chi in (0, ln 2]
};

// Bond strengths that give every n-consecutive-site interval the entropy
// alpha*ln(l_n/l_1) + beta with chord length l_n = 2 sin(n pi / 2N).
// Closed form cross-checked against a dense solve of the linear system.
ExoticWeights solve_exotic_weights(int n_half, double alpha, double beta);

// Independent route: assemble and solve the N x N linear system directly.
ExoticWeights solve_exotic_weights_dense(int n_half, double alpha, double beta);

// Inverts the binary entropy on (0, 1/2] by bisection.
double chi_to_p(double chi);

PairState build_pair_state(const ExoticWeights& weights);
PairState build_flat_pair_state(int n_half); // all p = 1/2

// Exact entropy of a contiguous arc [start, start+length): the sum of chi
// over bonds cut by the arc boundary.
double interval_entropy(const PairState& state, int start, int length);

// Entropy of an arbitrary site set (the state is a product of pairs, so
// cut-bond counting is exact for any region).
double pairstate_entropy(const PairState& state, const Region& region);

// Per-bond diagonal values of a weighted modular combination: the pair
// (value-if-00, value-if-11), occurring with probabilities (p, 1-p).
struct BondValues {
    double v00 = 0.0;
    double v11 = 0.0;
    double p = 0.5;
};

std::vector<BondValues> bond_combination(const PairState& state, const ModularCombo& combo);

struct PairMoments {
    double mean1 = 0.0;
    double mean2 = 0.0;
    double covariance = 0.0;
};

// Exact moments; bonds are independent and all combos mutually diagonal.
PairMoments pair_mean_var(const PairState& state, const ModularCombo& c1,
                          const ModularCombo& c2);

class PairBackend : public StateBackend {
  public:
    explicit PairBackend(PairState state) : state_(std::move(state)) {}

    int site_count() const override { return state_.layout.n_sites(); }
    double entropy(const Region& region) const override {
        return pairstate_entropy(state_, region);
    }
    bool has_moments() const override { return true; }
    std::complex<double> combo_moment(const ModularCombo& c1,
                                      const ModularCombo& c2) const override;
    double combo_mean(const ModularCombo& combo) const override;

    const PairState& state() const { return state_; }

  private:
    PairState state_;
};

} // namespace cruler
