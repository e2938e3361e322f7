#include "cruler/pairstates.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace cruler {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.6931471805599453;

double binary_entropy(double p) {
    double s = 0.0;
    if (p > 0.0) s -= p * std::log(p);
    if (p < 1.0) s -= (1.0 - p) * std::log(1.0 - p);
    return s;
}

} // namespace

BondLayout build_bond_layout(int n_half) {
    require(n_half >= 2, "invalid-layout", "need at least 4 sites on the circle");
    BondLayout layout;
    layout.n_half = n_half;
    const int n_sites = layout.n_sites();
    const int per_site = layout.qubits_per_site();

    // Local qubit slots on site i: 2(k-1) for the bond to i+k, 2(k-1)+1
    // for the bond to i-k (k = 1..N-1), and slot 2N-2 for the diametral.
    auto qubit = [per_site](int site, int slot) { return site * per_site + slot; };

    for (int k = 1; k < n_half; ++k) {
        for (int i = 0; i < n_sites; ++i) {
            const int j = (i + k) % n_sites;
            Bond b;
            b.site_a = i;
            b.site_b = j;
            b.separation = k;
            b.qubit_a = qubit(i, 2 * (k - 1));
            b.qubit_b = qubit(j, 2 * (k - 1) + 1);
            layout.bonds.push_back(b);
        }
    }
    for (int i = 0; i < n_half; ++i) {
        const int j = i + n_half;
        Bond b;
        b.site_a = i;
        b.site_b = j;
        b.separation = n_half;
        b.qubit_a = qubit(i, per_site - 1);
        b.qubit_b = qubit(j, per_site - 1);
        layout.bonds.push_back(b);
    }
    return layout;
}

ExoticWeights solve_exotic_weights(int n_half, double alpha, double beta) {
    require(n_half >= 2, "invalid-weights", "N must be at least 2");
    require(alpha > 0.0 && beta > 0.0, "invalid-weights", "alpha and beta must be positive");
    const int n = n_half;

    ExoticWeights w;
    w.alpha = alpha;
    w.beta = beta;
    w.chi.assign(n, 0.0);

    auto s = [n](int k) { return std::sin(k * kPi / (2.0 * n)); };
    for (int k = 2; k <= n; ++k)
        w.chi[k - 1] = alpha * std::log(s(k) / std::sqrt(s(k - 1) * s(k + 1)));
    double tail = 0.0;
    for (int k = 2; k <= n - 1; ++k) tail += 2.0 * w.chi[k - 1];
    tail += w.chi[n - 1];
    w.chi[0] = 0.5 * (beta - tail);

    // The weights must solve the interval-entropy system; residuals beyond
    // round-off mean a bug, not bad input.
    ExoticWeights dense = solve_exotic_weights_dense(n_half, alpha, beta);
    for (int k = 0; k < n; ++k)
        require(std::abs(w.chi[k] - dense.chi[k]) < 1e-10, "invalid-weights",
                "closed form disagrees with the dense linear solve");

    w.valid = true;
    for (int k = 0; k < n; ++k)
        if (!(w.chi[k] > 0.0 && w.chi[k] <= kLn2 + 1e-12)) w.valid = false;
    require(w.valid, "invalid-weights",
            "some bond strength falls outside (0, ln 2]; pick different (alpha, beta)");
    return w;
}

ExoticWeights solve_exotic_weights_dense(int n_half, double alpha, double beta) {
    require(n_half >= 2, "invalid-weights", "N must be at least 2");
    const int n = n_half;

    // S(l_m) = sum_{k<m} 2k chi_k + sum_{k=m..N-1} 2m chi_k + m chi_N
    //        = alpha ln(l_m / l_1) + beta,  l_m = 2 sin(m pi / 2N).
    Eigen::MatrixXd a(n, n);
    Eigen::VectorXd rhs(n);
    for (int m = 1; m <= n; ++m) {
        for (int k = 1; k <= n - 1; ++k) a(m - 1, k - 1) = 2.0 * std::min(m, k);
        a(m - 1, n - 1) = m;
        const double chord_ratio = std::sin(m * kPi / (2.0 * n)) / std::sin(kPi / (2.0 * n));
        rhs(m - 1) = alpha * std::log(chord_ratio) + beta;
    }
    Eigen::VectorXd chi = a.fullPivLu().solve(rhs);

    ExoticWeights w;
    w.alpha = alpha;
    w.beta = beta;
    w.chi.assign(chi.data(), chi.data() + n);
    w.valid = true;
    for (double c : w.chi)
        if (!(c > 0.0 && c <= kLn2 + 1e-12)) w.valid = false;
    return w;
}

double chi_to_p(double chi) {
    require(chi >= 0.0 && chi <= kLn2 + 1e-12, "chi-out-of-range",
            "bond strength must lie in [0, ln 2]");
    if (chi <= 0.0) return 0.0;
    if (chi >= kLn2) return 0.5;
    double lo = 0.0, hi = 0.5;
    while (hi - lo > 1e-14) {
        const double mid = 0.5 * (lo + hi);
        (binary_entropy(mid) < chi ? lo : hi) = mid;
    }
    return 0.5 * (lo + hi);
}

PairState build_pair_state(const ExoticWeights& weights) {
    require(weights.valid, "invalid-weights", "cannot build a state from invalid weights");
    PairState state;
    state.layout = build_bond_layout(static_cast<int>(weights.chi.size()));
    state.chi_of_separation = weights.chi;
    state.p_of_separation.clear();
    for (double chi : weights.chi) state.p_of_separation.push_back(chi_to_p(chi));
    return state;
}

PairState build_flat_pair_state(int n_half) {
    PairState state;
    state.layout = build_bond_layout(n_half);
    state.p_of_separation.assign(n_half, 0.5);
    state.chi_of_separation.assign(n_half, kLn2);
    return state;
}

namespace {

// 0, 1 or 2 endpoints of the bond inside the site set.
int endpoints_inside(const Bond& b, const Region& region) {
    return (region.contains(b.site_a) ? 1 : 0) + (region.contains(b.site_b) ? 1 : 0);
}

} // namespace

double pairstate_entropy(const PairState& state, const Region& region) {
    double s = 0.0;
    for (const Bond& b : state.layout.bonds)
        if (endpoints_inside(b, region) == 1)
            s += state.chi_of_separation[b.separation - 1];
    return s;
}

double interval_entropy(const PairState& state, int start, int length) {
    const int n_sites = state.layout.n_sites();
    require(length >= 0 && length <= n_sites, "non-contiguous-interval",
            "interval length outside [0, sites]");
    std::vector<int> sites;
    for (int i = 0; i < length; ++i) sites.push_back(((start + i) % n_sites + n_sites) % n_sites);
    return pairstate_entropy(state, Region::from_unsorted(std::move(sites)));
}

std::vector<BondValues> bond_combination(const PairState& state, const ModularCombo& combo) {
    std::vector<BondValues> out(state.layout.bonds.size());
    for (std::size_t i = 0; i < state.layout.bonds.size(); ++i) {
        const Bond& b = state.layout.bonds[i];
        const double p = state.p_of_separation[b.separation - 1];
        double cut_weight = 0.0;
        for (const auto& [region, weight] : combo.terms)
            if (endpoints_inside(b, region) == 1) cut_weight += weight;
        out[i].p = p;
        out[i].v00 = cut_weight * (-std::log(p));
        out[i].v11 = cut_weight * (-std::log(1.0 - p));
    }
    return out;
}

PairMoments pair_mean_var(const PairState& state, const ModularCombo& c1,
                          const ModularCombo& c2) {
    const auto v1 = bond_combination(state, c1);
    const auto v2 = bond_combination(state, c2);
    PairMoments m;
    for (std::size_t i = 0; i < v1.size(); ++i) {
        const double p = v1[i].p;
        const double e1 = p * v1[i].v00 + (1.0 - p) * v1[i].v11;
        const double e2 = p * v2[i].v00 + (1.0 - p) * v2[i].v11;
        const double e12 = p * v1[i].v00 * v2[i].v00 + (1.0 - p) * v1[i].v11 * v2[i].v11;
        m.mean1 += e1;
        m.mean2 += e2;
        m.covariance += e12 - e1 * e2;
    }
    return m;
}

std::complex<double> PairBackend::combo_moment(const ModularCombo& c1,
                                               const ModularCombo& c2) const {
    PairMoments m = pair_mean_var(state_, c1, c2);
    return m.covariance + m.mean1 * m.mean2;
}

double PairBackend::combo_mean(const ModularCombo& combo) const {
    return pair_mean_var(state_, combo, combo).mean1;
}

} // namespace cruler
