#include "cruler/crossratio.hpp"

#include <algorithm>
#include <cmath>

namespace cruler {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

std::string key_string(const TripleKey& key) {
    return "(" + std::to_string(key[0]) + "," + std::to_string(key[1]) + "," +
           std::to_string(key[2]) + "," + std::to_string(key[3]) + ")";
}

} // namespace

TripleKey EtaTable::canonical(const TripleKey& key) {
    TripleKey reversed = {key[3], key[2], key[1], key[0]};
    return std::min(key, reversed);
}

void EtaTable::put(const TripleKey& key, double eta, double c_tot) {
    entries_[canonical(key)] = EtaEntry{eta, c_tot};
}

bool EtaTable::has(const TripleKey& key) const {
    return entries_.count(canonical(key)) > 0;
}

const EtaEntry& EtaTable::at(const TripleKey& key) const {
    auto it = entries_.find(canonical(key));
    require(it != entries_.end(), "missing-entry", "no eta entry for triple " + key_string(key));
    return it->second;
}

double chord_length(double theta_u, double theta_v) {
    return 2.0 * std::abs(std::sin(0.5 * (theta_v - theta_u)));
}

double geometric_cross_ratio(const CircleEmbedding& embedding, const TripleKey& triple) {
    for (int e : triple)
        require(e >= 0 && e < static_cast<int>(embedding.angles.size()), "missing-entry",
                "endpoint " + std::to_string(e) + " not embedded");
    const double t0 = embedding.angles[triple[0]];
    const double t1 = embedding.angles[triple[1]];
    const double t2 = embedding.angles[triple[2]];
    const double t3 = embedding.angles[triple[3]];
    const double la = chord_length(t0, t1);
    const double lc = chord_length(t2, t3);
    const double lab = chord_length(t0, t2);
    const double lbc = chord_length(t1, t3);
    require(lab > 0.0 && lbc > 0.0, "coincident-endpoints",
            "degenerate chord in the cross-ratio");
    return (la * lc) / (lab * lbc);
}

ComplementDeviation complement_check(const EtaTable& table, const std::array<int, 4>& starts) {
    const auto& [a, b, c, d] = starts;
    const EtaEntry abc = table.at({a, b, c, d});
    const EtaEntry bcd = table.at({b, c, d, a});
    const EtaEntry cda = table.at({c, d, a, b});
    const EtaEntry dab = table.at({d, a, b, c});

    ComplementDeviation out;
    out.max_eta = std::max({std::abs(abc.eta - (1.0 - bcd.eta)),
                            std::abs(abc.eta - cda.eta),
                            std::abs(abc.eta - (1.0 - dab.eta))});
    out.max_c = std::max({std::abs(abc.c_tot - bcd.c_tot), std::abs(abc.c_tot - cda.c_tot),
                          std::abs(abc.c_tot - dab.c_tot)});
    return out;
}

DecompositionPrediction decomposition_predict(double eta1, double eta2) {
    require(eta1 > 0.0 && eta1 < 1.0 && eta2 > 0.0 && eta2 < 1.0, "input-at-endpoint",
            "decomposition inputs must lie strictly inside (0, 1)");
    DecompositionPrediction out;
    out.eta_ab_c_d = eta2 / (1.0 - eta1);
    out.eta_a_b_cd = eta1 / (1.0 - eta2);
    out.eta_a_bc_d = out.eta_ab_c_d * out.eta_a_b_cd;
    return out;
}

double DecompositionDeviation::max() const {
    return std::max({dev_ab_c_d, dev_a_b_cd, dev_a_bc_d});
}

DecompositionDeviation decomposition_check(const EtaTable& table,
                                           const std::array<int, 5>& endpoints) {
    const auto& [e0, e1, e2, e3, e4] = endpoints;
    const double eta1 = table.at({e0, e1, e2, e3}).eta;
    const double eta2 = table.at({e1, e2, e3, e4}).eta;
    const DecompositionPrediction pred = decomposition_predict(eta1, eta2);

    DecompositionDeviation out;
    out.dev_ab_c_d = std::abs(table.at({e0, e2, e3, e4}).eta - pred.eta_ab_c_d);
    out.dev_a_b_cd = std::abs(table.at({e0, e1, e2, e4}).eta - pred.eta_a_b_cd);
    out.dev_a_bc_d = std::abs(table.at({e0, e1, e3, e4}).eta - pred.eta_a_bc_d);
    return out;
}

ConstantCReport constant_c_check(const EtaTable& table) {
    ConstantCReport out;
    bool first = true;
    for (const auto& [key, entry] : table.entries()) {
        if (entry.c_tot <= 0.0) continue;
        if (first) {
            out.max = out.min = entry.c_tot;
            first = false;
        } else {
            out.max = std::max(out.max, entry.c_tot);
            out.min = std::min(out.min, entry.c_tot);
        }
        ++out.entries;
    }
    require(out.entries >= 2, "all-degenerate",
            "constant-c check needs at least two non-degenerate entries");
    out.spread = out.max - out.min;
    return out;
}

CircleEmbedding circle_embed(const EtaTable& table, const std::array<double, 3>& anchor_angles,
                             bool allow_degenerate) {
    const int n = table.n_endpoints();
    require(n >= 4, "missing-entry", "circle embedding needs at least 4 endpoints");

    CircleEmbedding out;
    out.angles.assign(n, 0.0);
    out.angles[0] = anchor_angles[0];
    out.angles[1] = anchor_angles[1];
    out.angles[2] = anchor_angles[2];
    require(anchor_angles[1] > anchor_angles[0] && anchor_angles[2] > anchor_angles[1] &&
                anchor_angles[2] < anchor_angles[0] + kTwoPi,
            "inconsistent-table", "anchor angles must increase counterclockwise");

    // Place endpoint j from the [1,1,1] triple (j-3, j-2, j-1).
    for (int j = 3; j < n; ++j) {
        const TripleKey key = {j - 3, j - 2, j - 1, j};
        const double eta = table.at(key).eta;
        if (allow_degenerate && (eta <= 0.0 || eta >= 1.0)) {
            out.angles[j] = (eta <= 0.0) ? out.angles[j - 1]
                                         : anchor_angles[0] + kTwoPi - 1e-12;
            continue;
        }
        require(eta > 0.0 && eta < 1.0, "inconsistent-table",
                "eta outside (0,1) for triple " + std::to_string(j - 3) + ".." +
                    std::to_string(j));

        const double t0 = out.angles[j - 3];
        const double t1 = out.angles[j - 2];
        const double t2 = out.angles[j - 1];
        const double la = chord_length(t0, t1);
        const double lab = chord_length(t0, t2);

        // eta_g(theta) = la * sin((theta - t2)/2) / (lab * sin((theta - t1)/2)),
        // strictly increasing in theta on the open bracket.
        auto eta_g = [&](double theta) {
            return la * std::abs(std::sin(0.5 * (theta - t2))) /
                   (lab * std::abs(std::sin(0.5 * (theta - t1))));
        };
        double lo = t2 + 1e-12;
        double hi = anchor_angles[0] + kTwoPi - 1e-12;
        require(hi > lo, "inconsistent-table", "no room left on the circle");
        require(eta_g(lo) < eta_g(hi), "inconsistent-table",
                "cross-ratio not monotone on the bracket");
        require(eta_g(lo) <= eta && eta <= eta_g(hi), "inconsistent-table",
                "bisection bracket does not contain the target cross-ratio");
        for (int iter = 0; iter < 100; ++iter) {
            const double mid = 0.5 * (lo + hi);
            (eta_g(mid) < eta ? lo : hi) = mid;
        }
        out.angles[j] = 0.5 * (lo + hi);
    }
    return out;
}

double verify_embedding(const CircleEmbedding& embedding, const EtaTable& table) {
    double max_dev = 0.0;
    for (const auto& [key, entry] : table.entries()) {
        const double eta_g = geometric_cross_ratio(embedding, key);
        max_dev = std::max(max_dev, std::abs(entry.eta - eta_g));
    }
    return max_dev;
}

} // namespace cruler
