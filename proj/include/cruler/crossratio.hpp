#pragma once

#include <array>
#include <map>
#include <optional>
#include <vector>

#include "cruler/errors.hpp"

namespace cruler {

// A triple of consecutive edge intervals is identified by four endpoint
// ids walking the edge: (start of a, start of b, start of c, end of c).
// Reversing the triple reverses the key; both orders share one entry.
using TripleKey = std::array<int, 4>;

struct EtaEntry {
    double eta = 0.0;
    double c_tot = 0.0;
};

class EtaTable {
  public:
    explicit EtaTable(int n_endpoints = 0) : n_endpoints_(n_endpoints) {}

    int n_endpoints() const { return n_endpoints_; }

    void put(const TripleKey& key, double eta, double c_tot);
    const EtaEntry& at(const TripleKey& key) const;
    bool has(const TripleKey& key) const;
    const std::map<TripleKey, EtaEntry>& entries() const { return entries_; }

    static TripleKey canonical(const TripleKey& key);

  private:
    int n_endpoints_ = 0;
    std::map<TripleKey, EtaEntry> entries_;
};

// Endpoint angles on the round circle, increasing counterclockwise after
// the anchor.
struct CircleEmbedding {
    std::vector<double> angles; // endpoint id -> theta in [0, 2pi)
};

double chord_length(double theta_u, double theta_v);

// eta_g = (l_a l_c) / (l_ab l_bc) from the embedding angles.
double geometric_cross_ratio(const CircleEmbedding& embedding, const TripleKey& triple);

struct ComplementDeviation {
    double max_eta = 0.0;
    double max_c = 0.0;
};

// Four intervals tiling the closed edge, given by their four start
// endpoints in order: checks eta(a,b,c) = 1-eta(b,c,d) = eta(c,d,a) =
// 1-eta(d,a,b) and equality of the four c_tot values.
ComplementDeviation complement_check(const EtaTable& table, const std::array<int, 4>& starts);

struct DecompositionPrediction {
    double eta_ab_c_d = 0.0;
    double eta_a_b_cd = 0.0;
    double eta_a_bc_d = 0.0;
};

DecompositionPrediction decomposition_predict(double eta1, double eta2);

struct DecompositionDeviation {
    double dev_ab_c_d = 0.0;
    double dev_a_b_cd = 0.0;
    double dev_a_bc_d = 0.0;
    double max() const;
};

// Five-ruler family over four consecutive intervals with endpoints
// e0 < e1 < e2 < e3 < e4 along the edge (cyclically for closed edges).
DecompositionDeviation decomposition_check(const EtaTable& table,
                                           const std::array<int, 5>& endpoints);

struct ConstantCReport {
    double max = 0.0;
    double min = 0.0;
    double spread = 0.0;
    int entries = 0;
};

ConstantCReport constant_c_check(const EtaTable& table);

// Constructive edge-to-circle map: three anchor angles placed freely, every
// further endpoint solved from the [1,1,1] cross-ratio by monotone
// bisection in the next angle. The table must cover all [1,1,1] triples of
// the n_endpoints-partition. Inconsistent tables (empty bisection bracket)
// are rejected.
CircleEmbedding circle_embed(const EtaTable& table,
                             const std::array<double, 3>& anchor_angles = {0.0, 2.0943951023931953,
                                                                           4.1887902047863905},
                             bool allow_degenerate = false);

// Max |eta - eta_g| over every stored triple, wrap-around included.
double verify_embedding(const CircleEmbedding& embedding, const EtaTable& table);

} // namespace cruler
