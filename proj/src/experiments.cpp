#include "cruler/experiments.hpp"

#include <cmath>

namespace cruler {

ConformalRuler circle_ruler(int n_sites, int start, int na, int nb, int nc) {
    require(na >= 1 && nb >= 1 && nc >= 1 && na + nb + nc < n_sites, "out-of-bounds",
            "circle ruler intervals must be nonempty and leave a complement");
    auto run = [n_sites](int s, int len) {
        std::vector<int> sites;
        for (int i = 0; i < len; ++i) sites.push_back(((s + i) % n_sites + n_sites) % n_sites);
        return Region::from_unsorted(std::move(sites));
    };
    ConformalRuler ruler;
    ruler.A = run(start, na);
    ruler.B = run(start + na, nb);
    ruler.C = run(start + na + nb, nc);
    ruler.edge_triple = {"a", "b", "c"};
    return ruler;
}

EtaTable build_circle_eta_table(const StateBackend& backend, int n_sites) {
    EtaTable table(n_sites);
    for (int start = 0; start < n_sites; ++start) {
        for (int na = 1; na < n_sites; ++na) {
            for (int nb = 1; na + nb < n_sites; ++nb) {
                for (int nc = 1; na + nb + nc < n_sites; ++nc) {
                    const TripleKey key = {start, (start + na) % n_sites,
                                           (start + na + nb) % n_sites,
                                           (start + na + nb + nc) % n_sites};
                    if (table.has(key)) continue;
                    const ConformalRuler ruler = circle_ruler(n_sites, start, na, nb, nc);
                    const CEtaSolution sol = solve_c_eta(combo_delta_I(backend, ruler));
                    if (sol.degenerate != CEtaSolution::Degenerate::none) continue;
                    table.put(key, *sol.eta, sol.c_tot);
                }
            }
        }
    }
    return table;
}

PerimeterPartition make_perimeter_partition(const Lattice& lattice,
                                            const std::array<int, 4>& cuts, int depth) {
    const int w = lattice.width();
    const int h = lattice.height();
    require(0 < cuts[0] && cuts[0] < cuts[1] && cuts[1] < cuts[2] && cuts[2] < cuts[3] &&
                cuts[3] < w,
            "out-of-bounds", "perimeter cuts must increase strictly inside the bottom edge");
    require(depth >= 1 && 2 * depth < h && depth < cuts[0], "out-of-bounds",
            "collar depth incompatible with the lattice");

    PerimeterPartition p;
    p.A = region_from_rect(lattice, cuts[0], 0, cuts[1] - 1, depth - 1);
    p.B = region_from_rect(lattice, cuts[1], 0, cuts[2] - 1, depth - 1);
    p.C = region_from_rect(lattice, cuts[2], 0, cuts[3] - 1, depth - 1);

    // D: every remaining site within `depth` of the perimeter; E: the core.
    std::vector<int> d_sites, e_sites;
    const Region abc = region_union(region_union(p.A, p.B), p.C);
    for (int y = 0; y < h; ++y) {
        for (int x = 0; x < w; ++x) {
            const int s = lattice.site(x, y);
            if (abc.contains(s)) continue;
            const int dist = std::min(std::min(x, w - 1 - x), std::min(y, h - 1 - y));
            (dist < depth ? d_sites : e_sites).push_back(s);
        }
    }
    p.D = Region::from_unsorted(std::move(d_sites));
    p.E = Region::from_unsorted(std::move(e_sites));
    p.interval_starts = {0, 1, 2, 3};
    return p;
}

std::array<ConformalRuler, 4> perimeter_rulers(const PerimeterPartition& p) {
    auto make = [](Region a, Region ap, Region b, Region c, Region cp,
                   std::array<std::string, 3> triple) {
        ConformalRuler r;
        r.A = std::move(a);
        r.A_prime = std::move(ap);
        r.B = std::move(b);
        r.C = std::move(c);
        r.C_prime = std::move(cp);
        r.edge_triple = std::move(triple);
        return r;
    };
    return {
        make(p.A, p.E, p.B, p.C, {}, {"a", "b", "c"}),
        make(p.B, {}, p.C, p.D, p.E, {"b", "c", "d"}),
        make(p.C, {}, p.D, p.A, p.E, {"c", "d", "a"}),
        make(p.D, {}, p.A, p.B, p.E, {"d", "a", "b"}),
    };
}

SevenPartiteFamily make_seven_partite(const Lattice& lattice, const std::array<int, 5>& xs,
                                      int collar_depth, int shoulder_depth) {
    const int w = lattice.width();
    const int h = lattice.height();
    require(0 < xs[0] && xs[0] < xs[1] && xs[1] < xs[2] && xs[2] < xs[3] && xs[3] < xs[4] &&
                xs[4] < w,
            "out-of-bounds", "seven-partite cuts must increase strictly inside the bottom edge");
    require(collar_depth >= 1 && shoulder_depth >= 1 &&
                collar_depth + shoulder_depth < h - 1,
            "out-of-bounds", "collar and shoulder depths incompatible with the lattice");

    const int d1 = collar_depth;
    const int d2 = collar_depth + shoulder_depth;
    SevenPartiteFamily f;
    f.xs = xs;
    f.collar_depth = collar_depth;
    f.shoulder_depth = shoulder_depth;
    f.parts.A = region_from_rect(lattice, xs[0], 0, xs[1] - 1, d1 - 1);
    f.parts.B = region_from_rect(lattice, xs[1], 0, xs[2] - 1, d1 - 1);
    f.parts.C = region_from_rect(lattice, xs[2], 0, xs[3] - 1, d1 - 1);
    f.parts.D = region_from_rect(lattice, xs[3], 0, xs[4] - 1, d1 - 1);
    f.parts.X = region_from_rect(lattice, xs[0], d1, xs[1] - 1, d2 - 1);
    f.parts.Y = region_from_rect(lattice, xs[1], d1, xs[3] - 1, d2 - 1);
    f.parts.Z = region_from_rect(lattice, xs[3], d1, xs[4] - 1, d2 - 1);
    return f;
}

std::array<ConformalRuler, 5> seven_partite_rulers(const SevenPartiteFamily& f) {
    const SevenPartite& p = f.parts;
    auto make = [](Region a, Region ap, Region b, Region c, Region cp,
                   std::array<std::string, 3> triple) {
        ConformalRuler r;
        r.A = std::move(a);
        r.A_prime = std::move(ap);
        r.B = std::move(b);
        r.C = std::move(c);
        r.C_prime = std::move(cp);
        r.edge_triple = std::move(triple);
        return r;
    };
    return {
        make(p.A, p.X, p.B, p.C, p.Y, {"a", "b", "c"}),
        make(p.B, p.Y, p.C, p.D, p.Z, {"b", "c", "d"}),
        make(region_union(p.A, p.B), region_union(p.X, p.Y), p.C, p.D, p.Z,
             {"ab", "c", "d"}),
        make(p.A, p.X, p.B, region_union(p.C, p.D), region_union(p.Y, p.Z),
             {"a", "b", "cd"}),
        make(p.A, region_union(p.X, p.Y), region_union(p.B, p.C), p.D, p.Z,
             {"a", "bc", "d"}),
    };
}

EtaTable seven_partite_eta_table(const StateBackend& backend, const SevenPartiteFamily& f) {
    EtaTable table(0);
    const auto rulers = seven_partite_rulers(f);
    const std::array<TripleKey, 5> keys = {
        TripleKey{0, 1, 2, 3}, TripleKey{1, 2, 3, 4}, TripleKey{0, 2, 3, 4},
        TripleKey{0, 1, 2, 4}, TripleKey{0, 1, 3, 4}};
    for (int i = 0; i < 5; ++i) {
        const CEtaSolution sol = solve_c_eta(combo_delta_I(backend, rulers[i]));
        require(sol.degenerate == CEtaSolution::Degenerate::none, "all-degenerate",
                "degenerate c on a seven-partite ruler");
        table.put(keys[i], *sol.eta, sol.c_tot);
    }
    return table;
}

BulkTriple make_bulk_commutator_triple(const Lattice& lattice, int x0, int y0, int size) {
    require(size >= 2, "out-of-bounds", "bulk triple needs a block of at least 2x2");
    require(x0 >= 1 && y0 >= 1 && x0 + size <= lattice.width() - 1 &&
                y0 + size <= lattice.height() - 1,
            "region-touches-boundary", "bulk triple block must stay off the boundary");

    // Sector order is pinned so that J(A, B, C) comes out positive on the
    // p+ip ground state with the default vector potential (the traversal
    // orientation is a labeling gauge; this matches the sign the bulk
    // formula J = pi c_- / 3 reports with c_- = +1/2).
    const double cx = x0 + 0.5 * (size - 1);
    const double cy = y0 + 0.5 * (size - 1);
    std::vector<int> a, b, c;
    for (int y = y0; y < y0 + size; ++y) {
        for (int x = x0; x < x0 + size; ++x) {
            double angle = std::atan2(y - cy, x - cx);
            if (angle < 0.0) angle += 2.0 * 3.14159265358979323846;
            const double third = 2.0 * 3.14159265358979323846 / 3.0;
            const int sector = std::min(2, static_cast<int>(angle / third));
            const int s = lattice.site(x, y);
            (sector == 0 ? a : (sector == 1 ? c : b)).push_back(s);
        }
    }
    return BulkTriple{Region::from_unsorted(std::move(a)), Region::from_unsorted(std::move(b)),
                      Region::from_unsorted(std::move(c))};
}

BulkA1Partition make_bulk_a1_partition(const Lattice& lattice, int x0, int y0, int block) {
    require(block >= 1, "out-of-bounds", "bulk A1 needs a positive block size");
    const int side = 3 * block;
    require(x0 >= 1 && y0 >= 1 && x0 + side <= lattice.width() - 1 &&
                y0 + side <= lattice.height() - 1,
            "region-touches-boundary", "bulk A1 block must stay off the boundary");

    const Region center =
        region_from_rect(lattice, x0 + block, y0 + block, x0 + 2 * block - 1, y0 + 2 * block - 1);
    const double cx = x0 + 0.5 * (side - 1);
    std::vector<int> left, right;
    for (int y = y0; y < y0 + side; ++y) {
        for (int x = x0; x < x0 + side; ++x) {
            const int s = lattice.site(x, y);
            if (center.contains(s)) continue;
            (x < cx ? left : right).push_back(s);
        }
    }
    return BulkA1Partition{Region::from_unsorted(std::move(left)), center,
                           Region::from_unsorted(std::move(right))};
}

} // namespace cruler
