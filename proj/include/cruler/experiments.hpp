#pragma once

#include <array>
#include <map>
#include <string>
#include <vector>

#include "cruler/backend.hpp"
#include "cruler/crossratio.hpp"
#include "cruler/lattice.hpp"
#include "cruler/ruler.hpp"

namespace cruler {

// For circle-type backends (CFT arcs, pair-state sites) the conformal
// ruler for intervals (a, b, c) is (A, empty, B, C, empty) with A, B, C
// the interval site runs themselves.
ConformalRuler circle_ruler(int n_sites, int start, int na, int nb, int nc);

// Every consecutive triple with na + nb + nc < n_sites. Degenerate
// entries (c = 0) keep their flags out of the table.
EtaTable build_circle_eta_table(const StateBackend& backend, int n_sites);

// ---- p+ip desk geometry on the rectangle --------------------------------

// Full-lattice five-partition for complement checks: A, B, C collar
// regions over three consecutive bottom-edge intervals, D the rest of the
// boundary collar, E the bulk core.
struct PerimeterPartition {
    Region A, B, C, D, E;
    std::array<int, 4> interval_starts; // endpoint ids 0..3 (a, b, c, d)
};

// cuts = four x coordinates 0 < x0 < x1 < x2 < x3 < width splitting the
// bottom edge; depth = collar thickness.
PerimeterPartition make_perimeter_partition(const Lattice& lattice,
                                            const std::array<int, 4>& cuts, int depth);

// The four complement-family rulers D(a,b,c), D(b,c,d), D(c,d,a), D(d,a,b).
std::array<ConformalRuler, 4> perimeter_rulers(const PerimeterPartition& partition);

// Seven-partite family over four bottom-edge intervals with bulk
// shoulders X (over a), Y (over b and c), Z (over d).
struct SevenPartiteFamily {
    SevenPartite parts;
    std::array<int, 5> xs; // the five x cuts
    int collar_depth = 0;
    int shoulder_depth = 0;
};

SevenPartiteFamily make_seven_partite(const Lattice& lattice, const std::array<int, 5>& xs,
                                      int collar_depth, int shoulder_depth);

// The five rulers D(a,b,c), D(b,c,d), D(ab,c,d), D(a,b,cd), D(a,bc,d).
std::array<ConformalRuler, 5> seven_partite_rulers(const SevenPartiteFamily& family);

// Eta table over endpoints e0..e4 of the seven-partite family, keyed so
// decomposition_check({0,1,2,3,4}) applies directly.
EtaTable seven_partite_eta_table(const StateBackend& backend,
                                 const SevenPartiteFamily& family);

// Bulk disk partitioned into three sectors meeting at the center,
// counterclockwise, for the bulk modular commutator.
struct BulkTriple {
    Region A, B, C;
};

BulkTriple make_bulk_commutator_triple(const Lattice& lattice, int x0, int y0, int size);

// Bulk A1 partition: C the central block, B and D the left and right
// halves of the surrounding frame of the same thickness.
struct BulkA1Partition {
    Region B, C, D;
};

BulkA1Partition make_bulk_a1_partition(const Lattice& lattice, int x0, int y0, int block);

} // namespace cruler
