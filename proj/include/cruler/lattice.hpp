#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "cruler/errors.hpp"

namespace cruler {

// Sorted set of site indices. All set operations preserve strict ordering.
struct Region {
    std::vector<int> sites;

    Region() = default;
    explicit Region(std::vector<int> sorted_unique) : sites(std::move(sorted_unique)) {}

    static Region from_unsorted(std::vector<int> s);

    bool empty() const { return sites.empty(); }
    std::size_t size() const { return sites.size(); }
    bool contains(int site) const;

    bool operator==(const Region& other) const { return sites == other.sites; }
    bool operator<(const Region& other) const { return sites < other.sites; }
};

Region region_union(const Region& a, const Region& b);
Region region_difference(const Region& a, const Region& b);
Region region_intersection(const Region& a, const Region& b);
bool regions_disjoint(const Region& a, const Region& b);
bool region_subset(const Region& inner, const Region& outer);

// Rectangular lattice with open boundaries on all four sides, row-major
// site indexing: site(x, y) = y * width + x.
class Lattice {
  public:
    Lattice(int width, int height);

    int width() const { return width_; }
    int height() const { return height_; }
    int site_count() const { return width_ * height_; }

    int site(int x, int y) const;
    int x_of(int site) const { return site % width_; }
    int y_of(int site) const { return site / width_; }

    std::vector<int> neighbors(int site) const;
    bool is_boundary(int site) const;

    // Perimeter sites in counterclockwise order starting at (0, 0):
    // bottom row left to right, right column upward, top row right to
    // left, left column downward.
    const std::vector<int>& boundary_cycle() const { return boundary_cycle_; }
    int boundary_position(int site) const; // -1 if not a boundary site

    Region all_sites() const;
    Region complement(const Region& r) const;

  private:
    int width_ = 0;
    int height_ = 0;
    std::vector<int> boundary_cycle_;
    std::vector<int> boundary_position_; // site -> index in cycle, -1 in bulk
};

Lattice build_square_lattice(int width, int height);

// Inclusive rectangle [x0, x1] x [y0, y1].
Region region_from_rect(const Lattice& lattice, int x0, int y0, int x1, int y1);

// Contiguous arc of the boundary cycle, [begin, end) in cycle positions
// (wraps modulo the cycle length).
struct EdgeInterval {
    std::string label;
    std::pair<int, int> endpoints; // positions in the boundary cycle
    Region anchored_region;        // boundary sites of the arc
};

EdgeInterval edge_interval(const Lattice& lattice, const std::string& label,
                           int begin_position, int end_position);

struct ConformalRuler {
    Region A, A_prime, B, C, C_prime;
    std::array<std::string, 3> edge_triple; // labels of (a, b, c)

    Region union_all() const;
};

struct RulerCheck {
    std::string name;
    bool pass = false;
    std::vector<int> offending_sites;
};

struct RulerValidation {
    std::vector<RulerCheck> checks;
    bool all_pass() const;
    std::string summary() const;
};

// Checks the ruler invariants: pairwise disjointness, edge-connectivity
// of the union, A/C non-adjacency, shielding of B, and (when the edge
// intervals are supplied) that A, B, C meet the boundary exactly on
// their anchored intervals and that the union touches no other
// boundary site.
RulerValidation validate_ruler(const Lattice& lattice, const ConformalRuler& ruler,
                               const std::map<std::string, EdgeInterval>* intervals = nullptr);

struct BulkMove {
    enum class Kind { transfer, grow, shrink };
    Kind kind = Kind::transfer;
    std::string source; // region label among A, A', B, C, C' (unused for grow)
    std::string target; // unused for shrink
    Region moved;
};

// Applies a bulk deformation and re-validates. Moves that touch the
// boundary or break any ruler invariant raise invalid-move.
ConformalRuler deform_ruler(const Lattice& lattice, const ConformalRuler& ruler,
                            const BulkMove& move,
                            const std::map<std::string, EdgeInterval>* intervals = nullptr);

} // namespace cruler
