#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "cruler/lattice.hpp"

using namespace cruler;

TEST_CASE("square lattice basics") {
    Lattice lat = build_square_lattice(4, 4);
    CHECK(lat.site_count() == 16);
    CHECK(lat.neighbors(lat.site(0, 0)).size() == 2);
    CHECK(lat.neighbors(lat.site(1, 1)).size() == 4);
    CHECK(lat.neighbors(lat.site(1, 0)).size() == 3);

    Lattice desk = build_square_lattice(24, 12);
    CHECK(desk.site_count() == 288);

    CHECK_THROWS_WITH_AS(build_square_lattice(3, 8), doctest::Contains("dimension-too-small"),
                         Error);
}

TEST_CASE("row-major indexing is a bijection") {
    Lattice lat = build_square_lattice(5, 7);
    std::vector<bool> seen(lat.site_count(), false);
    for (int y = 0; y < lat.height(); ++y)
        for (int x = 0; x < lat.width(); ++x) {
            int s = lat.site(x, y);
            CHECK(!seen[s]);
            seen[s] = true;
            CHECK(lat.x_of(s) == x);
            CHECK(lat.y_of(s) == y);
        }
}

TEST_CASE("boundary cycle is the full perimeter, counterclockwise") {
    Lattice lat = build_square_lattice(5, 4);
    const auto& cycle = lat.boundary_cycle();
    CHECK(cycle.size() == 2 * (5 + 4) - 4);
    CHECK(cycle.front() == lat.site(0, 0));
    CHECK(cycle[1] == lat.site(1, 0));
    CHECK(cycle[5] == lat.site(4, 1));
    for (std::size_t i = 0; i < cycle.size(); ++i) CHECK(lat.is_boundary(cycle[i]));
    // positions invert the cycle
    for (std::size_t i = 0; i < cycle.size(); ++i)
        CHECK(lat.boundary_position(cycle[i]) == static_cast<int>(i));
}

TEST_CASE("rect regions and set arithmetic") {
    Lattice lat = build_square_lattice(6, 6);
    Region full = region_from_rect(lat, 0, 0, 5, 5);
    CHECK(full.size() == 36);

    Region cell = region_from_rect(lat, 2, 3, 2, 3);
    CHECK(cell.size() == 1);
    CHECK(cell.sites[0] == lat.site(2, 3));

    Region left = region_from_rect(lat, 0, 0, 1, 5);
    Region right = region_from_rect(lat, 4, 0, 5, 5);
    Region both = region_union(left, right);
    CHECK(both.size() == 24);
    CHECK(std::is_sorted(both.sites.begin(), both.sites.end()));
    CHECK(regions_disjoint(left, right));

    CHECK(region_union(lat.complement(both), both) == lat.all_sites());

    CHECK_THROWS_WITH_AS(region_from_rect(lat, 0, 0, 6, 2), doctest::Contains("out-of-bounds"),
                         Error);
}

namespace {

// Small dune-shaped partition near the bottom edge of a 12x8 lattice.
struct DuneFixture {
    Lattice lat = build_square_lattice(12, 8);
    ConformalRuler ruler;
    std::map<std::string, EdgeInterval> intervals;

    DuneFixture() {
        ruler.A = region_from_rect(lat, 1, 0, 3, 1);
        ruler.B = region_from_rect(lat, 4, 0, 7, 1);
        ruler.C = region_from_rect(lat, 8, 0, 10, 1);
        ruler.A_prime = region_from_rect(lat, 1, 2, 5, 3);
        ruler.C_prime = region_from_rect(lat, 6, 2, 10, 3);
        ruler.edge_triple = {"a", "b", "c"};
        intervals.emplace("a", edge_interval(lat, "a", 1, 4));
        intervals.emplace("b", edge_interval(lat, "b", 4, 8));
        intervals.emplace("c", edge_interval(lat, "c", 8, 11));
    }
};

} // namespace

TEST_CASE("dune-shaped ruler validates") {
    DuneFixture f;
    RulerValidation report = validate_ruler(f.lat, f.ruler, &f.intervals);
    INFO(report.summary());
    CHECK(report.all_pass());
}

TEST_CASE("A adjacent to C is flagged") {
    DuneFixture f;
    f.ruler.C = region_union(f.ruler.C, region_from_rect(f.lat, 4, 0, 4, 0));
    RulerValidation report = validate_ruler(f.lat, f.ruler);
    bool found = false;
    for (const auto& check : report.checks)
        if (check.name == "A-C-not-adjacent" && !check.pass) found = true;
    CHECK(found);
}

TEST_CASE("unshielded B is flagged with the offending site") {
    DuneFixture f;
    // poke a hole in A': B's neighbor (5, 2) leaves the cover
    f.ruler.A_prime = region_difference(f.ruler.A_prime,
                                        region_from_rect(f.lat, 5, 2, 5, 2));
    RulerValidation report = validate_ruler(f.lat, f.ruler);
    bool found = false;
    for (const auto& check : report.checks)
        if (check.name == "B-shielded" && !check.pass) {
            found = true;
            CHECK(!check.offending_sites.empty());
        }
    CHECK(found);
}

TEST_CASE("validate_ruler is pure") {
    DuneFixture f;
    auto r1 = validate_ruler(f.lat, f.ruler, &f.intervals);
    auto r2 = validate_ruler(f.lat, f.ruler, &f.intervals);
    CHECK(r1.summary() == r2.summary());
}

TEST_CASE("bulk deformations") {
    DuneFixture f;
    REQUIRE(validate_ruler(f.lat, f.ruler, &f.intervals).all_pass());

    SUBCASE("transfer a bulk site from A to B") {
        BulkMove move;
        move.kind = BulkMove::Kind::transfer;
        move.source = "A";
        move.target = "B";
        move.moved = region_from_rect(f.lat, 3, 1, 3, 1);
        ConformalRuler deformed = deform_ruler(f.lat, f.ruler, move, &f.intervals);
        CHECK(deformed.A.size() == f.ruler.A.size() - 1);
        CHECK(deformed.B.size() == f.ruler.B.size() + 1);
        CHECK(deformed.edge_triple == f.ruler.edge_triple);
    }

    SUBCASE("grow A' by an adjacent bulk site") {
        BulkMove move;
        move.kind = BulkMove::Kind::grow;
        move.target = "A'";
        move.moved = region_from_rect(f.lat, 1, 4, 1, 4);
        ConformalRuler deformed = deform_ruler(f.lat, f.ruler, move, &f.intervals);
        CHECK(deformed.A_prime.size() == f.ruler.A_prime.size() + 1);
    }

    SUBCASE("boundary site transfer is rejected") {
        BulkMove move;
        move.kind = BulkMove::Kind::transfer;
        move.source = "A";
        move.target = "B";
        move.moved = region_from_rect(f.lat, 3, 0, 3, 0);
        CHECK_THROWS_WITH_AS(deform_ruler(f.lat, f.ruler, move), doctest::Contains("invalid-move"),
                             Error);
    }

    SUBCASE("shrink that breaks shielding is rejected") {
        BulkMove move;
        move.kind = BulkMove::Kind::shrink;
        move.source = "A'";
        move.moved = region_from_rect(f.lat, 5, 2, 5, 2);
        CHECK_THROWS_WITH_AS(deform_ruler(f.lat, f.ruler, move), doctest::Contains("invalid-move"),
                             Error);
    }
}
