#include "cruler/lattice.hpp"

#include <algorithm>
#include <queue>
#include <set>
#include <sstream>

namespace cruler {

Region Region::from_unsorted(std::vector<int> s) {
    std::sort(s.begin(), s.end());
    s.erase(std::unique(s.begin(), s.end()), s.end());
    return Region(std::move(s));
}

bool Region::contains(int site) const {
    return std::binary_search(sites.begin(), sites.end(), site);
}

Region region_union(const Region& a, const Region& b) {
    Region out;
    out.sites.reserve(a.size() + b.size());
    std::set_union(a.sites.begin(), a.sites.end(), b.sites.begin(), b.sites.end(),
                   std::back_inserter(out.sites));
    return out;
}

Region region_difference(const Region& a, const Region& b) {
    Region out;
    std::set_difference(a.sites.begin(), a.sites.end(), b.sites.begin(), b.sites.end(),
                        std::back_inserter(out.sites));
    return out;
}

Region region_intersection(const Region& a, const Region& b) {
    Region out;
    std::set_intersection(a.sites.begin(), a.sites.end(), b.sites.begin(), b.sites.end(),
                          std::back_inserter(out.sites));
    return out;
}

bool regions_disjoint(const Region& a, const Region& b) {
    return region_intersection(a, b).empty();
}

bool region_subset(const Region& inner, const Region& outer) {
    return std::includes(outer.sites.begin(), outer.sites.end(),
                         inner.sites.begin(), inner.sites.end());
}

Lattice::Lattice(int width, int height) : width_(width), height_(height) {
    require(width >= 4 && height >= 4, "dimension-too-small",
            "lattice must be at least 4x4, got " + std::to_string(width) + "x" +
                std::to_string(height));
    // Counterclockwise perimeter walk from (0, 0), y axis pointing up.
    for (int x = 0; x < width_; ++x) boundary_cycle_.push_back(site(x, 0));
    for (int y = 1; y < height_; ++y) boundary_cycle_.push_back(site(width_ - 1, y));
    for (int x = width_ - 2; x >= 0; --x) boundary_cycle_.push_back(site(x, height_ - 1));
    for (int y = height_ - 2; y >= 1; --y) boundary_cycle_.push_back(site(0, y));

    boundary_position_.assign(site_count(), -1);
    for (std::size_t i = 0; i < boundary_cycle_.size(); ++i)
        boundary_position_[boundary_cycle_[i]] = static_cast<int>(i);
}

int Lattice::site(int x, int y) const {
    require(x >= 0 && x < width_ && y >= 0 && y < height_, "out-of-bounds",
            "site (" + std::to_string(x) + "," + std::to_string(y) + ") outside lattice");
    return y * width_ + x;
}

std::vector<int> Lattice::neighbors(int s) const {
    const int x = x_of(s), y = y_of(s);
    std::vector<int> out;
    out.reserve(4);
    if (x > 0) out.push_back(s - 1);
    if (x + 1 < width_) out.push_back(s + 1);
    if (y > 0) out.push_back(s - width_);
    if (y + 1 < height_) out.push_back(s + width_);
    return out;
}

bool Lattice::is_boundary(int s) const {
    return boundary_position_[s] >= 0;
}

int Lattice::boundary_position(int s) const {
    return boundary_position_[s];
}

Region Lattice::all_sites() const {
    std::vector<int> s(site_count());
    for (int i = 0; i < site_count(); ++i) s[i] = i;
    return Region(std::move(s));
}

Region Lattice::complement(const Region& r) const {
    return region_difference(all_sites(), r);
}

Lattice build_square_lattice(int width, int height) {
    return Lattice(width, height);
}

Region region_from_rect(const Lattice& lattice, int x0, int y0, int x1, int y1) {
    require(x0 <= x1 && y0 <= y1, "out-of-bounds", "empty rectangle");
    require(x0 >= 0 && y0 >= 0 && x1 < lattice.width() && y1 < lattice.height(),
            "out-of-bounds", "rectangle outside lattice bounds");
    std::vector<int> sites;
    sites.reserve(static_cast<std::size_t>(x1 - x0 + 1) * (y1 - y0 + 1));
    for (int y = y0; y <= y1; ++y)
        for (int x = x0; x <= x1; ++x) sites.push_back(lattice.site(x, y));
    std::sort(sites.begin(), sites.end());
    return Region(std::move(sites));
}

EdgeInterval edge_interval(const Lattice& lattice, const std::string& label,
                           int begin_position, int end_position) {
    const int n = static_cast<int>(lattice.boundary_cycle().size());
    require(begin_position >= 0 && begin_position < n && end_position >= 0 &&
                end_position <= n,
            "out-of-bounds", "edge interval endpoints outside the boundary cycle");
    std::vector<int> sites;
    int len = end_position - begin_position;
    if (len <= 0) len += n;
    for (int i = 0; i < len; ++i)
        sites.push_back(lattice.boundary_cycle()[(begin_position + i) % n]);
    return EdgeInterval{label, {begin_position, end_position % n},
                        Region::from_unsorted(std::move(sites))};
}

Region ConformalRuler::union_all() const {
    return region_union(region_union(region_union(A, A_prime), B),
                        region_union(C, C_prime));
}

bool RulerValidation::all_pass() const {
    for (const auto& c : checks)
        if (!c.pass) return false;
    return true;
}

std::string RulerValidation::summary() const {
    std::ostringstream os;
    for (const auto& c : checks) {
        os << (c.pass ? "[ok]   " : "[FAIL] ") << c.name;
        if (!c.pass && !c.offending_sites.empty()) {
            os << " (sites:";
            for (std::size_t i = 0; i < c.offending_sites.size() && i < 8; ++i)
                os << ' ' << c.offending_sites[i];
            if (c.offending_sites.size() > 8) os << " ...";
            os << ')';
        }
        os << '\n';
    }
    return os.str();
}

namespace {

bool adjacent(const Lattice& lattice, const Region& a, const Region& b,
              std::vector<int>* witness) {
    bool found = false;
    for (int s : a.sites) {
        for (int t : lattice.neighbors(s)) {
            if (b.contains(t)) {
                if (witness) witness->push_back(s);
                found = true;
                break;
            }
        }
    }
    return found;
}

bool edge_connected(const Lattice& lattice, const Region& r) {
    if (r.empty()) return true;
    std::set<int> todo(r.sites.begin(), r.sites.end());
    std::queue<int> queue;
    queue.push(*todo.begin());
    todo.erase(todo.begin());
    while (!queue.empty()) {
        int s = queue.front();
        queue.pop();
        for (int t : lattice.neighbors(s)) {
            auto it = todo.find(t);
            if (it != todo.end()) {
                todo.erase(it);
                queue.push(t);
            }
        }
    }
    return todo.empty();
}

Region boundary_footprint(const Lattice& lattice, const Region& r) {
    std::vector<int> sites;
    for (int s : r.sites)
        if (lattice.is_boundary(s)) sites.push_back(s);
    return Region(std::move(sites));
}

} // namespace

RulerValidation validate_ruler(const Lattice& lattice, const ConformalRuler& ruler,
                               const std::map<std::string, EdgeInterval>* intervals) {
    RulerValidation report;
    const std::array<const Region*, 5> parts = {&ruler.A, &ruler.A_prime, &ruler.B,
                                                &ruler.C, &ruler.C_prime};
    const std::array<const char*, 5> names = {"A", "A'", "B", "C", "C'"};

    RulerCheck disjoint{"pairwise-disjoint", true, {}};
    for (std::size_t i = 0; i < parts.size(); ++i)
        for (std::size_t j = i + 1; j < parts.size(); ++j) {
            Region overlap = region_intersection(*parts[i], *parts[j]);
            if (!overlap.empty()) {
                disjoint.pass = false;
                disjoint.offending_sites.insert(disjoint.offending_sites.end(),
                                                overlap.sites.begin(), overlap.sites.end());
            }
        }
    report.checks.push_back(std::move(disjoint));

    Region all = ruler.union_all();
    report.checks.push_back(RulerCheck{"union-connected", edge_connected(lattice, all), {}});

    RulerCheck ac{"A-C-not-adjacent", true, {}};
    if (adjacent(lattice, ruler.A, ruler.C, &ac.offending_sites)) ac.pass = false;
    report.checks.push_back(std::move(ac));

    RulerCheck shield{"B-shielded", true, {}};
    Region cover = region_union(region_union(ruler.A, ruler.A_prime),
                                region_union(ruler.C, ruler.C_prime));
    for (int s : ruler.B.sites)
        for (int t : lattice.neighbors(s))
            if (!ruler.B.contains(t) && !cover.contains(t)) {
                shield.pass = false;
                shield.offending_sites.push_back(t);
            }
    report.checks.push_back(std::move(shield));

    if (intervals != nullptr) {
        RulerCheck anchored{"anchored-on-intervals", true, {}};
        const std::array<const Region*, 3> abc = {&ruler.A, &ruler.B, &ruler.C};
        for (int i = 0; i < 3; ++i) {
            auto it = intervals->find(ruler.edge_triple[i]);
            if (it == intervals->end()) {
                anchored.pass = false;
                continue;
            }
            Region footprint = boundary_footprint(lattice, *abc[i]);
            if (!(footprint == it->second.anchored_region)) {
                anchored.pass = false;
                Region bad = region_difference(footprint, it->second.anchored_region);
                anchored.offending_sites.insert(anchored.offending_sites.end(),
                                                bad.sites.begin(), bad.sites.end());
            }
        }
        report.checks.push_back(std::move(anchored));

        RulerCheck footprint{"union-boundary-footprint", true, {}};
        Region expected;
        for (const auto& label : ruler.edge_triple) {
            auto it = intervals->find(label);
            if (it != intervals->end())
                expected = region_union(expected, it->second.anchored_region);
        }
        Region actual = boundary_footprint(lattice, all);
        if (!(actual == expected)) {
            footprint.pass = false;
            Region bad = region_difference(actual, expected);
            footprint.offending_sites.insert(footprint.offending_sites.end(),
                                             bad.sites.begin(), bad.sites.end());
        }
        report.checks.push_back(std::move(footprint));
    }

    return report;
}

ConformalRuler deform_ruler(const Lattice& lattice, const ConformalRuler& ruler,
                            const BulkMove& move,
                            const std::map<std::string, EdgeInterval>* intervals) {
    for (int s : move.moved.sites)
        require(!lattice.is_boundary(s), "invalid-move",
                "moved site " + std::to_string(s) + " lies on the boundary");

    ConformalRuler out = ruler;
    auto part = [&out](const std::string& label) -> Region* {
        if (label == "A") return &out.A;
        if (label == "A'") return &out.A_prime;
        if (label == "B") return &out.B;
        if (label == "C") return &out.C;
        if (label == "C'") return &out.C_prime;
        fail("invalid-move", "unknown region label '" + label + "'");
    };

    switch (move.kind) {
        case BulkMove::Kind::transfer: {
            Region* src = part(move.source);
            Region* dst = part(move.target);
            require(region_subset(move.moved, *src), "invalid-move",
                    "transfer source does not contain the moved sites");
            *src = region_difference(*src, move.moved);
            *dst = region_union(*dst, move.moved);
            break;
        }
        case BulkMove::Kind::grow: {
            Region* dst = part(move.target);
            require(regions_disjoint(move.moved, ruler.union_all()), "invalid-move",
                    "grow sites already belong to the ruler");
            *dst = region_union(*dst, move.moved);
            break;
        }
        case BulkMove::Kind::shrink: {
            Region* src = part(move.source);
            require(region_subset(move.moved, *src), "invalid-move",
                    "shrink source does not contain the moved sites");
            *src = region_difference(*src, move.moved);
            break;
        }
    }

    RulerValidation validation = validate_ruler(lattice, out, intervals);
    require(validation.all_pass(), "invalid-move",
            "deformed ruler fails validation:\n" + validation.summary());
    return out;
}

} // namespace cruler
