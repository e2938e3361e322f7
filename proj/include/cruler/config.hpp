#pragma once

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "cruler/backend.hpp"
#include "cruler/lattice.hpp"

namespace cruler {

struct BackendSpec {
    std::string type; // gaussian-pip | pairstate | cft | edoracle-pairstate
    // gaussian-pip
    int width = 0, height = 0;
    double t = 1.0, delta = 1.0, mu = 1.3;
    // pairstate / edoracle-pairstate
    int n_half = 0;
    double alpha = 1.0, beta = 1.5;
    bool flat = false;
    // cft
    double c = 1.0, epsilon = 1e-4;
    std::vector<double> angles; // explicit, or
    int arcs = 0;               // equally spaced
};

struct RulerSpec {
    // lattice form: named regions (possibly unions)
    std::vector<std::string> a, a_prime, b, c, c_prime;
    std::array<std::string, 3> edge_triple = {"a", "b", "c"};
    // circle form
    bool circle = false;
    int start = 0, na = 0, nb = 0, nc = 0;
};

struct ExperimentSpec {
    std::string name;
    std::string kind;
    nlohmann::json params;     // kind-specific fields
    nlohmann::json tolerances; // flat map plus optional desk/paper sub-blocks
};

struct RunConfig {
    BackendSpec backend;
    std::map<std::string, Region> regions;
    std::map<std::string, RulerSpec> rulers;
    std::vector<ExperimentSpec> experiments;
    std::string output_dir = "out";
    std::string tolerance_profile = "desk";
    long long seed = 0;
    int jobs = 1;

    std::string source_text; // for the config hash
};

// Parses TOML (default) or JSON (leading '{' or .json extension).
RunConfig load_config(const std::string& path);
RunConfig parse_config(const std::string& text, bool is_json);

// Built backend plus the lattice when the backend has one.
struct BackendBundle {
    std::unique_ptr<StateBackend> backend;
    std::optional<Lattice> lattice;
    int n_sites = 0;
};

BackendBundle build_backend(const BackendSpec& spec);

// Resolves a ruler spec against the named regions (or the circle layout).
ConformalRuler resolve_ruler(const RunConfig& config, const BackendBundle& bundle,
                             const std::string& name);

Region resolve_region(const RunConfig& config, const std::string& name);

std::string config_hash(const std::string& text);

} // namespace cruler
