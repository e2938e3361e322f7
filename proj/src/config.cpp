#include "cruler/config.hpp"

#include <fstream>
#include <sstream>

#include "cruler/cftmodel.hpp"
#include "cruler/edoracle.hpp"
#include "cruler/errors.hpp"
#include "cruler/experiments.hpp"
#include "cruler/gaussian.hpp"
#include "cruler/pairstates.hpp"
#include "cruler/tomlmini.hpp"

namespace cruler {

namespace {

using nlohmann::json;

double number_or(const json& node, const std::string& key, double fallback) {
    if (!node.contains(key)) return fallback;
    return node.at(key).get<double>();
}

long long integer_or(const json& node, const std::string& key, long long fallback) {
    if (!node.contains(key)) return fallback;
    return node.at(key).get<long long>();
}

std::vector<std::string> name_list(const json& node) {
    std::vector<std::string> out;
    if (node.is_string()) {
        out.push_back(node.get<std::string>());
    } else if (node.is_array()) {
        for (const auto& item : node) out.push_back(item.get<std::string>());
    } else {
        fail("config-parse", "expected a region name or list of names");
    }
    return out;
}

Region parse_region_def(const Lattice* lattice, const json& def) {
    Region out;
    if (def.contains("rects")) {
        require(lattice != nullptr, "config-parse", "rect regions need a lattice backend");
        for (const auto& rect : def.at("rects")) {
            require(rect.is_array() && rect.size() == 4, "config-parse",
                    "rect must be [x0, y0, x1, y1]");
            out = region_union(out, region_from_rect(*lattice, rect[0].get<int>(),
                                                     rect[1].get<int>(), rect[2].get<int>(),
                                                     rect[3].get<int>()));
        }
    }
    if (def.contains("sites")) {
        std::vector<int> sites = out.sites;
        for (const auto& item : def.at("sites")) {
            if (item.is_array()) {
                require(item.size() == 2, "config-parse", "site entries are [x, y] or indices");
                require(lattice != nullptr, "config-parse", "[x, y] sites need a lattice backend");
                sites.push_back(lattice->site(item[0].get<int>(), item[1].get<int>()));
            } else {
                sites.push_back(item.get<int>());
            }
        }
        out = Region::from_unsorted(std::move(sites));
    }
    require(!out.empty(), "config-parse", "region definition produced no sites");
    return out;
}

} // namespace

std::string config_hash(const std::string& text) {
    // FNV-1a 64, printed as hex: stable fingerprint for reports.
    unsigned long long h = 1469598103934665603ull;
    for (unsigned char ch : text) {
        h ^= ch;
        h *= 1099511628211ull;
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

RunConfig parse_config(const std::string& text, bool is_json) {
    json root;
    if (is_json) {
        root = json::parse(text, nullptr, true, true);
    } else {
        root = parse_toml(text);
    }

    RunConfig config;
    config.source_text = text;
    config.output_dir = root.value("output_dir", std::string("out"));
    config.tolerance_profile = root.value("tolerance_profile", std::string("desk"));
    config.seed = integer_or(root, "seed", 0);
    config.jobs = static_cast<int>(integer_or(root, "jobs", 1));

    require(root.contains("backend"), "config-parse", "missing [backend] table");
    const json& b = root.at("backend");
    config.backend.type = b.value("type", std::string());
    require(!config.backend.type.empty(), "config-parse", "backend.type is required");
    config.backend.width = static_cast<int>(integer_or(b, "width", 0));
    config.backend.height = static_cast<int>(integer_or(b, "height", 0));
    config.backend.t = number_or(b, "t", 1.0);
    config.backend.delta = number_or(b, "delta", 1.0);
    config.backend.mu = number_or(b, "mu", 1.3);
    config.backend.n_half = static_cast<int>(integer_or(b, "n", 0));
    config.backend.alpha = number_or(b, "alpha", 1.0);
    config.backend.beta = number_or(b, "beta", 1.5);
    config.backend.flat = b.value("flat", false);
    config.backend.c = number_or(b, "c", 1.0);
    config.backend.epsilon = number_or(b, "epsilon", 1e-4);
    config.backend.arcs = static_cast<int>(integer_or(b, "arcs", 0));
    if (b.contains("angles"))
        for (const auto& a : b.at("angles")) config.backend.angles.push_back(a.get<double>());

    // Regions need the lattice for rect resolution; build it eagerly when
    // the backend type carries one.
    std::optional<Lattice> lattice;
    if (config.backend.type == "gaussian-pip") {
        require(config.backend.width >= 4 && config.backend.height >= 4, "config-parse",
                "gaussian-pip backend needs width and height >= 4");
        lattice.emplace(config.backend.width, config.backend.height);
    }

    if (root.contains("regions")) {
        for (const auto& [name, def] : root.at("regions").items())
            config.regions.emplace(name,
                                   parse_region_def(lattice ? &*lattice : nullptr, def));
    }

    if (root.contains("rulers")) {
        for (const auto& [name, def] : root.at("rulers").items()) {
            RulerSpec spec;
            if (def.contains("start") || def.contains("na")) {
                spec.circle = true;
                spec.start = static_cast<int>(integer_or(def, "start", 0));
                spec.na = static_cast<int>(integer_or(def, "na", 1));
                spec.nb = static_cast<int>(integer_or(def, "nb", 1));
                spec.nc = static_cast<int>(integer_or(def, "nc", 1));
            } else {
                spec.a = name_list(def.at("a"));
                spec.b = name_list(def.at("b"));
                spec.c = name_list(def.at("c"));
                if (def.contains("a_prime")) spec.a_prime = name_list(def.at("a_prime"));
                if (def.contains("c_prime")) spec.c_prime = name_list(def.at("c_prime"));
                if (def.contains("edge_triple")) {
                    const auto& triple = def.at("edge_triple");
                    require(triple.is_array() && triple.size() == 3, "config-parse",
                            "edge_triple must list three labels");
                    for (int i = 0; i < 3; ++i)
                        spec.edge_triple[i] = triple[i].get<std::string>();
                }
            }
            config.rulers.emplace(name, std::move(spec));
        }
    }

    if (root.contains("experiments")) {
        for (const auto& def : root.at("experiments")) {
            ExperimentSpec spec;
            spec.name = def.value("name", std::string());
            spec.kind = def.value("kind", std::string());
            require(!spec.name.empty() && !spec.kind.empty(), "config-parse",
                    "experiments need both name and kind");
            spec.params = def;
            if (def.contains("tolerances")) spec.tolerances = def.at("tolerances");
            config.experiments.push_back(std::move(spec));
        }
    }
    return config;
}

RunConfig load_config(const std::string& path) {
    std::ifstream in(path);
    require(in.good(), "config-parse", "cannot open config file " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string text = buffer.str();
    const bool is_json = path.size() > 5 && path.substr(path.size() - 5) == ".json";
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    const bool looks_json = first != std::string::npos && text[first] == '{';
    return parse_config(text, is_json || looks_json);
}

BackendBundle build_backend(const BackendSpec& spec) {
    BackendBundle bundle;
    if (spec.type == "gaussian-pip") {
        BdGModel model{Lattice(spec.width, spec.height), spec.t, spec.delta, spec.mu};
        bundle.lattice = model.lattice;
        bundle.n_sites = model.lattice.site_count();
        bundle.backend = std::make_unique<GaussianBackend>(ground_state_covariance(model));
        return bundle;
    }
    if (spec.type == "pairstate" || spec.type == "edoracle-pairstate") {
        PairState state = spec.flat ? build_flat_pair_state(spec.n_half)
                                    : build_pair_state(solve_exotic_weights(
                                          spec.n_half, spec.alpha, spec.beta));
        bundle.n_sites = state.layout.n_sites();
        if (spec.type == "pairstate") {
            bundle.backend = std::make_unique<PairBackend>(std::move(state));
        } else {
            DenseState psi = statevector_from_pairstate(state);
            std::vector<std::vector<int>> site_qubits;
            const int per_site = state.layout.qubits_per_site();
            for (int s = 0; s < state.layout.n_sites(); ++s) {
                std::vector<int> qs;
                for (int q = 0; q < per_site; ++q) qs.push_back(s * per_site + q);
                site_qubits.push_back(std::move(qs));
            }
            bundle.backend = std::make_unique<DenseBackend>(std::move(psi), std::move(site_qubits));
        }
        return bundle;
    }
    if (spec.type == "cft") {
        CFTCircle model;
        if (!spec.angles.empty()) {
            model.c = spec.c;
            model.epsilon = spec.epsilon;
            model.angles = spec.angles;
            model.validate();
        } else {
            require(spec.arcs >= 3, "config-parse", "cft backend needs arcs >= 3 or angles");
            model = cft_equally_spaced(spec.c, spec.epsilon, spec.arcs);
        }
        bundle.n_sites = model.n_arcs();
        bundle.backend = std::make_unique<CFTBackend>(std::move(model));
        return bundle;
    }
    fail("config-parse", "unknown backend type '" + spec.type + "'");
}

Region resolve_region(const RunConfig& config, const std::string& name) {
    auto it = config.regions.find(name);
    require(it != config.regions.end(), "config-parse", "undefined region '" + name + "'");
    return it->second;
}

ConformalRuler resolve_ruler(const RunConfig& config, const BackendBundle& bundle,
                             const std::string& name) {
    auto it = config.rulers.find(name);
    require(it != config.rulers.end(), "config-parse", "undefined ruler '" + name + "'");
    const RulerSpec& spec = it->second;

    if (spec.circle)
        return circle_ruler(bundle.n_sites, spec.start, spec.na, spec.nb, spec.nc);

    auto resolve_union = [&config](const std::vector<std::string>& names) {
        Region out;
        for (const std::string& n : names) out = region_union(out, resolve_region(config, n));
        return out;
    };
    ConformalRuler ruler;
    ruler.A = resolve_union(spec.a);
    ruler.B = resolve_union(spec.b);
    ruler.C = resolve_union(spec.c);
    if (!spec.a_prime.empty()) ruler.A_prime = resolve_union(spec.a_prime);
    if (!spec.c_prime.empty()) ruler.C_prime = resolve_union(spec.c_prime);
    ruler.edge_triple = spec.edge_triple;
    return ruler;
}

} // namespace cruler
