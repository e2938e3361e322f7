#include "cruler/runner.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <future>
#include <iomanip>
#include <sstream>

#include "cruler/cftmodel.hpp"
#include "cruler/crossratio.hpp"
#include "cruler/edoracle.hpp"
#include "cruler/experiments.hpp"
#include "cruler/gaussian.hpp"
#include "cruler/pairstates.hpp"
#include "cruler/ruler.hpp"

namespace cruler {

namespace {

using nlohmann::json;

std::string iso_timestamp() {
    const auto now = std::chrono::system_clock::now();
    const std::time_t t = std::chrono::system_clock::to_time_t(now);
    std::tm tm{};
    gmtime_r(&t, &tm);
    std::ostringstream os;
    os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
    return os.str();
}

std::string csv_number(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

// Flat tolerance entries merged with the profile-specific sub-table.
json effective_tolerances(const json& tolerances, const std::string& profile) {
    json out = json::object();
    if (tolerances.is_object()) {
        for (const auto& [key, value] : tolerances.items())
            if (!value.is_object()) out[key] = value;
        if (tolerances.contains(profile))
            for (const auto& [key, value] : tolerances.at(profile).items()) out[key] = value;
    }
    return out;
}

struct ToleranceSink {
    json checks = json::array();
    bool pass = true;

    void check_max(const json& tol, const std::string& key, double value) {
        if (!tol.contains(key)) return;
        const double limit = tol.at(key).get<double>();
        const bool ok = value <= limit;
        checks.push_back({{"name", key}, {"value", value}, {"limit", limit}, {"pass", ok}});
        pass = pass && ok;
    }
    void check_min(const json& tol, const std::string& key, double value) {
        if (!tol.contains(key)) return;
        const double limit = tol.at(key).get<double>();
        const bool ok = value >= limit;
        checks.push_back({{"name", key}, {"value", value}, {"limit", limit}, {"pass", ok}});
        pass = pass && ok;
    }
};

Region inline_region(const RunConfig& config, const BackendBundle& bundle, const json& node) {
    if (node.is_string()) return resolve_region(config, node.get<std::string>());
    if (node.contains("rects")) {
        require(bundle.lattice.has_value(), "config-parse",
                "inline rects need a lattice backend");
        Region out;
        for (const auto& rect : node.at("rects"))
            out = region_union(out, region_from_rect(*bundle.lattice, rect[0].get<int>(),
                                                     rect[1].get<int>(), rect[2].get<int>(),
                                                     rect[3].get<int>()));
        return out;
    }
    if (node.contains("sites")) {
        std::vector<int> sites;
        for (const auto& item : node.at("sites")) {
            if (item.is_array()) {
                require(bundle.lattice.has_value(), "config-parse",
                        "[x, y] sites need a lattice backend");
                sites.push_back(bundle.lattice->site(item[0].get<int>(), item[1].get<int>()));
            } else {
                sites.push_back(item.get<int>());
            }
        }
        return Region::from_unsorted(std::move(sites));
    }
    fail("config-parse", "region parameter must be a name, rects, or sites");
}

void write_scan_csv(const SigmaScan& scan, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "io-error", "cannot open " + path);
    out << "x,sigma\n";
    for (std::size_t i = 0; i < scan.xs.size(); ++i)
        out << csv_number(scan.xs[i]) << ',' << csv_number(scan.sigmas[i]) << '\n';
}

// ---- experiment kinds ----------------------------------------------------

json exp_ruler_analysis(const RunConfig& config, const BackendBundle& bundle,
                        const ExperimentSpec& spec, const json& tol, ToleranceSink& sink) {
    const std::string ruler_name = spec.params.value("ruler", std::string());
    require(!ruler_name.empty(), "config-parse", "ruler-analysis needs a ruler");
    const ConformalRuler ruler = resolve_ruler(config, bundle, ruler_name);
    const StateBackend& backend = *bundle.backend;

    json out;
    const EntropyCombo combo = combo_delta_I(backend, ruler);
    const CEtaSolution sol = solve_c_eta(combo);
    out["delta"] = combo.delta;
    out["i"] = combo.i_cond;
    out["c_tot"] = sol.c_tot;
    out["degenerate"] = sol.degenerate != CEtaSolution::Degenerate::none;
    if (sol.eta) out["eta"] = *sol.eta;

    sink.check_min(tol, "c_min", sol.c_tot);
    sink.check_max(tol, "c_max", sol.c_tot);

    if (backend.has_moments() && sol.eta &&
        sol.degenerate == CEtaSolution::Degenerate::none) {
        const ChiralityReport chi = eta_J_pair(backend, ruler);
        out["eta_J"] = chi.eta_j;
        out["c_minus"] = chi.c_minus;
        out["j_inner"] = chi.j_inner;
        out["j_outer"] = chi.j_outer;

        const int grid_n = spec.params.value("grid_n", 101);
        const SigmaScan scan = find_eta_K(backend, ruler, grid_n);
        out["eta_K"] = scan.eta_k;
        out["sigma_min"] = scan.sigma_min;
        out["sigma_at_eta"] = sigma_of_combo(backend, kd_combo(ruler, *sol.eta));

        sink.check_max(tol, "eta_j_match", std::abs(*sol.eta - chi.eta_j));
        sink.check_max(tol, "eta_k_match", std::abs(*sol.eta - scan.eta_k));
        sink.check_max(tol, "sigma_at_eta_max", out["sigma_at_eta"].get<double>());
    }
    return out;
}

json exp_sigma_scan(const RunConfig& config, const BackendBundle& bundle,
                    const ExperimentSpec& spec, const json&, ToleranceSink&,
                    const std::string& out_dir) {
    const std::string ruler_name = spec.params.value("ruler", std::string());
    require(!ruler_name.empty(), "config-parse", "sigma-scan needs a ruler");
    const int grid_n = spec.params.value("grid", 101);
    const ConformalRuler ruler = resolve_ruler(config, bundle, ruler_name);
    const SigmaScan scan = find_eta_K(*bundle.backend, ruler, grid_n);

    const std::string csv_path = out_dir + "/" + spec.name + ".csv";
    write_scan_csv(scan, csv_path);

    json out;
    out["eta_K"] = scan.eta_k;
    out["sigma_min"] = scan.sigma_min;
    out["flat_minimum"] = scan.flat_minimum;
    out["csv"] = csv_path;
    return out;
}

json exp_eta_table(const RunConfig& config, const BackendBundle& bundle,
                   const ExperimentSpec& spec, const json& tol, ToleranceSink& sink,
                   const std::string& out_dir) {
    (void)config;
    const int n = bundle.n_sites;
    const EtaTable table = build_circle_eta_table(*bundle.backend, n);

    json out;
    out["entries"] = static_cast<int>(table.entries().size());

    const ConstantCReport c_report = constant_c_check(table);
    out["c_max"] = c_report.max;
    out["c_min"] = c_report.min;
    out["c_spread"] = c_report.spread;
    sink.check_max(tol, "c_spread_max", c_report.spread);

    double complement_worst = 0.0;
    for (int s0 = 0; s0 < n; ++s0)
        for (int s1 = s0 + 1; s1 < n; ++s1)
            for (int s2 = s1 + 1; s2 < n; ++s2)
                for (int s3 = s2 + 1; s3 < n; ++s3) {
                    const ComplementDeviation dev = complement_check(table, {s0, s1, s2, s3});
                    complement_worst = std::max({complement_worst, dev.max_eta, dev.max_c});
                }
    out["complement_max_dev"] = complement_worst;
    sink.check_max(tol, "complement_max", complement_worst);

    double decomposition_worst = 0.0;
    for (int s = 0; s < n; ++s)
        for (int n1 = 1; n1 < n; ++n1)
            for (int n2 = 1; n1 + n2 < n; ++n2)
                for (int n3 = 1; n1 + n2 + n3 < n; ++n3)
                    for (int n4 = 1; n1 + n2 + n3 + n4 < n; ++n4) {
                        const std::array<int, 5> eps = {
                            s, (s + n1) % n, (s + n1 + n2) % n, (s + n1 + n2 + n3) % n,
                            (s + n1 + n2 + n3 + n4) % n};
                        decomposition_worst =
                            std::max(decomposition_worst, decomposition_check(table, eps).max());
                    }
    out["decomposition_max_dev"] = decomposition_worst;
    sink.check_max(tol, "decomposition_max", decomposition_worst);

    if (spec.params.value("embed", false)) {
        const CircleEmbedding embedding = circle_embed(table);
        const double embed_dev = verify_embedding(embedding, table);
        out["embed_max_dev"] = embed_dev;
        sink.check_max(tol, "embed_max", embed_dev);

        const std::string csv_path = out_dir + "/" + spec.name + "_angles.csv";
        std::ofstream csv(csv_path);
        csv << "endpoint,angle\n";
        for (std::size_t i = 0; i < embedding.angles.size(); ++i)
            csv << i << ',' << csv_number(embedding.angles[i]) << '\n';
        out["angles_csv"] = csv_path;

        json angles = json::array();
        for (double a : embedding.angles) angles.push_back(a);
        out["angles"] = angles;
    }
    return out;
}

json exp_exotic(const RunConfig& config, const BackendBundle& bundle,
                const ExperimentSpec& spec, const json& tol, ToleranceSink& sink) {
    (void)spec;
    require(config.backend.type == "pairstate", "capability-mismatch",
            "the exotic experiment needs the pairstate backend");
    const int n_half = config.backend.n_half;
    const ExoticWeights weights =
        solve_exotic_weights(n_half, config.backend.alpha, config.backend.beta);

    json out;
    out["n"] = n_half;
    out["alpha"] = weights.alpha;
    out["beta"] = weights.beta;
    out["valid"] = weights.valid;
    json chi = json::array();
    for (double c : weights.chi) chi.push_back(c);
    out["chi"] = chi;

    const PairState state = build_pair_state(weights);
    const int n_sites = 2 * n_half;

    // interval entropies against the closed form
    double entropy_dev = 0.0;
    for (int len = 1; len <= n_half; ++len) {
        const double expected =
            weights.alpha * std::log(std::sin(len * M_PI / (2.0 * n_half)) /
                                     std::sin(M_PI / (2.0 * n_half))) +
            weights.beta;
        for (int start = 0; start < n_sites; ++start)
            entropy_dev = std::max(entropy_dev,
                                   std::abs(interval_entropy(state, start, len) - expected));
    }
    out["entropy_form_max_dev"] = entropy_dev;
    sink.check_max(tol, "entropy_form_max", entropy_dev);

    const EtaTable table = build_circle_eta_table(*bundle.backend, n_sites);
    const ConstantCReport c_report = constant_c_check(table);
    out["c_tot"] = c_report.max;
    out["c_spread"] = c_report.spread;
    out["six_alpha"] = 6.0 * weights.alpha;
    sink.check_max(tol, "c_spread_max", c_report.spread);
    sink.check_max(tol, "c_six_alpha_dev",
                   std::abs(c_report.max - 6.0 * weights.alpha));

    // fixed-point violation on the [1,1,1] ruler
    const ConformalRuler ruler = circle_ruler(n_sites, 0, 1, 1, 1);
    const EntropyCombo combo = combo_delta_I(*bundle.backend, ruler);
    const SigmaScan scan = find_eta_K(*bundle.backend, ruler, 101);
    out["sigma_min"] = scan.sigma_min;
    out["delta_plus_i"] = combo.delta + combo.i_cond;
    const double floor_rel =
        tol.contains("sigma_floor_rel") ? tol.at("sigma_floor_rel").get<double>() : 0.0;
    if (floor_rel > 0.0) {
        const bool violated = scan.sigma_min > floor_rel * (combo.delta + combo.i_cond);
        out["fixed_point_violated"] = violated;
        sink.checks.push_back({{"name", "sigma_floor_rel"},
                               {"value", scan.sigma_min},
                               {"limit", floor_rel * (combo.delta + combo.i_cond)},
                               {"pass", violated}});
        sink.pass = sink.pass && violated;
    }
    return out;
}

json exp_bulk_a1(const RunConfig& config, const BackendBundle& bundle,
                 const ExperimentSpec& spec, const json& tol, ToleranceSink& sink) {
    require(bundle.lattice.has_value(), "capability-mismatch",
            "bulk-a1 needs a lattice backend");
    Region b, c, d;
    if (spec.params.contains("block")) {
        const int block = spec.params.at("block").get<int>();
        const int x0 = spec.params.value("x0", (bundle.lattice->width() - 3 * block) / 2);
        const int y0 = spec.params.value("y0", (bundle.lattice->height() - 3 * block) / 2);
        const BulkA1Partition part = make_bulk_a1_partition(*bundle.lattice, x0, y0, block);
        b = part.B;
        c = part.C;
        d = part.D;
    } else {
        b = inline_region(config, bundle, spec.params.at("b"));
        c = inline_region(config, bundle, spec.params.at("c"));
        d = inline_region(config, bundle, spec.params.at("d"));
    }
    const BulkA1Residual residual = bulk_a1_residual(*bundle.backend, *bundle.lattice, b, c, d);
    json out;
    out["scalar"] = residual.scalar;
    if (residual.vector_sigma) out["vector_sigma"] = *residual.vector_sigma;
    sink.check_max(tol, "scalar_max", residual.scalar);
    if (residual.vector_sigma) sink.check_max(tol, "vector_sigma_max", *residual.vector_sigma);
    return out;
}

json exp_bulk_commutator(const RunConfig& config, const BackendBundle& bundle,
                         const ExperimentSpec& spec, const json& tol, ToleranceSink& sink) {
    (void)config;
    require(bundle.lattice.has_value(), "capability-mismatch",
            "bulk-commutator needs a lattice backend");
    const int size = spec.params.value("size", 8);
    const int x0 = spec.params.value("x0", (bundle.lattice->width() - size) / 2);
    const int y0 = spec.params.value("y0", (bundle.lattice->height() - size) / 2);
    const BulkTriple pie = make_bulk_commutator_triple(*bundle.lattice, x0, y0, size);
    const double j = modular_commutator(*bundle.backend, pie.A, pie.B, pie.C);
    json out;
    out["j"] = j;
    out["three_j_over_pi"] = 3.0 * j / M_PI;
    sink.check_min(tol, "three_j_over_pi_min", out["three_j_over_pi"].get<double>());
    sink.check_max(tol, "three_j_over_pi_max", out["three_j_over_pi"].get<double>());
    return out;
}

BulkMove move_from_params(const RunConfig& config, const BackendBundle& bundle,
                          const json& node) {
    BulkMove move;
    const std::string kind = node.value("kind", std::string());
    if (kind == "transfer")
        move.kind = BulkMove::Kind::transfer;
    else if (kind == "grow")
        move.kind = BulkMove::Kind::grow;
    else if (kind == "shrink")
        move.kind = BulkMove::Kind::shrink;
    else
        fail("config-parse", "move.kind must be transfer, grow or shrink");
    move.source = node.value("source", std::string());
    move.target = node.value("target", std::string());
    move.moved = inline_region(config, bundle, node.at("moved"));
    return move;
}

json exp_deformation(const RunConfig& config, const BackendBundle& bundle,
                     const ExperimentSpec& spec, const json& tol, ToleranceSink& sink) {
    require(bundle.lattice.has_value(), "capability-mismatch",
            "deformation needs a lattice backend");
    const ConformalRuler ruler =
        resolve_ruler(config, bundle, spec.params.value("ruler", std::string()));
    const BulkMove move = move_from_params(config, bundle, spec.params.at("move"));
    const DeformationResidual residual =
        deformation_residual(*bundle.backend, *bundle.lattice, ruler, move);
    json out;
    out["d_delta"] = residual.d_delta;
    out["d_i"] = residual.d_i;
    sink.check_max(tol, "max_change", std::max(residual.d_delta, residual.d_i));
    return out;
}

json exp_relation_family(const RunConfig& config, const BackendBundle& bundle,
                         const ExperimentSpec& spec, const json& tol, ToleranceSink& sink) {
    // rulers listed in triple order; keys supplied alongside
    require(spec.params.contains("rulers") && spec.params.contains("keys"), "config-parse",
            "relation experiments need parallel 'rulers' and 'keys' lists");
    const auto& ruler_names = spec.params.at("rulers");
    const auto& keys = spec.params.at("keys");
    require(ruler_names.size() == keys.size(), "config-parse",
            "'rulers' and 'keys' must have equal length");

    EtaTable table(spec.params.value("n_endpoints", 0));
    json etas = json::object();
    for (std::size_t i = 0; i < ruler_names.size(); ++i) {
        const ConformalRuler ruler =
            resolve_ruler(config, bundle, ruler_names[i].get<std::string>());
        const CEtaSolution sol = solve_c_eta(combo_delta_I(*bundle.backend, ruler));
        require(sol.degenerate == CEtaSolution::Degenerate::none, "all-degenerate",
                "degenerate ruler in a relation family");
        const auto& k = keys[i];
        table.put({k[0].get<int>(), k[1].get<int>(), k[2].get<int>(), k[3].get<int>()},
                  *sol.eta, sol.c_tot);
        etas[ruler_names[i].get<std::string>()] = *sol.eta;
    }

    json out;
    out["etas"] = etas;
    if (spec.kind == "complement") {
        const auto& starts = spec.params.at("starts");
        const ComplementDeviation dev = complement_check(
            table, {starts[0].get<int>(), starts[1].get<int>(), starts[2].get<int>(),
                    starts[3].get<int>()});
        out["max_eta_dev"] = dev.max_eta;
        out["max_c_dev"] = dev.max_c;
        sink.check_max(tol, "eta_dev_max", dev.max_eta);
        sink.check_max(tol, "c_dev_max", dev.max_c);
    } else {
        const auto& eps = spec.params.at("endpoints");
        const DecompositionDeviation dev = decomposition_check(
            table, {eps[0].get<int>(), eps[1].get<int>(), eps[2].get<int>(), eps[3].get<int>(),
                    eps[4].get<int>()});
        out["dev_ab_c_d"] = dev.dev_ab_c_d;
        out["dev_a_b_cd"] = dev.dev_a_b_cd;
        out["dev_a_bc_d"] = dev.dev_a_bc_d;
        sink.check_max(tol, "dev_max", dev.max());
    }
    return out;
}

json oracle_compare_impl(const RunConfig& config) {
    require(config.backend.type == "pairstate", "capability-mismatch",
            "oracle-compare supports pairstate backends (the dense cap rules out "
            "desk lattices)");
    const int n_half = config.backend.n_half;
    PairState state = config.backend.flat
                          ? build_flat_pair_state(n_half)
                          : build_pair_state(solve_exotic_weights(n_half, config.backend.alpha,
                                                                  config.backend.beta));
    PairBackend fast(state);
    DenseState psi = statevector_from_pairstate(state);
    std::vector<std::vector<int>> site_qubits;
    const int per_site = state.layout.qubits_per_site();
    for (int s = 0; s < state.layout.n_sites(); ++s) {
        std::vector<int> qs;
        for (int q = 0; q < per_site; ++q) qs.push_back(s * per_site + q);
        site_qubits.push_back(std::move(qs));
    }
    DenseBackend dense(std::move(psi), std::move(site_qubits));

    const int n_sites = state.layout.n_sites();
    double entropy_dev = 0.0;
    for (int start = 0; start < n_sites; ++start)
        for (int len = 1; len < n_sites; ++len) {
            std::vector<int> sites;
            for (int i = 0; i < len; ++i) sites.push_back((start + i) % n_sites);
            const Region r = Region::from_unsorted(std::move(sites));
            entropy_dev = std::max(entropy_dev, std::abs(fast.entropy(r) - dense.entropy(r)));
        }

    double moment_dev = 0.0;
    const ConformalRuler ruler = circle_ruler(n_sites, 0, 1, 1, 1);
    for (double x : {0.0, 0.25, 0.5, 0.75, 1.0}) {
        const ModularCombo combo = kd_combo(ruler, x);
        const double fast_second = fast.combo_moment(combo, combo).real();
        const double dense_second = dense.combo_moment(combo, combo).real();
        const double fast_mean = fast.combo_mean(combo);
        const double dense_mean = dense.combo_mean(combo);
        moment_dev = std::max({moment_dev, std::abs(fast_second - dense_second),
                               std::abs(fast_mean - dense_mean)});
    }

    json out;
    out["entropy_max_dev"] = entropy_dev;
    out["moment_max_dev"] = moment_dev;
    out["pass"] = entropy_dev < 1e-10 && moment_dev < 1e-10;
    return out;
}

json run_one(const RunConfig& config, const BackendBundle& bundle, const ExperimentSpec& spec,
             const std::string& profile, const std::string& out_dir) {
    const json tol = effective_tolerances(spec.tolerances, profile);
    ToleranceSink sink;
    json results;

    if (spec.kind == "ruler-analysis") {
        results = exp_ruler_analysis(config, bundle, spec, tol, sink);
    } else if (spec.kind == "sigma-scan") {
        results = exp_sigma_scan(config, bundle, spec, tol, sink, out_dir);
    } else if (spec.kind == "eta-table") {
        results = exp_eta_table(config, bundle, spec, tol, sink, out_dir);
    } else if (spec.kind == "exotic") {
        results = exp_exotic(config, bundle, spec, tol, sink);
    } else if (spec.kind == "bulk-a1") {
        results = exp_bulk_a1(config, bundle, spec, tol, sink);
    } else if (spec.kind == "bulk-commutator") {
        results = exp_bulk_commutator(config, bundle, spec, tol, sink);
    } else if (spec.kind == "deformation") {
        results = exp_deformation(config, bundle, spec, tol, sink);
    } else if (spec.kind == "complement" || spec.kind == "decomposition") {
        results = exp_relation_family(config, bundle, spec, tol, sink);
    } else if (spec.kind == "oracle-compare") {
        results = oracle_compare_impl(config);
        sink.pass = results.value("pass", false);
    } else {
        fail("config-parse", "unknown experiment kind '" + spec.kind + "'");
    }

    json report;
    report["name"] = spec.name;
    report["kind"] = spec.kind;
    report["results"] = results;
    report["tolerance_checks"] = sink.checks;
    report["pass"] = sink.pass;
    return report;
}

} // namespace

RunOutcome run_experiments(const RunConfig& config, const std::string& output_override,
                           int jobs_override, const std::string& profile_override) {
    const std::string out_dir =
        output_override.empty() ? config.output_dir : output_override;
    const std::string profile =
        profile_override.empty() ? config.tolerance_profile : profile_override;
    const int jobs = jobs_override > 0 ? jobs_override : config.jobs;
    std::filesystem::create_directories(out_dir);

    BackendBundle bundle = build_backend(config.backend);

    // capability validation up front
    for (const ExperimentSpec& spec : config.experiments) {
        const bool needs_moments = spec.kind == "sigma-scan" || spec.kind == "exotic" ||
                                   spec.kind == "bulk-commutator";
        require(!needs_moments || bundle.backend->has_moments(), "capability-mismatch",
                "experiment '" + spec.name + "' needs a moments-capable backend");
    }

    std::vector<ExperimentSpec> ordered = config.experiments;
    std::stable_sort(ordered.begin(), ordered.end(),
                     [](const ExperimentSpec& a, const ExperimentSpec& b) {
                         return a.name < b.name;
                     });

    std::vector<json> reports(ordered.size());
    if (jobs > 1) {
        std::vector<std::future<json>> futures;
        futures.reserve(ordered.size());
        for (const ExperimentSpec& spec : ordered)
            futures.push_back(std::async(std::launch::async, [&, spec] {
                return run_one(config, bundle, spec, profile, out_dir);
            }));
        for (std::size_t i = 0; i < futures.size(); ++i) reports[i] = futures[i].get();
    } else {
        for (std::size_t i = 0; i < ordered.size(); ++i)
            reports[i] = run_one(config, bundle, ordered[i], profile, out_dir);
    }

    RunOutcome outcome;
    const std::string hash = config_hash(config.source_text);
    bool all_pass = true;
    for (std::size_t i = 0; i < reports.size(); ++i) {
        json& report = reports[i];
        report["config_hash"] = hash;
        report["version"] = kLibraryVersion;
        report["seed"] = config.seed;
        report["tolerance_profile"] = profile;
        report["timestamp"] = iso_timestamp();
        all_pass = all_pass && report.value("pass", false);

        const std::string path = out_dir + "/" + ordered[i].name + ".json";
        std::ofstream out(path);
        require(out.good(), "io-error", "cannot open " + path);
        out << report.dump(2) << '\n';
        outcome.report_paths.push_back(path);
    }
    outcome.exit_code = all_pass ? 0 : 2;
    return outcome;
}

json run_sigma_scan(const RunConfig& config, const std::string& ruler_name, int grid_n,
                    const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    BackendBundle bundle = build_backend(config.backend);
    require(bundle.backend->has_moments(), "capability-mismatch",
            "sigma scans need a moments-capable backend");
    const ConformalRuler ruler = resolve_ruler(config, bundle, ruler_name);
    const SigmaScan scan = find_eta_K(*bundle.backend, ruler, grid_n);

    const std::string csv_path = out_dir + "/scan_" + ruler_name + ".csv";
    write_scan_csv(scan, csv_path);

    json out;
    out["ruler"] = ruler_name;
    out["eta_K"] = scan.eta_k;
    out["sigma_min"] = scan.sigma_min;
    out["flat_minimum"] = scan.flat_minimum;
    out["csv"] = csv_path;
    out["config_hash"] = config_hash(config.source_text);
    out["version"] = kLibraryVersion;
    return out;
}

json run_embed(const RunConfig& config, const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);
    BackendBundle bundle = build_backend(config.backend);
    const EtaTable table = build_circle_eta_table(*bundle.backend, bundle.n_sites);
    const CircleEmbedding embedding = circle_embed(table);
    const double max_dev = verify_embedding(embedding, table);

    const std::string csv_path = out_dir + "/embedding.csv";
    std::ofstream csv(csv_path);
    require(csv.good(), "io-error", "cannot open " + csv_path);
    csv << "endpoint,angle\n";
    for (std::size_t i = 0; i < embedding.angles.size(); ++i)
        csv << i << ',' << csv_number(embedding.angles[i]) << '\n';

    json out;
    out["max_eta_dev"] = max_dev;
    out["csv"] = csv_path;
    json angles = json::array();
    for (double a : embedding.angles) angles.push_back(a);
    out["angles"] = angles;
    out["config_hash"] = config_hash(config.source_text);
    out["version"] = kLibraryVersion;
    return out;
}

json run_oracle_compare(const RunConfig& config) {
    json out = oracle_compare_impl(config);
    out["config_hash"] = config_hash(config.source_text);
    out["version"] = kLibraryVersion;
    return out;
}

} // namespace cruler
