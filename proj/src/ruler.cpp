#include "cruler/ruler.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

namespace cruler {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kLn2 = 0.6931471805599453;

double binary_entropy(double p) {
    double s = 0.0;
    if (p > 0.0) s -= p * std::log(p);
    if (p < 1.0) s -= (1.0 - p) * std::log(1.0 - p);
    return s;
}

double clamp_nonneg(double raw, double tol_ssa, const char* what) {
    if (raw >= 0.0) return raw;
    require(raw > -tol_ssa, "ssa-violation",
            std::string(what) + " = " + std::to_string(raw) +
                " is negative beyond the SSA noise tolerance");
    return 0.0;
}

} // namespace

EntropyCombo combo_delta_I(const StateBackend& backend, const ConformalRuler& ruler,
                           double tol_ssa) {
    const Region aa = region_union(ruler.A, ruler.A_prime);
    const Region cc = region_union(ruler.C, ruler.C_prime);
    const Region ab = region_union(ruler.A, ruler.B);
    const Region bc = region_union(ruler.B, ruler.C);
    const Region abc = region_union(ab, ruler.C);

    EntropyCombo out;
    out.raw_delta = backend.entropy(region_union(aa, ruler.B)) +
                    backend.entropy(region_union(cc, ruler.B)) - backend.entropy(aa) -
                    backend.entropy(cc);
    out.raw_i = backend.entropy(ab) + backend.entropy(bc) - backend.entropy(ruler.B) -
                backend.entropy(abc);
    out.delta = clamp_nonneg(out.raw_delta, tol_ssa, "Delta(D)");
    out.i_cond = clamp_nonneg(out.raw_i, tol_ssa, "I(D)");
    return out;
}

CEtaSolution solve_c_eta(const EntropyCombo& combo) {
    const double delta = combo.delta;
    const double i_cond = combo.i_cond;
    CEtaSolution out;

    if (delta == 0.0 && i_cond == 0.0) {
        out.degenerate = CEtaSolution::Degenerate::both_zero;
        return out; // c = 0, eta undetermined
    }
    if (delta == 0.0) {
        out.degenerate = CEtaSolution::Degenerate::delta_zero;
        out.eta = 1.0;
        return out;
    }
    if (i_cond == 0.0) {
        out.degenerate = CEtaSolution::Degenerate::i_zero;
        out.eta = 0.0;
        return out;
    }

    auto f = [&](double x) { return std::exp(-delta * x) + std::exp(-i_cond * x); };

    // f decreases strictly from 2 to 0; bracket the unique root of f = 1.
    double lo = 0.0;
    double hi = 1.0 / (delta + i_cond);
    while (f(hi) > 1.0) {
        lo = hi;
        hi *= 2.0;
    }
    for (int iter = 0; iter < 200 && hi - lo > 1e-16 * hi; ++iter) {
        const double mid = 0.5 * (lo + hi);
        (f(mid) > 1.0 ? lo : hi) = mid;
    }
    double x = 0.5 * (lo + hi);
    for (int iter = 0; iter < 50; ++iter) {
        const double fx = f(x) - 1.0;
        if (std::abs(fx) < 1e-15) break;
        const double dfx = -delta * std::exp(-delta * x) - i_cond * std::exp(-i_cond * x);
        x -= fx / dfx;
    }
    require(std::abs(f(x) - 1.0) < 1e-14, "solver-not-converged",
            "root of exp(-Dx)+exp(-Ix)=1 did not converge");

    out.c_tot = 6.0 / x;
    out.eta = std::exp(-delta * x);
    return out;
}

CEtaProperties c_eta_properties(const EntropyCombo& combo, const CEtaSolution& solution) {
    require(solution.degenerate == CEtaSolution::Degenerate::none, "degenerate-solution",
            "analytic identities need Delta, I > 0");
    const double eta = *solution.eta;
    const double c6 = solution.c_tot / 6.0;

    CEtaProperties props;
    props.tangent_identity =
        std::abs((combo.delta - combo.i_cond) * eta + combo.i_cond - c6 * binary_entropy(eta));
    // Delta - I = (c/6) h'(eta) with h'(eta) = ln(1-eta) - ln(eta), the form
    // consistent with Delta = -(c/6) ln eta, I = -(c/6) ln(1-eta).
    props.slope_identity = std::abs(combo.delta - combo.i_cond -
                                    c6 * (std::log1p(-eta) - std::log(eta)));
    const double bound = 3.0 * (combo.delta + combo.i_cond) / kLn2;
    props.upper_bound_margin = bound - solution.c_tot;
    props.bound_holds = props.upper_bound_margin >= -1e-10;
    return props;
}

ModularCombo delta_hat_combo(const ConformalRuler& ruler) {
    const Region aa = region_union(ruler.A, ruler.A_prime);
    const Region cc = region_union(ruler.C, ruler.C_prime);
    ModularCombo combo;
    combo.provenance = ModularCombo::Provenance::delta_hat;
    combo.add(region_union(aa, ruler.B), 1.0);
    combo.add(region_union(cc, ruler.B), 1.0);
    combo.add(aa, -1.0);
    combo.add(cc, -1.0);
    return combo;
}

ModularCombo i_hat_combo(const ConformalRuler& ruler) {
    ModularCombo combo;
    combo.provenance = ModularCombo::Provenance::i_hat;
    combo.add(region_union(ruler.A, ruler.B), 1.0);
    combo.add(region_union(ruler.B, ruler.C), 1.0);
    combo.add(ruler.B, -1.0);
    combo.add(region_union(region_union(ruler.A, ruler.B), ruler.C), -1.0);
    return combo;
}

ModularCombo kd_combo(const ConformalRuler& ruler, double x) {
    require(x >= 0.0 && x <= 1.0, "x-out-of-range",
            "K_D(x) is defined for x in [0, 1], got " + std::to_string(x));
    ModularCombo combo = combo_scale(delta_hat_combo(ruler), x);
    combo += combo_scale(i_hat_combo(ruler), 1.0 - x);
    combo.provenance = ModularCombo::Provenance::kd_of_x;
    return combo;
}

double sigma_of_combo(const StateBackend& backend, const ModularCombo& combo) {
    const double second = backend.combo_moment(combo, combo).real();
    const double mean = backend.combo_mean(combo);
    const double variance = second - mean * mean;
    require(variance > -1e-10, "negative-variance",
            "variance " + std::to_string(variance) + " below tolerance");
    return std::sqrt(std::max(variance, 0.0));
}

SigmaScan find_eta_K(const StateBackend& backend, const ConformalRuler& ruler, int grid_n) {
    require(grid_n >= 11, "grid-too-small", "sigma scan needs at least 11 grid points");

    auto sigma_at = [&](double x) { return sigma_of_combo(backend, kd_combo(ruler, x)); };

    SigmaScan scan;
    scan.xs.resize(grid_n);
    scan.sigmas.resize(grid_n);
    int best = 0;
    for (int i = 0; i < grid_n; ++i) {
        scan.xs[i] = static_cast<double>(i) / (grid_n - 1);
        scan.sigmas[i] = sigma_at(scan.xs[i]);
        if (scan.sigmas[i] < scan.sigmas[best]) best = i;
    }

    const double sigma_max = *std::max_element(scan.sigmas.begin(), scan.sigmas.end());
    if (sigma_max < 1e-12) {
        scan.flat_minimum = true;
        scan.eta_k = scan.xs[best];
        scan.sigma_min = scan.sigmas[best];
        return scan;
    }

    // Golden-section refinement seeded by the global grid minimum.
    double a = scan.xs[std::max(best - 1, 0)];
    double b = scan.xs[std::min(best + 1, grid_n - 1)];
    const double inv_phi = 0.6180339887498949;
    double x1 = b - inv_phi * (b - a);
    double x2 = a + inv_phi * (b - a);
    double f1 = sigma_at(x1);
    double f2 = sigma_at(x2);
    while (b - a > 1e-6) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - inv_phi * (b - a);
            f1 = sigma_at(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + inv_phi * (b - a);
            f2 = sigma_at(x2);
        }
    }
    scan.eta_k = 0.5 * (a + b);
    scan.sigma_min = sigma_at(scan.eta_k);
    if (scan.sigma_min > scan.sigmas[best]) {
        scan.eta_k = scan.xs[best];
        scan.sigma_min = scan.sigmas[best];
    }
    return scan;
}

std::array<double, 3> sigma_squared_polynomial(const StateBackend& backend,
                                               const ConformalRuler& ruler) {
    const ModularCombo dh = delta_hat_combo(ruler);
    const ModularCombo ih = i_hat_combo(ruler);

    const double mean_d = backend.combo_mean(dh);
    const double mean_i = backend.combo_mean(ih);
    const double dd = backend.combo_moment(dh, dh).real() - mean_d * mean_d;
    const double ii = backend.combo_moment(ih, ih).real() - mean_i * mean_i;
    const double di = backend.combo_moment(dh, ih).real() - mean_d * mean_i;

    // Var(x D + (1-x) I) with symmetrized cross moment di.
    const double a = dd + ii - 2.0 * di;
    const double b = 2.0 * (di - ii);
    const double c = ii;
    return {a, b, c};
}

double modular_commutator(const StateBackend& backend, const Region& a, const Region& b,
                          const Region& c) {
    require(regions_disjoint(a, b) && regions_disjoint(b, c) && regions_disjoint(a, c),
            "region-overlap", "modular commutator regions must be pairwise disjoint");
    ModularCombo cab, cbc;
    cab.add(region_union(a, b), 1.0);
    cbc.add(region_union(b, c), 1.0);
    return -2.0 * backend.combo_moment(cab, cbc).imag();
}

ChiralityReport eta_J_pair(const StateBackend& backend, const ConformalRuler& ruler,
                           double threshold) {
    ChiralityReport report;
    report.j_inner = modular_commutator(backend, ruler.A, ruler.B, ruler.C);
    report.j_outer = modular_commutator(backend, region_union(ruler.A, ruler.A_prime), ruler.B,
                                        region_union(ruler.C, ruler.C_prime));
    report.j_bulk = report.j_outer - report.j_inner;
    report.c_minus = 3.0 * report.j_bulk / kPi;
    require(std::abs(report.c_minus) > threshold, "nonchiral-state",
            "c_- = " + std::to_string(report.c_minus) +
                " below the chirality threshold; eta_J undefined");
    report.eta_j = -report.j_inner / report.j_bulk;
    return report;
}

BulkA1Residual bulk_a1_residual(const StateBackend& backend, const Lattice& lattice,
                                const Region& b, const Region& c, const Region& d) {
    for (const Region* r : {&b, &c, &d})
        for (int s : r->sites)
            require(!lattice.is_boundary(s), "region-touches-boundary",
                    "bulk A1 region contains boundary site " + std::to_string(s));

    BulkA1Residual out;
    const Region bc = region_union(b, c);
    const Region cd = region_union(c, d);
    out.scalar = backend.entropy(bc) + backend.entropy(cd) - backend.entropy(b) -
                 backend.entropy(d);

    if (backend.has_moments()) {
        ModularCombo combo;
        combo.provenance = ModularCombo::Provenance::a1_vector;
        combo.add(bc, 1.0);
        combo.add(cd, 1.0);
        combo.add(b, -1.0);
        combo.add(d, -1.0);
        out.vector_sigma = sigma_of_combo(backend, combo);
    }
    return out;
}

DeformationResidual deformation_residual(const StateBackend& backend, const Lattice& lattice,
                                         const ConformalRuler& ruler, const BulkMove& move) {
    const EntropyCombo before = combo_delta_I(backend, ruler);
    const ConformalRuler deformed = deform_ruler(lattice, ruler, move);
    const EntropyCombo after = combo_delta_I(backend, deformed);
    return DeformationResidual{std::abs(after.raw_delta - before.raw_delta),
                               std::abs(after.raw_i - before.raw_i)};
}

GenericityReport genericity_gram(const StateBackend& backend, const SevenPartite& parts,
                                 double c_minus, double eta1, double eta2) {
    // Delta_1 = Delta_hat(AX, B, CY), Delta_2 = Delta_hat(BY, C, DZ).
    auto delta_of = [](const Region& left, const Region& mid, const Region& right) {
        ModularCombo combo;
        combo.provenance = ModularCombo::Provenance::delta_hat;
        combo.add(region_union(left, mid), 1.0);
        combo.add(region_union(mid, right), 1.0);
        combo.add(left, -1.0);
        combo.add(right, -1.0);
        return combo;
    };
    const ModularCombo d1 = delta_of(region_union(parts.A, parts.X), parts.B,
                                     region_union(parts.C, parts.Y));
    const ModularCombo d2 = delta_of(region_union(parts.B, parts.Y), parts.C,
                                     region_union(parts.D, parts.Z));

    const std::complex<double> m11 = backend.combo_moment(d1, d1);
    const std::complex<double> m22 = backend.combo_moment(d2, d2);
    const std::complex<double> m12 = backend.combo_moment(d1, d2);
    const double e1 = backend.combo_mean(d1);
    const double e2 = backend.combo_mean(d2);

    GenericityReport report;
    report.commutator = -2.0 * m12.imag();
    report.chiral_prediction = kPi * c_minus / 3.0 * (1.0 - eta1 - eta2);

    const double n1 = std::sqrt(std::max(m11.real(), 0.0));
    const double n2 = std::sqrt(std::max(m22.real(), 0.0));
    if (n1 < 1e-14 || n2 < 1e-14) {
        report.gram_det = 0.0; // Delta|psi> vanishes: maximally non-generic
        return report;
    }

    // Gram matrix of normalized {Delta_1|psi>, Delta_2|psi>, |psi>}.
    Eigen::Matrix3cd g;
    g(0, 0) = 1.0;
    g(1, 1) = 1.0;
    g(2, 2) = 1.0;
    g(0, 1) = m12 / (n1 * n2);
    g(1, 0) = std::conj(g(0, 1));
    g(0, 2) = e1 / n1;
    g(2, 0) = std::conj(g(0, 2));
    g(1, 2) = e2 / n2;
    g(2, 1) = std::conj(g(1, 2));
    report.gram_det = g.determinant().real();
    return report;
}

} // namespace cruler
