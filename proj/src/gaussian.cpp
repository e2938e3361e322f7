#include "cruler/gaussian.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>
#include <fstream>

namespace cruler {

namespace {

double binary_entropy(double p) {
    double s = 0.0;
    if (p > 0.0) s -= p * std::log(p);
    if (p < 1.0) s -= (1.0 - p) * std::log(1.0 - p);
    return s;
}

std::vector<int> region_modes(const Region& region) {
    std::vector<int> modes;
    modes.reserve(2 * region.size());
    for (int s : region.sites) {
        modes.push_back(2 * s);
        modes.push_back(2 * s + 1);
    }
    return modes;
}

} // namespace

void MajoranaCovariance::check_antisymmetric(double tol) const {
    const double dev = (gamma + gamma.transpose()).cwiseAbs().maxCoeff();
    require(dev <= tol, "not-antisymmetric",
            "covariance deviates from antisymmetry by " + std::to_string(dev));
}

bool MajoranaCovariance::is_pure(double tol) const {
    const int n = mode_count();
    Eigen::MatrixXd test = gamma * gamma + Eigen::MatrixXd::Identity(n, n);
    return test.cwiseAbs().maxCoeff() <= tol;
}

CanonicalPairs canonical_antisymmetric(const Eigen::MatrixXd& m) {
    const int n = static_cast<int>(m.rows());
    require(n % 2 == 0, "odd-mode-count", "antisymmetric canonical form needs even dimension");
    if (n == 0) return CanonicalPairs{Eigen::MatrixXd(0, 0), Eigen::VectorXd(0)};

    Eigen::MatrixXd a = 0.5 * (m - m.transpose());
    Eigen::RealSchur<Eigen::MatrixXd> schur(a);
    require(schur.info() == Eigen::Success, "schur-failed", "real Schur did not converge");
    Eigen::MatrixXd t = schur.matrixT();
    Eigen::MatrixXd u = schur.matrixU();

    CanonicalPairs out;
    out.basis.resize(n, n);
    out.values.resize(n / 2);

    // Walk the quasi-triangular diagonal. 2x2 blocks carry the pair value;
    // 1x1 blocks are numerical zero modes and get paired in order.
    std::vector<int> singles;
    int pair = 0;
    int k = 0;
    while (k < n) {
        const bool block2 = (k + 1 < n) && (t(k + 1, k) != 0.0);
        if (block2) {
            double b = 0.5 * (t(k, k + 1) - t(k + 1, k));
            int ca = k, cb = k + 1;
            if (b < 0.0) {
                std::swap(ca, cb);
                b = -b;
            }
            out.basis.col(2 * pair) = u.col(ca);
            out.basis.col(2 * pair + 1) = u.col(cb);
            out.values(pair) = b;
            ++pair;
            k += 2;
        } else {
            singles.push_back(k);
            ++k;
        }
    }
    require(singles.size() % 2 == 0, "schur-failed", "unpaired zero mode");
    for (std::size_t i = 0; i + 1 < singles.size(); i += 2) {
        out.basis.col(2 * pair) = u.col(singles[i]);
        out.basis.col(2 * pair + 1) = u.col(singles[i + 1]);
        out.values(pair) = 0.0;
        ++pair;
    }
    return out;
}

Eigen::MatrixXd bdg_majorana_matrix(const BdGModel& model) {
    const Lattice& lat = model.lattice;
    const int n_sites = lat.site_count();
    Eigen::MatrixXd h = Eigen::MatrixXd::Zero(2 * n_sites, 2 * n_sites);

    // x_i = gamma_{2i}, y_i = gamma_{2i+1} with a_i = (x_i + i y_i)/2.
    auto add_hopping = [&h](int i, int j, std::complex<double> t) {
        // t a_i^dag a_j + h.c.
        const double tr = t.real(), ti = t.imag();
        h(2 * i, 2 * j) += ti;
        h(2 * j, 2 * i) -= ti;
        h(2 * i + 1, 2 * j + 1) += ti;
        h(2 * j + 1, 2 * i + 1) -= ti;
        h(2 * i, 2 * j + 1) += tr;
        h(2 * j + 1, 2 * i) -= tr;
        h(2 * i + 1, 2 * j) -= tr;
        h(2 * j, 2 * i + 1) += tr;
    };
    auto add_pairing = [&h](int i, int j, std::complex<double> p) {
        // p a_i^dag a_j^dag + h.c.
        const double pr = p.real(), pi = p.imag();
        h(2 * i, 2 * j) += pi;
        h(2 * j, 2 * i) -= pi;
        h(2 * i + 1, 2 * j + 1) -= pi;
        h(2 * j + 1, 2 * i + 1) += pi;
        h(2 * i, 2 * j + 1) -= pr;
        h(2 * j + 1, 2 * i) += pr;
        h(2 * i + 1, 2 * j) -= pr;
        h(2 * j, 2 * i + 1) += pr;
    };
    auto add_onsite = [&h](int i, double e) {
        // e n_i
        h(2 * i, 2 * i + 1) += e;
        h(2 * i + 1, 2 * i) -= e;
    };

    const std::complex<double> phase_x =
        std::exp(std::complex<double>(0.0, model.vector_potential[0]));
    const std::complex<double> phase_y =
        std::exp(std::complex<double>(0.0, model.vector_potential[1]));

    for (int y = 0; y < lat.height(); ++y) {
        for (int x = 0; x < lat.width(); ++x) {
            const int s = lat.site(x, y);
            if (x + 1 < lat.width()) {
                const int sx = lat.site(x + 1, y);
                add_hopping(s, sx, -model.t);
                add_pairing(s, sx, model.delta_p * phase_x);
            }
            if (y + 1 < lat.height()) {
                const int sy = lat.site(x, y + 1);
                add_hopping(s, sy, -model.t);
                add_pairing(s, sy, model.delta_p * phase_y);
            }
            add_onsite(s, -(model.mu - 4.0 * model.t));
        }
    }
    return h;
}

MajoranaCovariance ground_state_covariance(const BdGModel& model) {
    Eigen::MatrixXd h = bdg_majorana_matrix(model);
    CanonicalPairs pairs = canonical_antisymmetric(h);

    const int n_pairs = static_cast<int>(pairs.values.size());
    for (int j = 0; j < n_pairs; ++j)
        require(pairs.values(j) > 1e-10, "degenerate-ground-state",
                "Bogoliubov eigenvalue " + std::to_string(pairs.values(j)) +
                    " too close to zero");

    // Each canonical pair at positive energy sits in its n=0 state, whose
    // covariance block is -J.
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(2 * n_pairs, 2 * n_pairs);
    for (int j = 0; j < n_pairs; ++j) {
        d(2 * j, 2 * j + 1) = -1.0;
        d(2 * j + 1, 2 * j) = 1.0;
    }
    MajoranaCovariance cov;
    cov.modes.resize(2 * n_pairs);
    for (int i = 0; i < 2 * n_pairs; ++i) cov.modes[i] = i;
    cov.gamma = pairs.basis * d * pairs.basis.transpose();
    cov.gamma = 0.5 * (cov.gamma - cov.gamma.transpose().eval());
    return cov;
}

MajoranaCovariance reduce_covariance(const MajoranaCovariance& state, const Region& region) {
    std::map<int, int> index_of;
    for (int i = 0; i < state.mode_count(); ++i) index_of[state.modes[i]] = i;

    std::vector<int> modes = region_modes(region);
    std::vector<int> rows;
    rows.reserve(modes.size());
    for (int m : modes) {
        auto it = index_of.find(m);
        require(it != index_of.end(), "unknown-mode",
                "mode " + std::to_string(m) + " not present in the state");
        rows.push_back(it->second);
    }

    MajoranaCovariance out;
    out.modes = std::move(modes);
    const int k = static_cast<int>(rows.size());
    out.gamma.resize(k, k);
    for (int i = 0; i < k; ++i)
        for (int j = 0; j < k; ++j) out.gamma(i, j) = state.gamma(rows[i], rows[j]);
    return out;
}

double gaussian_entropy(const MajoranaCovariance& cov) {
    if (cov.mode_count() == 0) return 0.0;
    CanonicalPairs pairs = canonical_antisymmetric(cov.gamma);
    double s = 0.0;
    for (int j = 0; j < pairs.values.size(); ++j) {
        double nu = pairs.values(j);
        require(nu <= 1.0 + 1e-8, "spectrum-out-of-range",
                "canonical value " + std::to_string(nu) + " exceeds 1");
        nu = std::min(nu, 1.0);
        s += binary_entropy(0.5 * (1.0 + nu));
    }
    return std::max(s, 0.0);
}

QuadraticForm modular_generator(const MajoranaCovariance& cov, double eps_ker) {
    const int n = cov.mode_count();
    QuadraticForm form;
    form.modes = cov.modes;
    form.coefficient = Eigen::MatrixXd::Zero(n, n);
    form.offset = 0.0;
    if (n == 0) return form;

    CanonicalPairs pairs = canonical_antisymmetric(cov.gamma);
    Eigen::MatrixXd d = Eigen::MatrixXd::Zero(n, n);
    for (int j = 0; j < pairs.values.size(); ++j) {
        const double nu = std::min(pairs.values(j), 1.0);
        if (nu >= 1.0 - eps_ker) continue; // pure block: K = 0 on and off support
        const double kappa = std::log1p(nu) - std::log1p(-nu);
        d(2 * j, 2 * j + 1) = -kappa;
        d(2 * j + 1, 2 * j) = kappa;
        form.offset += std::log(2.0) - 0.5 * std::log1p(-nu * nu);
    }
    form.coefficient = pairs.basis * d * pairs.basis.transpose();
    form.coefficient = 0.5 * (form.coefficient - form.coefficient.transpose().eval());
    return form;
}

namespace {

// Embeds a form's coefficient into the state's mode indexing.
Eigen::MatrixXd embed_coefficient(const MajoranaCovariance& state, const QuadraticForm& o) {
    std::map<int, int> index_of;
    for (int i = 0; i < state.mode_count(); ++i) index_of[state.modes[i]] = i;
    const int n = state.mode_count();
    Eigen::MatrixXd k = Eigen::MatrixXd::Zero(n, n);
    const int m = static_cast<int>(o.modes.size());
    std::vector<int> rows(m);
    for (int i = 0; i < m; ++i) {
        auto it = index_of.find(o.modes[i]);
        require(it != index_of.end(), "embedding-mismatch",
                "form mode " + std::to_string(o.modes[i]) + " not in the state");
        rows[i] = it->second;
    }
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) k(rows[i], rows[j]) = o.coefficient(i, j);
    return k;
}

// Core Wick contraction. With M = I - i Gamma, tau_i = tr(k_i Gamma) and
// quadratic parts q_i = (i/4) gamma^T k_i gamma:
//   <q_i>      = -tau_i / 4
//   <q_1 q_2>  = tau_1 tau_2 / 16 - tr(k1 M k2 M^T) / 8
// and tr(k1 M k2 M^T) expands into real products of k1, k2, Gamma.
std::complex<double> moment_from_products(const Eigen::MatrixXd& k1, const Eigen::MatrixXd& k2,
                                          const Eigen::MatrixXd& p1, const Eigen::MatrixXd& p2,
                                          double tau1, double tau2, double s1, double s2) {
    const double tr_k1k2 = (k1.array() * k2.transpose().array()).sum();
    const double tr_k1k2g = (p2.array() * k1.transpose().array()).sum();
    const double tr_k1gk2 = (p1.array() * k2.transpose().array()).sum();
    const double tr_k1gk2g = (p1.array() * p2.transpose().array()).sum();

    const std::complex<double> tr_m(tr_k1k2 + tr_k1gk2g, tr_k1k2g - tr_k1gk2);
    std::complex<double> moment = tau1 * tau2 / 16.0 - tr_m / 8.0;
    moment += s1 * (-tau2 / 4.0) + s2 * (-tau1 / 4.0) + s1 * s2;
    return moment;
}

} // namespace

std::complex<double> quad_moment(const MajoranaCovariance& state, const QuadraticForm& o1,
                                 const QuadraticForm& o2) {
    Eigen::MatrixXd k1 = embed_coefficient(state, o1);
    Eigen::MatrixXd k2 = embed_coefficient(state, o2);
    Eigen::MatrixXd p1 = k1 * state.gamma;
    Eigen::MatrixXd p2 = k2 * state.gamma;
    const double tau1 = p1.trace();
    const double tau2 = p2.trace();
    return moment_from_products(k1, k2, p1, p2, tau1, tau2, o1.offset, o2.offset);
}

double quad_mean(const MajoranaCovariance& state, const QuadraticForm& o) {
    Eigen::MatrixXd k = embed_coefficient(state, o);
    const double tau = (k.array() * state.gamma.transpose().array()).sum();
    return -tau / 4.0 + o.offset;
}

double gaussian_modular_commutator(const MajoranaCovariance& state, const Region& a,
                                   const Region& b, const Region& c, double eps_ker) {
    require(regions_disjoint(a, b) && regions_disjoint(b, c) && regions_disjoint(a, c),
            "region-overlap", "modular commutator regions must be pairwise disjoint");
    QuadraticForm kab = modular_generator(reduce_covariance(state, region_union(a, b)), eps_ker);
    QuadraticForm kbc = modular_generator(reduce_covariance(state, region_union(b, c)), eps_ker);
    return -2.0 * quad_moment(state, kab, kbc).imag();
}

GaussianBackend::GaussianBackend(MajoranaCovariance state, double eps_ker)
    : state_(std::move(state)), eps_ker_(eps_ker) {
    state_.check_antisymmetric(1e-10);
    for (int i = 0; i < state_.mode_count(); ++i)
        require(state_.modes[i] == i, "embedding-mismatch",
                "backend expects a full-system state with modes 0..2n-1");
}

const GaussianBackend::RegionData& GaussianBackend::data(const Region& region) const {
    std::lock_guard<std::mutex> lock(cache_mutex_);
    auto it = cache_.find(region);
    if (it != cache_.end()) return it->second;

    RegionData rd;
    MajoranaCovariance reduced = reduce_covariance(state_, region);
    rd.entropy = gaussian_entropy(reduced);
    rd.form = modular_generator(reduced, eps_ker_);

    // Row-sparse product k_embedded * Gamma: only region rows are nonzero.
    const int m = static_cast<int>(rd.form.modes.size());
    const int n = state_.mode_count();
    Eigen::MatrixXd gamma_rows(m, n);
    for (int i = 0; i < m; ++i) gamma_rows.row(i) = state_.gamma.row(rd.form.modes[i]);
    rd.k_gamma = rd.form.coefficient * gamma_rows;

    rd.trace_k_gamma = 0.0;
    for (int i = 0; i < m; ++i) rd.trace_k_gamma += rd.k_gamma(i, rd.form.modes[i]);

    return cache_.emplace(region, std::move(rd)).first->second;
}

const QuadraticForm& GaussianBackend::modular_form(const Region& region) const {
    return data(region).form;
}

double GaussianBackend::entropy(const Region& region) const {
    return data(region).entropy;
}

void GaussianBackend::assemble(const ModularCombo& combo, Eigen::MatrixXd& k,
                               Eigen::MatrixXd& p, double& trace_kg, double& offset) const {
    const int n = state_.mode_count();
    k = Eigen::MatrixXd::Zero(n, n);
    p = Eigen::MatrixXd::Zero(n, n);
    trace_kg = 0.0;
    offset = 0.0;
    for (const auto& [region, weight] : combo.terms) {
        const RegionData& rd = data(region);
        const int m = static_cast<int>(rd.form.modes.size());
        for (int i = 0; i < m; ++i) {
            const int gi = rd.form.modes[i];
            p.row(gi) += weight * rd.k_gamma.row(i);
            for (int j = 0; j < m; ++j) k(gi, rd.form.modes[j]) += weight * rd.form.coefficient(i, j);
        }
        trace_kg += weight * rd.trace_k_gamma;
        offset += weight * rd.form.offset;
    }
}

std::complex<double> GaussianBackend::combo_moment(const ModularCombo& c1,
                                                   const ModularCombo& c2) const {
    Eigen::MatrixXd k1, p1, k2, p2;
    double tau1, tau2, s1, s2;
    assemble(c1, k1, p1, tau1, s1);
    assemble(c2, k2, p2, tau2, s2);
    return moment_from_products(k1, k2, p1, p2, tau1, tau2, s1, s2);
}

double GaussianBackend::combo_mean(const ModularCombo& combo) const {
    double mean = 0.0;
    for (const auto& [region, weight] : combo.terms) {
        const RegionData& rd = data(region);
        mean += weight * (-rd.trace_k_gamma / 4.0 + rd.form.offset);
    }
    return mean;
}

void write_covariance_csv(const MajoranaCovariance& cov, const std::string& path) {
    std::ofstream out(path);
    require(out.good(), "io-error", "cannot open " + path);
    out << "# modes," << cov.mode_count() << "\n";
    out.precision(17);
    for (int i = 0; i < cov.mode_count(); ++i) {
        for (int j = 0; j < cov.mode_count(); ++j) {
            if (j) out << ',';
            out << cov.gamma(i, j);
        }
        out << '\n';
    }
}

} // namespace cruler
