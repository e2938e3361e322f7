#include "cruler/cftmodel.hpp"

#include <cmath>

namespace cruler {

namespace {
constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double chord(double theta_u, double theta_v) {
    return 2.0 * std::abs(std::sin(0.5 * (theta_v - theta_u)));
}
} // namespace

void CFTCircle::validate() const {
    require(c > 0.0, "invalid-model", "central charge must be positive");
    require(epsilon > 0.0, "invalid-model", "UV cutoff must be positive");
    require(n_arcs() >= 3, "invalid-model", "need at least 3 arcs on the circle");
    double min_chord = 2.0;
    for (int i = 0; i < n_arcs(); ++i) {
        const double next = (i + 1 < n_arcs()) ? angles[i + 1] : angles[0] + kTwoPi;
        require(next > angles[i], "invalid-model", "endpoint angles must strictly increase");
        min_chord = std::min(min_chord, chord(angles[i], next));
    }
    require(epsilon < min_chord, "invalid-model", "cutoff must be below the smallest chord");
}

CFTCircle cft_equally_spaced(double c, double epsilon, int n_arcs) {
    CFTCircle model;
    model.c = c;
    model.epsilon = epsilon;
    for (int i = 0; i < n_arcs; ++i) model.angles.push_back(kTwoPi * i / n_arcs);
    model.validate();
    return model;
}

double cft_entropy(const CFTCircle& model, int first_arc, int arc_count) {
    const int n = model.n_arcs();
    require(arc_count > 0, "empty-interval", "CFT entropy needs a nonempty interval");
    if (arc_count >= n) return 0.0; // whole circle: pure state
    const double theta_a = model.angles[((first_arc % n) + n) % n];
    const int last = (first_arc + arc_count) % n;
    double theta_b = model.angles[((last % n) + n) % n];
    if (theta_b <= theta_a) theta_b += kTwoPi;
    return model.c / 6.0 * std::log(chord(theta_a, theta_b) / model.epsilon);
}

CFTBackend::CFTBackend(CFTCircle model) : model_(std::move(model)) {
    model_.validate();
}

double CFTBackend::entropy(const Region& region) const {
    const int n = model_.n_arcs();
    if (region.empty()) return 0.0;
    const int count = static_cast<int>(region.size());
    if (count >= n) return 0.0;
    for (int arc : region.sites)
        require(arc >= 0 && arc < n, "empty-interval",
                "arc index " + std::to_string(arc) + " outside the circle");

    // Find the unique cyclic run: the first arc whose predecessor is absent.
    int first = -1;
    for (int arc : region.sites) {
        const int prev = (arc + n - 1) % n;
        if (!region.contains(prev)) {
            require(first < 0, "non-contiguous-interval",
                    "CFT regions must be cyclically contiguous arc unions");
            first = arc;
        }
    }
    require(first >= 0, "non-contiguous-interval", "region is not a contiguous arc run");
    for (int i = 0; i < count; ++i)
        require(region.contains((first + i) % n), "non-contiguous-interval",
                "CFT regions must be cyclically contiguous arc unions");
    return cft_entropy(model_, first, count);
}

double casini_huerta_estimate(const std::function<double(double)>& entropy_profile, double r,
                              double dr) {
    require(dr > 0.0 && dr < r, "invalid-window", "need 0 < dr < r");
    return 6.0 * (entropy_profile(r) - entropy_profile(r - dr)) / dr;
}

} // namespace cruler
