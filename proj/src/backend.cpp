#include "cruler/backend.hpp"

#include <algorithm>

namespace cruler {

void ModularCombo::add(const Region& region, double weight) {
    if (weight == 0.0) return;
    for (auto& [r, w] : terms) {
        if (r == region) {
            w += weight;
            if (w == 0.0) {
                terms.erase(std::find_if(terms.begin(), terms.end(),
                                         [&](const auto& t) { return t.first == region; }));
            }
            return;
        }
    }
    terms.emplace_back(region, weight);
}

ModularCombo& ModularCombo::operator+=(const ModularCombo& other) {
    for (const auto& [r, w] : other.terms) add(r, w);
    return *this;
}

ModularCombo combo_scale(const ModularCombo& combo, double factor) {
    ModularCombo out;
    out.provenance = combo.provenance;
    if (factor == 0.0) return out;
    for (const auto& [r, w] : combo.terms) out.terms.emplace_back(r, w * factor);
    return out;
}

} // namespace cruler
