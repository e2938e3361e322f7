#pragma once

#include <complex>
#include <string>
#include <utility>
#include <vector>

#include "cruler/errors.hpp"
#include "cruler/lattice.hpp"

namespace cruler {

// Formal real-weighted sum of modular Hamiltonians over named regions.
// Terms with coinciding regions are merged; zero-weight terms dropped.
struct ModularCombo {
    enum class Provenance { delta_hat, i_hat, kd_of_x, a1_vector, custom };

    std::vector<std::pair<Region, double>> terms;
    Provenance provenance = Provenance::custom;

    void add(const Region& region, double weight);
    ModularCombo& operator+=(const ModularCombo& other);
};

ModularCombo combo_scale(const ModularCombo& combo, double factor);

// State backend contract consumed by the ruler calculus. Entropy-only
// backends exist (the analytic CFT model); they advertise
// has_moments() == false and raise backend-capability on moment calls.
class StateBackend {
  public:
    virtual ~StateBackend() = default;

    virtual int site_count() const = 0;
    virtual double entropy(const Region& region) const = 0;

    virtual bool has_moments() const { return false; }

    // <O_c1 O_c2> on the reference state, O_c = sum of weight * K_region.
    virtual std::complex<double> combo_moment(const ModularCombo&, const ModularCombo&) const {
        fail("backend-capability", "this backend answers entropy queries only");
    }

    // <O_c> on the reference state.
    virtual double combo_mean(const ModularCombo&) const {
        fail("backend-capability", "this backend answers entropy queries only");
    }
};

} // namespace cruler
