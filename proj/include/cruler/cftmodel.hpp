#pragma once

#include <functional>
#include <vector>

#include "cruler/backend.hpp"

namespace cruler {

// Analytic 1+1D CFT groundstate on the unit circle: S(l) = (c/6) ln(l/eps)
// with l the chord between the interval's endpoints. The circle is split
// into elementary arcs by `angles`; backend "sites" are arc indices.
struct CFTCircle {
    double c = 1.0;
    double epsilon = 1e-3;
    std::vector<double> angles; // increasing endpoint angles in [0, 2pi)

    int n_arcs() const { return static_cast<int>(angles.size()); }
    void validate() const;
};

CFTCircle cft_equally_spaced(double c, double epsilon, int n_arcs);

// Entropy of a union of consecutive arcs [first, first+count) (cyclic).
double cft_entropy(const CFTCircle& model, int first_arc, int arc_count);

class CFTBackend : public StateBackend {
  public:
    explicit CFTBackend(CFTCircle model);

    int site_count() const override { return model_.n_arcs(); }
    // Regions must be unions of consecutive arcs (cyclically contiguous).
    double entropy(const Region& region) const override;
    bool has_moments() const override { return false; }

    const CFTCircle& model() const { return model_; }

  private:
    CFTCircle model_;
};

// Finite-difference estimate 6 (S(r) - S(r - dr)) / dr of the c-function
// limit; linear convergence in dr for smooth profiles.
double casini_huerta_estimate(const std::function<double(double)>& entropy_profile, double r,
                              double dr);

} // namespace cruler
