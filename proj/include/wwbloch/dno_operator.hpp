#pragma once

#include <vector>

#include "wwbloch/fourier_core.hpp"

namespace wwbloch {

// Taylor terms of the Bloch-conjugated Dirichlet-Neumann operator,
// G_theta[eps*beta] = sum_p eps^p M_p, truncated to 'trunc'.
struct DnoSeries {
    Truncation trunc;
    BlochParameter theta;
    double h;
    std::vector<Matrix> terms;  // terms[p] = M_p, p = 0..order

    int order() const { return static_cast<int>(terms.size()) - 1; }
};

// M_0..M_order. Each term is assembled on an enlarged truncation
// N + order*supp(beta) and cropped back, so the returned blocks carry no
// truncation error in their interior entries. order in 1..4.
DnoSeries build_M_terms(const BathymetryProfile& profile, BlochParameter theta,
                        Truncation trunc, int order);

// sum_p eps^p M_p; eps = 0 short-circuits to the diagonal flat-bottom symbol.
Matrix assemble_G_theta(const BathymetryProfile& profile, BlochParameter theta,
                        Truncation trunc, int order);

// Independent reference: solve the conjugated Laplace problem on the
// sigma-mapped strip with second-order finite differences and read off the
// surface flux. With 'richardson' set, two grids (nx,nsigma) and doubled are
// combined to cancel the leading O(h^2) error.
struct OracleResolution {
    int nx = 128;
    int nsigma = 128;
    bool richardson = false;
};

// Applies G_theta to the surface trace psi; returns modes -N..N of the result
// where N = psi.max_mode().
FourierField apply_dno_oracle(const BathymetryProfile& profile,
                              BlochParameter theta, const FourierField& psi,
                              OracleResolution res);

} // namespace wwbloch
