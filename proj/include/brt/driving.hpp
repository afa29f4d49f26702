#pragma once

#include <vector>

#include "brt/geometry.hpp"
#include "brt/rng.hpp"

namespace brt {

// Directional marginal of the driving measure: an isotropic component with
// the normalised surface measure dtheta/pi on [0,pi) plus finitely many
// atoms. d=1 admits only the single direction u=1 with weight 1.
struct DirectionalMeasure {
    int dim = 2;
    double iso_weight = 1.0;
    std::vector<double> atom_theta;
    std::vector<double> atom_weight;

    static DirectionalMeasure isotropic();
    static DirectionalMeasure atoms(std::vector<double> theta, std::vector<double> weight);
    static DirectionalMeasure mixture(double iso, std::vector<double> theta,
                                      std::vector<double> weight);
    static DirectionalMeasure one_dimensional();
    void validate() const;
};

// Joint colour law mu(u, .) on pairs (colour_plus, colour_minus): either a
// product nu (x) nu of a reference vector, or an explicit joint matrix with
// optional per-atom overrides for atomic directions.
struct ColourKernel {
    enum class Kind { Product, Matrix } kind = Kind::Product;
    std::vector<double> nu;                              // Product
    std::vector<std::vector<double>> joint;              // Matrix, shared
    std::vector<std::vector<std::vector<double>>> per_atom;  // Matrix, optional

    static ColourKernel product(std::vector<double> nu);
    static ColourKernel matrix(std::vector<std::vector<double>> joint);
    std::size_t alphabet_size() const;
    // nu(sigma) for Product kernels; needed by the mutation kernel's
    // density normalisation.
    double reference_prob(Colour sigma) const;
    void validate() const;
};

// Translation-invariant bicoloured-hyperplane measure
//   Lambda(dH) = intensity * lambda(du) dr mu(u, dcolours);
// the offset marginal is always Lebesgue.
struct DrivingMeasure {
    DirectionalMeasure directional;
    ColourKernel colour;
    double intensity = 1.0;

    void validate() const;
};

// Lambda mass of the hyperplanes hitting int(c): intensity * (integral of
// the directional width against lambda). The isotropic part is evaluated by
// adaptive quadrature (equals perimeter/pi in the exact isotropic case).
double lambda_cell_mass(const DrivingMeasure& lambda, const Polytope& p);
inline double lambda_cell_mass(const DrivingMeasure& lambda, const Cell& c) {
    return lambda_cell_mass(lambda, c.poly);
}

// Inverse-CDF sampler for H ~ Lambda( . | <c>), the normalised restriction
// to hyperplanes hitting int(c). The isotropic direction component uses a
// tabulated cumulative width integral, refined until it matches the
// quadrature mass to 1e-6 relative.
class HyperplaneSampler {
public:
    HyperplaneSampler(const DrivingMeasure& lambda, const Polytope& cell);

    BicolouredHyperplane sample(RngStream& rng) const;
    double mass() const { return mass_; }

private:
    DrivingMeasure lambda_;
    Polytope cell_;
    double mass_ = 0.0;          // includes the intensity factor
    double iso_mass_ = 0.0;      // excludes it
    std::vector<double> atom_mass_;
    std::vector<double> cum_;    // cumulative iso width over the theta grid
    double grid_step_ = 0.0;

    double sample_iso_theta(RngStream& rng) const;
};

BicolouredHyperplane sample_hyperplane(const DrivingMeasure& lambda, const Cell& c,
                                       RngStream& rng);

// Log density of the sampling law of sample_hyperplane relative to the
// normalised restriction Lambda( . | <c>). The sampler is exact, so this is
// identically zero; estimators reference it to state their importance
// weights explicitly.
double lambda_log_density_ratio(const DrivingMeasure& lambda, const Cell& c,
                                const BicolouredHyperplane& H);

} // namespace brt
