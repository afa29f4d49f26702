#include "brt/driving.hpp"

#include <cmath>
#include <numeric>

namespace brt {

DirectionalMeasure DirectionalMeasure::isotropic() {
    DirectionalMeasure d;
    d.dim = 2;
    d.iso_weight = 1.0;
    return d;
}

DirectionalMeasure DirectionalMeasure::atoms(std::vector<double> theta,
                                             std::vector<double> weight) {
    DirectionalMeasure d;
    d.dim = 2;
    d.iso_weight = 0.0;
    d.atom_theta = std::move(theta);
    d.atom_weight = std::move(weight);
    d.validate();
    return d;
}

DirectionalMeasure DirectionalMeasure::mixture(double iso, std::vector<double> theta,
                                               std::vector<double> weight) {
    DirectionalMeasure d;
    d.dim = 2;
    d.iso_weight = iso;
    d.atom_theta = std::move(theta);
    d.atom_weight = std::move(weight);
    d.validate();
    return d;
}

DirectionalMeasure DirectionalMeasure::one_dimensional() {
    DirectionalMeasure d;
    d.dim = 1;
    d.iso_weight = 0.0;
    d.atom_theta = {0.0};
    d.atom_weight = {1.0};
    return d;
}

void DirectionalMeasure::validate() const {
    if (dim == 1)
        return;
    if (iso_weight < 0.0)
        throw ConfigError("isotropic weight must be non-negative");
    if (atom_theta.size() != atom_weight.size())
        throw ConfigError("direction atoms and weights differ in length");
    double total = iso_weight;
    for (std::size_t i = 0; i < atom_theta.size(); ++i) {
        if (atom_weight[i] <= 0.0)
            throw ConfigError("direction atom weights must be positive");
        if (atom_theta[i] < 0.0 || atom_theta[i] >= std::acos(-1.0))
            throw ConfigError("direction atoms must lie in [0,pi)");
        for (std::size_t j = 0; j < i; ++j)
            if (std::abs(atom_theta[i] - atom_theta[j]) <= kTolGeom)
                throw ConfigError("duplicate direction atom");
        total += atom_weight[i];
    }
    if (total <= 0.0)
        throw ConfigError("directional measure has zero total weight");
}

ColourKernel ColourKernel::product(std::vector<double> nu) {
    ColourKernel k;
    k.kind = Kind::Product;
    k.nu = std::move(nu);
    k.validate();
    return k;
}

ColourKernel ColourKernel::matrix(std::vector<std::vector<double>> joint) {
    ColourKernel k;
    k.kind = Kind::Matrix;
    k.joint = std::move(joint);
    k.validate();
    return k;
}

std::size_t ColourKernel::alphabet_size() const {
    return kind == Kind::Product ? nu.size() : joint.size();
}

double ColourKernel::reference_prob(Colour sigma) const {
    if (kind != Kind::Product)
        throw ConfigError("reference probabilities require a product colour kernel");
    return nu.at(static_cast<std::size_t>(sigma));
}

namespace {

void validate_joint(const std::vector<std::vector<double>>& m, std::size_t k) {
    if (m.size() != k)
        throw ConfigError("colour matrix is not square");
    double total = 0.0;
    for (const auto& row : m) {
        if (row.size() != k)
            throw ConfigError("colour matrix is not square");
        for (double v : row) {
            if (v < 0.0)
                throw ConfigError("colour matrix entries must be non-negative");
            total += v;
        }
    }
    if (std::abs(total - 1.0) > 1e-12)
        throw ConfigError("colour matrix must sum to 1");
}

} // namespace

void ColourKernel::validate() const {
    if (kind == Kind::Product) {
        if (nu.empty())
            throw ConfigError("colour reference vector is empty");
        double total = 0.0;
        for (double v : nu) {
            if (v < 0.0)
                throw ConfigError("colour probabilities must be non-negative");
            total += v;
        }
        if (std::abs(total - 1.0) > 1e-12)
            throw ConfigError("colour reference vector must sum to 1");
        return;
    }
    if (joint.empty())
        throw ConfigError("colour matrix is empty");
    validate_joint(joint, joint.size());
    for (const auto& m : per_atom)
        validate_joint(m, joint.size());
}

void DrivingMeasure::validate() const {
    directional.validate();
    colour.validate();
    if (intensity <= 0.0)
        throw ConfigError("intensity must be positive");
}

namespace {

double adaptive_simpson(const Polytope& p, double a, double fa, double b, double fb,
                        double m, double fm, double whole, double tol, int depth) {
    const double l = 0.5 * (a + m);
    const double r = 0.5 * (m + b);
    const double fl = directional_width(p, l);
    const double fr = directional_width(p, r);
    const double left = (m - a) / 6.0 * (fa + 4.0 * fl + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * fr + fb);
    if (depth <= 0 || std::abs(left + right - whole) <= 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
    return adaptive_simpson(p, a, fa, m, fm, l, fl, left, 0.5 * tol, depth - 1) +
           adaptive_simpson(p, m, fm, b, fb, r, fr, right, 0.5 * tol, depth - 1);
}

// (1/pi) * integral over [0,pi) of the directional width.
double iso_mean_width(const Polytope& p) {
    const double pi = std::acos(-1.0);
    const double a = 0.0, b = pi, m = 0.5 * pi;
    const double fa = directional_width(p, a);
    const double fb = directional_width(p, b);
    const double fm = directional_width(p, m);
    const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    const double scale = std::max(1.0, radius(p));
    const double integral =
        adaptive_simpson(p, a, fa, b, fb, m, fm, whole, 1e-9 * scale, 40);
    return integral / pi;
}

} // namespace

double lambda_cell_mass(const DrivingMeasure& lambda, const Polytope& p) {
    const DirectionalMeasure& d = lambda.directional;
    if (d.dim == 1)
        return lambda.intensity * (p.hi - p.lo);
    double mass = 0.0;
    if (d.iso_weight > 0.0)
        mass += d.iso_weight * iso_mean_width(p);
    for (std::size_t k = 0; k < d.atom_theta.size(); ++k)
        mass += d.atom_weight[k] * directional_width(p, d.atom_theta[k]);
    return lambda.intensity * mass;
}

HyperplaneSampler::HyperplaneSampler(const DrivingMeasure& lambda, const Polytope& cell)
    : lambda_(lambda), cell_(cell) {
    const DirectionalMeasure& d = lambda.directional;
    if (d.dim == 1) {
        mass_ = lambda.intensity * (cell.hi - cell.lo);
        if (mass_ <= 0.0)
            throw ZeroMass("cell carries no driving-measure mass");
        return;
    }
    double mass = 0.0;
    if (d.iso_weight > 0.0) {
        const double pi = std::acos(-1.0);
        const double target = iso_mean_width(cell);
        std::size_t n = 1024;
        for (;;) {
            cum_.assign(n + 1, 0.0);
            grid_step_ = pi / static_cast<double>(n);
            double prev = directional_width(cell, 0.0);
            for (std::size_t i = 1; i <= n; ++i) {
                const double w = directional_width(cell, grid_step_ * static_cast<double>(i));
                cum_[i] = cum_[i - 1] + 0.5 * (prev + w) * grid_step_;
                prev = w;
            }
            iso_mass_ = cum_.back() / pi;
            if (std::abs(iso_mass_ - target) <= 1e-6 * std::max(1.0, target) || n >= 16384)
                break;
            n *= 2;
        }
        mass += d.iso_weight * iso_mass_;
    }
    atom_mass_.resize(d.atom_theta.size());
    for (std::size_t k = 0; k < d.atom_theta.size(); ++k) {
        atom_mass_[k] = d.atom_weight[k] * directional_width(cell, d.atom_theta[k]);
        mass += atom_mass_[k];
    }
    mass_ = lambda.intensity * mass;
    if (mass_ <= 0.0)
        throw ZeroMass("cell carries no driving-measure mass");
}

double HyperplaneSampler::sample_iso_theta(RngStream& rng) const {
    const double target = rng.next_double() * cum_.back();
    // binary search the cumulative table, then invert linearly
    std::size_t lo = 0, hi = cum_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (cum_[mid] <= target)
            lo = mid;
        else
            hi = mid;
    }
    const double seg = cum_[hi] - cum_[lo];
    const double t = seg > 0.0 ? (target - cum_[lo]) / seg : 0.5;
    return grid_step_ * (static_cast<double>(lo) + t);
}

BicolouredHyperplane HyperplaneSampler::sample(RngStream& rng) const {
    const DirectionalMeasure& d = lambda_.directional;
    BicolouredHyperplane H;
    int atom_index = -1;
    if (d.dim == 1) {
        H.spatial = Hyperplane::point(rng.next_uniform(cell_.lo, cell_.hi));
    } else {
        const double iso_part = d.iso_weight * iso_mass_;
        double total = iso_part;
        for (double am : atom_mass_)
            total += am;
        double u = rng.next_double() * total - iso_part;
        double theta;
        if (u < 0.0) {
            theta = sample_iso_theta(rng);
        } else {
            std::size_t k = 0;
            for (; k + 1 < atom_mass_.size(); ++k) {
                u -= atom_mass_[k];
                if (u < 0.0)
                    break;
            }
            atom_index = static_cast<int>(k);
            theta = d.atom_theta[k];
        }
        auto [lo, hi] = directional_support(cell_, theta);
        H.spatial = Hyperplane::line(theta, rng.next_uniform(lo, hi));
    }
    // colours
    const ColourKernel& ck = lambda_.colour;
    if (ck.kind == ColourKernel::Kind::Product) {
        const double total = 1.0;
        H.colour_plus = static_cast<Colour>(rng.next_categorical(ck.nu, total));
        H.colour_minus = static_cast<Colour>(rng.next_categorical(ck.nu, total));
    } else {
        const auto& m = (atom_index >= 0 &&
                         static_cast<std::size_t>(atom_index) < ck.per_atom.size())
                            ? ck.per_atom[static_cast<std::size_t>(atom_index)]
                            : ck.joint;
        const std::size_t k = m.size();
        double u = rng.next_double();
        std::size_t ij = k * k - 1;
        for (std::size_t f = 0; f + 1 < k * k; ++f) {
            u -= m[f / k][f % k];
            if (u < 0.0) {
                ij = f;
                break;
            }
        }
        H.colour_plus = static_cast<Colour>(ij / k);
        H.colour_minus = static_cast<Colour>(ij % k);
    }
    return H;
}

BicolouredHyperplane sample_hyperplane(const DrivingMeasure& lambda, const Cell& c,
                                       RngStream& rng) {
    HyperplaneSampler sampler(lambda, c.poly);
    return sampler.sample(rng);
}

double lambda_log_density_ratio(const DrivingMeasure&, const Cell&,
                                const BicolouredHyperplane&) {
    return 0.0;  // the sampler draws exactly from Lambda( . | <c>)
}

} // namespace brt
