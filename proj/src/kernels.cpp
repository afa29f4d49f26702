#include "brt/kernels.hpp"

#include <algorithm>
#include <cmath>

namespace brt {

namespace {

// exact coordinate identity; interior-disjoint cells can never collide
bool same_polytope(const Polytope& a, const Polytope& b) {
    if (a.dim != b.dim)
        return false;
    if (a.dim == 1)
        return a.lo == b.lo && a.hi == b.hi;
    return a.verts == b.verts;
}

} // namespace

double surface_fraction(const Tessellation& state, const Cell& cell, EdgeRule rule) {
    auto [mn, mx] = bounding_box(cell.poly);
    double opposite = 0.0;
    double shared = 0.0;
    for (const Cell& other : state.cells) {
        if (&other == &cell || same_polytope(other.poly, cell.poly))
            continue;
        auto [omn, omx] = bounding_box(other.poly);
        if (omn.x > mx.x + kTolGeom || mn.x > omx.x + kTolGeom ||
            (cell.poly.dim == 2 &&
             (omn.y > mx.y + kTolGeom || mn.y > omx.y + kTolGeom)))
            continue;
        const double len = shared_boundary_length(cell.poly, other.poly);
        shared += len;
        if (other.colour != cell.colour)
            opposite += len;
    }
    const double denom =
        rule == EdgeRule::WindowNeutral ? perimeter(cell.poly) : shared;
    if (denom <= 0.0)
        return 0.0;
    return std::min(1.0, opposite / denom);
}

BetaTable BetaTable::constant(double value) {
    if (value <= 0.0)
        throw ConfigError("beta must be positive");
    BetaTable b;
    b.values_ = {{value}};
    b.min_ = b.max_ = value;
    return b;
}

BetaTable BetaTable::half_one_plus_s() {
    // beta(s) = (1+s)/2 tabulated exactly (linear in s, no age dependence)
    BetaTable b;
    b.values_ = {{0.5, 1.0}};
    b.min_ = 0.5;
    b.max_ = 1.0;
    return b;
}

BetaTable BetaTable::grid(std::vector<std::vector<double>> values) {
    if (values.empty() || values.front().empty())
        throw ConfigError("beta grid is empty");
    const std::size_t cols = values.front().size();
    BetaTable b;
    b.min_ = kInf;
    b.max_ = 0.0;
    for (const auto& row : values) {
        if (row.size() != cols)
            throw ConfigError("beta grid rows differ in length");
        for (double v : row) {
            if (v <= 0.0)
                throw ConfigError("beta must be positive");
            b.min_ = std::min(b.min_, v);
            b.max_ = std::max(b.max_, v);
        }
    }
    b.values_ = std::move(values);
    return b;
}

double BetaTable::operator()(double age, double sfrac) const {
    const auto clamp01 = [](double x) { return std::min(1.0, std::max(0.0, x)); };
    const double a = clamp01(age);
    const double s = clamp01(sfrac);
    const std::size_t rows = values_.size();
    const std::size_t cols = values_.front().size();
    const double ai = a * static_cast<double>(rows - 1);
    const double sj = s * static_cast<double>(cols - 1);
    const std::size_t i0 = std::min(rows - 1, static_cast<std::size_t>(ai));
    const std::size_t j0 = std::min(cols - 1, static_cast<std::size_t>(sj));
    const std::size_t i1 = std::min(rows - 1, i0 + 1);
    const std::size_t j1 = std::min(cols - 1, j0 + 1);
    const double ta = ai - static_cast<double>(i0);
    const double ts = sj - static_cast<double>(j0);
    const double v0 = values_[i0][j0] * (1.0 - ts) + values_[i0][j1] * ts;
    const double v1 = values_[i1][j0] * (1.0 - ts) + values_[i1][j1] * ts;
    return v0 * (1.0 - ta) + v1 * ta;
}

double Kernel::sup_density(const Cell&) const {
    return std::exp(kappa());
}

double proposal_bound(const Kernel& k, const DrivingMeasure& lambda, const Cell& cell) {
    const double sup = k.sup_density(cell);
    if (!std::isfinite(sup))
        throw NonModerate("kernel admits no finite thinning envelope");
    return sup * lambda_cell_mass(lambda, cell);
}

double density_at(const Kernel& k, double s, const BranchingTessellation& history,
                  CellId cell, const BicolouredHyperplane& cut) {
    const Tessellation state = state_at(history, s);
    for (std::size_t i = 0; i < state.cells.size(); ++i) {
        if (state.id_at(i) == cell)
            return k.density(s, state, state.cells[i], cut);
    }
    throw CellNotAlive("cell is not part of the tessellation at this time");
}

ConstantDensityKernel::ConstantDensityKernel(double a) : a_(a) {
    if (a <= 0.0)
        throw ConfigError("constant kernel density must be positive");
}

double ConstantDensityKernel::kappa() const {
    return std::abs(std::log(a_));
}

SizeBalanceKernel::SizeBalanceKernel(double eps) : eps_(eps) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw ConfigError("size-balance epsilon must lie in (0,1]");
}

double SizeBalanceKernel::density(double, const Tessellation&, const Cell& cell,
                                  const BicolouredHyperplane& cut) const {
    double psi = eps_;
    const Vec2 m = centroid(cell.poly);
    // support of the retraction without materialising it
    auto [lo, hi] = directional_support(cell.poly, cut.spatial.theta);
    const double mc = cell.poly.dim == 1 ? m.x : dot(m, cut.spatial.normal());
    const double rlo = mc + eps_ * (lo - mc);
    const double rhi = mc + eps_ * (hi - mc);
    if (rlo < cut.spatial.r && cut.spatial.r < rhi)
        psi += 1.0 / eps_;
    return psi;
}

double SizeBalanceKernel::kappa() const {
    return std::max(std::abs(std::log(eps_)), std::abs(std::log(eps_ + 1.0 / eps_)));
}

MutationKernel::MutationKernel(double eps, BetaTable beta, std::vector<double> nu,
                               EdgeRule edge)
    : eps_(eps), beta_(std::move(beta)), nu_(std::move(nu)), edge_(edge) {
    if (!(eps > 0.0 && eps <= 1.0))
        throw ConfigError("mutation epsilon must lie in (0,1]");
    if (nu_.size() != 2)
        throw ConfigError("mutation kernel needs a two-colour alphabet");
    for (double v : nu_)
        if (v <= 0.0)
            throw ConfigError("mutation kernel needs positive colour reference weights");
    // extremes of the colour factor product over beta and colour choices;
    // the mixed product beta/(1+beta)^2 is stationary at beta = 1
    std::vector<double> betas{beta_.min_value(), beta_.max_value()};
    if (beta_.min_value() < 1.0 && beta_.max_value() > 1.0)
        betas.push_back(1.0);
    const double geom_lo = eps_;
    const double geom_hi = eps_ + 1.0 / eps_;
    double lo = kInf, hi = 0.0;
    for (double b : betas) {
        const double z = 1.0 + b;
        for (int col = 0; col < 2; ++col) {
            const double w_keep = 1.0, w_flip = b;
            for (int sp = 0; sp < 2; ++sp)
                for (int sm = 0; sm < 2; ++sm) {
                    const double fp =
                        (sp == col ? w_keep : w_flip) / (nu_[static_cast<std::size_t>(sp)] * z);
                    const double fm =
                        (sm == col ? w_keep : w_flip) / (nu_[static_cast<std::size_t>(sm)] * z);
                    lo = std::min(lo, fp * fm);
                    hi = std::max(hi, fp * fm);
                }
        }
    }
    sup_ = geom_hi * hi;
    kappa_ = std::max(std::abs(std::log(geom_lo * lo)), std::abs(std::log(sup_)));
}

double MutationKernel::colour_weight(double s, const Tessellation& state,
                                     const Cell& cell, Colour sigma) const {
    if (sigma == cell.colour)
        return 1.0;
    return beta_(s - cell.birth_time, surface_fraction(state, cell, edge_));
}

double MutationKernel::density(double s, const Tessellation& state, const Cell& cell,
                               const BicolouredHyperplane& cut) const {
    // geometric prefactor, as in SizeBalance
    double geom = eps_;
    const Vec2 m = centroid(cell.poly);
    auto [lo, hi] = directional_support(cell.poly, cut.spatial.theta);
    const double mc = cell.poly.dim == 1 ? m.x : dot(m, cut.spatial.normal());
    const double rlo = mc + eps_ * (lo - mc);
    const double rhi = mc + eps_ * (hi - mc);
    if (rlo < cut.spatial.r && cut.spatial.r < rhi)
        geom += 1.0 / eps_;
    // colour factor relative to nu (x) nu, normalised per half-space
    const double b = beta_(s - cell.birth_time, surface_fraction(state, cell, edge_));
    const double z = 1.0 + b;
    const auto factor = [&](Colour sigma) {
        const double w = sigma == cell.colour ? 1.0 : b;
        return w / (nu_[static_cast<std::size_t>(sigma)] * z);
    };
    return geom * factor(cut.colour_plus) * factor(cut.colour_minus);
}

bool is_horizontal_cell(const Polytope& p) {
    auto [mn, mx] = bounding_box(p);
    return mx.x - mn.x > mx.y - mn.y;
}

double horizontal_cell_density(const Tessellation& state, const Polytope& window) {
    std::size_t n = 0;
    for (const Cell& c : state.cells)
        if (is_horizontal_cell(c.poly) && contains_point(window, centroid(c.poly)))
            ++n;
    return static_cast<double>(n) / area(window);
}

DirectionalKernel::DirectionalKernel(DrivingMeasure lambda) : lambda_(std::move(lambda)) {
    const double pi = std::acos(-1.0);
    const auto& d = lambda_.directional;
    if (d.dim != 2)
        throw NonModerate("directional kernel is planar only");
    for (std::size_t k = 0; k < d.atom_theta.size(); ++k) {
        if (std::abs(d.atom_theta[k]) <= kTolGeom)
            weight_vert_normal_ = d.atom_weight[k];
        else if (std::abs(d.atom_theta[k] - 0.5 * pi) <= kTolGeom)
            weight_hor_normal_ = d.atom_weight[k];
    }
    if (weight_vert_normal_ <= 0.0 || weight_hor_normal_ <= 0.0)
        throw NonModerate(
            "directional kernel needs driving-measure atoms at theta = 0 and pi/2");
    sup_ = std::max(1.0 / (lambda_.intensity * weight_vert_normal_),
                    1.0 / (lambda_.intensity * weight_hor_normal_));
}

double DirectionalKernel::density(double, const Tessellation& state, const Cell&,
                                  const BicolouredHyperplane& cut) const {
    const double pi = std::acos(-1.0);
    std::size_t hor = 0;
    for (const Cell& c : state.cells)
        hor += is_horizontal_cell(c.poly) ? 1 : 0;
    const bool hor_dominates = 2 * hor > state.cells.size();
    // horizontal cuts have normal (0,1), i.e. theta = pi/2
    const bool cut_horizontal = std::abs(cut.spatial.theta - 0.5 * pi) <= kTolGeom;
    const bool cut_vertical = std::abs(cut.spatial.theta) <= kTolGeom;
    if (hor_dominates && cut_horizontal)
        return 1.0 / (lambda_.intensity * weight_hor_normal_);
    if (!hor_dominates && cut_vertical)
        return 1.0 / (lambda_.intensity * weight_vert_normal_);
    return 0.0;
}

BlockKernel::BlockKernel(KernelPtr inner, double box_side, double corridor)
    : inner_(std::move(inner)), side_(box_side), pitch_(box_side + corridor) {
    if (!inner_)
        throw ConfigError("block kernel needs an inner kernel");
    if (box_side <= 0.0 || corridor < 0.0)
        throw ConfigError("block kernel needs box_side > 0 and corridor >= 0");
}

bool BlockKernel::inside_box(const Polytope& p) const {
    auto [mn, mx] = bounding_box(p);
    const int dims = p.dim;
    const double coords_mn[2] = {mn.x, mn.y};
    const double coords_mx[2] = {mx.x, mx.y};
    for (int j = 0; j < dims; ++j) {
        const double centre = 0.5 * (coords_mn[j] + coords_mx[j]);
        const double i = std::round(centre / pitch_);
        const double box_lo = pitch_ * i - 0.5 * side_;
        const double box_hi = pitch_ * i + 0.5 * side_;
        if (coords_mn[j] < box_lo - kTolGeom || coords_mx[j] > box_hi + kTolGeom)
            return false;
    }
    return true;
}

double BlockKernel::density(double s, const Tessellation& state, const Cell& cell,
                            const BicolouredHyperplane& cut) const {
    if (inside_box(cell.poly))
        return inner_->density(s, state, cell, cut);
    return 1.0;
}

} // namespace brt
