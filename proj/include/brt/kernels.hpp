#pragma once

#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "brt/driving.hpp"
#include "brt/tessellation.hpp"

namespace brt {

inline constexpr double kInf = std::numeric_limits<double>::infinity();

// Window-edge convention of the opposite-type surface fraction: the
// default counts the cell's full perimeter in the denominator (so window
// edges dilute the fraction); NeighboursOnly normalises by the boundary
// actually shared with other cells.
enum class EdgeRule { WindowNeutral, NeighboursOnly };

// Opposite-type surface fraction of `cell` within the tessellation: the
// fraction of its boundary shared with cells of the other colour.
double surface_fraction(const Tessellation& state, const Cell& cell,
                        EdgeRule rule = EdgeRule::WindowNeutral);

// beta(age, surface_fraction): a tabulated positive function on [0,1]^2
// with bilinear interpolation, plus the constant and (1+s)/2 presets.
class BetaTable {
public:
    static BetaTable constant(double value);
    static BetaTable half_one_plus_s();  // beta(s) = (1+s)/2, no aging
    static BetaTable grid(std::vector<std::vector<double>> values);

    double operator()(double age, double sfrac) const;
    double min_value() const { return min_; }
    double max_value() const { return max_; }

private:
    std::vector<std::vector<double>> values_;  // values_[i][j] at (age_i, s_j)
    double min_ = 1.0, max_ = 1.0;
};

// Division kernel Psi(s, T_s, c, dH) = psi(s, T_s, c, H) 1_{<c>}(H) Lambda(dH),
// carried by its density psi relative to the driving measure, plus the
// moderation metadata (log bound kappa, interaction range, STIT-deviation
// bound kappa').
class Kernel {
public:
    virtual ~Kernel() = default;
    virtual std::string name() const = 0;

    // psi evaluated at (s, T_s, c, H); callers guarantee c in T_s and
    // H in <c>.
    virtual double density(double s, const Tessellation& state, const Cell& cell,
                           const BicolouredHyperplane& cut) const = 0;

    virtual double kappa() const = 0;  // sup |log psi|; kInf if unbounded
    virtual double range() const { return 0.0; }
    virtual double kappa_prime() const { return kInf; }
    virtual bool interacting() const { return false; }

    // sup over (s, histories, H in <c>) of psi; the thinning envelope is
    // sup_density(c) * Lambda(<c>).
    virtual double sup_density(const Cell& cell) const;
};

using KernelPtr = std::shared_ptr<const Kernel>;

// Dominating tentative-event rate for the thinning simulator.
double proposal_bound(const Kernel& k, const DrivingMeasure& lambda, const Cell& cell);

// Density evaluated against a full history with an aliveness check
// (CellNotAlive when the cell is not part of T_s).
double density_at(const Kernel& k, double s, const BranchingTessellation& history,
                  CellId cell, const BicolouredHyperplane& cut);

// --- concrete kernels -------------------------------------------------------

// psi == 1: all cells split independently at rate Lambda(<c>).
class StitKernel final : public Kernel {
public:
    std::string name() const override { return "stit"; }
    double density(double, const Tessellation&, const Cell&,
                   const BicolouredHyperplane&) const override {
        return 1.0;
    }
    double kappa() const override { return 0.0; }
    double kappa_prime() const override { return 0.0; }
};

class ConstantDensityKernel final : public Kernel {
public:
    explicit ConstantDensityKernel(double a);
    std::string name() const override { return "constant"; }
    double density(double, const Tessellation&, const Cell&,
                   const BicolouredHyperplane&) const override {
        return a_;
    }
    double kappa() const override;
    double kappa_prime() const override { return a_ == 1.0 ? 0.0 : kInf; }
    double sup_density(const Cell&) const override { return a_; }
    double value() const { return a_; }

private:
    double a_;
};

// phi(c, eta) = eps 1_{<c>}(eta) + (1/eps) 1_{<eps*c>}(eta): cuts typically
// pass near the cell centre so daughters have comparable size.
class SizeBalanceKernel final : public Kernel {
public:
    explicit SizeBalanceKernel(double eps);
    std::string name() const override { return "size_balance"; }
    double density(double, const Tessellation&, const Cell& cell,
                   const BicolouredHyperplane& cut) const override;
    double kappa() const override;
    double sup_density(const Cell&) const override { return eps_ + 1.0 / eps_; }
    double epsilon() const { return eps_; }

private:
    double eps_;
};

// Every cell splits at total rate 1 regardless of size: psi = 1/Lambda(<c>).
// The leaf count of a single ancestor at time t is then geometric with
// mean e^t (pure birth process).
class UnitRateKernel final : public Kernel {
public:
    explicit UnitRateKernel(DrivingMeasure lambda) : lambda_(std::move(lambda)) {}
    std::string name() const override { return "unit_rate"; }
    double density(double, const Tessellation&, const Cell& cell,
                   const BicolouredHyperplane&) const override {
        return 1.0 / lambda_cell_mass(lambda_, cell);
    }
    double kappa() const override { return kInf; }
    double sup_density(const Cell& cell) const override {
        return 1.0 / lambda_cell_mass(lambda_, cell);
    }

private:
    DrivingMeasure lambda_;
};

// General cell-driven kernel for library/test use: psi = phi(c, H).
class CellDrivenKernel final : public Kernel {
public:
    using Phi = std::function<double(const Cell&, const BicolouredHyperplane&)>;
    CellDrivenKernel(Phi phi, double kappa, double sup)
        : phi_(std::move(phi)), kappa_(kappa), sup_(sup) {}
    std::string name() const override { return "cell_driven"; }
    double density(double, const Tessellation&, const Cell& cell,
                   const BicolouredHyperplane& cut) const override {
        return phi_(cell, cut);
    }
    double kappa() const override { return kappa_; }
    double sup_density(const Cell&) const override { return sup_; }

private:
    Phi phi_;
    double kappa_;
    double sup_;
};

// Contact-induced mutations with size balancing and aging: the geometric
// prefactor of SizeBalance combined with the colouring rule
//   mu(s, T_s, c, .) = (delta_col(c) + beta(age, sfrac) delta_-col(c)) / (1 + beta),
// expressed as a density relative to Lambda's product colour reference nu.
class MutationKernel final : public Kernel {
public:
    MutationKernel(double eps, BetaTable beta, std::vector<double> nu,
                   EdgeRule edge = EdgeRule::WindowNeutral);
    std::string name() const override { return "mutation"; }
    double density(double s, const Tessellation& state, const Cell& cell,
                   const BicolouredHyperplane& cut) const override;
    double kappa() const override { return kappa_; }
    double kappa_prime() const override { return kInf; }
    bool interacting() const override { return true; }
    double sup_density(const Cell&) const override { return sup_; }

    // Unnormalised colour weight: 1 for keeping col(c), beta(age, sfrac)
    // for flipping.
    double colour_weight(double s, const Tessellation& state, const Cell& cell,
                         Colour sigma) const;
    double epsilon() const { return eps_; }
    const BetaTable& beta() const { return beta_; }

private:
    double eps_;
    BetaTable beta_;
    std::vector<double> nu_;
    EdgeRule edge_;
    double kappa_ = 0.0;
    double sup_ = 0.0;
};

// Infinite-range planar kernel: all cuts are horizontal when `horizontal'
// cells dominate the current tessellation, vertical otherwise. Exists to
// exhibit non-uniqueness; not moderate (kappa = inf).
class DirectionalKernel final : public Kernel {
public:
    explicit DirectionalKernel(DrivingMeasure lambda);
    std::string name() const override { return "directional"; }
    double density(double s, const Tessellation& state, const Cell& cell,
                   const BicolouredHyperplane& cut) const override;
    double kappa() const override { return kInf; }
    double range() const override { return kInf; }
    bool interacting() const override { return true; }
    double sup_density(const Cell&) const override { return sup_; }

private:
    DrivingMeasure lambda_;
    double weight_vert_normal_ = 0.0;  // atom weight at theta = 0
    double weight_hor_normal_ = 0.0;   // atom weight at theta = pi/2
    double sup_ = 0.0;
};

// True when the x-extent of the cell exceeds its y-extent.
bool is_horizontal_cell(const Polytope& p);
// Density of horizontal cells with centroid in `window`, per unit area.
double horizontal_cell_density(const Tessellation& state, const Polytope& window);

// Corridor/block combinator: the inner kernel acts on cells inside the
// shifted boxes [n]_i = [n] + (n+r) i, STIT in the corridors between them.
class BlockKernel final : public Kernel {
public:
    BlockKernel(KernelPtr inner, double box_side, double corridor);
    std::string name() const override { return "block"; }
    double density(double s, const Tessellation& state, const Cell& cell,
                   const BicolouredHyperplane& cut) const override;
    double kappa() const override { return inner_->kappa(); }
    double range() const override { return inner_->range(); }
    bool interacting() const override { return inner_->interacting(); }
    double sup_density(const Cell& cell) const override {
        return std::max(inner_->sup_density(cell), 1.0);
    }
    // True when the cell lies inside one of the grid boxes.
    bool inside_box(const Polytope& p) const;

private:
    KernelPtr inner_;
    double side_;
    double pitch_;
};

} // namespace brt
