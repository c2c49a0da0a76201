#pragma once

// Shared construction of random design instances and their Dykstra-oracle
// counterparts, used by the design unit tests and the acceptance suite.

#include <vector>

#include "cisar/design.hpp"
#include "cisar/signal.hpp"
#include "support/oracles.hpp"

namespace cisar::test {

struct DesignInstance {
    CVec reference;
    std::vector<FrequencyBand> bands;
    int block_size = 0;
    int overlap = 0;
};

/// Random instance with tight budgets (a fixed fraction of the reference's
/// band energy) so the solution is never the trivial shortcut.
inline DesignInstance random_instance(TestRng& rng, int n, int blocks) {
    DesignInstance inst;
    inst.reference = rng.complex_vector(n);
    inst.reference /= inst.reference.norm();
    inst.block_size = n / blocks;
    inst.overlap = 0;

    const int band_count = 1 + static_cast<int>(rng.uniform() * 2.0);
    for (int k = 0; k < band_count; ++k) {
        FrequencyBand band;
        // wide enough that every window order down to 6 sees a grid point
        const double width = 0.2 + 0.15 * rng.uniform();
        band.f_lo = rng.uniform() * (0.9 - width);
        band.f_hi = band.f_lo + width;
        band.energy_budget = 1.0;  // placeholder until measured below
        const double energy = band_energy(inst.reference, band);
        band.energy_budget = std::max(1e-8, (0.15 + 0.5 * rng.uniform()) * energy);
        inst.bands.push_back(band);
    }
    return inst;
}

/// Oracle sets for the full problem at order N: band ellipsoids plus one
/// selector ball per block.
inline std::vector<QuadSet> full_problem_sets(const DesignInstance& inst) {
    const int n = static_cast<int>(inst.reference.size());
    const int blocks = n / inst.block_size;
    std::vector<QuadSet> sets;
    for (const FrequencyBand& band : inst.bands) {
        QuadSet s;
        s.a = constraint_matrix(band, n).r;
        s.d = -band.energy_budget;
        sets.push_back(std::move(s));
    }
    for (int l = 0; l < blocks; ++l) {
        QuadSet s;
        s.a = CMat::Zero(n, n);
        for (int i = 0; i < inst.block_size; ++i) s.a(l * inst.block_size + i, l * inst.block_size + i) = 1.0;
        s.d = -1.0 / blocks;
        sets.push_back(std::move(s));
    }
    return sets;
}

/// Oracle sets for a first-block problem (constraints at the segment order).
inline std::vector<QuadSet> block_first_sets(const std::vector<ConstraintMatrix>& constraints,
                                             const std::vector<double>& budgets, double energy_bound,
                                             int n) {
    std::vector<QuadSet> sets;
    for (size_t k = 0; k < constraints.size(); ++k) {
        QuadSet s;
        s.a = constraints[k].r;
        s.d = -budgets[k];
        sets.push_back(std::move(s));
    }
    QuadSet ball;
    ball.a = CMat::Identity(n, n);
    ball.d = -energy_bound;
    sets.push_back(std::move(ball));
    return sets;
}

/// Oracle sets for an overlapped problem: constraints on [tail; x] reduced to
/// the free samples.
inline std::vector<QuadSet> block_overlap_sets(const CVec& tail,
                                               const std::vector<ConstraintMatrix>& constraints,
                                               const std::vector<double>& budgets, double energy_bound) {
    const int nt = static_cast<int>(tail.size());
    std::vector<QuadSet> sets;
    for (size_t k = 0; k < constraints.size(); ++k) {
        const CMat& r = constraints[k].r;
        const int ns = static_cast<int>(r.rows()) - nt;
        QuadSet s;
        s.a = r.bottomRightCorner(ns, ns);
        s.b = r.topRightCorner(nt, ns).adjoint() * tail;
        s.d = std::real(tail.dot(r.topLeftCorner(nt, nt) * tail)) - budgets[k];
        sets.push_back(std::move(s));
    }
    QuadSet ball;
    const int ns = static_cast<int>(constraints.empty() ? 0 : constraints.front().r.rows()) - nt;
    ball.a = CMat::Identity(ns, ns);
    ball.d = tail.squaredNorm() - energy_bound;
    sets.push_back(std::move(ball));
    return sets;
}

}  // namespace cisar::test
