#pragma once

#include <optional>
#include <vector>

#include "cisar/types.hpp"

namespace cisar {

/// Temporal steering vector tuned to normalized frequency f:
/// element n = exp(-j*2*pi*f*n)/sqrt(N), n = 0..N-1. Unit Euclidean norm.
CVec steering_vector(double f, int n);

/// N x N DFT matrix scaled by 1/sqrt(N); entry (m,n) = exp(-j*2*pi*m*n/N)/sqrt(N).
/// Unitary and symmetric. Column i equals steering_vector(i/N, N).
CMat fourier_matrix(int n);

/// Evaluate the DTFT of `c` at the given normalized frequencies:
/// X(f) = sum_n c(n) exp(-j*2*pi*f*n).
CVec dtft(const CVec& c, const std::vector<double>& freqs);

/// Grid indices i in [0, N-1] whose frequency i/N lies in [f_lo, f_hi],
/// endpoints inclusive, ascending. Throws BandTooNarrow when no grid point
/// falls inside the band.
std::vector<int> band_grid(const FrequencyBand& band, int n);

/// R = Q Q^H / (f_hi - f_lo) where Q collects the DFT-matrix columns whose
/// grid frequencies fall in the band. Hermitian PSD, rank = grid size.
struct ConstraintMatrix {
    FrequencyBand band;
    CMat r;

    int order() const { return static_cast<int>(r.rows()); }
};

ConstraintMatrix constraint_matrix(const FrequencyBand& band, int n);

/// Average energy the sequence injects on the band: Re(c^H R c).
/// The imaginary residual of the Hermitian form is asserted below 1e-10
/// relative.
double band_energy(const CVec& c, const ConstraintMatrix& constraint);
double band_energy(const CVec& c, const CMat& r);

/// Matrix-free evaluation of the same quantity via the band's grid steering
/// vectors, sum_i |p_i^H c|^2 / width. Equals the R-form algebraically and
/// stays O(grid * N) in time with no N^2 storage.
double band_energy(const CVec& c, const FrequencyBand& band);

struct BandCompliance {
    FrequencyBand band;
    double energy = 0.0;
    double budget = 0.0;
    bool satisfied = false;
    /// 10*log10(budget/energy): positive when under budget, +inf for zero energy.
    double margin_db = 0.0;
};

/// Per-band interference-energy report for a candidate sequence. A band is
/// satisfied when energy <= budget*(1 + 1e-9) (boundary inclusive).
std::vector<BandCompliance> check_constraints(const CVec& c, const std::vector<FrequencyBand>& bands);

/// Relative tolerance used by check_constraints and the design solvers to
/// accept a budget as met.
inline constexpr double kBudgetSlackRel = 1e-9;

/// Interference budget implied by a notch depth: E = 10^(-depth/10) * ||c0||^2,
/// i.e. "depth" dB below the reference's full-band average energy level.
double budget_from_depth(double depth_db, double reference_energy);

/// Map an emitter's RF band [f1_hz, f2_hz] into normalized frequency inside a
/// radar band starting at radar_lo_hz with the given bandwidth.
FrequencyBand normalized_band(double f1_hz, double f2_hz, double radar_lo_hz, double bandwidth_hz,
                              double depth_db, double energy_budget);

/// Unit-energy linear-FM reference sequence of length N. The instantaneous
/// normalized frequency sweeps a `band_fraction` wide interval centered at
/// 0.5, so band_fraction = 1 covers the whole [0,1) support. Constant modulus
/// 1/sqrt(N), hence every length-(N/L) block carries energy exactly 1/L.
CVec chirp_reference(int n, double band_fraction = 1.0);

}  // namespace cisar
