#pragma once

#include "moebius/classical.hpp"
#include "moebius/geometry.hpp"
#include "moebius/quantum.hpp"

#include <map>
#include <ostream>
#include <string>
#include <vector>

namespace moebius::io {

/// 17 significant digits, lowercase scientific, locale-independent.
std::string format_double(double value);

/// CSV with header "u,v,x,y,z,nx,ny,nz", one row per vertex in grid order.
void mesh_to_csv(const geometry::SurfaceMesh& mesh, std::ostream& out);

/// JSON array of vertex objects with the same keys as the CSV columns.
void mesh_to_json(const geometry::SurfaceMesh& mesh, std::ostream& out);

/// CSV with tau, theta, p_theta, energy, the nine frame components and the
/// residual columns.
void trajectory_to_csv(const classical::Trajectory& trajectory, std::ostream& out);

/// JSON array of per-step constraint residual records.
void residuals_to_json(const classical::Trajectory& trajectory, std::ostream& out);

/// {"params": {...}, "eigenvalues": [...], "grid_n": ..., "convergence_estimate": ...}.
/// String parameter values are emitted verbatim (callers pass pre-formatted
/// numbers), so entries stay ordered and deterministic.
void spectrum_to_json(const std::map<std::string, std::string>& params,
                      const quantum::Spectrum& spectrum, std::ostream& out);

/// CSV theta, then re/im columns per level.
void eigenvectors_to_csv(const quantum::Spectrum& spectrum, std::ostream& out);

struct FluxSweepRow {
    double flux_A = 0.0;
    std::vector<double> energies;
};

/// CSV "A,E_0,...,E_{m-1}" for band-diagram plotting.
void flux_sweep_to_csv(const std::vector<FluxSweepRow>& rows, std::ostream& out);

/// Side-by-side report of the two closed-form flux readings and the
/// numerical levels adjudicating between them.
void flux_report_to_json(const std::vector<quantum::FluxSpectrumPair>& analytic,
                         const std::vector<FluxSweepRow>& numeric, std::ostream& out);

/// Solver levels, closed-form reference levels and the published integer-n
/// values with their admissibility tags.
void coulomb_to_json(const std::map<std::string, std::string>& params,
                     const std::vector<double>& solver_levels,
                     const std::vector<double>& reference_levels,
                     const std::vector<quantum::CoulombLevel>& paper_levels,
                     std::ostream& out);

}  // namespace moebius::io
