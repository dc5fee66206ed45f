#include "moebius/io.hpp"

#include <cstdio>

namespace moebius::io {

namespace {

constexpr double kFourPi = 4.0 * M_PI;

void write_levels(std::ostream& out, const std::vector<double>& values) {
    out << "[";
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (i) out << ", ";
        out << format_double(values[i]);
    }
    out << "]";
}

}  // namespace

std::string format_double(double value) {
    char buffer[40];
    std::snprintf(buffer, sizeof(buffer), "%.16e", value);
    return buffer;
}

void mesh_to_csv(const geometry::SurfaceMesh& mesh, std::ostream& out) {
    out << "u,v,x,y,z,nx,ny,nz\n";
    for (const auto& vertex : mesh.vertices) {
        out << format_double(vertex.u) << ',' << format_double(vertex.v) << ','
            << format_double(vertex.position.x) << ',' << format_double(vertex.position.y) << ','
            << format_double(vertex.position.z) << ',' << format_double(vertex.normal.x()) << ','
            << format_double(vertex.normal.y()) << ',' << format_double(vertex.normal.z()) << '\n';
    }
}

void mesh_to_json(const geometry::SurfaceMesh& mesh, std::ostream& out) {
    out << "[\n";
    for (std::size_t i = 0; i < mesh.vertices.size(); ++i) {
        const auto& vertex = mesh.vertices[i];
        out << "  {\"u\": " << format_double(vertex.u) << ", \"v\": " << format_double(vertex.v)
            << ", \"x\": " << format_double(vertex.position.x)
            << ", \"y\": " << format_double(vertex.position.y)
            << ", \"z\": " << format_double(vertex.position.z)
            << ", \"nx\": " << format_double(vertex.normal.x())
            << ", \"ny\": " << format_double(vertex.normal.y())
            << ", \"nz\": " << format_double(vertex.normal.z()) << "}";
        out << (i + 1 < mesh.vertices.size() ? ",\n" : "\n");
    }
    out << "]\n";
}

void trajectory_to_csv(const classical::Trajectory& trajectory, std::ostream& out) {
    out << "tau,theta,p_theta,energy,"
           "e00,e01,e02,e10,e11,e12,e20,e21,e22,"
           "res_h0,res_circle,res_spin_x,res_spin_y,res_spin_z,res_frame_period\n";
    for (const auto& sample : trajectory.samples) {
        out << format_double(sample.tau) << ',' << format_double(sample.theta) << ','
            << format_double(sample.p_theta) << ',' << format_double(sample.energy);
        for (int row = 0; row < 3; ++row) {
            for (int col = 0; col < 3; ++col) {
                out << ',' << format_double(sample.state.frame.e(row, col));
            }
        }
        const auto& res = sample.residuals;
        out << ',' << format_double(res.h0) << ',' << format_double(res.circle) << ','
            << format_double(res.spin_align.x()) << ',' << format_double(res.spin_align.y()) << ','
            << format_double(res.spin_align.z()) << ',' << format_double(res.frame_period) << '\n';
    }
}

void residuals_to_json(const classical::Trajectory& trajectory, std::ostream& out) {
    out << "[\n";
    for (std::size_t i = 0; i < trajectory.samples.size(); ++i) {
        const auto& sample = trajectory.samples[i];
        const auto& res = sample.residuals;
        out << "  {\"tau\": " << format_double(sample.tau)
            << ", \"h0\": " << format_double(res.h0)
            << ", \"circle\": " << format_double(res.circle)
            << ", \"spin_align\": [" << format_double(res.spin_align.x()) << ", "
            << format_double(res.spin_align.y()) << ", " << format_double(res.spin_align.z())
            << "], \"frame_period\": " << format_double(res.frame_period) << "}";
        out << (i + 1 < trajectory.samples.size() ? ",\n" : "\n");
    }
    out << "]\n";
}

void spectrum_to_json(const std::map<std::string, std::string>& params,
                      const quantum::Spectrum& spectrum, std::ostream& out) {
    out << "{\n  \"params\": {";
    bool first = true;
    for (const auto& [key, value] : params) {
        if (!first) out << ", ";
        first = false;
        out << "\"" << key << "\": " << value;
    }
    out << "},\n  \"eigenvalues\": ";
    write_levels(out, spectrum.eigenvalues);
    out << ",\n  \"grid_n\": " << spectrum.grid_n
        << ",\n  \"convergence_estimate\": " << format_double(spectrum.convergence_estimate);
    if (!spectrum.warning.empty()) {
        out << ",\n  \"warning\": \"" << spectrum.warning << "\"";
    }
    out << "\n}\n";
}

void eigenvectors_to_csv(const quantum::Spectrum& spectrum, std::ostream& out) {
    out << "theta";
    for (std::size_t level = 0; level < spectrum.eigenvectors.size(); ++level) {
        out << ",re_psi_" << level << ",im_psi_" << level;
    }
    out << '\n';
    for (int j = 0; j < spectrum.grid_n; ++j) {
        out << format_double(kFourPi * j / spectrum.grid_n);
        for (const auto& psi : spectrum.eigenvectors) {
            out << ',' << format_double(psi[j].real()) << ',' << format_double(psi[j].imag());
        }
        out << '\n';
    }
}

void flux_sweep_to_csv(const std::vector<FluxSweepRow>& rows, std::ostream& out) {
    out << "A";
    if (!rows.empty()) {
        for (std::size_t i = 0; i < rows.front().energies.size(); ++i) out << ",E_" << i;
    }
    out << '\n';
    for (const auto& row : rows) {
        out << format_double(row.flux_A);
        for (double energy : row.energies) out << ',' << format_double(energy);
        out << '\n';
    }
}

void flux_report_to_json(const std::vector<quantum::FluxSpectrumPair>& analytic,
                         const std::vector<FluxSweepRow>& numeric, std::ostream& out) {
    out << "[\n";
    for (std::size_t i = 0; i < analytic.size(); ++i) {
        const auto& pair = analytic[i];
        out << "  {\"A\": " << format_double(pair.flux_A) << ",\n   \"minimal_coupling\": [";
        for (std::size_t level = 0; level < pair.minimal_coupling.size(); ++level) {
            if (level) out << ", ";
            out << format_double(pair.minimal_coupling[level].energy);
        }
        out << "],\n   \"paper_formula\": [";
        for (std::size_t level = 0; level < pair.paper_formula.size(); ++level) {
            if (level) out << ", ";
            out << format_double(pair.paper_formula[level].energy);
        }
        out << "],\n   \"max_disagreement\": " << format_double(pair.max_disagreement);
        if (i < numeric.size()) {
            out << ",\n   \"numerical\": ";
            write_levels(out, numeric[i].energies);
        }
        out << "}";
        out << (i + 1 < analytic.size() ? ",\n" : "\n");
    }
    out << "]\n";
}

void coulomb_to_json(const std::map<std::string, std::string>& params,
                     const std::vector<double>& solver_levels,
                     const std::vector<double>& reference_levels,
                     const std::vector<quantum::CoulombLevel>& paper_levels,
                     std::ostream& out) {
    out << "{\n  \"params\": {";
    bool first = true;
    for (const auto& [key, value] : params) {
        if (!first) out << ", ";
        first = false;
        out << "\"" << key << "\": " << value;
    }
    out << "},\n  \"solver_levels\": ";
    write_levels(out, solver_levels);
    out << ",\n  \"reference_levels\": ";
    write_levels(out, reference_levels);
    out << ",\n  \"paper_levels\": [\n";
    for (std::size_t i = 0; i < paper_levels.size(); ++i) {
        const auto& level = paper_levels[i];
        out << "    {\"n\": " << level.n << ", \"k\": " << level.k
            << ", \"energy\": " << format_double(level.energy)
            << ", \"allowed\": " << (level.allowed ? "true" : "false") << "}";
        out << (i + 1 < paper_levels.size() ? ",\n" : "\n");
    }
    out << "  ]\n}\n";
}

}  // namespace moebius::io
