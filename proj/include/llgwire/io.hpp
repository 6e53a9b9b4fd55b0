#pragma once

#include <complex>
#include <filesystem>
#include <string>
#include <vector>

#include "llgwire/grid.hpp"
#include "llgwire/llg.hpp"
#include "llgwire/spectral.hpp"
#include "llgwire/stationary.hpp"

namespace llgwire::io {

/// All numbers are written with 17 significant digits.
std::string fmt(double v);

void write_scalar_csv(const std::filesystem::path& path, const ScalarField& f);        // x,v
void write_field_csv(const std::filesystem::path& path, const MagnetizationField& m);  // x,m1,m2,m3
void write_profile_csv(const std::filesystem::path& path, const StationarySolution& sol);
/// t,E,EZ,Etot,Diss,min_m1,max_m1,orbdist with Diss = alpha int|m^H|^2.
void write_series_csv(const std::filesystem::path& path, const RunRecord& rec, double alpha);
/// index,eigenvalue_re,eigenvalue_im
void write_spectrum_csv(const std::filesystem::path& path, const SpectralReport& rep);
/// Self-adjoint eigenfunction (x,v) or linearized eigenvector
/// (x,u_re,u_im,v_re,v_im) for pair `index`.
void write_eigenfunction_csv(const std::filesystem::path& path, const SpectralReport& rep, const Grid& grid,
                             std::size_t index);

/// Snapshot file name for time t, e.g. snap_t0013.000.csv.
std::string snapshot_name(double t);

struct CsvTable {
  std::vector<std::string> header;
  std::vector<std::vector<double>> rows;
  std::size_t column(const std::string& name) const;  // throws if absent
};

/// Parses a numeric CSV with a header line. Throws std::runtime_error
/// naming the offending line on malformed input.
CsvTable read_csv(const std::filesystem::path& path);

/// Reads x,m1,m2,m3 and rebuilds the uniform grid from the x column.
MagnetizationField read_field_csv(const std::filesystem::path& path);

void write_text(const std::filesystem::path& path, const std::string& text);
std::string read_text(const std::filesystem::path& path);

}  // namespace llgwire::io
