#include "llgwire/io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace llgwire::io {

std::string fmt(double v) {
  if (std::isnan(v)) return "nan";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::ofstream open_out(const std::filesystem::path& path) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  return out;
}

}  // namespace

void write_text(const std::filesystem::path& path, const std::string& text) {
  auto out = open_out(path);
  out << text;
}

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_scalar_csv(const std::filesystem::path& path, const ScalarField& f) {
  auto out = open_out(path);
  out << "x,v\n";
  for (std::size_t i = 0; i < f.size(); ++i) out << fmt(f.grid.x(i)) << ',' << fmt(f[i]) << '\n';
}

void write_field_csv(const std::filesystem::path& path, const MagnetizationField& m) {
  auto out = open_out(path);
  out << "x,m1,m2,m3\n";
  for (std::size_t i = 0; i < m.size(); ++i) {
    out << fmt(m.grid().x(i)) << ',' << fmt(m[i].x) << ',' << fmt(m[i].y) << ',' << fmt(m[i].z) << '\n';
  }
}

void write_profile_csv(const std::filesystem::path& path, const StationarySolution& sol) {
  auto out = open_out(path);
  out << "x,theta,dtheta,m1,m2,m3,lambda\n";
  const Grid& g = sol.grid();
  for (std::size_t i = 0; i < g.n; ++i) {
    out << fmt(g.x(i)) << ',' << fmt(sol.theta[i]) << ',' << fmt(sol.dtheta[i]) << ',' << fmt(sol.w[i].x) << ','
        << fmt(sol.w[i].y) << ',' << fmt(sol.w[i].z) << ',' << fmt(sol.lambda[i]) << '\n';
  }
}

void write_series_csv(const std::filesystem::path& path, const RunRecord& rec, double alpha) {
  auto out = open_out(path);
  out << "t,E,EZ,Etot,Diss,min_m1,max_m1,orbdist\n";
  for (std::size_t k = 0; k < rec.times.size(); ++k) {
    const auto& e = rec.energies[k];
    out << fmt(rec.times[k]) << ',' << fmt(e.exchange_anisotropy) << ',' << fmt(e.zeeman) << ','
        << fmt(e.total) << ',' << fmt(alpha * e.dissipation_rate) << ',' << fmt(rec.min_m1[k]) << ','
        << fmt(rec.max_m1[k]) << ',' << fmt(rec.orbital_distance[k]) << '\n';
  }
}

void write_spectrum_csv(const std::filesystem::path& path, const SpectralReport& rep) {
  auto out = open_out(path);
  out << "index,eigenvalue_re,eigenvalue_im\n";
  if (!rep.complex_eigenvalues.empty()) {
    for (std::size_t k = 0; k < rep.complex_eigenvalues.size(); ++k) {
      out << k << ',' << fmt(rep.complex_eigenvalues[k].real()) << ',' << fmt(rep.complex_eigenvalues[k].imag())
          << '\n';
    }
  } else {
    for (std::size_t k = 0; k < rep.eigenvalues.size(); ++k) {
      out << k << ',' << fmt(rep.eigenvalues[k]) << ",0\n";
    }
  }
}

void write_eigenfunction_csv(const std::filesystem::path& path, const SpectralReport& rep, const Grid& grid,
                             std::size_t index) {
  auto out = open_out(path);
  if (!rep.complex_eigenvectors.empty()) {
    const auto& v = rep.complex_eigenvectors.at(index);
    out << "x,u_re,u_im,v_re,v_im\n";
    for (std::size_t i = 0; i < grid.n; ++i) {
      out << fmt(grid.x(i)) << ',' << fmt(v[i].real()) << ',' << fmt(v[i].imag()) << ','
          << fmt(v[grid.n + i].real()) << ',' << fmt(v[grid.n + i].imag()) << '\n';
    }
  } else {
    const auto& f = rep.eigenfunctions.at(index);
    out << "x,v\n";
    for (std::size_t i = 0; i < grid.n; ++i) out << fmt(grid.x(i)) << ',' << fmt(f[i]) << '\n';
  }
}

std::string snapshot_name(double t) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "snap_t%08.3f.csv", t);
  return buf;
}

std::size_t CsvTable::column(const std::string& name) const {
  for (std::size_t k = 0; k < header.size(); ++k) {
    if (header[k] == name) return k;
  }
  throw std::runtime_error("csv: missing column '" + name + "'");
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  CsvTable t;
  std::string line;
  std::size_t lineno = 0;
  auto split = [](const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      while (!cell.empty() && cell.front() == ' ') cell.erase(cell.begin());
      out.push_back(cell);
    }
    return out;
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line == "\r") continue;
    auto cells = split(line);
    if (t.header.empty()) {
      t.header = std::move(cells);
      continue;
    }
    if (cells.size() != t.header.size()) {
      throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": expected " +
                               std::to_string(t.header.size()) + " columns");
    }
    std::vector<double> row;
    for (const auto& c : cells) {
      try {
        std::size_t used = 0;
        row.push_back(std::stod(c, &used));
        if (used != c.size()) throw std::invalid_argument(c);
      } catch (const std::exception&) {
        throw std::runtime_error(path.string() + ":" + std::to_string(lineno) + ": not a number: '" + c + "'");
      }
    }
    t.rows.push_back(std::move(row));
  }
  if (t.header.empty()) throw std::runtime_error(path.string() + ": empty file");
  return t;
}

MagnetizationField read_field_csv(const std::filesystem::path& path) {
  const auto t = read_csv(path);
  const auto cx = t.column("x"), c1 = t.column("m1"), c2 = t.column("m2"), c3 = t.column("m3");
  if (t.rows.size() < 3) throw std::runtime_error(path.string() + ": need at least 3 rows");
  const double x0 = t.rows.front()[cx];
  const double x1 = t.rows.back()[cx];
  if (std::abs(x0 + x1) > 1e-9 * std::abs(x1)) throw std::runtime_error(path.string() + ": x range not symmetric");
  const Grid g = make_grid(x1, 2.0 * x1 / static_cast<double>(t.rows.size() - 1));
  VectorField f(g);
  for (std::size_t i = 0; i < g.n; ++i) {
    if (std::abs(t.rows[i][cx] - g.x(i)) > 1e-9 * (1.0 + std::abs(x1))) {
      throw std::runtime_error(path.string() + ": non-uniform x column at row " + std::to_string(i + 2));
    }
    f[i] = {t.rows[i][c1], t.rows[i][c2], t.rows[i][c3]};
  }
  return MagnetizationField::normalized(std::move(f));
}

}  // namespace llgwire::io
