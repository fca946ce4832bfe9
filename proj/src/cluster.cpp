#include "tripod/cluster.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <istream>
#include <ostream>
#include <stdexcept>
#include <string>
#include <utility>

#include "grid_detail.hpp"
#include "tripod/errors.hpp"
#include "tripod/gauss1d.hpp"

namespace tripod {
namespace {

// Interfaces with less weighted area than this cannot be inverted against.
constexpr double kVanishingArea = 1e-14;

template <typename F>
void run_rows(int n, Execution exec, const F& body) {
  if (exec == Execution::parallel) {
#pragma omp parallel for schedule(static)
    for (int r = 0; r < n; ++r) body(r);
  } else {
    for (int r = 0; r < n; ++r) body(r);
  }
}

void check_grid_params(double R, int resolution) {
  if (!(R >= 4.0 && R <= 10.0)) {
    throw std::domain_error("grid extent must lie in [4, 10]");
  }
  if (resolution < 64 || resolution > 4096) {
    throw std::domain_error("grid resolution must lie in [64, 4096]");
  }
}

void fill_weights(GridCluster& c, Execution exec) {
  const int n = c.resolution;
  const std::vector<double> wcol = detail::interval_masses(c.extent, n);
  run_rows(n, exec, [&](int iy) {
    for (int ix = 0; ix < n; ++ix) {
      c.weights[static_cast<std::size_t>(iy) * n + ix] = wcol[ix] * wcol[iy];
    }
  });
}

struct EdgeAccumulator {
  std::array<double, 3> area = {0.0, 0.0, 0.0};
  std::array<double, 3> vx = {0.0, 0.0, 0.0};
  std::array<double, 3> vy = {0.0, 0.0, 0.0};
};

// One label-changing edge between adjacent pixels a and b carrying the given
// Gaussian edge mass. The local unit normal comes from the difference of the
// two label centroids in a window around the edge and sets both the
// staircase correction 1/|nu|_1 and the direction entering the averages.
void add_edge(const GridCluster& c, int ax, int ay, int bx, int by, double mass,
              EdgeAccumulator& acc) {
  const int n = c.resolution;
  const int la = c.labels[static_cast<std::size_t>(ay) * n + ax];
  const int lb = c.labels[static_cast<std::size_t>(by) * n + bx];
  double nx = 0.0, ny = 0.0;
  detail::edge_normal(c, ax, ay, bx, by, nx, ny);
  const double contrib = mass / (std::abs(nx) + std::abs(ny));
  const auto [p, sign] = detail::pair_of(la, lb);
  acc.area[p] += contrib;
  acc.vx[p] += sign * contrib * nx;
  acc.vy[p] += sign * contrib * ny;
}

InterfaceStats assemble_stats(const std::array<double, 3>& area,
                              const std::array<Eigen::Vector2d, 3>& vint) {
  InterfaceStats s;
  s.areas = {area[0], area[1], area[2]};
  for (int p = 0; p < 3; ++p) {
    const auto& [i, j] = kCyclicPairs[p];
    s.avgNormals[p] =
        area[p] > 0.0 ? (vint[p] / area[p]).eval() : Eigen::Vector2d::Zero().eval();
    Eigen::Vector3d d = Eigen::Vector3d::Zero();
    d[i - 1] = 1.0;
    d[j - 1] = -1.0;
    s.M += d * vint[p].transpose();
    if (area[p] > 0.0) {
      s.N += vint[p] * vint[p].transpose() / area[p];
    }
  }
  return s;
}

}  // namespace

std::array<double, 3> OneDimCluster::measures() const {
  const std::array<double, 3> base = {gauss::cdf(a), gauss::cdf(b) - gauss::cdf(a),
                                      gauss::cdf_upper(b)};
  std::array<double, 3> out = {0.0, 0.0, 0.0};
  for (int k = 0; k < 3; ++k) {
    out[labelOrder[k] - 1] = base[k];
  }
  return out;
}

double OneDimCluster::perimeter() const { return gauss::pdf(a) + gauss::pdf(b); }

GridCluster make_tripod_grid(const PlanePoint& x, double R, int resolution,
                             Execution exec) {
  check_grid_params(R, resolution);
  GridCluster c;
  c.extent = R;
  c.resolution = resolution;
  c.labels.resize(static_cast<std::size_t>(resolution) * resolution);
  c.weights.resize(static_cast<std::size_t>(resolution) * resolution);
  fill_weights(c, exec);
  run_rows(resolution, exec, [&](int iy) {
    const double q = c.center(iy);
    for (int ix = 0; ix < resolution; ++ix) {
      const double p = c.center(ix);
      std::array<double, 3> score;
      for (int cell = 0; cell < 3; ++cell) {
        score[cell] = p * kU1[cell] + q * kU2[cell] - x[cell];
      }
      int lab = 0;
      if (score[1] > score[lab]) lab = 1;
      if (score[2] > score[lab]) lab = 2;
      c.labels[static_cast<std::size_t>(iy) * resolution + ix] =
          static_cast<std::uint8_t>(lab + 1);
    }
  });
  return c;
}

GridMeasures grid_measures(const GridCluster& c, Execution exec) {
  const int n = c.resolution;
  std::vector<std::array<double, 3>> parts(n, {0.0, 0.0, 0.0});
  run_rows(n, exec, [&](int iy) {
    std::array<double, 3> row = {0.0, 0.0, 0.0};
    for (int ix = 0; ix < n; ++ix) {
      const std::size_t at = static_cast<std::size_t>(iy) * n + ix;
      row[c.labels[at] - 1] += c.weights[at];
    }
    parts[iy] = row;
  });
  GridMeasures m;
  for (int iy = 0; iy < n; ++iy) {
    for (int l = 0; l < 3; ++l) {
      m.inside[l] += parts[iy][l];
    }
  }
  m.outside = std::max(0.0, 1.0 - (m.inside[0] + m.inside[1] + m.inside[2]));
  return m;
}

PerimeterEstimate grid_perimeter(const GridCluster& c, Execution exec) {
  const int n = c.resolution;
  const std::vector<double> wcol = detail::interval_masses(c.extent, n);
  const std::vector<double> pdfline = detail::grid_line_pdf(c.extent, n);
  std::vector<EdgeAccumulator> parts(n);
  run_rows(n, exec, [&](int iy) {
    EdgeAccumulator acc;
    for (int ix = 0; ix + 1 < n; ++ix) {
      const std::size_t at = static_cast<std::size_t>(iy) * n + ix;
      if (c.labels[at] != c.labels[at + 1]) {
        add_edge(c, ix, iy, ix + 1, iy, pdfline[ix + 1] * wcol[iy], acc);
      }
    }
    if (iy + 1 < n) {
      for (int ix = 0; ix < n; ++ix) {
        const std::size_t at = static_cast<std::size_t>(iy) * n + ix;
        if (c.labels[at] != c.labels[at + n]) {
          add_edge(c, ix, iy, ix, iy + 1, pdfline[iy + 1] * wcol[ix], acc);
        }
      }
    }
    parts[iy] = acc;
  });
  std::array<double, 3> area = {0.0, 0.0, 0.0};
  std::array<Eigen::Vector2d, 3> vint = {Eigen::Vector2d::Zero(),
                                         Eigen::Vector2d::Zero(),
                                         Eigen::Vector2d::Zero()};
  for (int iy = 0; iy < n; ++iy) {
    for (int p = 0; p < 3; ++p) {
      area[p] += parts[iy].area[p];
      vint[p][0] += parts[iy].vx[p];
      vint[p][1] += parts[iy].vy[p];
    }
  }
  PerimeterEstimate est;
  est.perimeter = area[0] + area[1] + area[2];
  est.stats = assemble_stats(area, vint);
  return est;
}

InterfaceStats tripod_stats(const PlanePoint& x) {
  std::array<double, 3> area;
  std::array<Eigen::Vector2d, 3> vint;
  for (int p = 0; p < 3; ++p) {
    const auto& [i, j] = kCyclicPairs[p];
    const FramePair f = frame(i, j);
    const auto [np, nq] = f.n.coords2();
    area[p] = interface_area(x, i, j);
    vint[p] = area[p] * Eigen::Vector2d(np, nq);
  }
  return assemble_stats(area, vint);
}

InterfaceStats one_dim_stats(const OneDimCluster& c, double angle) {
  const Eigen::Vector2d theta(std::cos(angle), std::sin(angle));
  std::array<double, 3> area = {0.0, 0.0, 0.0};
  std::array<Eigen::Vector2d, 3> vint = {Eigen::Vector2d::Zero(),
                                         Eigen::Vector2d::Zero(),
                                         Eigen::Vector2d::Zero()};
  const std::array<std::pair<double, std::pair<int, int>>, 2> cuts = {
      {{c.a, {c.labelOrder[0], c.labelOrder[1]}},
       {c.b, {c.labelOrder[1], c.labelOrder[2]}}}};
  for (const auto& [threshold, labels] : cuts) {
    const auto [p, sign] = detail::pair_of(labels.first, labels.second);
    const double mass = gauss::pdf(threshold);
    area[p] += mass;
    vint[p] += sign * mass * theta;
  }
  return assemble_stats(area, vint);
}

double matrix_cs_gap(const InterfaceStats& stats) {
  const std::array<double, 3> area = {stats.areas.a12, stats.areas.a23,
                                      stats.areas.a31};
  static const char* const kPairNames[3] = {"1-2", "2-3", "3-1"};
  std::string vanishing;
  int alive = 0;
  for (int p = 0; p < 3; ++p) {
    if (area[p] > kVanishingArea) {
      ++alive;
    } else {
      if (!vanishing.empty()) vanishing += ", ";
      vanishing += kPairNames[p];
    }
  }
  if (alive < 2) {
    throw NumericalError(
        "matrix_cs_gap: L_A is singular on the plane; vanishing interfaces: " +
            vanishing,
        *std::min_element(area.begin(), area.end()));
  }
  const Eigen::Matrix2d l2 = area_laplacian(stats.areas).m22;
  const Eigen::Matrix2d m2 = basis_matrix().transpose() * stats.M;
  Eigen::Matrix2d gap = stats.N - m2.transpose() * l2.inverse() * m2;
  gap = 0.5 * (gap + gap.transpose()).eval();
  Eigen::SelfAdjointEigenSolver<Eigen::Matrix2d> es(gap);
  return es.eigenvalues()[0];
}

int dichotomy_rank(const InterfaceStats& stats, double tol) {
  Eigen::JacobiSVD<Eigen::Matrix<double, 3, 2>> svd(stats.M);
  int rank = 0;
  for (int i = 0; i < svd.singularValues().size(); ++i) {
    if (svd.singularValues()[i] > tol) ++rank;
  }
  return rank;
}

OneDimCluster one_dim_competitor(const SimplexVolume& v) {
  if (!v.interior()) {
    throw std::domain_error(
        "one_dim_competitor: boundary volumes have no threshold cluster");
  }
  OneDimCluster c;
  c.a = gauss::quantile(v[0]);
  c.b = gauss::quantile(v[0] + v[1]);
  c.labelOrder = {1, 2, 3};
  return c;
}

void save_grid(const GridCluster& c, std::ostream& out) {
  out.write("GBC1", 4);
  char buf[8];
  std::memcpy(buf, &c.extent, 8);
  out.write(buf, 8);
  const std::uint32_t n = static_cast<std::uint32_t>(c.resolution);
  std::memcpy(buf, &n, 4);
  out.write(buf, 4);
  out.write(reinterpret_cast<const char*>(c.labels.data()),
            static_cast<std::streamsize>(c.labels.size()));
}

GridCluster load_grid(std::istream& in) {
  char magic[4];
  in.read(magic, 4);
  if (!in || std::memcmp(magic, "GBC1", 4) != 0) {
    throw std::runtime_error("load_grid: not a GBC1 stream");
  }
  char buf[8];
  in.read(buf, 8);
  GridCluster c;
  std::memcpy(&c.extent, buf, 8);
  in.read(buf, 4);
  std::uint32_t n = 0;
  std::memcpy(&n, buf, 4);
  if (!in) {
    throw std::runtime_error("load_grid: truncated header");
  }
  if (!(c.extent >= 4.0 && c.extent <= 10.0) || n < 64 || n > 4096) {
    throw std::runtime_error("load_grid: header fields out of range");
  }
  c.resolution = static_cast<int>(n);
  c.labels.resize(static_cast<std::size_t>(n) * n);
  in.read(reinterpret_cast<char*>(c.labels.data()),
          static_cast<std::streamsize>(c.labels.size()));
  if (in.gcount() != static_cast<std::streamsize>(c.labels.size())) {
    throw std::runtime_error("load_grid: truncated label block");
  }
  for (std::uint8_t l : c.labels) {
    if (l < 1 || l > 3) {
      throw std::runtime_error("load_grid: label outside 1..3");
    }
  }
  c.weights.resize(c.labels.size());
  fill_weights(c, Execution::parallel);
  return c;
}

void save_grid_csv(const GridCluster& c, std::ostream& out) {
  out << "x,y,label\n";
  char buf[64];
  for (int iy = 0; iy < c.resolution; ++iy) {
    for (int ix = 0; ix < c.resolution; ++ix) {
      const int len = std::snprintf(
          buf, sizeof buf, "%.9g,%.9g,%d\n", c.center(ix), c.center(iy),
          static_cast<int>(
              c.labels[static_cast<std::size_t>(iy) * c.resolution + ix]));
      out.write(buf, len);
    }
  }
}

}  // namespace tripod
