// Times the grid kernels in serial and OpenMP execution and reports the
// speedup, checking on the way that both paths produce identical bits.
#include <chrono>
#include <cstdio>
#include <cstdlib>

#include "tripod/cluster.hpp"
#include "tripod/e_plane.hpp"

using namespace tripod;

namespace {

using Clock = std::chrono::steady_clock;

template <typename F>
double time_ms(const F& f, int repeats) {
  double best = 1e300;
  for (int r = 0; r < repeats; ++r) {
    const auto t0 = Clock::now();
    f();
    const auto t1 = Clock::now();
    best = std::min(best, std::chrono::duration<double, std::milli>(t1 - t0).count());
  }
  return best;
}

void report(const char* name, double serial_ms, double parallel_ms) {
  std::printf("%-16s serial %8.2f ms   parallel %8.2f ms   speedup %.2fx\n", name,
              serial_ms, parallel_ms, serial_ms / parallel_ms);
}

}  // namespace

int main(int argc, char** argv) {
  const int res = argc > 1 ? std::atoi(argv[1]) : 2048;
  const int repeats = argc > 2 ? std::atoi(argv[2]) : 3;
  const PlanePoint x = PlanePoint::from_coords2(0.4, -0.25);
  std::printf("grid kernels at resolution %d, best of %d runs\n", res, repeats);

  const double build_s =
      time_ms([&] { make_tripod_grid(x, 6.0, res, Execution::serial); }, repeats);
  const double build_p =
      time_ms([&] { make_tripod_grid(x, 6.0, res, Execution::parallel); }, repeats);
  report("make_tripod_grid", build_s, build_p);

  const GridCluster serial_grid = make_tripod_grid(x, 6.0, res, Execution::serial);
  const GridCluster parallel_grid = make_tripod_grid(x, 6.0, res, Execution::parallel);
  bool identical = serial_grid.labels == parallel_grid.labels &&
                   serial_grid.weights == parallel_grid.weights;

  GridMeasures ms, mp;
  const double meas_s =
      time_ms([&] { ms = grid_measures(serial_grid, Execution::serial); }, repeats);
  const double meas_p =
      time_ms([&] { mp = grid_measures(serial_grid, Execution::parallel); }, repeats);
  report("grid_measures", meas_s, meas_p);
  identical = identical && ms.inside == mp.inside && ms.outside == mp.outside;

  PerimeterEstimate ps, pp;
  const double per_s =
      time_ms([&] { ps = grid_perimeter(serial_grid, Execution::serial); }, repeats);
  const double per_p =
      time_ms([&] { pp = grid_perimeter(serial_grid, Execution::parallel); }, repeats);
  report("grid_perimeter", per_s, per_p);
  identical = identical && ps.perimeter == pp.perimeter &&
              (ps.stats.M.array() == pp.stats.M.array()).all();

  std::printf("serial/parallel results identical: %s\n", identical ? "yes" : "NO");
  return identical ? 0 : 1;
}
