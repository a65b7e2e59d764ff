// Serial vs OpenMP timing of the time-loop stencils.
// Usage: bench_kernels [n] [reps]

#include <omp.h>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>

#include "bingham/kernels.hpp"
#include "bingham/operators.hpp"

using namespace bingham;
namespace k = bingham::kernels;

namespace {

double seconds(const std::function<void()>& f, int reps) {
  f();  // warm-up
  const auto t0 = std::chrono::steady_clock::now();
  for (int r = 0; r < reps; ++r) f();
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count() / reps;
}

void row(const char* name, double ts, double tp) {
  std::printf("%-14s %12.3e %12.3e %8.2fx\n", name, ts, tp, ts / tp);
}

}  // namespace

int main(int argc, char** argv) {
  const int n = argc > 1 ? std::atoi(argv[1]) : 512;
  const int reps = argc > 2 ? std::atoi(argv[2]) : 20;
  const Grid g(n, n, 1.0, 1.0);
  const BoundarySpec bc = BoundarySpec::lid_driven(1.0);
  const StaggeredField f = random_solenoidal_field(g, bc, 1, 1.0);
  const FaceRanges r = unknown_faces(g, bc);

  CellField eta_c(g.nx(), g.ny());
  Array2D eta_k = k::make_corner_array(g);
  for (int j = 0; j < g.ny(); ++j) {
    for (int i = 0; i < g.nx(); ++i) eta_c(i, j) = 1.0 + 0.001 * ((i + j) % 7);
  }
  for (int j = 0; j <= g.ny(); ++j) {
    for (int i = 0; i <= g.nx(); ++i) eta_k(i, j) = 1.0 + 0.001 * ((i * j) % 5);
  }

  Array2D dxy = k::make_corner_array(g);
  TensorField d(g);
  CellField div(g.nx(), g.ny()), lap(g.nx(), g.ny());
  Array2D ou(g.nx() + 1, g.ny()), ov(g.nx(), g.ny() + 1);
  k::ViscousWork work;
  volatile double sink = 0.0;

  std::printf("grid %dx%d, %d reps, %d threads\n", n, n, reps, omp_get_max_threads());
  std::printf("%-14s %12s %12s %9s\n", "kernel", "serial [s]", "openmp [s]", "speedup");
  row("corner_shear", seconds([&] { k::serial::corner_shear(f.u, f.v, g, dxy); }, reps),
      seconds([&] { k::parallel::corner_shear(f.u, f.v, g, dxy); }, reps));
  row("cell_strain", seconds([&] { k::serial::cell_strain(f.u, f.v, g, d); }, reps),
      seconds([&] { k::parallel::cell_strain(f.u, f.v, g, d); }, reps));
  row("divergence", seconds([&] { k::serial::divergence(f.u, f.v, g, div); }, reps),
      seconds([&] { k::parallel::divergence(f.u, f.v, g, div); }, reps));
  row("advection", seconds([&] { k::serial::advection(f.u, f.v, g, r, ou, ov); }, reps),
      seconds([&] { k::parallel::advection(f.u, f.v, g, r, ou, ov); }, reps));
  row("viscous_apply",
      seconds([&] { k::serial::viscous_apply(f.u, f.v, eta_c, eta_k, g, r, false, work, ou, ov); },
              reps),
      seconds(
          [&] { k::parallel::viscous_apply(f.u, f.v, eta_c, eta_k, g, r, false, work, ou, ov); },
          reps));
  row("laplacian", seconds([&] { k::serial::laplacian(eta_c, g, false, lap); }, reps),
      seconds([&] { k::parallel::laplacian(eta_c, g, false, lap); }, reps));
  row("dot_faces", seconds([&] { sink = k::serial::dot_faces(f.u, f.v, f.u, f.v, g, r); }, reps),
      seconds([&] { sink = k::parallel::dot_faces(f.u, f.v, f.u, f.v, g, r); }, reps));
  (void)sink;
  return 0;
}
