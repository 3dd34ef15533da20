// Compares the serial reference reduction against the OpenMP shell/chunk
// parallel path on the heavy evaluators. Both must produce identical bits;
// this target reports the wall-clock ratio.

#include <chrono>
#include <cstdio>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "conflat/kernels.hpp"
#include "conflat/quadrature.hpp"
#include "conflat/surface.hpp"

using namespace conflat;

namespace {

template <typename F>
double time_best_of(int reps, const F& f) {
  f();  // warm up
  double best = 1e300;
  for (int i = 0; i < reps; ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    f();
    const double dt =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0)
            .count();
    best = std::min(best, dt);
  }
  return best;
}

void report(const char* name, double serial, double parallel, double dev) {
  std::printf("%-28s serial %8.4f s   parallel %8.4f s   speedup %5.2fx   |serial-parallel| = %g\n",
              name, serial, parallel, serial / parallel, dev);
}

}  // namespace

int main() {
#ifdef _OPENMP
  std::printf("OpenMP threads: %d\n", omp_get_max_threads());
#else
  std::printf("built without OpenMP; both paths run serially\n");
#endif

  {
    KernelSpec spec;
    spec.family = KernelFamily::cot;
    spec.n = 3;
    spec.q = 1;
    spec.k = 2;
    spec.trunc.radius = 800;
    Vec x = {0.21, -0.34, 0.18}, y = {0.03, 0.02, -0.05};
    Multivector a(3), b(3);
    const double ts = time_best_of(3, [&] { a = cot_kernel(spec, x, y, ExecPolicy::serial); });
    const double tp = time_best_of(3, [&] { b = cot_kernel(spec, x, y, ExecPolicy::parallel); });
    report("cot n=3 k=2 R=800", ts, tp, (a - b).norm());
  }
  {
    KernelSpec spec;
    spec.family = KernelFamily::cot;
    spec.n = 3;
    spec.q = 2;
    spec.k = 2;
    spec.trunc.radius = 1200;
    Vec x = {0.13, -0.27, 0.4}, y = {0.0, 0.0, 0.0};
    Multivector a(3), b(3);
    const double ts = time_best_of(3, [&] { a = cot_kernel(spec, x, y, ExecPolicy::serial); });
    const double tp = time_best_of(3, [&] { b = cot_kernel(spec, x, y, ExecPolicy::parallel); });
    report("supercritical k=2 R=1200", ts, tp, (a - b).norm());
  }
  {
    KernelSpec spec;
    spec.family = KernelFamily::transversion;
    spec.n = 4;
    spec.k = 2;
    spec.trunc.radius = 400;
    Vec x = {0.5, 0.3, -0.2, 0.4}, y = {-0.3, 0.45, 0.25, -0.2};
    Multivector a(4), b(4);
    const double ts = time_best_of(3, [&] { a = transversion_kernel(spec, x, y, ExecPolicy::serial); });
    const double tp = time_best_of(3, [&] { b = transversion_kernel(spec, x, y, ExecPolicy::parallel); });
    report("transversion n=4 k=2 R=400", ts, tp, (a - b).norm());
  }
  {
    Surface s = make_euclid_sphere(3, Vec(3, 0.0), 1.0, {128, 256});
    KernelSpec spec;
    spec.family = KernelFamily::hopf;
    spec.n = 3;
    spec.mode = HopfMode::orbit;
    Vec y = {0.2, 0.1, 1.4};
    NodeFn integrand = [&](const SurfaceNode& node) {
      return hopf_kernel(spec, node.x, y) *
             Multivector::from_vector(node.normal);
    };
    Multivector a(3), b(3);
    const double ts = time_best_of(3, [&] { a = surface_integral(s, integrand, ExecPolicy::serial); });
    const double tp = time_best_of(3, [&] { b = surface_integral(s, integrand, ExecPolicy::parallel); });
    report("surface integral 128x256", ts, tp, (a - b).norm());
  }
  return 0;
}
