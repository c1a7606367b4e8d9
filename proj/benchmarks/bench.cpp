#include <chrono>
#include <cstdio>

#include "scdma/distance.hpp"
#include "scdma/presets.hpp"

using namespace scdma;

namespace {

template <class F>
double time_ms(F&& f, int reps) {
    auto t0 = std::chrono::steady_clock::now();
    for (int i = 0; i < reps; ++i) f();
    auto dt = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0);
    return dt.count() / reps;
}

void bench_matrix(const char* name, const SignatureMatrix& m, int reps) {
    double d_par = 0.0, d_ser = 0.0;
    double t_min_par = time_ms([&] { d_par = min_distance(m).d_min; }, reps);
    double t_min_ser = time_ms([&] { d_ser = min_distance_serial(m).d_min; }, reps);
    double t_enum_par = time_ms([&] { distance_enumerator(m); }, reps);
    double t_enum_ser = time_ms([&] { distance_enumerator_serial(m); }, reps);
    std::printf("%-12s K=%d  d_min=%.6f (serial %.6f)\n", name, m.cols(), d_par, d_ser);
    std::printf("  min_distance   parallel %8.3f ms   serial %8.3f ms   speedup %.2fx\n",
                t_min_par, t_min_ser, t_min_ser / t_min_par);
    std::printf("  enumerator     parallel %8.3f ms   serial %8.3f ms   speedup %.2fx\n",
                t_enum_par, t_enum_ser, t_enum_ser / t_enum_par);
}

}  // namespace

int main() {
    bench_matrix("table1-k4", presets::table1_matrix(4), 50);
    bench_matrix("table1-k6", presets::table1_matrix(6), 10);
    bench_matrix("opt-4x6", presets::optimized_4x6(), 10);
    bench_matrix("chained-4x8", presets::chained_4x8(), 3);
    return 0;
}
