// Serial vs OpenMP benchmark for the three parallel kernels: level synthesis,
// block-error simulation, and path sampling. Also asserts the parallel run
// reproduces the serial numbers bit for bit before timing anything.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <vector>

#include "mispolar/channel.hpp"
#include "mispolar/construct.hpp"
#include "mispolar/mismatch.hpp"
#include "mispolar/montecarlo.hpp"
#include "mispolar/parallel.hpp"
#include "mispolar/polarize.hpp"

using namespace mispolar;

namespace {

double now() {
    return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

struct Timing {
    double serial;
    double parallel;
};

void report(const char* name, Timing t, bool identical) {
    std::printf("%-28s serial %8.3fs  parallel %8.3fs  speedup %.2fx  identical=%s\n", name,
                t.serial, t.parallel, t.serial / t.parallel, identical ? "yes" : "NO");
}

}  // namespace

int main() {
    std::printf("workers: %d\n", worker_count());

    {  // level synthesis, BSC pair, deep-run merge tolerance
        auto p = make_pair(make_channel("bsc:0.2"), make_channel("bsc:0.8"));
        SynthesisBudget b;
        b.merge_tol = 8e-3;
        double t0 = now();
        auto serial = synthesize_level(p, 8, b, false);
        double t1 = now();
        auto par = synthesize_level(p, 8, b, true);
        double t2 = now();
        bool same = serial.size() == par.size();
        for (std::size_t i = 0; same && i < serial.size(); ++i) {
            same = serial[i].alphabet_size() == par[i].alphabet_size();
            for (std::size_t s = 0; same && s < serial[i].symbols().size(); ++s) {
                const auto& a = serial[i].symbols()[s];
                const auto& c = par[i].symbols()[s];
                same = a.q == c.q && a.dw == c.dw &&
                       (a.dv == c.dv || (std::isnan(a.dv) && std::isnan(c.dv)));
            }
        }
        report("synthesize_level n=8", {t1 - t0, t2 - t1}, same);
    }

    {  // block-error simulation at N=1024
        auto w = make_channel("bsc:0.11");
        auto code = construct_genie_mc(w, w, 10, 307, 4000, 7);
        double t0 = now();
        auto serial = simulate_block_error(code, w, w, 20000, 42, TiePolicy::FairCoin, false);
        double t1 = now();
        auto par = simulate_block_error(code, w, w, 20000, 42, TiePolicy::FairCoin, true);
        double t2 = now();
        report("simulate N=1024 20k trials", {t1 - t0, t2 - t1},
               serial.block_errors == par.block_errors);
    }

    {  // path sampling on a matched BEC pair
        auto p = make_pair(make_channel("bec:0.5"), make_channel("bec:0.5"));
        SynthesisBudget b;
        double t0 = now();
        auto serial = sample_paths(p, 14, 20000, 9, 0.1, b, false);
        double t1 = now();
        auto par = sample_paths(p, 14, 20000, 9, 0.1, b, true);
        double t2 = now();
        bool same = serial.levels.size() == par.levels.size();
        for (std::size_t i = 0; same && i < serial.levels.size(); ++i)
            same = serial.levels[i].mean_d == par.levels[i].mean_d &&
                   serial.levels[i].mean_z == par.levels[i].mean_z;
        report("sample_paths d=14 20k", {t1 - t0, t2 - t1}, same);
    }

    return 0;
}
