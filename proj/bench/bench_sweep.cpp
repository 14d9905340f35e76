// Timing comparison of the serial reference sweep against the parallel
// one on the heaviest per-point kernel (connection rebuild through the
// induced-coordinate oracle). Not a correctness test; see test_sweep_report
// for the bitwise serial == parallel assertion.

#include <chrono>
#include <iostream>

#include "liftcheck/oracle.hpp"
#include "liftcheck/sampler.hpp"
#include "liftcheck/specfile.hpp"
#include "liftcheck/sweep.hpp"

using namespace liftcheck;
using Clock = std::chrono::steady_clock;

namespace {

double run_once(const Manifold& m, const Oracle& oracle,
                const std::vector<BundlePoint>& pts, SweepMode mode, double& out) {
    auto t0 = Clock::now();
    SweepResult r = sweep_max(
        pts,
        [&](const BundlePoint& q) {
            BundleConnection direct = bundle_connection_at(m, q);
            BundleConnection rebuilt =
                oracle.connection_to_adapted(q, oracle.levi_civita_induced(q));
            double d = 0.0;
            for (int i = 0; i < 2; ++i)
                for (int j = 0; j < 2; ++j)
                    for (int k = 0; k < 2; ++k) {
                        const auto& a = direct.coeff[i][j][k].data();
                        const auto& b = rebuilt.coeff[i][j][k].data();
                        for (size_t s = 0; s < a.size(); ++s)
                            d = std::max(d, std::abs(a[s] - b[s]));
                    }
            return d;
        },
        mode);
    out = r.max_value;
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

}  // namespace

int main(int argc, char** argv) {
    std::string spec_path = argc > 1 ? argv[1] : "catalog/sphere.spec";
    Manifold m(load_spec_file(spec_path));
    Oracle oracle(m);

    std::cout << "spec: " << m.spec().name << "\n";
    std::cout << "points      serial [s]   parallel [s]   speedup   max residual\n";
    for (size_t n : {100u, 1000u, 10000u}) {
        auto pts = sample_bundle_points(m.spec(), n, 1);
        double res_s = 0.0, res_p = 0.0;
        double ts = run_once(m, oracle, pts, SweepMode::Serial, res_s);
        double tp = run_once(m, oracle, pts, SweepMode::Parallel, res_p);
        if (res_s != res_p) {
            std::cerr << "serial/parallel mismatch\n";
            return 1;
        }
        std::printf("%-10zu  %10.4f   %10.4f   %7.2fx   %.3e\n", n, ts, tp,
                    ts / tp, res_s);
    }
    return 0;
}
