#include "liftcheck/sweep.hpp"

#include <exception>
#include <mutex>
#include <stdexcept>

namespace liftcheck {

SweepResult reduce_residuals(std::vector<double> residuals) {
    SweepResult r;
    r.residuals = std::move(residuals);
    r.max_value = r.residuals.empty() ? 0.0 : r.residuals[0];
    r.argmax = 0;
    for (size_t i = 1; i < r.residuals.size(); ++i)
        if (r.residuals[i] > r.max_value) {
            r.max_value = r.residuals[i];
            r.argmax = i;
        }
    return r;
}

SweepResult sweep_max(const std::vector<BundlePoint>& points,
                      const std::function<double(const BundlePoint&)>& fn,
                      SweepMode mode) {
    std::vector<double> res(points.size(), 0.0);
    std::exception_ptr first_error = nullptr;

    if (mode == SweepMode::Serial) {
        for (size_t i = 0; i < points.size(); ++i) res[i] = fn(points[i]);
        return reduce_residuals(std::move(res));
    }

    std::mutex err_mutex;
    const long count = static_cast<long>(points.size());
#ifdef _OPENMP
#pragma omp parallel for schedule(static)
#endif
    for (long i = 0; i < count; ++i) {
        try {
            res[static_cast<size_t>(i)] = fn(points[static_cast<size_t>(i)]);
        } catch (...) {
            std::lock_guard<std::mutex> lock(err_mutex);
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return reduce_residuals(std::move(res));
}

}  // namespace liftcheck
