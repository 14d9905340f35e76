#include "liftcheck/sampler.hpp"

namespace liftcheck {

BundlePoint sample_bundle_point(const ManifoldSpec& spec, Lcg64& rng) {
    BundlePoint q;
    q.x.reserve(spec.dim);
    q.y.reserve(spec.dim);
    for (size_t i = 0; i < spec.dim; ++i)
        q.x.push_back(rng.uniform(spec.domain[i].lo, spec.domain[i].hi));
    for (size_t i = 0; i < spec.dim; ++i)
        q.y.push_back(rng.uniform(spec.fiber.lo, spec.fiber.hi));
    return q;
}

std::vector<BundlePoint> sample_bundle_points(const ManifoldSpec& spec,
                                              size_t count, uint64_t seed) {
    Lcg64 rng(seed);
    std::vector<BundlePoint> pts;
    pts.reserve(count);
    for (size_t i = 0; i < count; ++i) pts.push_back(sample_bundle_point(spec, rng));
    return pts;
}

}  // namespace liftcheck
