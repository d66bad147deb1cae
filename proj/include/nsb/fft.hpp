#pragma once

#include <fftw3.h>

#include <cmath>
#include <complex>
#include <map>
#include <memory>
#include <mutex>
#include <vector>

#include "nsb/field.hpp"

namespace nsb {

namespace detail {

/// Process-wide cache of FFTW plans keyed by grid size.
///
/// Planning is serialized under a mutex; the new-array execute functions are
/// thread-safe, so cached plans are shared by every caller. FFTW_UNALIGNED
/// lets the plans run on std::vector storage and keeps results independent
/// of buffer alignment.
class PlanCache {
public:
    struct Plans {
        fftw_plan forward = nullptr;
        fftw_plan inverse = nullptr;
    };

    static PlanCache& instance() {
        static PlanCache cache;
        return cache;
    }

    Plans get(std::size_t n) {
        std::lock_guard lock(mutex_);
        auto it = plans_.find(n);
        if (it != plans_.end()) return it->second;

        const int ni = static_cast<int>(n);
        const std::size_t real_size = n * n * n;
        const std::size_t spec_size = n * n * (n / 2 + 1);
        double* real = fftw_alloc_real(real_size);
        fftw_complex* spec = fftw_alloc_complex(spec_size);
        Plans p;
        p.forward = fftw_plan_dft_r2c_3d(ni, ni, ni, real, spec, FFTW_ESTIMATE | FFTW_UNALIGNED);
        p.inverse = fftw_plan_dft_c2r_3d(ni, ni, ni, spec, real, FFTW_ESTIMATE | FFTW_UNALIGNED);
        fftw_free(real);
        fftw_free(spec);
        plans_.emplace(n, p);
        return p;
    }

    PlanCache(const PlanCache&) = delete;
    PlanCache& operator=(const PlanCache&) = delete;

private:
    PlanCache() = default;
    ~PlanCache() {
        for (auto& [n, p] : plans_) {
            fftw_destroy_plan(p.forward);
            fftw_destroy_plan(p.inverse);
        }
    }

    std::mutex mutex_;
    std::map<std::size_t, Plans> plans_;
};

}  // namespace detail

/// Forward transform. Rejects non-finite samples.
inline SpectralField to_spectral(const RealField& f) {
    if (!f.all_finite()) throw InvalidArgument("to_spectral: field contains non-finite samples");
    const Grid& g = f.grid();
    const auto plans = detail::PlanCache::instance().get(g.n());
    SpectralField out(g, f.components());
    const double scale = 1.0 / static_cast<double>(g.points());
    // Out-of-place r2c leaves its input untouched.
    for (std::size_t c = 0; c < f.components(); ++c) {
        auto src = f.component(c);
        auto dst = out.component(c);
        fftw_execute_dft_r2c(plans.forward, const_cast<double*>(src.data()),
                             reinterpret_cast<fftw_complex*>(dst.data()));
        for (Complex& v : dst) v *= scale;
    }
    return out;
}

/// Inverse transform (exact discrete Fourier pair with to_spectral).
inline RealField from_spectral(const SpectralField& F) {
    const Grid& g = F.grid();
    const auto plans = detail::PlanCache::instance().get(g.n());
    RealField out(g, F.components());
    std::vector<Complex> scratch(g.spectral_points());
    for (std::size_t c = 0; c < F.components(); ++c) {
        auto src = F.component(c);
        std::copy(src.begin(), src.end(), scratch.begin());
        auto dst = out.component(c);
        fftw_execute_dft_c2r(plans.inverse, reinterpret_cast<fftw_complex*>(scratch.data()), dst.data());
    }
    return out;
}

}  // namespace nsb
