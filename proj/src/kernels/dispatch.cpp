//
// Copyright 2026 The ldikit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//

#include "kernels_internal.hpp"

#include <atomic>

#include "ldikit/errors.hpp"

namespace ldikit::kernels {

namespace {

Backend detect_best() {
#if LDIKIT_HAVE_AVX2_BUILD
    if (cpu_has_avx2()) return Backend::kAvx2;
#endif
    return Backend::kScalar;
}

std::atomic<Backend> g_backend{detect_best()};

} // namespace

bool backend_supported(Backend backend) {
    switch (backend) {
    case Backend::kScalar:
        return true;
    case Backend::kAvx2:
#if LDIKIT_HAVE_AVX2_BUILD
        return cpu_has_avx2();
#else
        return false;
#endif
    }
    return false;
}

void set_backend(Backend backend) {
    if (!backend_supported(backend))
        throw ConfigError("kernel backend not supported on this CPU: " +
                          backend_name(backend));
    g_backend.store(backend, std::memory_order_relaxed);
}

Backend active_backend() { return g_backend.load(std::memory_order_relaxed); }

std::string backend_name(Backend backend) {
    switch (backend) {
    case Backend::kScalar:
        return "scalar";
    case Backend::kAvx2:
        return "avx2";
    }
    return "unknown";
}

const KernelTable& table_for(Backend backend) {
#if LDIKIT_HAVE_AVX2_BUILD
    if (backend == Backend::kAvx2) return avx2_table();
#endif
    (void)backend;
    return scalar_table();
}

const KernelTable& table() { return table_for(active_backend()); }

} // namespace ldikit::kernels
