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

#pragma once

#include "ldikit/kernels.hpp"

namespace ldikit::kernels {

const KernelTable& scalar_table();

// Defined in kernels_avx2.cpp; only compiled on x86-64.
#if defined(__x86_64__) || defined(_M_X64)
#define LDIKIT_HAVE_AVX2_BUILD 1
const KernelTable& avx2_table();
bool cpu_has_avx2();
#else
#define LDIKIT_HAVE_AVX2_BUILD 0
#endif

} // namespace ldikit::kernels
