/*
 * This code is part of the masqkd simulator.
 *
 * This code is licensed under the Apache License, Version 2.0. You may
 * obtain a copy of this license in the LICENSE.txt file in the root directory
 * of this source tree or at http://www.apache.org/licenses/LICENSE-2.0.
 */

#include "masqkd/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>

namespace masqkd::kern {

const Ops* avx2_ops_impl();  // defined in kernels_avx2.cpp

const Ops* avx2_ops() {
#if defined(__x86_64__) || defined(__i386__)
  if (!__builtin_cpu_supports("avx2")) {
    return nullptr;
  }
#endif
  return avx2_ops_impl();
}

const Ops& active() {
  static const Ops* selected = [] {
    const char* env = std::getenv("MASQKD_KERNELS");
    if (env != nullptr && std::strcmp(env, "scalar") == 0) {
      return &scalar_ops();
    }
    const Ops* avx2 = avx2_ops();
    if (env != nullptr && std::strcmp(env, "avx2") == 0) {
      if (avx2 == nullptr) {
        throw std::runtime_error(
            "MASQKD_KERNELS=avx2 requested but AVX2 is unavailable");
      }
      return avx2;
    }
    if (env != nullptr && std::strcmp(env, "auto") != 0) {
      throw std::runtime_error(
          "MASQKD_KERNELS must be one of scalar|avx2|auto");
    }
    return avx2 != nullptr ? avx2 : &scalar_ops();
  }();
  return *selected;
}

}  // namespace masqkd::kern
