#include "graphbo/kernels.hpp"

#include <cstdlib>
#include <cstring>
#include <stdexcept>
#include <string>

namespace graphbo::kernels {

#if !GRAPHBO_HAVE_AVX2_TU
const KernelTable* avx2_table() { return nullptr; }
#endif

namespace {

const KernelTable& select() {
  if (const char* env = std::getenv("GRAPHBO_KERNELS")) {
    if (!std::strcmp(env, "scalar")) return scalar_table();
    if (!std::strcmp(env, "avx2")) {
      if (const KernelTable* t = avx2_table()) return *t;
      throw std::runtime_error("GRAPHBO_KERNELS=avx2 requested but AVX2+FMA is unavailable");
    }
    throw std::runtime_error(std::string("unknown GRAPHBO_KERNELS value: ") + env);
  }
  if (const KernelTable* t = avx2_table()) return *t;
  return scalar_table();
}

}  // namespace

const KernelTable& active() {
  static const KernelTable& t = select();
  return t;
}

const char* active_lane_name() { return active().name; }

}  // namespace graphbo::kernels
