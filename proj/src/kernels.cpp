#include "qmr/kernels.hpp"

#include <cstdlib>
#include <stdexcept>
#include <string>

namespace qmr::kernels {
namespace {

bool cpu_has_avx2() {
#if defined(__x86_64__) || defined(_M_X64)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

const KernelTable* table_for(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return &scalar_table();
    case Backend::Avx2:
#if defined(__x86_64__) || defined(_M_X64)
      return cpu_has_avx2() ? &avx2_table() : nullptr;
#else
      return nullptr;
#endif
    case Backend::Neon:
#if defined(__aarch64__)
      return &neon_table();
#else
      return nullptr;
#endif
  }
  return nullptr;
}

const KernelTable* detect_best() {
  if (const char* env = std::getenv("QMR_SIMD")) {
    const std::string v(env);
    if (v == "scalar") return &scalar_table();
    if (v == "avx2") {
      if (const KernelTable* t = table_for(Backend::Avx2)) return t;
      throw std::runtime_error("QMR_SIMD=avx2 requested but AVX2 is unavailable");
    }
    if (v == "neon") {
      if (const KernelTable* t = table_for(Backend::Neon)) return t;
      throw std::runtime_error("QMR_SIMD=neon requested but NEON is unavailable");
    }
    if (v != "auto" && !v.empty())
      throw std::runtime_error("unknown QMR_SIMD value: " + v);
  }
  if (const KernelTable* t = table_for(Backend::Avx2)) return t;
  if (const KernelTable* t = table_for(Backend::Neon)) return t;
  return &scalar_table();
}

const KernelTable*& active_table() {
  static const KernelTable* table = detect_best();
  return table;
}

}  // namespace

Backend active_backend() { return active_table()->backend; }

bool backend_supported(Backend b) { return table_for(b) != nullptr; }

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
    case Backend::Neon:
      return "neon";
  }
  return "unknown";
}

void force_backend(Backend b) {
  const KernelTable* t = table_for(b);
  if (!t)
    throw std::runtime_error(std::string("backend not supported on this CPU: ") +
                             std::string(backend_name(b)));
  active_table() = t;
}

void reset_backend() { active_table() = detect_best(); }

double dot(const double* a, const double* b, std::size_t n) {
  return active_table()->dot(a, b, n);
}

double nrm2sq(const double* a, std::size_t n) { return active_table()->dot(a, a, n); }

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  active_table()->axpy(alpha, x, y, n);
}

void scal(double alpha, double* x, std::size_t n) { active_table()->scal(alpha, x, n); }

void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x,
            double* y) {
  active_table()->matvec(a, rows, cols, x, y);
}

void syr_upper(double* a, std::size_t n, double alpha, const double* x) {
  active_table()->syr_upper(a, n, alpha, x);
}

}  // namespace qmr::kernels
