#pragma once

#include <cstddef>
#include <string_view>

namespace qmr::kernels {

/// Vector/matrix inner-loop kernels with runtime backend selection.
///
/// Every kernel has a scalar reference implementation plus SIMD variants
/// (AVX2 on x86-64, NEON on aarch64) compiled in separate translation
/// units. The best supported backend is picked once at startup; the
/// environment variable QMR_SIMD (scalar|avx2|neon|auto) overrides the
/// choice. All variants use a fixed summation order, so repeated calls on
/// the same data are bit-reproducible for a given backend.
enum class Backend { Scalar, Avx2, Neon };

struct KernelTable {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*scal)(double, double*, std::size_t);
  void (*matvec)(const double*, std::size_t, std::size_t, const double*, double*);
  void (*syr_upper)(double*, std::size_t, double, const double*);
  Backend backend;
};

Backend active_backend();
bool backend_supported(Backend b);
std::string_view backend_name(Backend b);

/// Force a specific backend (tests, reproducibility experiments). Throws
/// std::runtime_error if the CPU does not support it. Not thread-safe;
/// call before spawning workers.
void force_backend(Backend b);
void reset_backend();

/// sum_i a[i]*b[i]
double dot(const double* a, const double* b, std::size_t n);

/// sum_i a[i]^2
double nrm2sq(const double* a, std::size_t n);

/// y += alpha * x
void axpy(double alpha, const double* x, double* y, std::size_t n);

/// x *= alpha
void scal(double alpha, double* x, std::size_t n);

/// y = A x for row-major A (rows x cols)
void matvec(const double* a, std::size_t rows, std::size_t cols, const double* x,
            double* y);

/// A += alpha * x x^T, upper triangle only, row-major A (n x n)
void syr_upper(double* a, std::size_t n, double alpha, const double* x);

const KernelTable& scalar_table();
#if defined(__x86_64__) || defined(_M_X64)
const KernelTable& avx2_table();
#endif
#if defined(__aarch64__)
const KernelTable& neon_table();
#endif

}  // namespace qmr::kernels
