#include "mms/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>

#include "mms/error.hpp"
#include "mms/parallel.hpp"

#ifdef __AVX512F__
#include <immintrin.h>
#endif

namespace mms::kern {

namespace {

constexpr int64_t kKBlock = 64;  // f32 accumulation window; f64 across windows

// One output element with the blocked accumulation scheme. brow points at
// B[0][j]; column stride is ldb.
inline double dot_blocked(const float* a, const float* brow, int64_t k, int64_t ldb) {
  double total = 0.0;
  for (int64_t k0 = 0; k0 < k; k0 += kKBlock) {
    const int64_t k1 = std::min<int64_t>(k0 + kKBlock, k);
    float part = 0.0f;
    for (int64_t kk = k0; kk < k1; ++kk) part = std::fmaf(a[kk], brow[kk * ldb], part);
    total += static_cast<double>(part);
  }
  return total;
}

void gemm_rows_scalar(const float* a, const float* b, float* c, int64_t i0, int64_t i1,
                      int64_t k, int64_t n, bool accumulate) {
  for (int64_t i = i0; i < i1; ++i) {
    const float* arow = a + i * k;
    float* crow = c + i * n;
    for (int64_t j = 0; j < n; ++j) {
      const float s = static_cast<float>(dot_blocked(arow, b + j, k, n));
      crow[j] = accumulate ? crow[j] + s : s;
    }
  }
}

#ifdef __AVX512F__

// 4 x 16 microkernel: f32 FMA lanes inside each K block, folded into f64
// lane accumulators between blocks.
template <bool Accumulate>
void gemm_rows_avx512(const float* a, const float* b, float* c, int64_t i0, int64_t i1,
                      int64_t k, int64_t n) {
  constexpr int64_t IB = 4;
  constexpr int64_t JB = 16;
  int64_t i = i0;
  for (; i + IB <= i1; i += IB) {
    int64_t j = 0;
    for (; j + JB <= n; j += JB) {
      __m512d accd[IB][2];
      for (int64_t r = 0; r < IB; ++r) {
        accd[r][0] = _mm512_setzero_pd();
        accd[r][1] = _mm512_setzero_pd();
      }
      for (int64_t k0 = 0; k0 < k; k0 += kKBlock) {
        const int64_t k1 = std::min<int64_t>(k0 + kKBlock, k);
        __m512 accf[IB];
        for (int64_t r = 0; r < IB; ++r) accf[r] = _mm512_setzero_ps();
        for (int64_t kk = k0; kk < k1; ++kk) {
          const __m512 bv = _mm512_loadu_ps(b + kk * n + j);
          for (int64_t r = 0; r < IB; ++r) {
            const __m512 av = _mm512_set1_ps(a[(i + r) * k + kk]);
            accf[r] = _mm512_fmadd_ps(av, bv, accf[r]);
          }
        }
        for (int64_t r = 0; r < IB; ++r) {
          accd[r][0] = _mm512_add_pd(accd[r][0], _mm512_cvtps_pd(_mm512_castps512_ps256(accf[r])));
          accd[r][1] = _mm512_add_pd(accd[r][1], _mm512_cvtps_pd(_mm512_extractf32x8_ps(accf[r], 1)));
        }
      }
      for (int64_t r = 0; r < IB; ++r) {
        float* cp = c + (i + r) * n + j;
        __m256 lo = _mm512_cvtpd_ps(accd[r][0]);
        __m256 hi = _mm512_cvtpd_ps(accd[r][1]);
        if (Accumulate) {
          lo = _mm256_add_ps(lo, _mm256_loadu_ps(cp));
          hi = _mm256_add_ps(hi, _mm256_loadu_ps(cp + 8));
        }
        _mm256_storeu_ps(cp, lo);
        _mm256_storeu_ps(cp + 8, hi);
      }
    }
    for (; j < n; ++j) {
      for (int64_t r = 0; r < IB; ++r) {
        const float s = static_cast<float>(dot_blocked(a + (i + r) * k, b + j, k, n));
        float* cp = c + (i + r) * n + j;
        *cp = Accumulate ? *cp + s : s;
      }
    }
  }
  if (i < i1) gemm_rows_scalar(a, b, c, i, i1, k, n, Accumulate);
}

#endif  // __AVX512F__

}  // namespace

void gemm(const float* a, const float* b, float* c, int64_t m, int64_t k, int64_t n,
          bool accumulate) {
  gemm_batched(1, a, 0, b, 0, c, 0, m, k, n, accumulate);
}

void gemm_batched(int64_t g, const float* a, int64_t stride_a, const float* b,
                  int64_t stride_b, float* c, int64_t stride_c, int64_t m, int64_t k,
                  int64_t n, bool accumulate) {
  // Work units are (matrix, 64-row block) pairs so small per-matrix row
  // counts still spread across threads. Blocking is independent of the
  // thread count, and every output element is owned by one unit.
  const int64_t row_block = 64;
  const int64_t blocks_per_mat = (m + row_block - 1) / row_block;
  parallel_for(g * blocks_per_mat, [&](int64_t lo, int64_t hi) {
    for (int64_t unit = lo; unit < hi; ++unit) {
      const int64_t gi = unit / blocks_per_mat;
      const int64_t bi = unit % blocks_per_mat;
      const int64_t i0 = bi * row_block;
      const int64_t i1 = std::min<int64_t>(i0 + row_block, m);
      const float* ag = a + gi * stride_a;
      const float* bg = b + gi * stride_b;
      float* cg = c + gi * stride_c;
#ifdef __AVX512F__
      if (n >= 16) {
        if (accumulate) {
          gemm_rows_avx512<true>(ag, bg, cg, i0, i1, k, n);
        } else {
          gemm_rows_avx512<false>(ag, bg, cg, i0, i1, k, n);
        }
        continue;
      }
#endif
      gemm_rows_scalar(ag, bg, cg, i0, i1, k, n, accumulate);
    }
  });
}

void transpose(const float* in, float* out, int64_t rows, int64_t cols) {
  constexpr int64_t T = 32;
  for (int64_t i0 = 0; i0 < rows; i0 += T) {
    const int64_t i1 = std::min(i0 + T, rows);
    for (int64_t j0 = 0; j0 < cols; j0 += T) {
      const int64_t j1 = std::min(j0 + T, cols);
      for (int64_t i = i0; i < i1; ++i)
        for (int64_t j = j0; j < j1; ++j) out[j * rows + i] = in[i * cols + j];
    }
  }
}

float fast_exp(float x) {
  // exp(x) = 2^k * exp(r), k = round(x / ln 2). Degree-5 minimax polynomial
  // for exp(r) on |r| <= ln(2)/2; ~2 ulp, and fast_exp(0) == 1 exactly.
  x = std::min(88.0f, std::max(-87.0f, x));
  const float z = x * 1.44269504088896341f;
  const float kf = std::floor(z + 0.5f);
  float r = x - kf * 0.693359375f;        // ln 2, high part
  r -= kf * -2.12194440e-4f;              // ln 2, low part
  float p = 1.9875691500e-4f;
  p = p * r + 1.3981999507e-3f;
  p = p * r + 8.3334519073e-3f;
  p = p * r + 4.1665795894e-2f;
  p = p * r + 1.6666665459e-1f;
  p = p * r + 5.0000001201e-1f;
  p = p * r * r + r + 1.0f;
  const int32_t ki = static_cast<int32_t>(kf);
  union {
    int32_t i;
    float f;
  } scale;
  scale.i = (ki + 127) << 23;
  return p * scale.f;
}

float fast_tanh(float x) {
  // tanh(x) = 1 - 2 / (exp(2x) + 1); exactly 0 at x = 0.
  const float e = fast_exp(2.0f * x);
  return 1.0f - 2.0f / (e + 1.0f);
}

void check_finite(std::span<const float> values, const char* op) {
  size_t bad = values.size();
  for (size_t i = 0; i < values.size(); ++i) {
    if (!std::isfinite(values[i])) {
      bad = i;
      break;
    }
  }
  if (bad != values.size()) {
    throw NumericFault(std::string(op) + " produced a non-finite value at flat index " +
                       std::to_string(bad));
  }
}

void im2col(const float* image, int64_t channels, int64_t h, int64_t w, int64_t ksize,
            int64_t stride, int64_t pad, float* cols) {
  const int64_t out_h = (h + 2 * pad - ksize) / stride + 1;
  const int64_t out_w = (w + 2 * pad - ksize) / stride + 1;
  const int64_t plane = out_h * out_w;
  for (int64_t c = 0; c < channels; ++c) {
    for (int64_t ky = 0; ky < ksize; ++ky) {
      for (int64_t kx = 0; kx < ksize; ++kx) {
        float* dst = cols + ((c * ksize + ky) * ksize + kx) * plane;
        for (int64_t oy = 0; oy < out_h; ++oy) {
          const int64_t iy = oy * stride - pad + ky;
          if (iy < 0 || iy >= h) {
            std::memset(dst + oy * out_w, 0, sizeof(float) * static_cast<size_t>(out_w));
            continue;
          }
          const float* src = image + (c * h + iy) * w;
          for (int64_t ox = 0; ox < out_w; ++ox) {
            const int64_t ix = ox * stride - pad + kx;
            dst[oy * out_w + ox] = (ix >= 0 && ix < w) ? src[ix] : 0.0f;
          }
        }
      }
    }
  }
}

void col2im_add(const float* cols, int64_t channels, int64_t h, int64_t w, int64_t ksize,
                int64_t stride, int64_t pad, float* image) {
  const int64_t out_h = (h + 2 * pad - ksize) / stride + 1;
  const int64_t out_w = (w + 2 * pad - ksize) / stride + 1;
  const int64_t plane = out_h * out_w;
  for (int64_t c = 0; c < channels; ++c) {
    for (int64_t ky = 0; ky < ksize; ++ky) {
      for (int64_t kx = 0; kx < ksize; ++kx) {
        const float* src = cols + ((c * ksize + ky) * ksize + kx) * plane;
        for (int64_t oy = 0; oy < out_h; ++oy) {
          const int64_t iy = oy * stride - pad + ky;
          if (iy < 0 || iy >= h) continue;
          float* dst = image + (c * h + iy) * w;
          for (int64_t ox = 0; ox < out_w; ++ox) {
            const int64_t ix = ox * stride - pad + kx;
            if (ix >= 0 && ix < w) dst[ix] += src[oy * out_w + ox];
          }
        }
      }
    }
  }
}

}  // namespace mms::kern
