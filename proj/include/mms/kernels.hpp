#pragma once

#include <cstdint>
#include <span>
#include <string>

namespace mms::kern {

// GEMM over f32 storage: C[M x N] = A[M x K] * B[K x N] (row-major).
// Accumulation runs in f32 SIMD inside fixed 64-wide K blocks and in f64
// across blocks, so rounding drift stays bounded independently of K. Each
// output element is produced by exactly one thread with a fixed summation
// order: results are bitwise identical for any thread count.
void gemm(const float* a, const float* b, float* c, int64_t m, int64_t k, int64_t n,
          bool accumulate);

// G independent GEMMs with constant strides; parallelized over (g, row-block).
void gemm_batched(int64_t g, const float* a, int64_t stride_a, const float* b,
                  int64_t stride_b, float* c, int64_t stride_c, int64_t m, int64_t k,
                  int64_t n, bool accumulate);

// out[j*rows + i] = in[i*cols + j]
void transpose(const float* in, float* out, int64_t rows, int64_t cols);

// Branch-free exp/tanh accurate to a few ulps; safe to call in tight loops.
float fast_exp(float x);
float fast_tanh(float x);

// Throws NumericFault naming `op` if any value is NaN/Inf.
void check_finite(std::span<const float> values, const char* op);

// im2col for k x k kernels: cols[(C*k*k) x (out_h*out_w)], one image.
void im2col(const float* image, int64_t channels, int64_t h, int64_t w, int64_t ksize,
            int64_t stride, int64_t pad, float* cols);

// Scatter-add inverse of im2col, one image. Sequential per call.
void col2im_add(const float* cols, int64_t channels, int64_t h, int64_t w, int64_t ksize,
                int64_t stride, int64_t pad, float* image);

}  // namespace mms::kern
