#pragma once

#include "exf/core/tensor.hpp"

// Hot numeric kernels. The omp variants parallelize only loops whose iterations
// write disjoint outputs, and every per-element accumulation runs in a fixed
// index order, so results are bit-identical to the serial reference in
// exf::core::ref regardless of thread count.

namespace exf::core {

// c[m x n] = a[m x k] * b[k x n]
void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
// c[m x n] = a[m x k] * b[n x k]^T
void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
// c[m x n] = a[k x m]^T * b[k x n]
void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
// out[c] = sum over rows of a[r x c]
void colsum(const double* a, double* out, std::size_t rows, std::size_t cols);

struct LstmCache {
    Tensor x;      // B x T x F input as seen by this layer
    Tensor gates;  // B x T x 4H, activated, order (i, f, g, o)
    Tensor c;      // B x T x H cell states
    Tensor h;      // B x T x H hidden states
};

// Single-layer LSTM over the full window; h0 = c0 = 0. Gate order and the
// two-bias form follow the usual framework convention so checkpoints stay
// comparable.
void lstm_seq_forward(const Tensor& x, const Tensor& w_ih, const Tensor& w_hh,
                      const Tensor& b_ih, const Tensor& b_hh, LstmCache& cache);

// BPTT. dh_out is B x T x H (upstream gradient on every hidden state).
// Emits pre-activation gate gradients (B x T x 4H) and dx; the caller turns
// dgates into weight gradients with gemm_tn / colsum.
void lstm_seq_backward(const LstmCache& cache, const Tensor& w_ih, const Tensor& w_hh,
                       const Tensor& dh_out, Tensor& dgates_pre, Tensor& dx);

// Causal dilated 1-D convolution: left-pad (k-1)*dilation zeros, stride 1,
// output length equals input length and y[..., t] depends only on x[..., <= t].
void conv1d_causal_forward(const Tensor& x, const Tensor& w, const Tensor& b,
                           std::size_t dilation, Tensor& y);
void conv1d_causal_backward(const Tensor& x, const Tensor& w, const Tensor& dy,
                            std::size_t dilation, Tensor& dx, Tensor& dw, Tensor& db);

namespace ref {
// Serial reference implementations used by the kernel equivalence tests and
// the bench_kernels comparison target.
void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n);
void lstm_seq_forward(const Tensor& x, const Tensor& w_ih, const Tensor& w_hh,
                      const Tensor& b_ih, const Tensor& b_hh, LstmCache& cache);
void conv1d_causal_forward(const Tensor& x, const Tensor& w, const Tensor& b,
                           std::size_t dilation, Tensor& y);
}  // namespace ref

}  // namespace exf::core
