#include <cmath>

#include "exf/core/kernels.hpp"

// Plain serial versions, written independently of the omp kernels. Each keeps
// the same per-element accumulation order, so the equivalence tests may assert
// bit-identical outputs.

namespace exf::core::ref {

void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += a[i * k + p] * b[p * n + j];
            c[i * n + j] = acc;
        }
}

void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += a[i * k + p] * b[j * k + p];
            c[i * n + j] = acc;
        }
}

void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += a[p * m + i] * b[p * n + j];
            c[i * n + j] = acc;
        }
}

void lstm_seq_forward(const Tensor& x, const Tensor& w_ih, const Tensor& w_hh,
                      const Tensor& b_ih, const Tensor& b_hh, LstmCache& cache) {
    const std::size_t B = x.dim(0), T = x.dim(1), F = x.dim(2);
    const std::size_t H = w_hh.dim(1);
    cache.x = x;
    cache.gates = Tensor({B, T, 4 * H});
    cache.c = Tensor({B, T, H});
    cache.h = Tensor({B, T, H});
    auto sig = [](double z) { return 1.0 / (1.0 + std::exp(-z)); };
    for (std::size_t b = 0; b < B; ++b) {
        std::vector<double> h_prev(H, 0.0), c_prev(H, 0.0);
        for (std::size_t t = 0; t < T; ++t) {
            std::vector<double> pre(4 * H, 0.0);
            for (std::size_t g = 0; g < 4 * H; ++g) {
                double acc = 0.0;
                for (std::size_t f = 0; f < F; ++f) acc += x.at(b, t, f) * w_ih.at(g, f);
                for (std::size_t j = 0; j < H; ++j) acc += h_prev[j] * w_hh.at(g, j);
                acc += b_ih[g];
                acc += b_hh[g];
                pre[g] = acc;
            }
            for (std::size_t j = 0; j < H; ++j) {
                const double i = sig(pre[j]);
                const double f = sig(pre[H + j]);
                const double g = std::tanh(pre[2 * H + j]);
                const double o = sig(pre[3 * H + j]);
                const double c = f * c_prev[j] + i * g;
                cache.gates.at(b, t, j) = i;
                cache.gates.at(b, t, H + j) = f;
                cache.gates.at(b, t, 2 * H + j) = g;
                cache.gates.at(b, t, 3 * H + j) = o;
                cache.c.at(b, t, j) = c;
                cache.h.at(b, t, j) = o * std::tanh(c);
                c_prev[j] = c;
                h_prev[j] = cache.h.at(b, t, j);
            }
        }
    }
}

void conv1d_causal_forward(const Tensor& x, const Tensor& w, const Tensor& b,
                           std::size_t dilation, Tensor& y) {
    const std::size_t B = x.dim(0), Ci = x.dim(1), T = x.dim(2);
    const std::size_t Co = w.dim(0), K = w.dim(2);
    y = Tensor({B, Co, T});
    for (std::size_t bb = 0; bb < B; ++bb)
        for (std::size_t co = 0; co < Co; ++co)
            for (std::size_t t = 0; t < T; ++t) {
                double acc = b[co];
                for (std::size_t ci = 0; ci < Ci; ++ci)
                    for (std::size_t j = 0; j < K; ++j) {
                        const std::ptrdiff_t src =
                            static_cast<std::ptrdiff_t>(t) - static_cast<std::ptrdiff_t>((K - 1 - j) * dilation);
                        if (src >= 0) acc += w.at(co, ci, j) * x.at(bb, ci, static_cast<std::size_t>(src));
                    }
                y.at(bb, co, t) = acc;
            }
}

}  // namespace exf::core::ref
