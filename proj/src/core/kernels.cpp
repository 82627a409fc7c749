#include "exf/core/kernels.hpp"

#include <cmath>

namespace exf::core {

namespace {

inline double sigmoid(double z) { return 1.0 / (1.0 + std::exp(-z)); }

inline std::ptrdiff_t ssize(std::size_t n) { return static_cast<std::ptrdiff_t>(n); }

}  // namespace

void gemm_nn(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < ssize(m); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += a[i * ssize(k) + ssize(p)] * b[p * n + j];
            c[i * ssize(n) + ssize(j)] = acc;
        }
    }
}

void gemm_nt(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < ssize(m); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            const double* ar = a + i * ssize(k);
            const double* br = b + j * k;
            for (std::size_t p = 0; p < k; ++p) acc += ar[p] * br[p];
            c[i * ssize(n) + ssize(j)] = acc;
        }
    }
}

void gemm_tn(const double* a, const double* b, double* c, std::size_t m, std::size_t k, std::size_t n) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < ssize(m); ++i) {
        for (std::size_t j = 0; j < n; ++j) {
            double acc = 0.0;
            for (std::size_t p = 0; p < k; ++p) acc += a[p * m + i] * b[p * n + j];
            c[i * ssize(n) + ssize(j)] = acc;
        }
    }
}

void colsum(const double* a, double* out, std::size_t rows, std::size_t cols) {
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t j = 0; j < ssize(cols); ++j) {
        double acc = 0.0;
        for (std::size_t r = 0; r < rows; ++r) acc += a[r * cols + j];
        out[j] = acc;
    }
}

void lstm_seq_forward(const Tensor& x, const Tensor& w_ih, const Tensor& w_hh,
                      const Tensor& b_ih, const Tensor& b_hh, LstmCache& cache) {
    const std::size_t B = x.dim(0), T = x.dim(1), F = x.dim(2);
    const std::size_t H = w_hh.dim(1);
    if (w_ih.dim(0) != 4 * H || w_ih.dim(1) != F || w_hh.dim(0) != 4 * H)
        throw DataError("lstm_seq_forward: weight shape mismatch (expected 4H x F / 4H x H, F=" +
                        std::to_string(F) + " H=" + std::to_string(H) + ")");
    cache.x = x;
    cache.gates = Tensor({B, T, 4 * H});
    cache.c = Tensor({B, T, H});
    cache.h = Tensor({B, T, H});
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bi = 0; bi < ssize(B); ++bi) {
        const std::size_t b = static_cast<std::size_t>(bi);
        std::vector<double> h_prev(H, 0.0), c_prev(H, 0.0);
        for (std::size_t t = 0; t < T; ++t) {
            const double* xt = x.data() + (b * T + t) * F;
            double* gates = &cache.gates.at(b, t, 0);
            for (std::size_t g = 0; g < 4 * H; ++g) {
                double acc = 0.0;
                const double* wi = w_ih.data() + g * F;
                for (std::size_t f = 0; f < F; ++f) acc += xt[f] * wi[f];
                const double* wh = w_hh.data() + g * H;
                for (std::size_t j = 0; j < H; ++j) acc += h_prev[j] * wh[j];
                acc += b_ih[g];
                acc += b_hh[g];
                gates[g] = acc;
            }
            for (std::size_t j = 0; j < H; ++j) {
                const double i = sigmoid(gates[j]);
                const double f = sigmoid(gates[H + j]);
                const double g = std::tanh(gates[2 * H + j]);
                const double o = sigmoid(gates[3 * H + j]);
                const double c = f * c_prev[j] + i * g;
                const double h = o * std::tanh(c);
                gates[j] = i;
                gates[H + j] = f;
                gates[2 * H + j] = g;
                gates[3 * H + j] = o;
                cache.c.at(b, t, j) = c;
                cache.h.at(b, t, j) = h;
                c_prev[j] = c;
                h_prev[j] = h;
            }
        }
    }
}

void lstm_seq_backward(const LstmCache& cache, const Tensor& w_ih, const Tensor& w_hh,
                       const Tensor& dh_out, Tensor& dgates_pre, Tensor& dx) {
    const std::size_t B = cache.x.dim(0), T = cache.x.dim(1), F = cache.x.dim(2);
    const std::size_t H = cache.h.dim(2);
    dgates_pre = Tensor({B, T, 4 * H});
    dx = Tensor({B, T, F});
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bi = 0; bi < ssize(B); ++bi) {
        const std::size_t b = static_cast<std::size_t>(bi);
        std::vector<double> dh(H, 0.0), dc(H, 0.0);
        for (std::size_t tt = T; tt-- > 0;) {
            const std::size_t t = tt;
            double* dg = &dgates_pre.at(b, t, 0);
            for (std::size_t j = 0; j < H; ++j) {
                const double i = cache.gates.at(b, t, j);
                const double f = cache.gates.at(b, t, H + j);
                const double g = cache.gates.at(b, t, 2 * H + j);
                const double o = cache.gates.at(b, t, 3 * H + j);
                const double c = cache.c.at(b, t, j);
                const double tc = std::tanh(c);
                const double dht = dh[j] + dh_out.at(b, t, j);
                const double dct = dc[j] + dht * o * (1.0 - tc * tc);
                const double c_prev = (t == 0) ? 0.0 : cache.c.at(b, t - 1, j);
                dg[j] = dct * g * i * (1.0 - i);           // input gate, pre-activation
                dg[H + j] = dct * c_prev * f * (1.0 - f);  // forget gate
                dg[2 * H + j] = dct * i * (1.0 - g * g);   // candidate
                dg[3 * H + j] = dht * tc * o * (1.0 - o);  // output gate
                dc[j] = dct * f;
            }
            // dx_t = dgates . W_ih ; dh_{t-1} = dgates . W_hh
            double* dxt = &dx.at(b, t, 0);
            for (std::size_t f = 0; f < F; ++f) {
                double acc = 0.0;
                for (std::size_t g = 0; g < 4 * H; ++g) acc += dg[g] * w_ih.at(g, f);
                dxt[f] = acc;
            }
            for (std::size_t j = 0; j < H; ++j) {
                double acc = 0.0;
                for (std::size_t g = 0; g < 4 * H; ++g) acc += dg[g] * w_hh.at(g, j);
                dh[j] = acc;
            }
        }
    }
}

void conv1d_causal_forward(const Tensor& x, const Tensor& w, const Tensor& b,
                           std::size_t dilation, Tensor& y) {
    const std::size_t B = x.dim(0), Ci = x.dim(1), T = x.dim(2);
    const std::size_t Co = w.dim(0), K = w.dim(2);
    if (w.dim(1) != Ci)
        throw DataError("conv1d: weight in-channels " + std::to_string(w.dim(1)) +
                        " != input channels " + std::to_string(Ci));
    y = Tensor({B, Co, T});
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bi = 0; bi < ssize(B); ++bi) {
        const std::size_t bb = static_cast<std::size_t>(bi);
        for (std::size_t co = 0; co < Co; ++co) {
            for (std::size_t t = 0; t < T; ++t) {
                double acc = b[co];
                for (std::size_t ci = 0; ci < Ci; ++ci) {
                    const double* xr = x.data() + (bb * Ci + ci) * T;
                    const double* wr = w.data() + (co * Ci + ci) * K;
                    for (std::size_t j = 0; j < K; ++j) {
                        // tap j reaches back (K-1-j)*dilation steps
                        const std::ptrdiff_t src = ssize(t) - ssize((K - 1 - j) * dilation);
                        if (src >= 0) acc += wr[j] * xr[src];
                    }
                }
                y.at(bb, co, t) = acc;
            }
        }
    }
}

void conv1d_causal_backward(const Tensor& x, const Tensor& w, const Tensor& dy,
                            std::size_t dilation, Tensor& dx, Tensor& dw, Tensor& db) {
    const std::size_t B = x.dim(0), Ci = x.dim(1), T = x.dim(2);
    const std::size_t Co = w.dim(0), K = w.dim(2);
    dx = Tensor({B, Ci, T});
    dw = Tensor({Co, Ci, K});
    db = Tensor({Co});
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t bi = 0; bi < ssize(B); ++bi) {
        const std::size_t b = static_cast<std::size_t>(bi);
        for (std::size_t ci = 0; ci < Ci; ++ci) {
            for (std::size_t t = 0; t < T; ++t) {
                double acc = 0.0;
                for (std::size_t co = 0; co < Co; ++co) {
                    const double* wr = w.data() + (co * Ci + ci) * K;
                    for (std::size_t j = 0; j < K; ++j) {
                        const std::size_t dst = t + (K - 1 - j) * dilation;
                        if (dst < T) acc += wr[j] * dy.at(b, co, dst);
                    }
                }
                dx.at(b, ci, t) = acc;
            }
        }
    }
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t coi = 0; coi < ssize(Co); ++coi) {
        const std::size_t co = static_cast<std::size_t>(coi);
        for (std::size_t ci = 0; ci < Ci; ++ci) {
            for (std::size_t j = 0; j < K; ++j) {
                double acc = 0.0;
                for (std::size_t b = 0; b < B; ++b) {
                    for (std::size_t t = 0; t < T; ++t) {
                        const std::ptrdiff_t src = ssize(t) - ssize((K - 1 - j) * dilation);
                        if (src >= 0) acc += dy.at(b, co, t) * x.at(b, ci, static_cast<std::size_t>(src));
                    }
                }
                dw.at(co, ci, j) = acc;
            }
        }
        double acc = 0.0;
        for (std::size_t b = 0; b < B; ++b)
            for (std::size_t t = 0; t < T; ++t) acc += dy.at(b, co, t);
        db[co] = acc;
    }
}

}  // namespace exf::core
