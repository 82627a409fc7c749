#include "exf/core/layers.hpp"

#include <cmath>

namespace exf::core {

namespace {
inline std::ptrdiff_t ssize(std::size_t n) { return static_cast<std::ptrdiff_t>(n); }
}

double act_scalar(Act a, double x) {
    switch (a) {
        case Act::Sigmoid: return 1.0 / (1.0 + std::exp(-x));
        case Act::Tanh: return std::tanh(x);
        case Act::Relu: return x > 0.0 ? x : 0.0;
        case Act::LeakyRelu: return x > 0.0 ? x : kLeakyReluSlope * x;
    }
    return x;
}

Tensor activate(const Tensor& x, Act a) {
    Tensor y = x;
    for (std::size_t i = 0; i < y.size(); ++i) y[i] = act_scalar(a, y[i]);
    return y;
}

Tensor activate_backward(const Tensor& dy, const Tensor& x, const Tensor& y, Act a) {
    Tensor dx = dy;
    switch (a) {
        case Act::Sigmoid:
            for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= y[i] * (1.0 - y[i]);
            break;
        case Act::Tanh:
            for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= 1.0 - y[i] * y[i];
            break;
        case Act::Relu:
            for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= x[i] > 0.0 ? 1.0 : 0.0;
            break;
        case Act::LeakyRelu:
            for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= x[i] > 0.0 ? 1.0 : kLeakyReluSlope;
            break;
    }
    return dx;
}

Tensor init_kaiming_normal(const std::vector<std::size_t>& shape, std::size_t fan_in, Rng& rng) {
    Tensor t{shape};
    const double stddev = std::sqrt(2.0 / static_cast<double>(fan_in));
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.normal(0.0, stddev);
    return t;
}

Tensor init_uniform_pm(const std::vector<std::size_t>& shape, double bound, Rng& rng) {
    Tensor t{shape};
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
    return t;
}

// ---- Linear ----------------------------------------------------------------

void Linear::init(std::size_t in_dim, std::size_t out_dim, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(in_dim));
    w = init_uniform_pm({out_dim, in_dim}, bound, rng);
    b = Tensor({out_dim});
    dw = Tensor({out_dim, in_dim});
    db = Tensor({out_dim});
}

Tensor Linear::forward(const Tensor& x) {
    const std::size_t n = x.dim(0), in = x.dim(1), out = w.dim(0);
    if (in != w.dim(1))
        throw DataError("linear: input width " + std::to_string(in) + " != weight in-dim " +
                        std::to_string(w.dim(1)));
    x_cache = x;
    Tensor y({n, out});
    gemm_nt(x.data(), w.data(), y.data(), n, in, out);
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t i = 0; i < ssize(n); ++i)
        for (std::size_t j = 0; j < out; ++j) y.at(static_cast<std::size_t>(i), j) += b[j];
    return y;
}

Tensor Linear::backward(const Tensor& dy) {
    const std::size_t n = x_cache.dim(0), in = w.dim(1), out = w.dim(0);
    gemm_tn(dy.data(), x_cache.data(), dw.data(), out, n, in);
    colsum(dy.data(), db.data(), n, out);
    Tensor dx({n, in});
    gemm_nn(dy.data(), w.data(), dx.data(), n, out, in);
    return dx;
}

void Linear::collect(std::vector<Tensor*>& params, std::vector<Tensor*>& grads) {
    params.push_back(&w);
    params.push_back(&b);
    grads.push_back(&dw);
    grads.push_back(&db);
}

// ---- Dropout ---------------------------------------------------------------

Tensor Dropout::forward(const Tensor& x, const RunCtx& ctx) {
    if (ctx.mode == Mode::Eval || rate <= 0.0) {
        mask_cache = Tensor(x.shape(), 1.0);
        return x;
    }
    if (ctx.rng == nullptr) throw DataError("dropout: training pass without an RNG context");
    mask_cache = Tensor(x.shape());
    const double keep_scale = 1.0 / (1.0 - rate);
    Tensor y = x;
    for (std::size_t i = 0; i < y.size(); ++i) {
        const double m = ctx.rng->uniform() < rate ? 0.0 : keep_scale;
        mask_cache[i] = m;
        y[i] *= m;
    }
    return y;
}

Tensor Dropout::backward(const Tensor& dy) const {
    Tensor dx = dy;
    for (std::size_t i = 0; i < dx.size(); ++i) dx[i] *= mask_cache[i];
    return dx;
}

// ---- BatchNorm1d -----------------------------------------------------------

void BatchNorm1d::init(std::size_t channels) {
    gamma = Tensor({channels}, 1.0);
    beta = Tensor({channels});
    dgamma = Tensor({channels});
    dbeta = Tensor({channels});
    running_mean = Tensor({channels});
    running_var = Tensor({channels}, 1.0);
}

Tensor BatchNorm1d::forward(const Tensor& x, const RunCtx& ctx) {
    const std::size_t B = x.dim(0), C = x.dim(1), T = x.dim(2);
    Tensor y = x;
    if (ctx.mode == Mode::Train) {
        if (B < 2) throw DataError("batchnorm: train mode needs batch >= 2, got " + std::to_string(B));
        x_hat_cache = Tensor({B, C, T});
        invstd_cache.assign(C, 0.0);
        const double n = static_cast<double>(B * T);
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t ci = 0; ci < ssize(C); ++ci) {
            const std::size_t c = static_cast<std::size_t>(ci);
            double mean = 0.0;
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t t = 0; t < T; ++t) mean += x.at(b, c, t);
            mean /= n;
            double var = 0.0;
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t t = 0; t < T; ++t) {
                    const double d = x.at(b, c, t) - mean;
                    var += d * d;
                }
            var /= n;
            const double invstd = 1.0 / std::sqrt(var + eps);
            invstd_cache[c] = invstd;
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t t = 0; t < T; ++t) {
                    const double xh = (x.at(b, c, t) - mean) * invstd;
                    x_hat_cache.at(b, c, t) = xh;
                    y.at(b, c, t) = gamma[c] * xh + beta[c];
                }
            // running stats keep the unbiased variance
            const double var_unbiased = n > 1.0 ? var * n / (n - 1.0) : var;
            running_mean[c] = (1.0 - momentum) * running_mean[c] + momentum * mean;
            running_var[c] = (1.0 - momentum) * running_var[c] + momentum * var_unbiased;
        }
    } else {
#pragma omp parallel for schedule(static)
        for (std::ptrdiff_t ci = 0; ci < ssize(C); ++ci) {
            const std::size_t c = static_cast<std::size_t>(ci);
            const double invstd = 1.0 / std::sqrt(running_var[c] + eps);
            for (std::size_t b = 0; b < B; ++b)
                for (std::size_t t = 0; t < T; ++t)
                    y.at(b, c, t) = gamma[c] * (x.at(b, c, t) - running_mean[c]) * invstd + beta[c];
        }
    }
    return y;
}

Tensor BatchNorm1d::backward(const Tensor& dy) {
    const std::size_t B = dy.dim(0), C = dy.dim(1), T = dy.dim(2);
    const double n = static_cast<double>(B * T);
    Tensor dx({B, C, T});
#pragma omp parallel for schedule(static)
    for (std::ptrdiff_t ci = 0; ci < ssize(C); ++ci) {
        const std::size_t c = static_cast<std::size_t>(ci);
        double sum_dy = 0.0, sum_dy_xhat = 0.0;
        for (std::size_t b = 0; b < B; ++b)
            for (std::size_t t = 0; t < T; ++t) {
                sum_dy += dy.at(b, c, t);
                sum_dy_xhat += dy.at(b, c, t) * x_hat_cache.at(b, c, t);
            }
        dgamma[c] = sum_dy_xhat;
        dbeta[c] = sum_dy;
        const double scale = gamma[c] * invstd_cache[c] / n;
        for (std::size_t b = 0; b < B; ++b)
            for (std::size_t t = 0; t < T; ++t)
                dx.at(b, c, t) = scale * (n * dy.at(b, c, t) - sum_dy -
                                          x_hat_cache.at(b, c, t) * sum_dy_xhat);
    }
    return dx;
}

void BatchNorm1d::collect(std::vector<Tensor*>& params, std::vector<Tensor*>& grads) {
    params.push_back(&gamma);
    params.push_back(&beta);
    grads.push_back(&dgamma);
    grads.push_back(&dbeta);
}

// ---- Conv1d ----------------------------------------------------------------

void Conv1d::init(std::size_t in_ch, std::size_t out_ch, std::size_t kernel, std::size_t dil, Rng& rng) {
    dilation = dil;
    w = init_kaiming_normal({out_ch, in_ch, kernel}, in_ch * kernel, rng);
    b = Tensor({out_ch});
    dw = Tensor({out_ch, in_ch, kernel});
    db = Tensor({out_ch});
}

Tensor Conv1d::forward(const Tensor& x) {
    x_cache = x;
    Tensor y;
    conv1d_causal_forward(x, w, b, dilation, y);
    return y;
}

Tensor Conv1d::backward(const Tensor& dy) {
    Tensor dx;
    conv1d_causal_backward(x_cache, w, dy, dilation, dx, dw, db);
    return dx;
}

void Conv1d::collect(std::vector<Tensor*>& params, std::vector<Tensor*>& grads) {
    params.push_back(&w);
    params.push_back(&b);
    grads.push_back(&dw);
    grads.push_back(&db);
}

// ---- LstmLayer / LstmStack -------------------------------------------------

void LstmLayer::init(std::size_t input_dim, std::size_t hidden_dim, Rng& rng) {
    const double bound = 1.0 / std::sqrt(static_cast<double>(hidden_dim));
    w_ih = init_uniform_pm({4 * hidden_dim, input_dim}, bound, rng);
    w_hh = init_uniform_pm({4 * hidden_dim, hidden_dim}, bound, rng);
    b_ih = init_uniform_pm({4 * hidden_dim}, bound, rng);
    b_hh = init_uniform_pm({4 * hidden_dim}, bound, rng);
    dw_ih = Tensor({4 * hidden_dim, input_dim});
    dw_hh = Tensor({4 * hidden_dim, hidden_dim});
    db_ih = Tensor({4 * hidden_dim});
    db_hh = Tensor({4 * hidden_dim});
}

Tensor LstmLayer::forward(const Tensor& x) {
    lstm_seq_forward(x, w_ih, w_hh, b_ih, b_hh, cache);
    return cache.h;
}

Tensor LstmLayer::backward(const Tensor& dh_out) {
    const std::size_t B = cache.x.dim(0), T = cache.x.dim(1), F = cache.x.dim(2);
    const std::size_t H = hidden_dim();
    Tensor dgates, dx;
    lstm_seq_backward(cache, w_ih, w_hh, dh_out, dgates, dx);
    // weight grads from the flattened (B*T) axis
    gemm_tn(dgates.data(), cache.x.data(), dw_ih.data(), 4 * H, B * T, F);
    Tensor h_prev({B, T, H});
    for (std::size_t b = 0; b < B; ++b)
        for (std::size_t t = 1; t < T; ++t)
            for (std::size_t j = 0; j < H; ++j) h_prev.at(b, t, j) = cache.h.at(b, t - 1, j);
    gemm_tn(dgates.data(), h_prev.data(), dw_hh.data(), 4 * H, B * T, H);
    colsum(dgates.data(), db_ih.data(), B * T, 4 * H);
    db_hh = db_ih;  // both biases enter the same pre-activation sum
    return dx;
}

void LstmLayer::collect(std::vector<Tensor*>& params, std::vector<Tensor*>& grads) {
    params.push_back(&w_ih);
    params.push_back(&w_hh);
    params.push_back(&b_ih);
    params.push_back(&b_hh);
    grads.push_back(&dw_ih);
    grads.push_back(&dw_hh);
    grads.push_back(&db_ih);
    grads.push_back(&db_hh);
}

void LstmStack::init(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_layers,
                     double dropout_rate, Rng& rng) {
    layers.resize(num_layers);
    for (std::size_t l = 0; l < num_layers; ++l)
        layers[l].init(l == 0 ? input_dim : hidden_dim, hidden_dim, rng);
    dropouts.assign(num_layers > 0 ? num_layers - 1 : 0, Dropout{dropout_rate, {}});
}

Tensor LstmStack::forward(const Tensor& x, const RunCtx& ctx) {
    Tensor h = layers.front().forward(x);
    for (std::size_t l = 1; l < layers.size(); ++l) {
        h = dropouts[l - 1].forward(h, ctx);
        h = layers[l].forward(h);
    }
    return h;
}

Tensor LstmStack::backward(const Tensor& dy) {
    Tensor d = dy;
    for (std::size_t l = layers.size(); l-- > 0;) {
        d = layers[l].backward(d);
        if (l > 0) d = dropouts[l - 1].backward(d);
    }
    return d;
}

void LstmStack::collect(std::vector<Tensor*>& params, std::vector<Tensor*>& grads) {
    for (auto& l : layers) l.collect(params, grads);
}

}  // namespace exf::core
