#pragma once

#include <cstdint>
#include <vector>

#include "exf/core/kernels.hpp"
#include "exf/core/tensor.hpp"
#include "exf/rng.hpp"

namespace exf::core {

enum class Mode { Train, Eval };

enum class Act { Sigmoid, Tanh, Relu, LeakyRelu };

constexpr double kLeakyReluSlope = 0.01;

double act_scalar(Act a, double x);
Tensor activate(const Tensor& x, Act a);
// dy combined with the forward input x and output y; which one is used depends
// on the activation.
Tensor activate_backward(const Tensor& dy, const Tensor& x, const Tensor& y, Act a);

// Gaussian with std sqrt(2 / fan_in); biases stay zero-initialised elsewhere.
Tensor init_kaiming_normal(const std::vector<std::size_t>& shape, std::size_t fan_in, Rng& rng);
// Uniform in [-bound, bound]; LSTM and linear layers use bound = 1/sqrt(hidden).
Tensor init_uniform_pm(const std::vector<std::size_t>& shape, double bound, Rng& rng);

// Execution context for a forward/backward pass. Training passes own the
// dropout RNG and batch-norm running stats; eval passes are pure.
struct RunCtx {
    Mode mode = Mode::Eval;
    Rng* rng = nullptr;
};

struct Linear {
    Tensor w;  // out x in
    Tensor b;  // out
    Tensor dw, db;
    Tensor x_cache;

    void init(std::size_t in_dim, std::size_t out_dim, Rng& rng);
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);
    void collect(std::vector<Tensor*>& params, std::vector<Tensor*>& grads);
};

struct Dropout {
    double rate = 0.0;
    Tensor mask_cache;  // holds 0 or 1/(1-rate); inverted dropout

    Tensor forward(const Tensor& x, const RunCtx& ctx);
    Tensor backward(const Tensor& dy) const;
};

// Per-channel normalisation over (batch, time) for B x C x T inputs.
struct BatchNorm1d {
    Tensor gamma, beta;
    Tensor dgamma, dbeta;
    Tensor running_mean, running_var;
    double eps = 1e-5;
    double momentum = 0.1;

    Tensor x_hat_cache;
    std::vector<double> invstd_cache;

    void init(std::size_t channels);
    Tensor forward(const Tensor& x, const RunCtx& ctx);
    Tensor backward(const Tensor& dy);
    void collect(std::vector<Tensor*>& params, std::vector<Tensor*>& grads);
};

struct Conv1d {
    Tensor w;  // Co x Ci x K
    Tensor b;  // Co
    std::size_t dilation = 1;
    Tensor dw, db;
    Tensor x_cache;

    void init(std::size_t in_ch, std::size_t out_ch, std::size_t kernel, std::size_t dil, Rng& rng);
    Tensor forward(const Tensor& x);
    Tensor backward(const Tensor& dy);
    void collect(std::vector<Tensor*>& params, std::vector<Tensor*>& grads);
};

struct LstmLayer {
    Tensor w_ih;  // 4H x F
    Tensor w_hh;  // 4H x H
    Tensor b_ih, b_hh;
    Tensor dw_ih, dw_hh, db_ih, db_hh;
    LstmCache cache;

    void init(std::size_t input_dim, std::size_t hidden_dim, Rng& rng);
    std::size_t hidden_dim() const { return w_hh.dim(1); }
    Tensor forward(const Tensor& x);            // B,T,F -> B,T,H
    Tensor backward(const Tensor& dh_out);      // -> dx
    void collect(std::vector<Tensor*>& params, std::vector<Tensor*>& grads);
};

// Stacked LSTM with dropout between layers (not after the last one).
struct LstmStack {
    std::vector<LstmLayer> layers;
    std::vector<Dropout> dropouts;

    void init(std::size_t input_dim, std::size_t hidden_dim, std::size_t num_layers,
              double dropout_rate, Rng& rng);
    Tensor forward(const Tensor& x, const RunCtx& ctx);
    Tensor backward(const Tensor& dy);
    void collect(std::vector<Tensor*>& params, std::vector<Tensor*>& grads);
};

}  // namespace exf::core
