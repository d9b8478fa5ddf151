#ifndef PRGAN_NN_HPP
#define PRGAN_NN_HPP

#include <cstdint>
#include <memory>
#include <string>
#include <vector>

#include "prgan/util.hpp"

namespace prgan::nn {

// Minimal layer stack in double precision. Backward passes overwrite the
// parameter gradients of the layer (no accumulation), so a backward through
// a frozen network leaves nothing to clean up.
class Layer {
public:
    virtual ~Layer() = default;
    virtual const char* kind() const = 0;
    virtual int input_dim() const = 0;
    virtual int output_dim() const = 0;
    // x: [batch * input_dim], returns internal buffer [batch * output_dim]
    virtual const std::vector<double>& forward(const std::vector<double>& x, int batch, bool train) = 0;
    // gy: [batch * output_dim], returns internal buffer [batch * input_dim]
    virtual const std::vector<double>& backward(const std::vector<double>& gy, int batch) = 0;
    virtual void collect_params(std::vector<std::vector<double>*>&,
                                std::vector<std::vector<double>*>&) {}
};

class Dense : public Layer {
public:
    Dense(int in, int out, Rng& rng);
    const char* kind() const override { return "dense"; }
    int input_dim() const override { return in_; }
    int output_dim() const override { return out_; }
    const std::vector<double>& forward(const std::vector<double>& x, int batch, bool train) override;
    const std::vector<double>& backward(const std::vector<double>& gy, int batch) override;
    void collect_params(std::vector<std::vector<double>*>& p,
                        std::vector<std::vector<double>*>& g) override;

    std::vector<double> w;  // [out, in]
    std::vector<double> b;  // [out]

private:
    int in_, out_;
    std::vector<double> gw_, gb_, x_, y_, gx_;
};

class Conv2D : public Layer {
public:
    Conv2D(int c_in, int h, int w, int c_out, int kh, int kw, int pad, Rng& rng);
    const char* kind() const override { return "conv"; }
    int input_dim() const override { return c_in_ * h_ * w_; }
    int output_dim() const override { return c_out_ * ho_ * wo_; }
    int out_h() const { return ho_; }
    int out_w() const { return wo_; }
    const std::vector<double>& forward(const std::vector<double>& x, int batch, bool train) override;
    const std::vector<double>& backward(const std::vector<double>& gy, int batch) override;
    void collect_params(std::vector<std::vector<double>*>& p,
                        std::vector<std::vector<double>*>& g) override;

    std::vector<double> w;  // [c_out, c_in, kh, kw]
    std::vector<double> b;  // [c_out]

private:
    int c_in_, h_, w_, c_out_, kh_, kw_, pad_, ho_, wo_;
    std::vector<double> gw_, gb_, x_, y_, gx_;
};

class MaxPool2x2 : public Layer {
public:
    MaxPool2x2(int c, int h, int w);
    const char* kind() const override { return "maxpool"; }
    int input_dim() const override { return c_ * h_ * w_; }
    int output_dim() const override { return c_ * (h_ / 2) * (w_ / 2); }
    const std::vector<double>& forward(const std::vector<double>& x, int batch, bool train) override;
    const std::vector<double>& backward(const std::vector<double>& gy, int batch) override;

private:
    int c_, h_, w_;
    std::vector<double> y_, gx_;
    std::vector<int> argmax_;
};

enum class Activation { relu, sigmoid, tanh };

class ActivationLayer : public Layer {
public:
    ActivationLayer(Activation a, int dim) : act_(a), dim_(dim) {}
    const char* kind() const override;
    int input_dim() const override { return dim_; }
    int output_dim() const override { return dim_; }
    const std::vector<double>& forward(const std::vector<double>& x, int batch, bool train) override;
    const std::vector<double>& backward(const std::vector<double>& gy, int batch) override;

private:
    Activation act_;
    int dim_;
    std::vector<double> x_, y_, gx_;
};

class Softmax : public Layer {
public:
    explicit Softmax(int dim) : dim_(dim) {}
    const char* kind() const override { return "softmax"; }
    int input_dim() const override { return dim_; }
    int output_dim() const override { return dim_; }
    const std::vector<double>& forward(const std::vector<double>& x, int batch, bool train) override;
    const std::vector<double>& backward(const std::vector<double>& gy, int batch) override;

private:
    int dim_;
    std::vector<double> y_, gx_;
};

class Dropout : public Layer {
public:
    Dropout(double rate, int dim, Rng* rng) : rate_(rate), dim_(dim), rng_(rng) {}
    const char* kind() const override { return "dropout"; }
    int input_dim() const override { return dim_; }
    int output_dim() const override { return dim_; }
    const std::vector<double>& forward(const std::vector<double>& x, int batch, bool train) override;
    const std::vector<double>& backward(const std::vector<double>& gy, int batch) override;
    // test hook: keep the last mask for finite-difference checks
    void set_reuse_mask(bool v) { reuse_mask_ = v; }

private:
    double rate_;
    int dim_;
    Rng* rng_;
    bool reuse_mask_ = false;
    bool trained_last_ = false;
    std::vector<double> mask_, y_, gx_;
};

class Network {
public:
    Network() : rng_(std::make_unique<Rng>(0x9e3779b97f4a7c15ULL)) {}
    explicit Network(std::uint64_t seed) : rng_(std::make_unique<Rng>(seed)) {}
    Network(const Network&) = delete;
    Network& operator=(const Network&) = delete;
    // rng lives behind a stable address so dropout layers survive moves
    Network(Network&&) = default;
    Network& operator=(Network&&) = default;

    void add(std::unique_ptr<Layer> l) { layers_.push_back(std::move(l)); }
    Rng& rng() { return *rng_; }
    int num_layers() const { return static_cast<int>(layers_.size()); }
    Layer& layer(int i) { return *layers_[i]; }
    const Layer& layer(int i) const { return *layers_[i]; }
    int input_dim() const { return layers_.front()->input_dim(); }
    int output_dim() const { return layers_.back()->output_dim(); }

    const std::vector<double>& forward(const std::vector<double>& x, int batch, bool train);
    // returns gradient w.r.t. the network input
    const std::vector<double>& backward(const std::vector<double>& gy, int batch);

    void collect_params(std::vector<std::vector<double>*>& p,
                        std::vector<std::vector<double>*>& g);
    std::vector<double> export_params() const;
    void import_params(const std::vector<double>& flat);
    std::size_t param_count() const;
    std::uint64_t param_hash() const;

private:
    std::vector<std::unique_ptr<Layer>> layers_;
    std::unique_ptr<Rng> rng_;
    int last_batch_ = 0;
};

class Adam {
public:
    explicit Adam(double lr = 1e-3, double beta1 = 0.9, double beta2 = 0.999, double eps = 1e-8)
        : lr_(lr), beta1_(beta1), beta2_(beta2), eps_(eps) {}
    void step(Network& net);

private:
    double lr_, beta1_, beta2_, eps_;
    long t_ = 0;
    std::vector<std::vector<double>> m_, v_;
};

// Cross-entropy on probability rows (clamped at 1e-7). Returns mean loss;
// if gy is non-null it receives d(loss)/d(probs), shape [batch * classes].
double cross_entropy(const std::vector<double>& probs, const std::vector<int>& labels,
                     int batch, int classes, std::vector<double>* gy);

std::vector<int> argmax_rows(const std::vector<double>& probs, int batch, int classes);

}  // namespace prgan::nn

#endif
