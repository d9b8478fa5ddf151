#include "prgan/nn.hpp"

#include <cmath>
#include <cstring>

#include "prgan/errors.hpp"
#include "prgan/kernels.hpp"

namespace prgan::nn {

namespace {
void he_init(std::vector<double>& w, int fan_in, Rng& rng) {
    double s = std::sqrt(2.0 / fan_in);
    for (auto& x : w) x = normal(rng) * s;
}
}  // namespace

// ---------------------------------------------------------------- Dense

Dense::Dense(int in, int out, Rng& rng) : in_(in), out_(out) {
    w.assign(static_cast<std::size_t>(out) * in, 0.0);
    b.assign(out, 0.0);
    he_init(w, in, rng);
    gw_.assign(w.size(), 0.0);
    gb_.assign(b.size(), 0.0);
}

const std::vector<double>& Dense::forward(const std::vector<double>& x, int batch, bool) {
    x_ = x;
    y_.resize(static_cast<std::size_t>(batch) * out_);
    kernels::matmul_tb(x.data(), w.data(), y_.data(), batch, in_, out_);
    kernels::add_bias_rows(y_.data(), b.data(), batch, out_);
    return y_;
}

const std::vector<double>& Dense::backward(const std::vector<double>& gy, int batch) {
    kernels::matmul_ta(gy.data(), x_.data(), gw_.data(), out_, batch, in_);
    for (int j = 0; j < out_; ++j) {
        double acc = 0.0;
        for (int i = 0; i < batch; ++i) acc += gy[static_cast<std::size_t>(i) * out_ + j];
        gb_[j] = acc;
    }
    gx_.resize(static_cast<std::size_t>(batch) * in_);
    kernels::matmul(gy.data(), w.data(), gx_.data(), batch, out_, in_);
    return gx_;
}

void Dense::collect_params(std::vector<std::vector<double>*>& p, std::vector<std::vector<double>*>& g) {
    p.push_back(&w); g.push_back(&gw_);
    p.push_back(&b); g.push_back(&gb_);
}

// ---------------------------------------------------------------- Conv2D

Conv2D::Conv2D(int c_in, int h, int w_, int c_out, int kh, int kw, int pad, Rng& rng)
    : c_in_(c_in), h_(h), w_(w_), c_out_(c_out), kh_(kh), kw_(kw), pad_(pad) {
    ho_ = h + 2 * pad - kh + 1;
    wo_ = w_ + 2 * pad - kw + 1;
    w.assign(static_cast<std::size_t>(c_out) * c_in * kh * kw, 0.0);
    b.assign(c_out, 0.0);
    he_init(w, c_in * kh * kw, rng);
    gw_.assign(w.size(), 0.0);
    gb_.assign(b.size(), 0.0);
}

const std::vector<double>& Conv2D::forward(const std::vector<double>& x, int batch, bool) {
    x_ = x;
    y_.resize(static_cast<std::size_t>(batch) * output_dim());
    kernels::conv2d_forward(x.data(), w.data(), b.data(), y_.data(),
                            batch, c_in_, h_, w_, c_out_, kh_, kw_, pad_);
    return y_;
}

const std::vector<double>& Conv2D::backward(const std::vector<double>& gy, int batch) {
    kernels::conv2d_backward_weights(x_.data(), gy.data(), gw_.data(), gb_.data(),
                                     batch, c_in_, h_, w_, c_out_, kh_, kw_, pad_);
    gx_.resize(static_cast<std::size_t>(batch) * input_dim());
    kernels::conv2d_backward_input(gy.data(), w.data(), gx_.data(),
                                   batch, c_in_, h_, w_, c_out_, kh_, kw_, pad_);
    return gx_;
}

void Conv2D::collect_params(std::vector<std::vector<double>*>& p, std::vector<std::vector<double>*>& g) {
    p.push_back(&w); g.push_back(&gw_);
    p.push_back(&b); g.push_back(&gb_);
}

// ---------------------------------------------------------------- MaxPool

MaxPool2x2::MaxPool2x2(int c, int h, int w) : c_(c), h_(h), w_(w) {}

const std::vector<double>& MaxPool2x2::forward(const std::vector<double>& x, int batch, bool) {
    y_.resize(static_cast<std::size_t>(batch) * output_dim());
    argmax_.resize(y_.size());
    kernels::maxpool2x2_forward(x.data(), y_.data(), argmax_.data(), batch, c_, h_, w_);
    return y_;
}

const std::vector<double>& MaxPool2x2::backward(const std::vector<double>& gy, int batch) {
    gx_.resize(static_cast<std::size_t>(batch) * input_dim());
    kernels::maxpool2x2_backward(gy.data(), argmax_.data(), gx_.data(), batch, c_, h_, w_);
    return gx_;
}

// ---------------------------------------------------------------- activations

const char* ActivationLayer::kind() const {
    switch (act_) {
        case Activation::relu: return "relu";
        case Activation::sigmoid: return "sigmoid";
        default: return "tanh";
    }
}

const std::vector<double>& ActivationLayer::forward(const std::vector<double>& x, int batch, bool) {
    std::size_t n = static_cast<std::size_t>(batch) * dim_;
    y_.resize(n);
    if (act_ == Activation::relu) {
        x_ = x;
        kernels::relu_forward(x.data(), y_.data(), n);
    } else if (act_ == Activation::sigmoid) {
        kernels::sigmoid_forward(x.data(), y_.data(), n);
    } else {
        kernels::tanh_forward(x.data(), y_.data(), n);
    }
    return y_;
}

const std::vector<double>& ActivationLayer::backward(const std::vector<double>& gy, int batch) {
    std::size_t n = static_cast<std::size_t>(batch) * dim_;
    gx_.resize(n);
    if (act_ == Activation::relu) {
        kernels::relu_backward(x_.data(), gy.data(), gx_.data(), n);
    } else if (act_ == Activation::sigmoid) {
        kernels::sigmoid_backward(y_.data(), gy.data(), gx_.data(), n);
    } else {
        kernels::tanh_backward(y_.data(), gy.data(), gx_.data(), n);
    }
    return gx_;
}

// ---------------------------------------------------------------- softmax

const std::vector<double>& Softmax::forward(const std::vector<double>& x, int batch, bool) {
    y_.resize(static_cast<std::size_t>(batch) * dim_);
    kernels::softmax_rows(x.data(), y_.data(), batch, dim_);
    return y_;
}

const std::vector<double>& Softmax::backward(const std::vector<double>& gy, int batch) {
    gx_.resize(static_cast<std::size_t>(batch) * dim_);
    kernels::softmax_backward(y_.data(), gy.data(), gx_.data(), batch, dim_);
    return gx_;
}

// ---------------------------------------------------------------- dropout

const std::vector<double>& Dropout::forward(const std::vector<double>& x, int batch, bool train) {
    std::size_t n = static_cast<std::size_t>(batch) * dim_;
    y_.resize(n);
    trained_last_ = train;
    if (!train || rate_ <= 0.0) {
        y_ = x;
        return y_;
    }
    if (!(reuse_mask_ && mask_.size() == n)) {
        mask_.resize(n);
        double keep = 1.0 - rate_;
        for (std::size_t i = 0; i < n; ++i)
            mask_[i] = uniform01(*rng_) < rate_ ? 0.0 : 1.0 / keep;
    }
    for (std::size_t i = 0; i < n; ++i) y_[i] = x[i] * mask_[i];
    return y_;
}

const std::vector<double>& Dropout::backward(const std::vector<double>& gy, int batch) {
    std::size_t n = static_cast<std::size_t>(batch) * dim_;
    gx_.resize(n);
    if (!trained_last_ || rate_ <= 0.0) {
        gx_ = gy;
        return gx_;
    }
    for (std::size_t i = 0; i < n; ++i) gx_[i] = gy[i] * mask_[i];
    return gx_;
}

// ---------------------------------------------------------------- network

const std::vector<double>& Network::forward(const std::vector<double>& x, int batch, bool train) {
    last_batch_ = batch;
    const std::vector<double>* cur = &x;
    for (auto& l : layers_) cur = &l->forward(*cur, batch, train);
    return *cur;
}

const std::vector<double>& Network::backward(const std::vector<double>& gy, int batch) {
    const std::vector<double>* cur = &gy;
    for (auto it = layers_.rbegin(); it != layers_.rend(); ++it)
        cur = &(*it)->backward(*cur, batch);
    return *cur;
}

void Network::collect_params(std::vector<std::vector<double>*>& p, std::vector<std::vector<double>*>& g) {
    for (auto& l : layers_) l->collect_params(p, g);
}

std::vector<double> Network::export_params() const {
    std::vector<std::vector<double>*> p, g;
    const_cast<Network*>(this)->collect_params(p, g);
    std::vector<double> flat;
    for (auto* v : p) flat.insert(flat.end(), v->begin(), v->end());
    return flat;
}

void Network::import_params(const std::vector<double>& flat) {
    std::vector<std::vector<double>*> p, g;
    collect_params(p, g);
    std::size_t off = 0;
    for (auto* v : p) {
        if (off + v->size() > flat.size()) throw Error("parameter blob too short");
        std::memcpy(v->data(), flat.data() + off, v->size() * sizeof(double));
        off += v->size();
    }
    if (off != flat.size()) throw Error("parameter blob size mismatch");
}

std::size_t Network::param_count() const {
    std::vector<std::vector<double>*> p, g;
    const_cast<Network*>(this)->collect_params(p, g);
    std::size_t n = 0;
    for (auto* v : p) n += v->size();
    return n;
}

std::uint64_t Network::param_hash() const {
    std::vector<std::vector<double>*> p, g;
    const_cast<Network*>(this)->collect_params(p, g);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (auto* v : p) h = fnv1a(v->data(), v->size() * sizeof(double), h);
    return h;
}

// ---------------------------------------------------------------- adam

void Adam::step(Network& net) {
    std::vector<std::vector<double>*> p, g;
    net.collect_params(p, g);
    if (m_.size() != p.size()) {
        m_.resize(p.size());
        v_.resize(p.size());
        for (std::size_t i = 0; i < p.size(); ++i) {
            m_[i].assign(p[i]->size(), 0.0);
            v_[i].assign(p[i]->size(), 0.0);
        }
    }
    ++t_;
    double c1 = 1.0 - std::pow(beta1_, static_cast<double>(t_));
    double c2 = 1.0 - std::pow(beta2_, static_cast<double>(t_));
    for (std::size_t i = 0; i < p.size(); ++i)
        kernels::adam_step(p[i]->data(), g[i]->data(), m_[i].data(), v_[i].data(),
                           p[i]->size(), lr_, beta1_, beta2_, eps_, c1, c2);
}

// ---------------------------------------------------------------- losses

double cross_entropy(const std::vector<double>& probs, const std::vector<int>& labels,
                     int batch, int classes, std::vector<double>* gy) {
    if (batch <= 0) throw EmptyEvaluationSet("cross_entropy on empty batch");
    if (gy) gy->assign(static_cast<std::size_t>(batch) * classes, 0.0);
    double total = 0.0;
    for (int i = 0; i < batch; ++i) {
        double p = probs[static_cast<std::size_t>(i) * classes + labels[i]];
        if (p < 1e-7) p = 1e-7;
        total += -std::log(p);
        if (gy) (*gy)[static_cast<std::size_t>(i) * classes + labels[i]] = -1.0 / (p * batch);
    }
    return total / batch;
}

std::vector<int> argmax_rows(const std::vector<double>& probs, int batch, int classes) {
    std::vector<int> out(batch);
    for (int i = 0; i < batch; ++i) {
        const double* row = probs.data() + static_cast<std::size_t>(i) * classes;
        int best = 0;
        for (int j = 1; j < classes; ++j)
            if (row[j] > row[best]) best = j;
        out[i] = best;
    }
    return out;
}

}  // namespace prgan::nn
