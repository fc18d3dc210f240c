#include "enas/mlp.hpp"

#include "enas/rng.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>

namespace enas {

namespace {

Eigen::ArrayXXd activate(const Eigen::ArrayXXd& z, Activation a) {
    if (a == Activation::Tanh) return z.tanh();
    return 1.0 / (1.0 + (-z).exp());
}

Eigen::ArrayXXd activate_derivative(const Eigen::ArrayXXd& a_out, Activation a) {
    if (a == Activation::Tanh) return 1.0 - a_out.square();
    return a_out * (1.0 - a_out);
}

// log(1 + e^z), stable for large |z|
inline double softplus(double z) {
    return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z)));
}

void check_inputs(const Architecture& arch, const Eigen::MatrixXd& inputs) {
    if (arch.input_dim < 1) throw std::invalid_argument("architecture has no inputs");
    if (inputs.cols() != arch.input_dim)
        throw std::invalid_argument("input width " + std::to_string(inputs.cols()) +
                                    " does not match input_dim " +
                                    std::to_string(arch.input_dim));
    for (const auto& l : arch.layers)
        if (l.size < 1) throw std::invalid_argument("hidden layer with size < 1");
}

// Forward pass keeping activations for backprop. Returns output pre-activation.
Eigen::VectorXd forward_cached(const Architecture& arch, const WeightSet& w,
                               const Eigen::MatrixXd& inputs,
                               std::vector<Eigen::MatrixXd>* activations) {
    Eigen::MatrixXd a = inputs;
    if (activations) activations->push_back(a);
    for (std::size_t l = 0; l < arch.layers.size(); ++l) {
        Eigen::MatrixXd z = a * w.weights[l].transpose();
        z.rowwise() += w.biases[l].transpose();
        a = activate(z.array(), arch.layers[l].activation).matrix();
        if (activations) activations->push_back(a);
    }
    const std::size_t out = arch.layers.size();
    Eigen::VectorXd z_out = a * w.weights[out].transpose().col(0);
    z_out.array() += w.biases[out][0];
    return z_out;
}

}  // namespace

const char* activation_name(Activation a) {
    return a == Activation::Sigmoid ? "sigmoid" : "tanh";
}

std::size_t Architecture::weight_count() const {
    std::size_t count = 0;
    int in = input_dim;
    for (const auto& l : layers) {
        count += static_cast<std::size_t>(l.size) * (in + 1);
        in = l.size;
    }
    count += static_cast<std::size_t>(in) + 1;  // output unit
    return count;
}

double ConfusionMatrix::accuracy() const {
    const auto n = total();
    return n == 0 ? 0.0 : static_cast<double>(tp + tn) / static_cast<double>(n);
}

double mcc(const ConfusionMatrix& c) {
    const double f1 = static_cast<double>(c.tp + c.fp);
    const double f2 = static_cast<double>(c.tp + c.fn);
    const double f3 = static_cast<double>(c.tn + c.fn);
    const double f4 = static_cast<double>(c.tn + c.fp);
    if (f1 == 0.0 || f2 == 0.0 || f3 == 0.0 || f4 == 0.0) return 0.0;
    const double num = static_cast<double>(c.tp) * static_cast<double>(c.tn) -
                       static_cast<double>(c.fp) * static_cast<double>(c.fn);
    return num / std::sqrt(f1 * f2 * f3 * f4);
}

WeightSet init_weights(const Architecture& arch, std::uint64_t seed) {
    if (arch.input_dim < 1) throw std::invalid_argument("architecture has no inputs");
    WeightSet w;
    Rng rng(mix_seed({seed, 0x57494e4954ULL}));  // "WINIT"
    int in = arch.input_dim;
    auto layer_sizes = arch.layers;
    layer_sizes.push_back({1, Activation::Sigmoid});  // logistic output head
    for (const auto& l : layer_sizes) {
        const int out = l.size;
        const double r = std::sqrt(6.0 / (in + out));
        Eigen::MatrixXd m(out, in);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = rng.uniform(-r, r);
        Eigen::VectorXd b(out);
        for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = rng.uniform(-r, r);
        w.weights.push_back(std::move(m));
        w.biases.push_back(std::move(b));
        in = out;
    }
    return w;
}

Eigen::VectorXd forward(const Architecture& arch, const WeightSet& w,
                        const Eigen::MatrixXd& inputs) {
    check_inputs(arch, inputs);
    Eigen::VectorXd z = forward_cached(arch, w, inputs, nullptr);
    return (1.0 / (1.0 + (-z.array()).exp())).matrix();
}

double bce_loss(const Architecture& arch, const WeightSet& w,
                const Eigen::MatrixXd& inputs, const Eigen::VectorXi& labels) {
    check_inputs(arch, inputs);
    const Eigen::VectorXd z = forward_cached(arch, w, inputs, nullptr);
    double acc = 0.0;
    for (Eigen::Index i = 0; i < z.size(); ++i)
        acc += softplus(z[i]) - labels[i] * z[i];
    return acc / static_cast<double>(z.size());
}

double bce_loss_gradient(const Architecture& arch, const WeightSet& w,
                         const Eigen::MatrixXd& inputs, const Eigen::VectorXi& labels,
                         Eigen::VectorXd& grad_out) {
    check_inputs(arch, inputs);
    const auto n = static_cast<double>(inputs.rows());
    std::vector<Eigen::MatrixXd> acts;
    const Eigen::VectorXd z_out = forward_cached(arch, w, inputs, &acts);

    double loss = 0.0;
    Eigen::VectorXd delta(z_out.size());
    for (Eigen::Index i = 0; i < z_out.size(); ++i) {
        loss += softplus(z_out[i]) - labels[i] * z_out[i];
        const double p = 1.0 / (1.0 + std::exp(-z_out[i]));
        delta[i] = (p - labels[i]) / n;
    }
    loss /= n;

    const std::size_t n_layers = arch.layers.size();
    std::vector<Eigen::MatrixXd> gw(n_layers + 1);
    std::vector<Eigen::VectorXd> gb(n_layers + 1);

    gw[n_layers] = (delta.transpose() * acts[n_layers]);
    gb[n_layers] = Eigen::VectorXd::Constant(1, delta.sum());

    Eigen::MatrixXd d = delta * w.weights[n_layers];  // N x last_hidden
    for (std::size_t l = n_layers; l-- > 0;) {
        const Eigen::MatrixXd dz =
            (d.array() * activate_derivative(acts[l + 1].array(), arch.layers[l].activation))
                .matrix();
        gw[l] = dz.transpose() * acts[l];
        gb[l] = dz.colwise().sum().transpose();
        if (l > 0) d = dz * w.weights[l];
    }

    WeightSet grads;
    grads.weights = std::move(gw);
    grads.biases = std::move(gb);
    grad_out = flatten(grads);
    return loss;
}

Eigen::VectorXd flatten(const WeightSet& w) {
    std::size_t total = 0;
    for (std::size_t l = 0; l < w.weights.size(); ++l)
        total += static_cast<std::size_t>(w.weights[l].size() + w.biases[l].size());
    Eigen::VectorXd flat(static_cast<Eigen::Index>(total));
    Eigen::Index at = 0;
    for (std::size_t l = 0; l < w.weights.size(); ++l) {
        const auto& m = w.weights[l];
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) flat[at++] = m(i, j);
        for (Eigen::Index i = 0; i < w.biases[l].size(); ++i) flat[at++] = w.biases[l][i];
    }
    return flat;
}

WeightSet unflatten(const Architecture& arch, const Eigen::VectorXd& flat) {
    WeightSet w;
    Eigen::Index at = 0;
    int in = arch.input_dim;
    auto shapes = arch.layers;
    shapes.push_back({1, Activation::Sigmoid});
    for (const auto& l : shapes) {
        Eigen::MatrixXd m(l.size, in);
        for (Eigen::Index i = 0; i < m.rows(); ++i)
            for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = flat[at++];
        Eigen::VectorXd b(l.size);
        for (Eigen::Index i = 0; i < b.size(); ++i) b[i] = flat[at++];
        w.weights.push_back(std::move(m));
        w.biases.push_back(std::move(b));
        in = l.size;
    }
    if (at != flat.size()) throw std::invalid_argument("flat weight vector size mismatch");
    return w;
}

TrainOutcome train_scg(const Architecture& arch, const Eigen::MatrixXd& inputs,
                       const Eigen::VectorXi& labels, std::uint64_t seed,
                       const ScgOptions& opts) {
    check_inputs(arch, inputs);
    if (inputs.rows() == 0 || inputs.rows() != labels.size())
        throw std::invalid_argument("train_scg: empty dataset or label size mismatch");

    const auto dim = static_cast<Eigen::Index>(arch.weight_count());
    auto grad_of = [&](const Eigen::VectorXd& flat, Eigen::VectorXd& g) {
        return bce_loss_gradient(arch, unflatten(arch, flat), inputs, labels, g);
    };

    TrainOutcome out;
    Eigen::VectorXd w = flatten(init_weights(arch, seed));

    Eigen::VectorXd grad(dim);
    double loss = grad_of(w, grad);
    out.initial_loss = loss;
    out.final_loss = loss;
    out.weights = unflatten(arch, w);
    if (!std::isfinite(loss)) {
        out.aborted_non_finite = true;
        return out;
    }

    double best_loss = loss;
    Eigen::VectorXd best_w = w;

    Eigen::VectorXd r = -grad;
    Eigen::VectorXd p = r;
    double lambda = opts.lambda0;
    double lambda_bar = 0.0;
    bool success = true;
    double delta = 0.0;
    Eigen::VectorXd r_next(dim), grad_sigma(dim);

    int stall = 0;
    double stall_reference = best_loss;

    for (int k = 1; k <= opts.max_epochs; ++k) {
        const double p_norm2 = p.squaredNorm();
        if (p_norm2 == 0.0) break;

        if (success) {
            const double sigma_k = opts.sigma / std::sqrt(p_norm2);
            Eigen::VectorXd w_probe = w + sigma_k * p;
            if (!std::isfinite(grad_of(w_probe, grad_sigma))) {
                out.aborted_non_finite = true;
                break;
            }
            delta = p.dot((grad_sigma - grad) / sigma_k);
        }

        delta += (lambda - lambda_bar) * p_norm2;
        if (delta <= 0.0) {
            lambda_bar = 2.0 * (lambda - delta / p_norm2);
            delta = -delta + lambda * p_norm2;
            lambda = lambda_bar;
        }

        const double mu = p.dot(r);
        const double alpha = mu / delta;

        // gradient computed speculatively: nearly every step is accepted
        const Eigen::VectorXd w_trial = w + alpha * p;
        Eigen::VectorXd grad_trial(dim);
        const double loss_trial = grad_of(w_trial, grad_trial);
        if (!std::isfinite(loss_trial)) {
            out.aborted_non_finite = true;
            break;
        }
        const double comparison = 2.0 * delta * (loss - loss_trial) / (mu * mu);

        if (comparison >= 0.0) {
            w = w_trial;
            grad = grad_trial;
            loss = loss_trial;
            r_next = -grad;
            lambda_bar = 0.0;
            success = true;
            out.accepted_losses.push_back(loss);
            if (loss < best_loss) {
                best_loss = loss;
                best_w = w;
            }
            if (k % static_cast<int>(dim) == 0) {
                p = r_next;  // periodic restart along steepest descent
            } else {
                const double beta = (r_next.squaredNorm() - r_next.dot(r)) / mu;
                p = r_next + beta * p;
            }
            r = r_next;
            if (comparison >= 0.75) lambda *= 0.25;
        } else {
            lambda_bar = lambda;
            success = false;
        }

        if (comparison < 0.25) lambda += delta * (1.0 - comparison) / p_norm2;
        if (!std::isfinite(lambda) || lambda > 1e100) break;

        out.epochs = k;

        // early stop: no meaningful improvement for `patience` epochs
        if (stall_reference - best_loss < opts.min_improvement) {
            if (++stall >= opts.patience) break;
        } else {
            stall = 0;
            stall_reference = best_loss;
        }
        if (r.squaredNorm() == 0.0) break;
    }

    out.final_loss = best_loss;
    out.weights = unflatten(arch, best_w);
    return out;
}

Evaluation evaluate(const Architecture& arch, const WeightSet& w,
                    const Eigen::MatrixXd& inputs, const Eigen::VectorXi& labels) {
    if (inputs.rows() == 0) throw std::invalid_argument("evaluate: empty dataset");
    const Eigen::VectorXd probs = forward(arch, w, inputs);
    Evaluation ev;
    for (Eigen::Index i = 0; i < probs.size(); ++i) {
        const int pred = probs[i] >= 0.5 ? 1 : 0;
        if (pred == 1 && labels[i] == 1) ++ev.confusion.tp;
        else if (pred == 0 && labels[i] == 0) ++ev.confusion.tn;
        else if (pred == 1) ++ev.confusion.fp;
        else ++ev.confusion.fn;
    }
    ev.error_rate = 1.0 - ev.confusion.accuracy();
    return ev;
}

void write_weights_csv(const Architecture& arch, const WeightSet& w, const std::string& path) {
    if (flatten(w).size() != static_cast<Eigen::Index>(arch.weight_count()))
        throw std::invalid_argument("weight set does not match the architecture");
    std::ofstream out(path);
    if (!out) throw DataError("cannot write '" + path + "'");
    out << "layer,row,col,value\n";
    char buf[64];
    for (std::size_t l = 0; l < w.weights.size(); ++l) {
        for (Eigen::Index i = 0; i < w.weights[l].rows(); ++i)
            for (Eigen::Index j = 0; j < w.weights[l].cols(); ++j) {
                std::snprintf(buf, sizeof buf, "%.17g", w.weights[l](i, j));
                out << l << "," << i << "," << j << "," << buf << "\n";
            }
        for (Eigen::Index i = 0; i < w.biases[l].size(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", w.biases[l][i]);
            out << l << "," << i << ",bias," << buf << "\n";
        }
    }
}

}  // namespace enas
