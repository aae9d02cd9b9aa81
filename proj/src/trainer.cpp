#include "wfsr/trainer.hpp"

#include "wfsr/errors.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <random>
#include <stdexcept>

namespace wfsr {

Statevector prepare_input(const Sample &sample, const CaseConfig &config) {
    const Statevector lr = encode_amplitudes(
        std::span<const cplx>(sample.c_lr.data(), static_cast<std::size_t>(sample.c_lr.size())),
        config.n_lr);
    Statevector hr = u_init(lr);
    u_shift(hr, sample.data.center_of_mass, config.length);
    return hr;
}

Statevector encode_target(const Sample &sample, const CaseConfig &config) {
    return encode_amplitudes(
        std::span<const cplx>(sample.c_hr.data(), static_cast<std::size_t>(sample.c_hr.size())),
        config.n_hr);
}

Statevector predict(const Sample &sample, std::span<const double> theta, const AnsatzConfig &ansatz,
                    const CaseConfig &config) {
    Statevector state = prepare_input(sample, config);
    build_ansatz_circuit(ansatz, &sample.data).apply(state, theta);
    return state;
}

std::vector<PreparedSample> prepare_samples(std::span<const Sample> samples,
                                            const AnsatzConfig &ansatz, const CaseConfig &config) {
    if (ansatz.family != AnsatzFamily::None && ansatz.n_qubits != config.n_hr)
        throw DimensionMismatch("ansatz qubit count does not match the HR register");
    std::vector<PreparedSample> out;
    out.reserve(samples.size());
    for (const auto &s : samples)
        out.push_back({prepare_input(s, config), encode_target(s, config),
                       build_ansatz_circuit(ansatz, &s.data)});
    return out;
}

double sample_fidelity(const PreparedSample &sample, std::span<const double> theta,
                       std::span<double> grad) {
    const Circuit &circuit = sample.circuit;
    Statevector psi = sample.input;
    circuit.apply(psi, theta);
    const cplx overlap = inner_product(sample.target, psi);
    if (grad.empty())
        return std::norm(overlap);
    if (grad.size() != circuit.parameter_count())
        throw DimensionMismatch("gradient buffer length does not match circuit");

    Statevector lambda = sample.target;
    Statevector mu = std::move(psi);
    Statevector scratch = mu;
    const auto &ops = circuit.ops();
    for (auto it = ops.rbegin(); it != ops.rend(); ++it) {
        if (it->param >= 0) {
            std::copy(mu.amplitudes().begin(), mu.amplitudes().end(),
                      scratch.amplitudes().begin());
            circuit.apply_generator(scratch, *it, 0);
            const cplx d_overlap = cplx{0.0, -1.0} * inner_product(lambda, scratch);
            grad[static_cast<std::size_t>(it->param)] = 2.0 * (std::conj(overlap) * d_overlap).real();
        }
        circuit.apply_op(mu, *it, theta, 0, true);
        circuit.apply_op(lambda, *it, theta, 0, true);
    }
    return std::norm(overlap);
}

namespace {

/// Per-sample buffers summed in sample order.
CostGradient reduce(std::vector<double> fids, const std::vector<double> &grads,
                    std::size_t n_params, bool with_gradient) {
    CostGradient out;
    const std::size_t n = fids.size();
    double acc = 0.0;
    for (double f : fids)
        acc += f;
    out.loss = -acc / static_cast<double>(n);
    if (with_gradient) {
        out.gradient.assign(n_params, 0.0);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t p = 0; p < n_params; ++p)
                out.gradient[p] += grads[i * n_params + p];
        for (auto &g : out.gradient)
            g = -g / static_cast<double>(n);
    }
    out.fidelities = std::move(fids);
    return out;
}

void check_nonempty(std::span<const PreparedSample> samples) {
    if (samples.empty())
        throw std::invalid_argument("cost: empty dataset");
}

} // namespace

CostGradient cost_and_gradient(std::span<const PreparedSample> samples,
                               std::span<const double> theta, bool with_gradient) {
    check_nonempty(samples);
    const std::size_t n = samples.size();
    const std::size_t n_params = theta.size();
    std::vector<double> fids(n);
    std::vector<double> grads(with_gradient ? n * n_params : 0);
    const auto n_signed = static_cast<long>(n);
#pragma omp parallel for schedule(static)
    for (long i = 0; i < n_signed; ++i) {
        const auto k = static_cast<std::size_t>(i);
        std::span<double> g = with_gradient ? std::span<double>(grads).subspan(k * n_params, n_params)
                                            : std::span<double>{};
        fids[k] = sample_fidelity(samples[k], theta, g);
    }
    return reduce(std::move(fids), grads, n_params, with_gradient);
}

namespace serial {

CostGradient cost_and_gradient(std::span<const PreparedSample> samples,
                               std::span<const double> theta, bool with_gradient) {
    check_nonempty(samples);
    const std::size_t n = samples.size();
    const std::size_t n_params = theta.size();
    std::vector<double> fids(n);
    std::vector<double> grads(with_gradient ? n * n_params : 0);
    for (std::size_t k = 0; k < n; ++k) {
        std::span<double> g = with_gradient ? std::span<double>(grads).subspan(k * n_params, n_params)
                                            : std::span<double>{};
        fids[k] = sample_fidelity(samples[k], theta, g);
    }
    return reduce(std::move(fids), grads, n_params, with_gradient);
}

} // namespace serial

double cost(std::span<const Sample> samples, std::span<const double> theta,
            const AnsatzConfig &ansatz, const CaseConfig &config) {
    if (samples.empty())
        throw std::invalid_argument("cost: empty dataset");
    const auto prepared = prepare_samples(samples, ansatz, config);
    return cost_and_gradient(prepared, theta, false).loss;
}

std::vector<double> gradient(std::span<const Sample> samples, std::span<const double> theta,
                             const AnsatzConfig &ansatz, const CaseConfig &config,
                             GradientMethod method, double step) {
    if (samples.empty())
        throw std::invalid_argument("gradient: empty dataset");
    const auto prepared = prepare_samples(samples, ansatz, config);
    if (method == GradientMethod::Adjoint)
        return cost_and_gradient(prepared, theta, true).gradient;

    std::vector<double> shifted(theta.begin(), theta.end());
    std::vector<double> grad(theta.size());
    for (std::size_t p = 0; p < theta.size(); ++p) {
        shifted[p] = theta[p] + step;
        const double up = cost_and_gradient(prepared, shifted, false).loss;
        shifted[p] = theta[p] - step;
        const double down = cost_and_gradient(prepared, shifted, false).loss;
        shifted[p] = theta[p];
        grad[p] = (up - down) / (2.0 * step);
    }
    return grad;
}

Adam::Adam(std::size_t n_params, AdamOptions options)
    : opt_(options), m_(n_params, 0.0), v_(n_params, 0.0) {
    if (!(options.learning_rate > 0.0))
        throw std::invalid_argument("Adam: learning rate must be positive");
}

void Adam::step(std::span<double> theta, std::span<const double> grad) {
    if (theta.size() != m_.size() || grad.size() != m_.size())
        throw DimensionMismatch("Adam: parameter length mismatch");
    ++t_;
    const double bc1 = 1.0 - std::pow(opt_.beta1, static_cast<double>(t_));
    const double bc2 = 1.0 - std::pow(opt_.beta2, static_cast<double>(t_));
    for (std::size_t i = 0; i < m_.size(); ++i) {
        m_[i] = opt_.beta1 * m_[i] + (1.0 - opt_.beta1) * grad[i];
        v_[i] = opt_.beta2 * v_[i] + (1.0 - opt_.beta2) * grad[i] * grad[i];
        const double m_hat = m_[i] / bc1;
        const double v_hat = v_[i] / bc2;
        theta[i] -= opt_.learning_rate * m_hat / (std::sqrt(v_hat) + opt_.epsilon);
    }
}

TrainConfig TrainConfig::defaults(AnsatzFamily family, int n_qubits) {
    TrainConfig c;
    c.ansatz = AnsatzConfig::defaults(family, n_qubits);
    if (family == AnsatzFamily::Ansatz1) {
        c.init = InitScheme::UniformRandom;
        c.restarts = 3;
    }
    return c;
}

namespace {

std::vector<double> initial_theta(const TrainConfig &config, std::uint64_t seed) {
    std::vector<double> theta(config.ansatz.parameter_count(), 0.0);
    if (config.init == InitScheme::UniformRandom) {
        std::mt19937_64 rng(seed);
        // Explicit 53-bit mapping keeps the draw identical across standard libraries.
        for (auto &t : theta) {
            const double u = static_cast<double>(rng() >> 11) * 0x1.0p-53;
            t = config.init_scale * (2.0 * u - 1.0);
        }
    }
    return theta;
}

bool all_finite(std::span<const double> v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

} // namespace

TrainReport train(std::span<const Sample> samples, const TrainConfig &config,
                  const CaseConfig &case_config) {
    if (config.max_epochs < 1)
        throw std::invalid_argument("train: max_epochs must be >= 1");
    if (samples.empty())
        throw std::invalid_argument("train: empty dataset");
    const auto prepared = prepare_samples(samples, config.ansatz, case_config);
    const std::size_t n_params = config.ansatz.parameter_count();

    TrainReport best;
    bool have_best = false;
    const int restarts = config.init == InitScheme::Zeros ? 1 : std::max(1, config.restarts);
    for (int r = 0; r < restarts; ++r) {
        const std::uint64_t seed = config.seed + static_cast<std::uint64_t>(r);
        std::vector<double> theta = initial_theta(config, seed);
        Adam adam(n_params, config.adam);
        TrainReport run;
        run.seed_used = seed;
        run.best_loss = std::numeric_limits<double>::infinity();

        for (int epoch = 1; epoch <= config.max_epochs; ++epoch) {
            const auto cg = cost_and_gradient(prepared, theta, n_params > 0);
            if (!std::isfinite(cg.loss) || !all_finite(cg.gradient))
                throw NonFiniteError("non-finite loss or gradient at epoch " +
                                     std::to_string(epoch) + " (seed " + std::to_string(seed) + ")");
            run.loss_history.push_back(cg.loss);
            run.epochs = epoch;
            if (cg.loss < run.best_loss) {
                run.best_loss = cg.loss;
                run.final_theta = theta;
            }
            if (n_params == 0)
                break;
            const auto h = run.loss_history.size();
            const auto w = static_cast<std::size_t>(config.plateau_window);
            if (h > w) {
                const double prev = run.loss_history[h - 1 - w];
                if (std::abs(prev - cg.loss) <= config.plateau_tol * std::abs(cg.loss))
                    break;
            }
            if (config.gradient_method == GradientMethod::CentralDifference) {
                const auto g = gradient(samples, theta, config.ansatz, case_config,
                                        GradientMethod::CentralDifference);
                adam.step(theta, g);
            } else {
                adam.step(theta, cg.gradient);
            }
        }
        if (!have_best || run.best_loss < best.best_loss) {
            best = std::move(run);
            have_best = true;
        }
    }

    const auto final_eval = cost_and_gradient(prepared, best.final_theta, false);
    best.per_sample_fidelities = final_eval.fidelities;
    best.average_fidelity = -final_eval.loss;
    best.best_loss = final_eval.loss;
    return best;
}

Model Model::none(const CaseConfig &config) {
    Model m;
    m.case_label = config.label;
    m.ansatz = AnsatzConfig::defaults(AnsatzFamily::None, config.n_hr);
    return m;
}

std::vector<EvaluationRow> evaluate(std::span<const Sample> samples, const CaseConfig &config,
                                    const Model *ansatz1, const Model *ansatz2) {
    for (const Model *m : {ansatz1, ansatz2})
        if (m && m->case_label != config.label)
            throw std::invalid_argument("evaluate: model was trained for a different case");

    std::vector<EvaluationRow> rows(samples.size());
    const auto n = static_cast<long>(samples.size());
#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n; ++i) {
        const auto k = static_cast<std::size_t>(i);
        const Sample &s = samples[k];
        EvaluationRow &row = rows[k];
        row.species = s.species;
        row.bond_length = s.bond_length;
        row.spin = s.spin;
        row.orbital = s.is_pair() ? std::to_string(s.orbitals[0]) + "+" + std::to_string(s.orbitals[1])
                                  : std::to_string(s.orbitals.at(0));
        const Statevector target = encode_target(s, config);
        row.f_noansatz = fidelity(target, prepare_input(s, config));
        row.f_interp = fidelity(
            target, interpolate_linear(std::span<const cplx>(s.c_lr.data(),
                                                             static_cast<std::size_t>(s.c_lr.size())),
                                       config.n_lr));
        if (ansatz1)
            row.f_ansatz1 = fidelity(target, predict(s, ansatz1->theta, ansatz1->ansatz, config));
        if (ansatz2)
            row.f_ansatz2 = fidelity(target, predict(s, ansatz2->theta, ansatz2->ansatz, config));
    }
    return rows;
}

std::vector<GroupAverage> group_averages(std::span<const EvaluationRow> rows, GroupBy by) {
    std::vector<GroupAverage> groups;
    std::map<std::string, std::size_t> index;
    for (const auto &r : rows) {
        std::string key = "all";
        if (by == GroupBy::Species)
            key = r.species;
        else if (by == GroupBy::SpeciesOrbital)
            key = r.species + ":" + to_string(r.spin) + ":" + r.orbital;
        auto [it, inserted] = index.try_emplace(key, groups.size());
        if (inserted) {
            GroupAverage g;
            g.group = key;
            g.f_ansatz1 = 0.0;
            g.f_ansatz2 = 0.0;
            groups.push_back(g);
        }
        auto &g = groups[it->second];
        ++g.count;
        g.f_noansatz += r.f_noansatz;
        g.f_interp += r.f_interp;
        g.f_ansatz1 += r.f_ansatz1;
        g.f_ansatz2 += r.f_ansatz2;
    }
    for (auto &g : groups) {
        const auto c = static_cast<double>(g.count);
        g.f_noansatz /= c;
        g.f_interp /= c;
        g.f_ansatz1 /= c;
        g.f_ansatz2 /= c;
    }
    return groups;
}

} // namespace wfsr
