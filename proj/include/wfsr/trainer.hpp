#pragma once
/**
 * @file
 * Fidelity cost, exact adjoint gradients, Adam training and evaluation.
 *
 * The cost is L = -(1/N) sum_i |<psi_HR^(i)| U(theta, D^(i)) U_shift U_init |0> (x) |psi_LR^(i)>|^2.
 * Per-sample work runs under OpenMP; per-sample results are reduced in
 * sample order so the outcome does not depend on the thread count.
 */

#include "wfsr/circuits.hpp"
#include "wfsr/dataset.hpp"
#include "wfsr/qsim.hpp"

#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

namespace wfsr {

/// Encode LR, attach the ancilla and shift to the centre of mass.
[[nodiscard]] Statevector prepare_input(const Sample &sample, const CaseConfig &config);
/// HR target state on n_HR qubits (Nyquist amplitude zero).
[[nodiscard]] Statevector encode_target(const Sample &sample, const CaseConfig &config);

/// @throws DimensionMismatch when theta does not match the ansatz.
[[nodiscard]] Statevector predict(const Sample &sample, std::span<const double> theta,
                                  const AnsatzConfig &ansatz, const CaseConfig &config);

/// A sample with its input, target and circuit tape built once.
struct PreparedSample {
    Statevector input;
    Statevector target;
    Circuit circuit;
};
[[nodiscard]] std::vector<PreparedSample> prepare_samples(std::span<const Sample> samples,
                                                          const AnsatzConfig &ansatz,
                                                          const CaseConfig &config);

/// Fidelity of one prepared sample; when `grad` is non-empty it receives
/// d fidelity / d theta via a single adjoint sweep.
double sample_fidelity(const PreparedSample &sample, std::span<const double> theta,
                       std::span<double> grad = {});

struct CostGradient {
    double loss = 0.0;
    std::vector<double> gradient;
    std::vector<double> fidelities;
};

/// Parallel over samples. @throws std::invalid_argument on an empty dataset.
[[nodiscard]] CostGradient cost_and_gradient(std::span<const PreparedSample> samples,
                                             std::span<const double> theta,
                                             bool with_gradient = true);

namespace serial {
/// Single-threaded reference for cost_and_gradient; bitwise identical output.
[[nodiscard]] CostGradient cost_and_gradient(std::span<const PreparedSample> samples,
                                             std::span<const double> theta,
                                             bool with_gradient = true);
} // namespace serial

[[nodiscard]] double cost(std::span<const Sample> samples, std::span<const double> theta,
                          const AnsatzConfig &ansatz, const CaseConfig &config);

enum class GradientMethod { Adjoint, CentralDifference };

[[nodiscard]] std::vector<double> gradient(std::span<const Sample> samples,
                                           std::span<const double> theta,
                                           const AnsatzConfig &ansatz, const CaseConfig &config,
                                           GradientMethod method = GradientMethod::Adjoint,
                                           double step = 1e-5);

struct AdamOptions {
    double learning_rate = 0.01;
    double beta1 = 0.9;
    double beta2 = 0.999;
    double epsilon = 1e-8;
};

class Adam {
  public:
    Adam(std::size_t n_params, AdamOptions options);
    void step(std::span<double> theta, std::span<const double> grad);
    [[nodiscard]] long steps() const { return t_; }

  private:
    AdamOptions opt_;
    std::vector<double> m_, v_;
    long t_ = 0;
};

enum class InitScheme { Zeros, UniformRandom };

struct TrainConfig {
    AnsatzConfig ansatz;
    InitScheme init = InitScheme::Zeros;
    double init_scale = 0.1;
    std::uint64_t seed = 1234;
    /// Independent restarts (seed, seed + 1, ...); the best loss wins.
    int restarts = 1;
    AdamOptions adam;
    int max_epochs = 2000;
    double plateau_tol = 1e-7;
    int plateau_window = 50;
    GradientMethod gradient_method = GradientMethod::Adjoint;

    /// Ansatz1: random [-0.1, 0.1] init, 3 restarts. Ansatz2: zeros.
    static TrainConfig defaults(AnsatzFamily family, int n_qubits);
};

struct TrainReport {
    std::vector<double> final_theta;
    std::vector<double> loss_history;
    std::vector<double> per_sample_fidelities;
    double average_fidelity = 0.0;
    double best_loss = 0.0;
    int epochs = 0;
    std::uint64_t seed_used = 0;
};

/// @throws NonFiniteError when the loss or gradient stops being finite.
[[nodiscard]] TrainReport train(std::span<const Sample> samples, const TrainConfig &config,
                                const CaseConfig &case_config);

/// Trained parameters with the context needed to apply them.
struct Model {
    CaseLabel case_label = CaseLabel::I;
    AnsatzConfig ansatz;
    std::vector<double> theta;
    TrainConfig train_config;
    double average_fidelity = 0.0;
    int epochs = 0;
    std::uint64_t seed_used = 0;

    /// Identity-ansatz model (zero parameters).
    static Model none(const CaseConfig &config);
};

inline constexpr double kMissing = std::numeric_limits<double>::quiet_NaN();

struct EvaluationRow {
    std::string species;
    double bond_length = 0.0;
    SpinChannel spin = SpinChannel::Restricted;
    std::string orbital;
    double f_noansatz = 0.0;
    double f_interp = 0.0;
    double f_ansatz1 = kMissing;
    double f_ansatz2 = kMissing;
};

/// Per-sample fidelities for the NoAnsatz and interpolation baselines plus
/// any supplied models.
[[nodiscard]] std::vector<EvaluationRow> evaluate(std::span<const Sample> samples,
                                                  const CaseConfig &config,
                                                  const Model *ansatz1 = nullptr,
                                                  const Model *ansatz2 = nullptr);

enum class GroupBy { All, Species, SpeciesOrbital };

struct GroupAverage {
    std::string group;
    std::size_t count = 0;
    double f_noansatz = 0.0;
    double f_interp = 0.0;
    double f_ansatz1 = kMissing;
    double f_ansatz2 = kMissing;
};

/// Group order follows first appearance in `rows`.
[[nodiscard]] std::vector<GroupAverage> group_averages(std::span<const EvaluationRow> rows,
                                                       GroupBy by);

} // namespace wfsr
