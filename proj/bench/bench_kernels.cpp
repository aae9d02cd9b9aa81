// Serial reference against the OpenMP kernels: full-batch cost and
// gradient over the 52 training samples, and the two-electron Hamiltonian
// product. Thread count follows OMP_NUM_THREADS.

#include "wfsr/trainer.hpp"
#include "wfsr/twoelectron.hpp"

#include <benchmark/benchmark.h>

#include <random>
#include <vector>

using namespace wfsr;

namespace {

struct TrainingFixture {
    CaseConfig config;
    std::vector<PreparedSample> prepared;
    std::vector<double> theta;

    explicit TrainingFixture(CaseLabel label) {
        config = label == CaseLabel::I ? CaseConfig::case_i() : CaseConfig::case_ii();
        const auto ansatz = AnsatzConfig::defaults(AnsatzFamily::Ansatz2, config.n_hr);
        prepared = prepare_samples(build_training_set(config), ansatz, config);
        std::mt19937_64 rng(7);
        std::uniform_real_distribution<double> u(-0.5, 0.5);
        theta.resize(ansatz.parameter_count());
        for (auto &t : theta)
            t = u(rng);
    }
};

const TrainingFixture &fixture(CaseLabel label) {
    static const TrainingFixture i(CaseLabel::I), ii(CaseLabel::II);
    return label == CaseLabel::I ? i : ii;
}

CaseLabel label_of(const benchmark::State &state) {
    return state.range(0) == 0 ? CaseLabel::I : CaseLabel::II;
}

void BM_CostGradientSerial(benchmark::State &state) {
    const auto &f = fixture(label_of(state));
    for (auto _ : state)
        benchmark::DoNotOptimize(serial::cost_and_gradient(f.prepared, f.theta));
}

void BM_CostGradientParallel(benchmark::State &state) {
    const auto &f = fixture(label_of(state));
    for (auto _ : state)
        benchmark::DoNotOptimize(cost_and_gradient(f.prepared, f.theta));
}

struct HamiltonianFixture {
    TwoElectronHamiltonian ham;
    std::vector<cplx> in, out;

    explicit HamiltonianFixture(int n)
        : ham(40.0, n, Geometry::chain(2, 1.5)), in(std::size_t{1} << (2 * n)), out(in.size()) {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> g;
        for (auto &a : in)
            a = {g(rng), g(rng)};
    }
};

void BM_TwoElectronApplySerial(benchmark::State &state) {
    HamiltonianFixture f(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        f.ham.apply_serial(f.in, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
}

void BM_TwoElectronApplyParallel(benchmark::State &state) {
    HamiltonianFixture f(static_cast<int>(state.range(0)));
    for (auto _ : state) {
        f.ham.apply(f.in, f.out);
        benchmark::DoNotOptimize(f.out.data());
    }
}

} // namespace

BENCHMARK(BM_CostGradientSerial)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_CostGradientParallel)->Arg(0)->Arg(1)->Unit(benchmark::kMillisecond);
BENCHMARK(BM_TwoElectronApplySerial)->Arg(4)->Arg(5)->Unit(benchmark::kMicrosecond);
BENCHMARK(BM_TwoElectronApplyParallel)->Arg(4)->Arg(5)->Unit(benchmark::kMicrosecond);

BENCHMARK_MAIN();
