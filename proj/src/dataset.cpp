#include "wfsr/dataset.hpp"

#include "wfsr/errors.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <stdexcept>

namespace wfsr {

CaseConfig CaseConfig::case_i() { return {CaseLabel::I, 30.0, 7, 15, 3, 4}; }
CaseConfig CaseConfig::case_ii() { return {CaseLabel::II, 40.0, 15, 31, 4, 5}; }

CaseConfig CaseConfig::from_label(CaseLabel label) {
    return label == CaseLabel::I ? case_i() : case_ii();
}

CaseConfig CaseConfig::parse(const std::string &s) {
    if (s == "i" || s == "case_i" || s == "1")
        return case_i();
    if (s == "ii" || s == "case_ii" || s == "2")
        return case_ii();
    throw std::invalid_argument("unknown case '" + s + "' (expected i or ii)");
}

std::string to_string(SpinChannel s) {
    switch (s) {
    case SpinChannel::Up:
        return "up";
    case SpinChannel::Down:
        return "down";
    case SpinChannel::Restricted:
        return "restricted";
    }
    return "restricted";
}

SpinChannel parse_spin_channel(const std::string &s) {
    if (s == "up")
        return SpinChannel::Up;
    if (s == "down")
        return SpinChannel::Down;
    if (s == "restricted")
        return SpinChannel::Restricted;
    throw std::invalid_argument("unknown spin channel '" + s + "'");
}

Geometry SpeciesSpec::geometry(double r) const {
    if (dimer_bond)
        return Geometry::dimer_pair(r, *dimer_bond);
    return Geometry::chain(n_atoms, r);
}

std::vector<double> bond_grid(double first, double last, double step) {
    const auto n = static_cast<int>(std::llround((last - first) / step)) + 1;
    std::vector<double> r(static_cast<std::size_t>(n));
    for (int i = 0; i < n; ++i)
        r[static_cast<std::size_t>(i)] = first + i * step;
    return r;
}

std::vector<SpeciesSpec> training_species() {
    const std::vector<double> r6{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    const std::vector<double> r4{1.0, 2.0, 3.0, 4.0};
    return {
        {"H2(s)", 2, Occupation::rhf(1), r6, std::nullopt, false},
        {"H2(t)", 2, Occupation::uhf(2, 0), r6, std::nullopt, true},
        {"H3", 3, Occupation::uhf(2, 1), r4, std::nullopt, true},
        {"H4", 4, Occupation::rhf(2), r4, std::nullopt, true},
    };
}

std::vector<SpeciesSpec> validation_species(const std::vector<double> &h2h2_bonds) {
    const auto r_h2 = bond_grid(0.5, 6.0);
    const auto r_short = bond_grid(0.5, 4.0);
    const auto r_h5 = bond_grid(1.5, 3.0);
    std::vector<SpeciesSpec> out{
        {"H2(s)", 2, Occupation::rhf(1), r_h2, std::nullopt, false},
        {"H2(t)", 2, Occupation::uhf(2, 0), r_h2, std::nullopt, false},
        {"H3+(s)", 3, Occupation::rhf(1), r_short, std::nullopt, false},
        {"H3+(t)", 3, Occupation::uhf(2, 0), r_short, std::nullopt, false},
        {"H3", 3, Occupation::uhf(2, 1), r_short, std::nullopt, false},
        {"H4", 4, Occupation::rhf(2), r_short, std::nullopt, false},
    };
    for (double rp : h2h2_bonds) {
        char name[32];
        std::snprintf(name, sizeof name, "H2H2(%g)", rp);
        out.push_back({name, 4, Occupation::rhf(2), r_short, rp, false});
    }
    out.push_back({"H5+", 5, Occupation::rhf(2), r_h5, std::nullopt, false});
    out.push_back({"H5", 5, Occupation::uhf(3, 2), r_h5, std::nullopt, false});
    return out;
}

CVector zero_pad(const CVector &c_lr, int n_pw_hr) {
    const auto n_lr = static_cast<int>(c_lr.size());
    if (n_pw_hr < n_lr)
        throw DimensionMismatch("zero_pad: HR basis smaller than LR basis");
    CVector out = CVector::Zero(n_pw_hr);
    out.segment((n_pw_hr - n_lr) / 2, n_lr) = c_lr;
    return out;
}

namespace {

ScfResult robust_scf(const PlaneWaveBasis &basis, const Geometry &geom, const Occupation &occ,
                     const DatasetOptions &options) {
    try {
        return run_scf(basis, geom, occ, options.scf);
    } catch (const NumericalError &) {
        if (!options.retry_on_failure)
            throw;
    }
    ScfOptions damped = options.scf;
    damped.mixing = 0.1;
    damped.max_iter = 4 * options.scf.max_iter;
    try {
        return run_scf(basis, geom, occ, damped);
    } catch (const NumericalError &) {
    }
    ScfOptions diis = options.scf;
    diis.use_diis = true;
    diis.max_iter = 4 * options.scf.max_iter;
    return run_scf(basis, geom, occ, diis);
}

struct Job {
    const SpeciesSpec *spec;
    double r;
};

std::string format_id(const std::string &species, double r, SpinChannel spin,
                      const std::vector<int> &orbitals) {
    char buf[96];
    if (orbitals.size() == 2)
        std::snprintf(buf, sizeof buf, "%s_R%.4f_%s_%d+%d", species.c_str(), r,
                      to_string(spin).c_str(), orbitals[0], orbitals[1]);
    else
        std::snprintf(buf, sizeof buf, "%s_R%.4f_%s_%d", species.c_str(), r,
                      to_string(spin).c_str(), orbitals[0]);
    return buf;
}

std::vector<Sample> samples_for(const CaseConfig &config, const Job &job,
                                const DatasetOptions &options) {
    const SpeciesSpec &spec = *job.spec;
    const Geometry geom = spec.geometry(job.r);
    const auto lr = fix_orbital_phase(robust_scf(config.basis_lr(), geom, spec.occupation, options));
    const auto hr = fix_orbital_phase(robust_scf(config.basis_hr(), geom, spec.occupation, options));
    const SampleData data = SampleData::from_geometry(geom, config.length, config.n_hr);

    std::vector<Sample> out;
    auto emit = [&](SpinChannel channel, std::vector<int> orbitals, CVector c_lr, CVector c_hr) {
        Sample s;
        s.id = format_id(spec.name, job.r, channel, orbitals);
        s.species = spec.name;
        s.bond_length = job.r;
        s.geometry = geom;
        s.spin = channel;
        s.orbitals = std::move(orbitals);
        s.c_lr = std::move(c_lr);
        s.c_hr = std::move(c_hr);
        s.data = data;
        out.push_back(std::move(s));
    };

    const Occupation &occ = spec.occupation;
    const SpinChannel up = occ.restricted ? SpinChannel::Restricted : SpinChannel::Up;
    for (int mu = 0; mu < occ.n_up; ++mu)
        emit(up, {mu}, lr.orbital(Spin::Up, mu), hr.orbital(Spin::Up, mu));
    if (spec.add_pair && occ.n_up >= 2) {
        const double w = 1.0 / std::sqrt(2.0);
        emit(up, {0, 1}, w * (lr.orbital(Spin::Up, 0) + lr.orbital(Spin::Up, 1)),
             w * (hr.orbital(Spin::Up, 0) + hr.orbital(Spin::Up, 1)));
    }
    if (!occ.restricted)
        for (int mu = 0; mu < occ.n_down; ++mu)
            emit(SpinChannel::Down, {mu}, lr.orbital(Spin::Down, mu), hr.orbital(Spin::Down, mu));
    return out;
}

} // namespace

std::vector<Sample> build_samples(const CaseConfig &config, const std::vector<SpeciesSpec> &species,
                                  const DatasetOptions &options) {
    std::vector<Job> jobs;
    for (const auto &spec : species)
        for (double r : spec.bond_lengths)
            jobs.push_back({&spec, r});

    const auto n_jobs = static_cast<long>(jobs.size());
    std::vector<std::vector<Sample>> results(jobs.size());
    std::vector<std::string> errors(jobs.size());

#pragma omp parallel for schedule(dynamic)
    for (long i = 0; i < n_jobs; ++i) {
        const auto k = static_cast<std::size_t>(i);
        try {
            results[k] = samples_for(config, jobs[k], options);
        } catch (const std::exception &e) {
            char buf[64];
            std::snprintf(buf, sizeof buf, " R=%.4f: ", jobs[k].r);
            errors[k] = jobs[k].spec->name + buf + e.what();
        }
    }

    std::string failures;
    for (const auto &e : errors)
        if (!e.empty())
            failures += (failures.empty() ? "" : "; ") + e;
    if (!failures.empty())
        throw NonConvergence("dataset generation failed for " + failures, 0);

    std::vector<Sample> out;
    for (auto &r : results)
        for (auto &s : r)
            out.push_back(std::move(s));
    align_pair_phases(out);
    return out;
}

std::vector<Sample> build_training_set(const CaseConfig &config, const DatasetOptions &options) {
    return build_samples(config, training_species(), options);
}

std::vector<Sample> build_validation_set(const CaseConfig &config,
                                         const std::vector<double> &h2h2_bonds,
                                         const DatasetOptions &options) {
    return build_samples(config, validation_species(h2h2_bonds), options);
}

void align_pair_phases(std::vector<Sample> &samples) {
    for (auto &s : samples) {
        const auto a = fix_phase(s.c_lr);
        const auto b = fix_phase(s.c_hr);
        s.phase_fallback = a.fallback || b.fallback;
    }
}

} // namespace wfsr
