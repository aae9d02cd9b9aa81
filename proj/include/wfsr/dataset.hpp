#pragma once
/**
 * @file
 * LR/HR orbital pair datasets: species tables, SCF-driven generation, phase
 * alignment and orbital-pair augmentation.
 */

#include "wfsr/circuits.hpp"
#include "wfsr/pwbasis.hpp"
#include "wfsr/scf.hpp"

#include <optional>
#include <string>
#include <vector>

namespace wfsr {

enum class CaseLabel { I, II };

struct CaseConfig {
    CaseLabel label = CaseLabel::I;
    double length = 30.0;
    int n_pw_lr = 7;
    int n_pw_hr = 15;
    int n_lr = 3;
    int n_hr = 4;

    /// L = 30, N_pw 7 -> 15, 3 -> 4 qubits.
    static CaseConfig case_i();
    /// L = 40, N_pw 15 -> 31, 4 -> 5 qubits.
    static CaseConfig case_ii();
    static CaseConfig from_label(CaseLabel label);
    /// Accepts "i", "ii", "case_i", "case_ii".
    static CaseConfig parse(const std::string &s);

    [[nodiscard]] std::string name() const { return label == CaseLabel::I ? "case_i" : "case_ii"; }
    [[nodiscard]] std::string short_name() const { return label == CaseLabel::I ? "i" : "ii"; }
    [[nodiscard]] PlaneWaveBasis basis_lr() const { return {length, n_pw_lr}; }
    [[nodiscard]] PlaneWaveBasis basis_hr() const { return {length, n_pw_hr}; }
};

/// Spin channel of a sample; RHF orbitals are stored as Restricted.
enum class SpinChannel { Up, Down, Restricted };
[[nodiscard]] std::string to_string(SpinChannel s);
[[nodiscard]] SpinChannel parse_spin_channel(const std::string &s);

struct Sample {
    std::string id;
    std::string species;
    double bond_length = 0.0;
    Geometry geometry;
    SpinChannel spin = SpinChannel::Restricted;
    /// One orbital index, or two for a same-spin pair (psi_1 + psi_2)/sqrt(2).
    std::vector<int> orbitals;
    CVector c_lr;
    CVector c_hr;
    SampleData data;
    bool phase_fallback = false;

    [[nodiscard]] bool is_pair() const { return orbitals.size() == 2; }
};

/// One row of the species tables.
struct SpeciesSpec {
    std::string name;
    int n_atoms = 0;
    Occupation occupation;
    std::vector<double> bond_lengths;
    /// H2-H2: two dimers of this bond length, bond_lengths are the gaps.
    std::optional<double> dimer_bond;
    /// Append the pair of the two lowest same-spin orbitals per geometry.
    bool add_pair = false;

    [[nodiscard]] Geometry geometry(double r) const;
};

/// Grid a, a + step, ..., b (inclusive).
[[nodiscard]] std::vector<double> bond_grid(double first, double last, double step = 0.0625);

[[nodiscard]] std::vector<SpeciesSpec> training_species();
/// `h2h2_bonds` are the intra-dimer bond lengths R' of the H2-H2 entries.
[[nodiscard]] std::vector<SpeciesSpec> validation_species(const std::vector<double> &h2h2_bonds);

struct DatasetOptions {
    ScfOptions scf;
    /// Build-time retries: smaller mixing, then DIIS.
    bool retry_on_failure = true;
};

/// Generates all samples of the given species. Geometries run in parallel;
/// output order is (species, R, spin, orbital) regardless of thread count.
/// @throws NonConvergence naming the failing species and bond length.
[[nodiscard]] std::vector<Sample> build_samples(const CaseConfig &config,
                                                const std::vector<SpeciesSpec> &species,
                                                const DatasetOptions &options = {});

[[nodiscard]] std::vector<Sample> build_training_set(const CaseConfig &config,
                                                     const DatasetOptions &options = {});
[[nodiscard]] std::vector<Sample>
build_validation_set(const CaseConfig &config, const std::vector<double> &h2h2_bonds = {0.75, 1.5},
                     const DatasetOptions &options = {});

/// Anchors both members of every sample (j = +1 coefficient real positive)
/// and records anchor fallbacks in Sample::phase_fallback. Idempotent.
void align_pair_phases(std::vector<Sample> &samples);

/// Zero-pads LR coefficients onto the HR momentum grid.
[[nodiscard]] CVector zero_pad(const CVector &c_lr, int n_pw_hr);

} // namespace wfsr
