#pragma once
/**
 * @file
 * Structured-text I/O: `.wfset` datasets, `.model` files, experiment
 * configs (all JSON) and CSV result tables. Floating-point values are
 * written with 12 significant digits.
 *
 * `.wfset` schema
 *   { "format": "wfset", "version": 1, "case": "i", "split": "training",
 *     "L": 30, "n_pw_lr": 7, "n_pw_hr": 15, "n_lr": 3, "n_hr": 4,
 *     "samples": [ { "id", "species", "R", "spin", "orbitals": [mu...],
 *                    "geometry": [[Z, d]...], "phase_fallback",
 *                    "c_lr": [[re, im]...], "c_hr": [[re, im]...] } ] }
 */

#include "wfsr/dataset.hpp"
#include "wfsr/trainer.hpp"
#include "wfsr/twoelectron.hpp"

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace wfsr {

inline constexpr int kFormatVersion = 1;

/// Formats with "%.12g"; NaN becomes "nan".
[[nodiscard]] std::string format_real(double x);

struct WfSet {
    CaseConfig config;
    std::string split;
    std::vector<Sample> samples;
};

void write_wfset(std::ostream &out, const WfSet &set);
/// @throws std::runtime_error on a malformed file or version mismatch.
[[nodiscard]] WfSet read_wfset(std::istream &in);
void save_wfset(const std::filesystem::path &path, const WfSet &set);
[[nodiscard]] WfSet load_wfset(const std::filesystem::path &path);

void write_model(std::ostream &out, const Model &model);
[[nodiscard]] Model read_model(std::istream &in);
void save_model(const std::filesystem::path &path, const Model &model);
[[nodiscard]] Model load_model(const std::filesystem::path &path);
/// "<case>_<ansatz>.model", e.g. "case_i_ansatz2.model".
[[nodiscard]] std::string model_filename(const CaseConfig &config, AnsatzFamily family);

struct ExperimentConfig {
    std::string case_label = "i";
    AnsatzFamily ansatz = AnsatzFamily::Ansatz2;
    std::uint64_t seed = 1234;
    std::string output_dir = "out";
    /// Dataset directory; empty means "<output_dir>/<case>".
    std::string dataset_dir;
    std::vector<double> h2h2_bonds{0.75, 1.5};
    std::vector<double> two_electron_bonds{1.0, 2.0, 3.0, 4.0, 5.0, 6.0};
    /// Trainer overrides; unset fields keep the per-ansatz defaults.
    std::optional<int> max_epochs;
    std::optional<int> restarts;
    std::optional<double> learning_rate;
    ScfOptions scf;

    [[nodiscard]] CaseConfig case_config() const { return CaseConfig::parse(case_label); }
    [[nodiscard]] std::filesystem::path dataset_path() const;
    [[nodiscard]] TrainConfig train_config() const;
};

void write_experiment_config(std::ostream &out, const ExperimentConfig &config);
/// Missing keys keep their defaults. @throws std::runtime_error on bad values.
[[nodiscard]] ExperimentConfig read_experiment_config(std::istream &in);

void write_evaluation_csv(std::ostream &out, std::span<const EvaluationRow> rows);
void write_group_csv(std::ostream &out, std::span<const GroupAverage> groups);
void write_two_electron_csv(std::ostream &out, std::span<const TwoElectronRow> rows);

/// Writes `text` to `path` atomically (temporary file then rename).
void write_text_file(const std::filesystem::path &path, const std::string &text);
[[nodiscard]] std::string read_text_file(const std::filesystem::path &path);

} // namespace wfsr
