// Experiment driver: dataset generation, training, evaluation, the
// two-electron study, the interpolation baseline and the fidelity report.
//
// Exit codes: 0 success, 1 usage or missing input, 2 numerical failure,
// 3 acceptance failure (report only).

#include "wfsr/errors.hpp"
#include "wfsr/serialize.hpp"
#include "wfsr/targets.hpp"
#include "wfsr/twoelectron.hpp"

#include <CLI11.hpp>

#include <fcntl.h>
#include <signal.h>
#include <unistd.h>

#include <cerrno>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

namespace fs = std::filesystem;
using namespace wfsr;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;
constexpr int kExitAcceptance = 3;

/// Missing prerequisites or bad arguments discovered after parsing.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Flags {
    std::string config_file;
    std::optional<std::string> case_label;
    std::optional<std::string> ansatz;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    bool regen = false;
};

void add_common(CLI::App *cmd, Flags &f) {
    cmd->add_option("--config", f.config_file, "experiment config (JSON)")->check(CLI::ExistingFile);
    cmd->add_option("--case", f.case_label, "resolution case")->check(CLI::IsMember({"i", "ii"}));
    cmd->add_option("--ansatz", f.ansatz, "ansatz family")->check(CLI::IsMember({"1", "2", "none"}));
    cmd->add_option("--seed", f.seed, "training seed");
    cmd->add_option("--out", f.out, "output directory");
    cmd->add_flag("--regen", f.regen, "rebuild datasets even when present");
}

ExperimentConfig resolve(const Flags &f) {
    ExperimentConfig c;
    if (!f.config_file.empty()) {
        std::istringstream in(read_text_file(f.config_file));
        c = read_experiment_config(in);
    }
    if (f.case_label)
        c.case_label = *f.case_label;
    if (f.ansatz)
        c.ansatz = parse_ansatz_family(*f.ansatz);
    if (f.seed)
        c.seed = *f.seed;
    if (f.out)
        c.output_dir = *f.out;
    return c;
}

/// Single-instance guard per output directory. A lock left by a dead
/// process is taken over.
class DirectoryLock {
  public:
    explicit DirectoryLock(const fs::path &dir) : path_(dir / ".wfsr.lock") {
        fs::create_directories(dir);
        for (int attempt = 0; attempt < 2; ++attempt) {
            const int fd = ::open(path_.c_str(), O_CREAT | O_EXCL | O_WRONLY, 0644);
            if (fd >= 0) {
                const std::string pid = std::to_string(::getpid()) + "\n";
                (void)!::write(fd, pid.data(), pid.size());
                ::close(fd);
                return;
            }
            if (errno != EEXIST)
                throw UsageError("cannot create lock " + path_.string() + ": " + std::strerror(errno));
            if (!stale())
                throw UsageError("another wfsr process is using " + dir.string() + " (lock " +
                                 path_.string() + ")");
            fs::remove(path_);
        }
        throw UsageError("cannot acquire lock " + path_.string());
    }
    ~DirectoryLock() {
        std::error_code ec;
        fs::remove(path_, ec);
    }
    DirectoryLock(const DirectoryLock &) = delete;
    DirectoryLock &operator=(const DirectoryLock &) = delete;

  private:
    bool stale() const {
        std::ifstream in(path_);
        long pid = 0;
        if (!(in >> pid) || pid <= 0)
            return true;
        return ::kill(static_cast<pid_t>(pid), 0) != 0 && errno == ESRCH;
    }
    fs::path path_;
};

std::uint64_t fnv1a(const std::string &text) {
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    return h;
}

std::string hex(std::uint64_t v) {
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
    return buf;
}

fs::path wfset_path(const ExperimentConfig &c, const std::string &split) {
    return c.dataset_path() / (split + ".wfset");
}

fs::path model_path(const ExperimentConfig &c, AnsatzFamily family) {
    return fs::path(c.output_dir) / model_filename(c.case_config(), family);
}

std::string prefix(const ExperimentConfig &c) { return c.case_config().name(); }

WfSet require_wfset(const ExperimentConfig &c, const std::string &split) {
    const fs::path p = wfset_path(c, split);
    if (!fs::exists(p))
        throw UsageError("missing " + p.string() + "; run `wfsr gen-data --case " + c.case_label +
                         "` first");
    WfSet set = load_wfset(p);
    if (set.samples.empty())
        throw UsageError(p.string() + " contains no samples; rerun `wfsr gen-data --regen`");
    return set;
}

std::optional<Model> maybe_model(const ExperimentConfig &c, AnsatzFamily family) {
    const fs::path p = model_path(c, family);
    if (!fs::exists(p))
        return std::nullopt;
    Model m = load_model(p);
    if (m.case_label != c.case_config().label)
        throw UsageError(p.string() + " was trained for a different case");
    return m;
}

template <class Fn> std::string to_text(Fn &&fn) {
    std::ostringstream out;
    fn(out);
    return out.str();
}

int cmd_gen_data(const ExperimentConfig &c, bool regen) {
    const CaseConfig cfg = c.case_config();
    const DatasetOptions opts{c.scf};
    for (const std::string split : {"training", "validation"}) {
        const fs::path p = wfset_path(c, split);
        if (!regen && fs::exists(p)) {
            const std::string text = read_text_file(p);
            std::istringstream in(text);
            const WfSet set = read_wfset(in);
            std::cout << split << " samples: " << set.samples.size() << " (up to date, checksum "
                      << hex(fnv1a(text)) << ")\n";
            continue;
        }
        WfSet set{cfg, split,
                  split == "training" ? build_training_set(cfg, opts)
                                      : build_validation_set(cfg, c.h2h2_bonds, opts)};
        const std::string text = to_text([&](std::ostream &o) { write_wfset(o, set); });
        write_text_file(p, text);
        std::cout << split << " samples: " << set.samples.size() << " (written " << p.string()
                  << ", checksum " << hex(fnv1a(text)) << ")\n";
    }
    return kExitOk;
}

int cmd_train(const ExperimentConfig &c) {
    if (c.ansatz == AnsatzFamily::None)
        throw UsageError("--ansatz none has no parameters to train");
    const CaseConfig cfg = c.case_config();
    const WfSet set = require_wfset(c, "training");
    const TrainConfig tc = c.train_config();
    const TrainReport report = train(set.samples, tc, cfg);

    Model m;
    m.case_label = cfg.label;
    m.ansatz = tc.ansatz;
    m.theta = report.final_theta;
    m.train_config = tc;
    m.average_fidelity = report.average_fidelity;
    m.epochs = report.epochs;
    m.seed_used = report.seed_used;
    save_model(model_path(c, c.ansatz), m);

    const fs::path log =
        fs::path(c.output_dir) / (prefix(c) + "_" + to_string(c.ansatz) + ".loss.csv");
    write_text_file(log, to_text([&](std::ostream &o) {
                        o << "epoch,loss\n";
                        for (std::size_t i = 0; i < report.loss_history.size(); ++i)
                            o << i + 1 << ',' << format_real(report.loss_history[i]) << '\n';
                    }));
    std::cout << "model: " << model_path(c, c.ansatz).string() << '\n'
              << "parameters: " << m.theta.size() << '\n'
              << "epochs: " << report.epochs << " (seed " << report.seed_used << ")\n"
              << "average fidelity: " << format_real(report.average_fidelity) << '\n';
    return kExitOk;
}

void write_eval_tables(const ExperimentConfig &c, const std::string &split,
                       std::span<const EvaluationRow> rows) {
    const fs::path dir(c.output_dir);
    const std::string stem = prefix(c) + "_" + split;
    write_text_file(dir / (stem + "_samples.csv"),
                    to_text([&](std::ostream &o) { write_evaluation_csv(o, rows); }));
    const auto species = group_averages(rows, GroupBy::Species);
    write_text_file(dir / (stem + "_species.csv"),
                    to_text([&](std::ostream &o) { write_group_csv(o, species); }));
    const auto orbitals = group_averages(rows, GroupBy::SpeciesOrbital);
    write_text_file(dir / (stem + "_orbitals.csv"),
                    to_text([&](std::ostream &o) { write_group_csv(o, orbitals); }));
}

void print_average(const std::string &split, const GroupAverage &g) {
    std::cout << split << " (" << g.count << " samples): noansatz " << format_real(g.f_noansatz)
              << ", interp " << format_real(g.f_interp) << ", ansatz1 " << format_real(g.f_ansatz1)
              << ", ansatz2 " << format_real(g.f_ansatz2) << '\n';
}

int cmd_eval(const ExperimentConfig &c) {
    const CaseConfig cfg = c.case_config();
    const auto a1 = maybe_model(c, AnsatzFamily::Ansatz1);
    const auto a2 = maybe_model(c, AnsatzFamily::Ansatz2);
    const WfSet training = require_wfset(c, "training");
    for (const auto *split : {"training", "validation"}) {
        const fs::path p = wfset_path(c, split);
        if (std::string(split) == "validation" && !fs::exists(p))
            continue;
        const WfSet set = std::string(split) == "training" ? training : load_wfset(p);
        const auto rows = evaluate(set.samples, cfg, a1 ? &*a1 : nullptr, a2 ? &*a2 : nullptr);
        write_eval_tables(c, split, rows);
        print_average(split, group_averages(rows, GroupBy::All).front());
    }
    return kExitOk;
}

int cmd_interp_baseline(const ExperimentConfig &c) {
    const CaseConfig cfg = c.case_config();
    const WfSet set = require_wfset(c, "training");
    const auto rows = evaluate(set.samples, cfg);
    const auto all = group_averages(rows, GroupBy::All);
    auto groups = group_averages(rows, GroupBy::Species);
    groups.insert(groups.begin(), all.front());
    write_text_file(fs::path(c.output_dir) / (prefix(c) + "_baselines.csv"),
                    to_text([&](std::ostream &o) { write_group_csv(o, groups); }));
    std::cout << "noansatz average fidelity: " << format_real(all.front().f_noansatz) << '\n'
              << "interpolation average fidelity: " << format_real(all.front().f_interp) << '\n';
    return kExitOk;
}

int cmd_two_electron(const ExperimentConfig &c) {
    const CaseConfig cfg = c.case_config();
    const auto a1 = maybe_model(c, AnsatzFamily::Ansatz1);
    const auto a2 = maybe_model(c, AnsatzFamily::Ansatz2);
    const auto rows =
        two_electron_study(cfg, c.two_electron_bonds, a1 ? &*a1 : nullptr, a2 ? &*a2 : nullptr);
    const fs::path p = fs::path(c.output_dir) / (prefix(c) + "_two_electron.csv");
    write_text_file(p, to_text([&](std::ostream &o) { write_two_electron_csv(o, rows); }));
    std::cout << "R symmetry f_noansatz f_ansatz2 dE_noansatz dE_ansatz2\n";
    for (const auto &r : rows)
        std::cout << format_real(r.bond_length) << ' ' << to_string(r.symmetry) << ' '
                  << format_real(r.f_noansatz) << ' ' << format_real(r.f_ansatz2) << ' '
                  << format_real(r.e_noansatz - r.e_hr) << ' ' << format_real(r.e_ansatz2 - r.e_hr)
                  << '\n';
    std::cout << "written " << p.string() << '\n';
    return kExitOk;
}

int cmd_report(const ExperimentConfig &base) {
    std::ostringstream out;
    bool all_pass = true;
    bool any_case = false;
    char line[160];
    std::snprintf(line, sizeof line, "%-5s %-9s %-14s %-16s %s\n", "case", "method", "fidelity",
                  "target", "status");
    out << line;
    for (const std::string label : {"i", "ii"}) {
        // An explicit dataset directory belongs to the configured case only.
        if (!base.dataset_dir.empty() && label != base.case_label)
            continue;
        ExperimentConfig c = base;
        c.case_label = label;
        if (!fs::exists(wfset_path(c, "training")))
            continue;
        any_case = true;
        const CaseConfig cfg = c.case_config();
        const auto t = targets::for_case(cfg.label);
        const auto a1 = maybe_model(c, AnsatzFamily::Ansatz1);
        const auto a2 = maybe_model(c, AnsatzFamily::Ansatz2);
        const WfSet set = require_wfset(c, "training");
        const auto avg = group_averages(evaluate(set.samples, cfg, a1 ? &*a1 : nullptr,
                                                 a2 ? &*a2 : nullptr),
                                        GroupBy::All)
                             .front();
        const auto row = [&](const char *method, double value, const std::string &target, bool ok) {
            all_pass = all_pass && ok;
            std::snprintf(line, sizeof line, "%-5s %-9s %-14s %-16s %s\n", label.c_str(), method,
                          std::isnan(value) ? "missing" : format_real(value).c_str(),
                          target.c_str(), ok ? "PASS" : "FAIL");
            out << line;
        };
        const auto band = [](double v, double ref) {
            return std::abs(v - ref) <= targets::kBaselineTolerance;
        };
        const std::string tol = "+-" + format_real(targets::kBaselineTolerance);
        row("noansatz", avg.f_noansatz, format_real(t.noansatz) + tol, band(avg.f_noansatz, t.noansatz));
        row("interp", avg.f_interp, format_real(t.interp) + tol, band(avg.f_interp, t.interp));
        row("ansatz1", avg.f_ansatz1, ">=" + format_real(t.ansatz1_min),
            avg.f_ansatz1 >= t.ansatz1_min);
        row("ansatz2", avg.f_ansatz2, ">=" + format_real(t.ansatz2_min),
            avg.f_ansatz2 >= t.ansatz2_min);
    }
    if (!any_case)
        throw UsageError("no training datasets under " + base.output_dir +
                         "; run `wfsr gen-data` first");
    out << (all_pass ? "overall: PASS\n" : "overall: FAIL\n");
    write_text_file(fs::path(base.output_dir) / "report.txt", out.str());
    std::cout << out.str();
    return all_pass ? kExitOk : kExitAcceptance;
}

} // namespace

int main(int argc, char **argv) {
    CLI::App app{"Quantum-circuit super-resolution of plane-wave molecular orbitals"};
    app.require_subcommand(1);
    Flags flags;
    struct Command {
        const char *name;
        const char *help;
        int (*run)(const ExperimentConfig &, const Flags &);
    };
    const Command commands[] = {
        {"gen-data", "generate training and validation datasets",
         [](const ExperimentConfig &c, const Flags &f) { return cmd_gen_data(c, f.regen); }},
        {"train", "train one ansatz on the training set",
         [](const ExperimentConfig &c, const Flags &) { return cmd_train(c); }},
        {"eval", "evaluate baselines and trained models",
         [](const ExperimentConfig &c, const Flags &) { return cmd_eval(c); }},
        {"two-electron", "H2 two-electron enhancement study",
         [](const ExperimentConfig &c, const Flags &) { return cmd_two_electron(c); }},
        {"interp-baseline", "NoAnsatz and linear-interpolation baselines",
         [](const ExperimentConfig &c, const Flags &) { return cmd_interp_baseline(c); }},
        {"report", "training-set fidelity matrix with pass/fail",
         [](const ExperimentConfig &c, const Flags &) { return cmd_report(c); }},
    };
    std::vector<std::pair<CLI::App *, const Command *>> subs;
    for (const auto &cmd : commands) {
        CLI::App *sub = app.add_subcommand(cmd.name, cmd.help);
        add_common(sub, flags);
        subs.emplace_back(sub, &cmd);
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp &e) {
        return app.exit(e);
    } catch (const CLI::ParseError &e) {
        (void)app.exit(e);
        return kExitUsage;
    }

    try {
        const ExperimentConfig config = resolve(flags);
        for (const auto &[sub, cmd] : subs) {
            if (!sub->parsed())
                continue;
            const DirectoryLock lock(config.output_dir);
            return cmd->run(config, flags);
        }
    } catch (const NumericalError &e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return kExitNumerical;
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << '\n';
        return kExitUsage;
    }
    return kExitUsage;
}
