#include "wfsr/serialize.hpp"

#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace wfsr {

using nlohmann::json;

std::string format_real(double x) {
    if (std::isnan(x))
        return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.12g", x);
    return buf;
}

namespace {

/// Rounds to 12 significant digits so the JSON writer emits at most 12.
double r12(double x) { return std::isfinite(x) ? std::stod(format_real(x)) : x; }

json coeffs_json(const CVector &c) {
    json arr = json::array();
    for (Eigen::Index i = 0; i < c.size(); ++i)
        arr.push_back({r12(c[i].real()), r12(c[i].imag())});
    return arr;
}

CVector coeffs_from(const json &arr, int expected, const char *what) {
    if (!arr.is_array() || static_cast<int>(arr.size()) != expected)
        throw std::runtime_error(std::string("wfset: ") + what + " has wrong length");
    CVector c(expected);
    for (int i = 0; i < expected; ++i)
        c[i] = cplx(arr[static_cast<std::size_t>(i)].at(0).get<double>(),
                    arr[static_cast<std::size_t>(i)].at(1).get<double>());
    return c;
}

json geometry_json(const Geometry &g) {
    json arr = json::array();
    for (const auto &a : g.atoms())
        arr.push_back({a.charge, r12(a.position)});
    return arr;
}

Geometry geometry_from(const json &arr) {
    std::vector<Atom> atoms;
    for (const auto &a : arr)
        atoms.push_back({a.at(0).get<int>(), a.at(1).get<double>()});
    return Geometry(std::move(atoms));
}

void check_format(const json &j, const std::string &format) {
    if (j.value("format", std::string{}) != format)
        throw std::runtime_error("expected a '" + format + "' file");
    if (j.value("version", 0) != kFormatVersion)
        throw std::runtime_error(format + ": unsupported version");
}

json parse_json(std::istream &in, const char *what) {
    try {
        return json::parse(in);
    } catch (const json::exception &e) {
        throw std::runtime_error(std::string(what) + ": " + e.what());
    }
}

std::string init_name(InitScheme s) { return s == InitScheme::Zeros ? "zeros" : "uniform"; }
InitScheme parse_init(const std::string &s) {
    if (s == "zeros")
        return InitScheme::Zeros;
    if (s == "uniform")
        return InitScheme::UniformRandom;
    throw std::runtime_error("unknown init scheme '" + s + "'");
}

json train_config_json(const TrainConfig &c) {
    return {{"init", init_name(c.init)},
            {"init_scale", r12(c.init_scale)},
            {"seed", c.seed},
            {"restarts", c.restarts},
            {"learning_rate", r12(c.adam.learning_rate)},
            {"beta1", r12(c.adam.beta1)},
            {"beta2", r12(c.adam.beta2)},
            {"epsilon", r12(c.adam.epsilon)},
            {"max_epochs", c.max_epochs},
            {"plateau_tol", r12(c.plateau_tol)},
            {"plateau_window", c.plateau_window},
            {"gradient", c.gradient_method == GradientMethod::Adjoint ? "adjoint" : "central"}};
}

TrainConfig train_config_from(const json &j, const AnsatzConfig &ansatz) {
    TrainConfig c;
    c.ansatz = ansatz;
    c.init = parse_init(j.at("init").get<std::string>());
    c.init_scale = j.at("init_scale").get<double>();
    c.seed = j.at("seed").get<std::uint64_t>();
    c.restarts = j.at("restarts").get<int>();
    c.adam.learning_rate = j.at("learning_rate").get<double>();
    c.adam.beta1 = j.at("beta1").get<double>();
    c.adam.beta2 = j.at("beta2").get<double>();
    c.adam.epsilon = j.at("epsilon").get<double>();
    c.max_epochs = j.at("max_epochs").get<int>();
    c.plateau_tol = j.at("plateau_tol").get<double>();
    c.plateau_window = j.at("plateau_window").get<int>();
    c.gradient_method = j.at("gradient").get<std::string>() == "central"
                            ? GradientMethod::CentralDifference
                            : GradientMethod::Adjoint;
    return c;
}

} // namespace

void write_wfset(std::ostream &out, const WfSet &set) {
    const CaseConfig &c = set.config;
    json j{{"format", "wfset"},
           {"version", kFormatVersion},
           {"case", c.short_name()},
           {"split", set.split},
           {"L", r12(c.length)},
           {"n_pw_lr", c.n_pw_lr},
           {"n_pw_hr", c.n_pw_hr},
           {"n_lr", c.n_lr},
           {"n_hr", c.n_hr}};
    json samples = json::array();
    for (const auto &s : set.samples) {
        samples.push_back({{"id", s.id},
                           {"species", s.species},
                           {"R", r12(s.bond_length)},
                           {"spin", to_string(s.spin)},
                           {"orbitals", s.orbitals},
                           {"geometry", geometry_json(s.geometry)},
                           {"phase_fallback", s.phase_fallback},
                           {"c_lr", coeffs_json(s.c_lr)},
                           {"c_hr", coeffs_json(s.c_hr)}});
    }
    j["samples"] = std::move(samples);
    out << j.dump(1) << '\n';
}

WfSet read_wfset(std::istream &in) {
    const json j = parse_json(in, "wfset");
    check_format(j, "wfset");
    WfSet set;
    try {
        set.config = CaseConfig::parse(j.at("case").get<std::string>());
        set.split = j.at("split").get<std::string>();
        const CaseConfig &c = set.config;
        if (j.at("n_pw_lr").get<int>() != c.n_pw_lr || j.at("n_pw_hr").get<int>() != c.n_pw_hr ||
            std::abs(j.at("L").get<double>() - c.length) > 1e-12)
            throw std::runtime_error("wfset: header does not match case " + c.short_name());
        for (const auto &js : j.at("samples")) {
            Sample s;
            s.id = js.at("id").get<std::string>();
            s.species = js.at("species").get<std::string>();
            s.bond_length = js.at("R").get<double>();
            s.spin = parse_spin_channel(js.at("spin").get<std::string>());
            s.orbitals = js.at("orbitals").get<std::vector<int>>();
            s.geometry = geometry_from(js.at("geometry"));
            s.phase_fallback = js.value("phase_fallback", false);
            s.c_lr = coeffs_from(js.at("c_lr"), c.n_pw_lr, "c_lr");
            s.c_hr = coeffs_from(js.at("c_hr"), c.n_pw_hr, "c_hr");
            s.data = SampleData::from_geometry(s.geometry, c.length, c.n_hr);
            set.samples.push_back(std::move(s));
        }
    } catch (const json::exception &e) {
        throw std::runtime_error(std::string("wfset: ") + e.what());
    }
    return set;
}

void save_wfset(const std::filesystem::path &path, const WfSet &set) {
    std::ostringstream os;
    write_wfset(os, set);
    write_text_file(path, os.str());
}

WfSet load_wfset(const std::filesystem::path &path) {
    std::istringstream is(read_text_file(path));
    return read_wfset(is);
}

void write_model(std::ostream &out, const Model &m) {
    json theta = json::array();
    for (double t : m.theta)
        theta.push_back(r12(t));
    const json j{{"format", "model"},
                 {"version", kFormatVersion},
                 {"case", CaseConfig::from_label(m.case_label).short_name()},
                 {"ansatz",
                  {{"family", to_string(m.ansatz.family)},
                   {"n_qubits", m.ansatz.n_qubits},
                   {"layers", m.ansatz.layers},
                   {"sublayers", m.ansatz.sublayers}}},
                 {"train", train_config_json(m.train_config)},
                 {"average_fidelity", r12(m.average_fidelity)},
                 {"epochs", m.epochs},
                 {"seed_used", m.seed_used},
                 {"theta", std::move(theta)}};
    out << j.dump(1) << '\n';
}

Model read_model(std::istream &in) {
    const json j = parse_json(in, "model");
    check_format(j, "model");
    Model m;
    try {
        m.case_label = CaseConfig::parse(j.at("case").get<std::string>()).label;
        const json &a = j.at("ansatz");
        m.ansatz.family = parse_ansatz_family(a.at("family").get<std::string>());
        m.ansatz.n_qubits = a.at("n_qubits").get<int>();
        m.ansatz.layers = a.at("layers").get<int>();
        m.ansatz.sublayers = a.at("sublayers").get<int>();
        m.train_config = train_config_from(j.at("train"), m.ansatz);
        m.average_fidelity = j.at("average_fidelity").get<double>();
        m.epochs = j.at("epochs").get<int>();
        m.seed_used = j.at("seed_used").get<std::uint64_t>();
        m.theta = j.at("theta").get<std::vector<double>>();
    } catch (const json::exception &e) {
        throw std::runtime_error(std::string("model: ") + e.what());
    }
    if (m.theta.size() != m.ansatz.parameter_count())
        throw std::runtime_error("model: theta length does not match the ansatz");
    return m;
}

void save_model(const std::filesystem::path &path, const Model &model) {
    std::ostringstream os;
    write_model(os, model);
    write_text_file(path, os.str());
}

Model load_model(const std::filesystem::path &path) {
    std::istringstream is(read_text_file(path));
    return read_model(is);
}

std::string model_filename(const CaseConfig &config, AnsatzFamily family) {
    return config.name() + "_" + to_string(family) + ".model";
}

std::filesystem::path ExperimentConfig::dataset_path() const {
    if (!dataset_dir.empty())
        return dataset_dir;
    return std::filesystem::path(output_dir) / case_config().name();
}

TrainConfig ExperimentConfig::train_config() const {
    TrainConfig c = TrainConfig::defaults(ansatz, case_config().n_hr);
    c.seed = seed;
    if (max_epochs)
        c.max_epochs = *max_epochs;
    if (restarts)
        c.restarts = *restarts;
    if (learning_rate)
        c.adam.learning_rate = *learning_rate;
    return c;
}

void write_experiment_config(std::ostream &out, const ExperimentConfig &c) {
    json bonds = json::array(), two = json::array();
    for (double b : c.h2h2_bonds)
        bonds.push_back(r12(b));
    for (double b : c.two_electron_bonds)
        two.push_back(r12(b));
    json j{{"format", "experiment"},
           {"version", kFormatVersion},
           {"case", c.case_label},
           {"ansatz", to_string(c.ansatz)},
           {"seed", c.seed},
           {"output_dir", c.output_dir},
           {"dataset_dir", c.dataset_dir},
           {"h2h2_bonds", std::move(bonds)},
           {"two_electron_bonds", std::move(two)},
           {"scf",
            {{"mixing", r12(c.scf.mixing)},
             {"density_tol", r12(c.scf.density_tol)},
             {"energy_tol", r12(c.scf.energy_tol)},
             {"max_iter", c.scf.max_iter},
             {"use_diis", c.scf.use_diis}}}};
    if (c.max_epochs)
        j["max_epochs"] = *c.max_epochs;
    if (c.restarts)
        j["restarts"] = *c.restarts;
    if (c.learning_rate)
        j["learning_rate"] = r12(*c.learning_rate);
    out << j.dump(1) << '\n';
}

ExperimentConfig read_experiment_config(std::istream &in) {
    const json j = parse_json(in, "config");
    ExperimentConfig c;
    try {
        if (j.contains("format") && j.at("format") != "experiment")
            throw std::runtime_error("config: expected format 'experiment'");
        c.case_label = j.value("case", c.case_label);
        (void)c.case_config();
        if (j.contains("ansatz"))
            c.ansatz = parse_ansatz_family(j.at("ansatz").get<std::string>());
        c.seed = j.value("seed", c.seed);
        c.output_dir = j.value("output_dir", c.output_dir);
        c.dataset_dir = j.value("dataset_dir", c.dataset_dir);
        c.h2h2_bonds = j.value("h2h2_bonds", c.h2h2_bonds);
        c.two_electron_bonds = j.value("two_electron_bonds", c.two_electron_bonds);
        if (j.contains("max_epochs"))
            c.max_epochs = j.at("max_epochs").get<int>();
        if (j.contains("restarts"))
            c.restarts = j.at("restarts").get<int>();
        if (j.contains("learning_rate"))
            c.learning_rate = j.at("learning_rate").get<double>();
        if (j.contains("scf")) {
            const json &s = j.at("scf");
            c.scf.mixing = s.value("mixing", c.scf.mixing);
            c.scf.density_tol = s.value("density_tol", c.scf.density_tol);
            c.scf.energy_tol = s.value("energy_tol", c.scf.energy_tol);
            c.scf.max_iter = s.value("max_iter", c.scf.max_iter);
            c.scf.use_diis = s.value("use_diis", c.scf.use_diis);
        }
    } catch (const json::exception &e) {
        throw std::runtime_error(std::string("config: ") + e.what());
    } catch (const std::invalid_argument &e) {
        throw std::runtime_error(std::string("config: ") + e.what());
    }
    return c;
}

void write_evaluation_csv(std::ostream &out, std::span<const EvaluationRow> rows) {
    out << "species,R,spin,orbital,f_noansatz,f_interp,f_ansatz1,f_ansatz2\n";
    for (const auto &r : rows)
        out << r.species << ',' << format_real(r.bond_length) << ',' << to_string(r.spin) << ','
            << r.orbital << ',' << format_real(r.f_noansatz) << ',' << format_real(r.f_interp)
            << ',' << format_real(r.f_ansatz1) << ',' << format_real(r.f_ansatz2) << '\n';
}

void write_group_csv(std::ostream &out, std::span<const GroupAverage> groups) {
    out << "group,count,f_noansatz,f_interp,f_ansatz1,f_ansatz2\n";
    for (const auto &g : groups)
        out << g.group << ',' << g.count << ',' << format_real(g.f_noansatz) << ','
            << format_real(g.f_interp) << ',' << format_real(g.f_ansatz1) << ','
            << format_real(g.f_ansatz2) << '\n';
}

void write_two_electron_csv(std::ostream &out, std::span<const TwoElectronRow> rows) {
    out << "R,symmetry,f_noansatz,f_ansatz1,f_ansatz2,E_LR,E_HR,E_pred_noansatz,E_pred_ansatz1,"
           "E_pred_ansatz2,dE_LR,dE_noansatz,dE_ansatz1,dE_ansatz2\n";
    for (const auto &r : rows) {
        const auto de = [&](double e) { return format_real(std::abs(e - r.e_hr)); };
        out << format_real(r.bond_length) << ',' << to_string(r.symmetry) << ','
            << format_real(r.f_noansatz) << ',' << format_real(r.f_ansatz1) << ','
            << format_real(r.f_ansatz2) << ',' << format_real(r.e_lr) << ','
            << format_real(r.e_hr) << ',' << format_real(r.e_noansatz) << ','
            << format_real(r.e_ansatz1) << ',' << format_real(r.e_ansatz2) << ',' << de(r.e_lr)
            << ',' << de(r.e_noansatz) << ',' << de(r.e_ansatz1) << ',' << de(r.e_ansatz2)
            << '\n';
    }
}

void write_text_file(const std::filesystem::path &path, const std::string &text) {
    if (path.has_parent_path())
        std::filesystem::create_directories(path.parent_path());
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary);
        if (!f)
            throw std::runtime_error("cannot write " + tmp.string());
        f << text;
        if (!f)
            throw std::runtime_error("write failed for " + tmp.string());
    }
    std::filesystem::rename(tmp, path);
}

std::string read_text_file(const std::filesystem::path &path) {
    std::ifstream f(path, std::ios::binary);
    if (!f)
        throw std::runtime_error("cannot read " + path.string());
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

} // namespace wfsr
