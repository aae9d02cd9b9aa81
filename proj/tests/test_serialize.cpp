#include "wfsr/serialize.hpp"

#include <doctest.h>

#include <cmath>
#include <filesystem>
#include <sstream>

using namespace wfsr;

namespace {

std::vector<Sample> few_samples() {
    const auto all = build_training_set(CaseConfig::case_i());
    return {all[0], all[7], all[30], all.back()};
}

std::string header_line(const std::string &csv) { return csv.substr(0, csv.find('\n')); }

} // namespace

TEST_CASE("real formatting") {
    CHECK(format_real(0.1) == "0.1");
    CHECK(format_real(1.0 / 3.0) == "0.333333333333");
    CHECK(format_real(kMissing) == "nan");
    CHECK(format_real(-2.5e-13) == "-2.5e-13");
}

TEST_CASE("wfset round trip") {
    WfSet set{CaseConfig::case_i(), "training", few_samples()};
    std::stringstream ss;
    write_wfset(ss, set);
    const WfSet back = read_wfset(ss);
    CHECK(back.config.label == CaseLabel::I);
    CHECK(back.split == "training");
    REQUIRE(back.samples.size() == set.samples.size());
    for (std::size_t i = 0; i < set.samples.size(); ++i) {
        const Sample &a = set.samples[i], &b = back.samples[i];
        CHECK(a.id == b.id);
        CHECK(a.species == b.species);
        CHECK(a.bond_length == b.bond_length);
        CHECK(a.spin == b.spin);
        CHECK(a.orbitals == b.orbitals);
        CHECK(a.is_pair() == b.is_pair());
        CHECK((a.c_lr - b.c_lr).cwiseAbs().maxCoeff() < 1e-12);
        CHECK((a.c_hr - b.c_hr).cwiseAbs().maxCoeff() < 1e-12);
        CHECK(a.data.center_of_mass == doctest::Approx(b.data.center_of_mass).epsilon(1e-12));
        REQUIRE(a.data.potential_grid.size() == b.data.potential_grid.size());
        for (std::size_t k = 0; k < a.data.potential_grid.size(); ++k)
            CHECK(a.data.potential_grid[k] ==
                  doctest::Approx(b.data.potential_grid[k]).epsilon(1e-11));
    }
}

TEST_CASE("wfset errors") {
    std::stringstream bad("{\"format\": \"model\"}");
    CHECK_THROWS_AS((void)read_wfset(bad), std::runtime_error);
    std::stringstream garbage("not json");
    CHECK_THROWS_AS((void)read_wfset(garbage), std::runtime_error);

    WfSet set{CaseConfig::case_i(), "training", few_samples()};
    std::stringstream ss;
    write_wfset(ss, set);
    std::string text = ss.str();
    const auto pos = text.find("\"version\": 1");
    REQUIRE(pos != std::string::npos);
    text.replace(pos, 12, "\"version\": 9");
    std::stringstream wrong(text);
    CHECK_THROWS_AS((void)read_wfset(wrong), std::runtime_error);

    std::string hdr = ss.str();
    const auto np = hdr.find("\"n_pw_hr\": 15");
    REQUIRE(np != std::string::npos);
    hdr.replace(np, 13, "\"n_pw_hr\": 17");
    std::stringstream mismatch(hdr);
    CHECK_THROWS_AS((void)read_wfset(mismatch), std::runtime_error);
}

TEST_CASE("model round trip") {
    Model m;
    m.case_label = CaseLabel::II;
    m.ansatz = AnsatzConfig::defaults(AnsatzFamily::Ansatz1, 5);
    m.train_config = TrainConfig::defaults(AnsatzFamily::Ansatz1, 5);
    m.theta.resize(m.ansatz.parameter_count());
    for (std::size_t i = 0; i < m.theta.size(); ++i)
        m.theta[i] = std::sin(0.37 * static_cast<double>(i)) * 1.7;
    m.average_fidelity = 0.99276;
    m.epochs = 812;
    m.seed_used = 1236;
    std::stringstream ss;
    write_model(ss, m);
    const Model b = read_model(ss);
    CHECK(b.case_label == CaseLabel::II);
    CHECK(b.ansatz.family == AnsatzFamily::Ansatz1);
    CHECK(b.ansatz.n_qubits == 5);
    CHECK(b.ansatz.parameter_count() == m.ansatz.parameter_count());
    CHECK(b.epochs == 812);
    CHECK(b.seed_used == 1236);
    CHECK(b.average_fidelity == doctest::Approx(0.99276).epsilon(1e-12));
    CHECK(b.train_config.restarts == 3);
    CHECK(b.train_config.init == InitScheme::UniformRandom);
    REQUIRE(b.theta.size() == m.theta.size());
    for (std::size_t i = 0; i < m.theta.size(); ++i)
        CHECK(b.theta[i] == doctest::Approx(m.theta[i]).epsilon(1e-11));

    std::string text = ss.str();
    const auto t = text.find("\"theta\"");
    REQUIRE(t != std::string::npos);
    std::stringstream truncated(text.substr(0, t) + "\"theta\": [0.1]}");
    CHECK_THROWS_AS((void)read_model(truncated), std::runtime_error);

    CHECK(model_filename(CaseConfig::case_i(), AnsatzFamily::Ansatz2) == "case_i_ansatz2.model");
}

TEST_CASE("experiment config round trip and defaults") {
    ExperimentConfig c;
    c.case_label = "ii";
    c.ansatz = AnsatzFamily::Ansatz1;
    c.seed = 77;
    c.output_dir = "results";
    c.max_epochs = 300;
    c.learning_rate = 0.02;
    c.scf.use_diis = true;
    std::stringstream ss;
    write_experiment_config(ss, c);
    const ExperimentConfig b = read_experiment_config(ss);
    CHECK(b.case_label == "ii");
    CHECK(b.ansatz == AnsatzFamily::Ansatz1);
    CHECK(b.seed == 77);
    CHECK(b.max_epochs == 300);
    CHECK_FALSE(b.restarts.has_value());
    CHECK(b.scf.use_diis);
    CHECK(b.dataset_path() == std::filesystem::path("results") / "case_ii");
    const TrainConfig tc = b.train_config();
    CHECK(tc.max_epochs == 300);
    CHECK(tc.restarts == 3);
    CHECK(tc.adam.learning_rate == 0.02);
    CHECK(tc.ansatz.n_qubits == 5);
    CHECK(tc.seed == 77);

    std::stringstream sparse("{\"seed\": 5}");
    const ExperimentConfig d = read_experiment_config(sparse);
    CHECK(d.seed == 5);
    CHECK(d.case_label == "i");
    CHECK(d.two_electron_bonds.size() == 6);

    std::stringstream bad_case("{\"case\": \"iv\"}");
    CHECK_THROWS_AS((void)read_experiment_config(bad_case), std::runtime_error);
    std::stringstream bad_type("{\"seed\": \"x\"}");
    CHECK_THROWS_AS((void)read_experiment_config(bad_type), std::runtime_error);
}

TEST_CASE("csv headers and rows") {
    EvaluationRow r;
    r.species = "H2(s)";
    r.bond_length = 1.5;
    r.orbital = "0";
    r.f_noansatz = 0.9;
    r.f_interp = 0.8;
    std::ostringstream a;
    write_evaluation_csv(a, std::span<const EvaluationRow>(&r, 1));
    CHECK(header_line(a.str()) == "species,R,spin,orbital,f_noansatz,f_interp,f_ansatz1,f_ansatz2");
    CHECK(a.str().find("H2(s),1.5,") != std::string::npos);
    CHECK(a.str().find(",nan,nan") != std::string::npos);

    const auto groups = group_averages(std::span<const EvaluationRow>(&r, 1), GroupBy::All);
    std::ostringstream g;
    write_group_csv(g, groups);
    CHECK(header_line(g.str()) == "group,count,f_noansatz,f_interp,f_ansatz1,f_ansatz2");

    TwoElectronRow t;
    t.bond_length = 2.0;
    t.e_lr = -1.2;
    t.e_hr = -1.3;
    t.e_noansatz = -1.2;
    std::ostringstream e;
    write_two_electron_csv(e, std::span<const TwoElectronRow>(&t, 1));
    CHECK(header_line(e.str()) ==
          "R,symmetry,f_noansatz,f_ansatz1,f_ansatz2,E_LR,E_HR,E_pred_noansatz,E_pred_ansatz1,"
          "E_pred_ansatz2,dE_LR,dE_noansatz,dE_ansatz1,dE_ansatz2");
    CHECK(e.str().find("2,singlet,") != std::string::npos);
}

TEST_CASE("atomic text files") {
    const auto dir = std::filesystem::temp_directory_path() / "wfsr_serialize_test";
    std::filesystem::remove_all(dir);
    const auto path = dir / "nested" / "x.txt";
    write_text_file(path, "hello\n");
    CHECK(read_text_file(path) == "hello\n");
    write_text_file(path, "again\n");
    CHECK(read_text_file(path) == "again\n");
    CHECK_FALSE(std::filesystem::exists(path.string() + ".tmp"));
    CHECK_THROWS_AS((void)read_text_file(dir / "missing"), std::runtime_error);

    WfSet set{CaseConfig::case_i(), "training", few_samples()};
    save_wfset(dir / "t.wfset", set);
    CHECK(load_wfset(dir / "t.wfset").samples.size() == set.samples.size());
    std::filesystem::remove_all(dir);
}
