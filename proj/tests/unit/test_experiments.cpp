// SPDX-License-Identifier: Apache-2.0

#include <catch_amalgamated.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

#include "irsdfrc/experiments.hpp"

using namespace irsdfrc;
namespace fs = std::filesystem;

namespace {

SystemConfig tiny() {
    SystemConfig c;
    c.n_tx = 3;
    c.n_rx = 3;
    c.set_irs_size(4);
    c.t_max = 3;
    c.seed = 100;
    return c;
}

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::stringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + v[i];
    return s;
}

}  // namespace

TEST_CASE("experiment kinds")
{
    for (auto k : {ExperimentKind::converge, ExperimentKind::sweep_omega, ExperimentKind::beampattern,
                   ExperimentKind::feasible_rate, ExperimentKind::scaling, ExperimentKind::csi_error})
        CHECK(kind_from_string(to_string(k)) == k);
    CHECK_THROWS_AS(kind_from_string("fig2"), ConfigError);
    CHECK_THROWS_AS(layout_for(ExperimentKind::beampattern), std::invalid_argument);
}

TEST_CASE("csv headers match the golden file")
{
    std::ifstream f(std::string(IRSDFRC_TEST_DATA) + "/csv_headers.txt");
    REQUIRE(f);
    std::string line;
    int seen = 0;
    while (std::getline(f, line)) {
        const auto colon = line.find(": ");
        REQUIRE(colon != std::string::npos);
        const ExperimentKind k = kind_from_string(line.substr(0, colon));
        CHECK(join(layout_for(k).header()) == line.substr(colon + 2));
        ++seen;
    }
    CHECK(seen == 5);
}

TEST_CASE("default specs")
{
    ExperimentSpec f = default_spec(ExperimentKind::feasible_rate);
    CHECK(f.base.n_irs() == 25);
    CHECK(f.gammas_db == std::vector<double>{-6.0, -2.0, 2.0, 6.0, 10.0});
    CHECK(f.realizations == 100);
    ExperimentSpec s = default_spec(ExperimentKind::scaling);
    CHECK(s.sizes == std::vector<int>{9, 16, 25, 36, 49, 64});
    CHECK(s.realizations == 20);
    CHECK(default_spec(ExperimentKind::sweep_omega).omegas.size() == 5);
    CHECK(std::isinf(default_spec(ExperimentKind::csi_error).sigmas_db.front()));

    ExperimentSpec bad = default_spec(ExperimentKind::sweep_omega);
    bad.omegas.clear();
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = default_spec(ExperimentKind::csi_error);
    bad.sigmas_db = {0.0};
    CHECK_THROWS_AS(bad.validate(), ConfigError);
    bad = default_spec(ExperimentKind::converge);
    bad.realizations = 0;
    CHECK_THROWS_AS(bad.validate(), ConfigError);
}

TEST_CASE("csv emit and read back")
{
    const fs::path dir = fs::temp_directory_path() / "irsdfrc_csv_test";
    fs::create_directories(dir);
    const CsvLayout lay = layout_for(ExperimentKind::sweep_omega);

    emit_csv(lay, {}, (dir / "empty.csv").string());
    CHECK(slurp(dir / "empty.csv") == join(lay.header()) + "\n");

    std::vector<AggregateRow> rows = {
        {{0.1}, "qtmm", 1.0 / 3.0, 0.125, 7, {2.5e-12, -4.75}},
        {{0.95}, "qtsdr", -1234567.891, 0.0, 1, {1e300, 3.0}},
    };
    emit_csv(lay, rows, (dir / "rows.csv").string());
    Table t = read_table((dir / "rows.csv").string());
    CHECK(t.header == lay.header());
    REQUIRE(t.rows.size() == 2);
    CHECK(t.rows[0][1] == "qtmm");
    CHECK(std::stod(t.rows[0][2]) == std::stod(format_double(1.0 / 3.0)));
    CHECK(t.rows[0][2] == "0.333333333");
    CHECK(t.rows[1][2] == "-1234567.89");
    CHECK(t.rows[0][4] == "7");
    CHECK(std::stod(t.rows[0][5]) == 2.5e-12);
    CHECK(slurp(dir / "rows.csv").back() == '\n');

    AggregateRow wrong{{0.1, 0.2}, "qtmm", 0, 0, 0, {}};
    CHECK_THROWS_AS(to_table(lay, {wrong}), std::invalid_argument);
    CHECK_THROWS_AS(emit_csv(lay, rows, "/nonexistent/dir/x.csv"), std::runtime_error);
    fs::remove_all(dir);
}

TEST_CASE("converge with one realization reproduces the run")
{
    ExperimentSpec spec = default_spec(ExperimentKind::converge, tiny());
    spec.realizations = 1;
    spec.methods = {Method::qtmm};
    ExperimentOutput out = run_experiment(spec);
    CHECK(out.completed == 1);
    CHECK(out.failed == 0);
    const Table& t = out.tables.at("converge_qtmm.csv");
    REQUIRE(t.rows.size() == 4);

    Rng rng(spec.base.seed);
    const CsiView sc = make_scenario(spec.base, rng);
    const RunResult r = optimize(sc, spec.base, Method::qtmm, rng);
    std::vector<double> ref{r.initial_secrecy};
    for (const auto& it : r.trace) ref.push_back(it.output_secrecy);
    while (ref.size() < 4) ref.push_back(ref.back());
    for (size_t i = 0; i < 4; ++i) {
        CHECK(t.rows[i][0] == std::to_string(i));
        CHECK(t.rows[i][2] == format_double(ref[i]));
        CHECK(t.rows[i][3] == "0");
        CHECK(t.rows[i][4] == "1");
    }
    CHECK(out.runs.count(spec.base.seed) == 1);
}

TEST_CASE("feasible-rate with a vacuous threshold")
{
    ExperimentSpec spec = default_spec(ExperimentKind::feasible_rate, tiny());
    spec.base.set_irs_size(4);
    spec.gammas_db = {-300.0};
    spec.realizations = 2;
    ExperimentOutput out = run_experiment(spec);
    for (const char* m : {"qtmm", "qtsdr"}) {
        const Table& t = out.tables.at(std::string("feasible-rate_") + m + ".csv");
        REQUIRE(t.rows.size() == 1);
        CHECK(std::stod(t.rows[0][5]) == 1.0);
    }
}

TEST_CASE("identical specs give identical files")
{
    ExperimentSpec spec = default_spec(ExperimentKind::sweep_omega, tiny());
    spec.omegas = {0.3, 0.8};
    spec.realizations = 2;
    const fs::path a = fs::temp_directory_path() / "irsdfrc_det_a";
    const fs::path b = fs::temp_directory_path() / "irsdfrc_det_b";
    fs::remove_all(a);
    fs::remove_all(b);
    write_outputs(run_experiment(spec), a.string());
    spec.jobs = 2;
    write_outputs(run_experiment(spec), b.string());
    int files = 0;
    for (const auto& e : fs::directory_iterator(a)) {
        if (e.path().extension() != ".csv") continue;
        CHECK(slurp(e.path()) == slurp(b / e.path().filename()));
        ++files;
    }
    CHECK(files == 2);
    CHECK(fs::exists(a / "runs" / "100.json"));
    fs::remove_all(a);
    fs::remove_all(b);
}

TEST_CASE("beampattern tables")
{
    ExperimentSpec spec = default_spec(ExperimentKind::beampattern, tiny());
    spec.methods = {Method::qtmm};
    ExperimentOutput out = run_experiment(spec);
    const Table& r = out.tables.at("beampattern_radar_qtmm.csv");
    CHECK(r.header == std::vector<std::string>{"angle_deg", "info_db", "an_db"});
    CHECK(r.rows.size() == 361);
    const Table& i = out.tables.at("beampattern_irs_qtmm.csv");
    CHECK(i.header == std::vector<std::string>{"elevation_deg", "azimuth_deg", "gain_db"});
    CHECK(i.rows.size() == 361);
}
