#include "support.hpp"
#include "thzcoh/report.hpp"
#include "thzcoh/scenario.hpp"
#include "thzcoh/table.hpp"

#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace thzcoh;
using fixture::rt_geometry;

namespace {

const std::string kConfigDir = std::string(THZCOH_SOURCE_DIR) + "/configs/";

ScenarioConfig parse(const std::string& text) { return scenario_from_kv(KeyValueFile::parse_string(text, "t.cfg")); }

const std::string kGeometry = R"(
length_thz = "1 cm"
area_thz = "0.1 cm^2"
area_opt = "0.1 cm^2"
length_opt = "1 cm"
)";

ScenarioConfig rt_pulse(double omega_0, double tau)
{
    ScenarioConfig c;
    c.label = "rt";
    c.material = "ruby-rt";
    c.strength_value = omega_0;
    c.duration = tau;
    c.geometry = rt_geometry();
    return c;
}

void expect_error_mentions(const std::string& text, const std::string& fragment)
{
    try {
        (void)parse(text);
        FAIL() << "expected ValidationError mentioning " << fragment;
    } catch (const ValidationError& e) {
        EXPECT_NE(std::string(e.what()).find(fragment), std::string::npos) << e.what();
    }
}

std::string csv(const std::vector<ReportRow>& rows)
{
    std::ostringstream out;
    write_rows_csv(out, rows);
    return out.str();
}

} // namespace

TEST(ScenarioConfig, ParsesAllKeys)
{
    const auto c = parse("label = \"x\"\nmaterial = \"ruby-lt\"\ndrive = \"flat_top\"\npulse_energy = \"10 mJ\"\n"
                         "duration = \"20 ps\"\npulses = 1\ncoherence = \"numeric\"\nrelaxation = \"off\"\n"
                         "sigma_max = 0.3\naperture = \"1 mm\"\ndiffraction = \"on\"\nspot = \"200 um\"\n"
                         "waveform_out = \"w.csv\"\ntrajectory_out = \"t.csv\"\nwaveform_samples = 10\n"
                         "trajectory_samples = 20\n" +
                         kGeometry);
    EXPECT_EQ(c.label, "x");
    EXPECT_EQ(c.drive, DriveMode::flat_top);
    EXPECT_EQ(c.strength, DriveStrength::pulse_energy);
    EXPECT_DOUBLE_EQ(c.strength_value, 10e-3);
    EXPECT_DOUBLE_EQ(c.duration, 20e-12);
    EXPECT_EQ(c.pulses, 1);
    EXPECT_EQ(c.coherence, CoherenceMethod::numeric);
    EXPECT_FALSE(c.relaxation);
    EXPECT_DOUBLE_EQ(*c.sigma_max, 0.3);
    EXPECT_DOUBLE_EQ(*c.geometry.aperture, 1e-3);
    EXPECT_TRUE(c.diffraction);
    EXPECT_DOUBLE_EQ(c.spot, 200e-6);
    EXPECT_EQ(c.waveform_samples, 10u);
    EXPECT_EQ(c.trajectory_samples, 20u);
}

TEST(ScenarioConfig, FieldLevelErrors)
{
    const std::string base = "material = \"ruby-rt\"\nduration = \"1 ps\"\n" + kGeometry;
    expect_error_mentions(base + "peak_rabi = \"1e11 s^-1\"\nwavelength = \"1 um\"\n", "'wavelength'");
    expect_error_mentions(base, "exactly one of");
    expect_error_mentions(base + "peak_rabi = \"1e11 s^-1\"\npeak_intensity = \"1 GW/cm^2\"\n", "exactly one of");
    expect_error_mentions(base + "peak_rabi = \"1e11 ps\"\n", "peak_rabi");
    expect_error_mentions(base + "peak_rabi = \"1e11 s^-1\"\ndrive = \"sawtooth\"\n", "'drive'");
    expect_error_mentions(base + "pulse_area = 3\ndrive = \"cw\"\n", "pulse_area");
    expect_error_mentions(base + "peak_rabi = \"1e11 s^-1\"\ndiffraction = \"on\"\n", "aperture");
    expect_error_mentions(base + "peak_rabi = \"1e11 s^-1\"\nsigma_max = 2\n", "sigma_max");
    expect_error_mentions(base + "peak_rabi = \"1e11 s^-1\"\npulses = 1.5\n", "pulses");
    expect_error_mentions(base + "peak_rabi = \"1e11 s^-1\"\nrelaxation = \"maybe\"\n", "relaxation");
    expect_error_mentions("duration = \"1 ps\"\npeak_rabi = \"1e11 s^-1\"\n" + kGeometry, "material");
}

TEST(ScenarioConfig, UnknownMaterialRejectedAtRun)
{
    auto c = rt_pulse(1e11, 1e-12);
    c.material = "nonexistent";
    EXPECT_THROW(run_scenario(c), ValidationError);
}

TEST(ScenarioConfig, ShippedConfigsMatchTableColumns)
{
    for (auto which : {TableId::room_temperature, TableId::low_temperature}) {
        for (const auto& col : table_columns(which)) {
            const std::string prefix = which == TableId::room_temperature ? "table1-" : "table2-";
            std::string name = col.config.label;
            name.erase(std::remove(name.begin(), name.end(), ' '), name.end());
            const auto c = load_scenario(kConfigDir + prefix + name + ".cfg");
            EXPECT_EQ(c.label, col.config.label);
            EXPECT_EQ(c.material, col.config.material);
            EXPECT_EQ(c.drive, col.config.drive);
            EXPECT_EQ(c.strength, col.config.strength);
            EXPECT_NEAR(c.strength_value / col.config.strength_value, 1.0, 1e-14);
            EXPECT_NEAR(c.duration / col.config.duration, 1.0, 1e-14);
            EXPECT_NEAR(c.geometry.area_thz / col.config.geometry.area_thz, 1.0, 1e-14);
            EXPECT_NEAR(c.geometry.length_opt / col.config.geometry.length_opt, 1.0, 1e-14);
            EXPECT_EQ(c.pulses, col.config.pulses);
        }
    }
    for (const auto& entry : std::filesystem::directory_iterator(kConfigDir)) {
        EXPECT_NO_THROW(load_scenario(entry.path().string())) << entry.path();
    }
}

TEST(RunScenario, RoomTemperatureOnePicosecond)
{
    const auto row = run_scenario(rt_pulse(2e11, 1e-12)).row;
    EXPECT_NEAR(row.sigma_max, 0.212, 1e-3);
    EXPECT_NEAR(row.e_thz / 630e-12, 1.0, 0.15);
    EXPECT_NEAR(row.peak_field / 2.3e6, 1.0, 0.25);
    EXPECT_EQ(row.damage, "pass");
    EXPECT_TRUE(row.flags.empty());
}

TEST(RunScenario, ZeroDrive)
{
    const auto row = run_scenario(rt_pulse(0.0, 1e-12)).row;
    for (double v : {row.sigma_max, row.pulse_area, row.e_thz, row.peak_field, row.omega_0, row.i_peak,
                     row.e_opt_pulse, row.e_opt_total, row.efficiency, row.efficiency_absorbed}) {
        EXPECT_EQ(v, 0.0);
    }
    auto cw = rt_pulse(0.0, 10e-12);
    cw.drive = DriveMode::cw;
    const auto cw_row = run_scenario(cw).row;
    EXPECT_EQ(cw_row.sigma_max, 0.0);
    EXPECT_EQ(cw_row.e_thz, 0.0);
}

TEST(RunScenario, LowTemperatureShortPulses)
{
    ScenarioConfig c;
    c.material = "ruby-lt";
    c.strength = DriveStrength::pulse_area;
    c.strength_value = constants::pi;
    c.duration = 50e-12;
    c.geometry = fixture::lt_geometry();
    const auto row = run_scenario(c).row;
    EXPECT_NEAR(row.sigma_max, 0.5, 1e-12);
    EXPECT_NEAR(row.e_thz / 7.5e-6, 1.0, 0.2);
    EXPECT_GT(row.efficiency, 0.5e-4);
    EXPECT_LT(row.efficiency, 2e-4);
}

TEST(RunScenario, RowUsesMaterialFormulas)
{
    const auto c = rt_pulse(1.3e11, 2e-12);
    const auto row = run_scenario(c).row;
    const auto m = fixture::ruby_rt();
    EXPECT_EQ(row.e_opt_pulse, optical_pulse_energy(1.3e11, 2e-12, c.geometry, m));
    EXPECT_EQ(row.i_peak, peak_intensity(1.3e11, m));
    EXPECT_EQ(row.absorbed_fraction, absorbed_fraction(m, c.geometry));
    EXPECT_EQ(row.e_opt_total, 2.0 * row.e_opt_pulse / row.absorbed_fraction);
    EXPECT_EQ(row.efficiency, row.e_thz / row.e_opt_total);
    EXPECT_EQ(row.efficiency_absorbed, row.e_thz / (2.0 * row.e_opt_pulse));
    EXPECT_EQ(row.e_thz, exponential_source_energy(row.sigma_max, m.gamma_thz, m, c.geometry));
    EXPECT_NEAR(row.efficiency_limit, 29.0 / 14420.0, 2e-5);
}

TEST(RunScenario, DriveStrengthKeysAreEquivalent)
{
    const auto ref = run_scenario(rt_pulse(2e11, 1e-12)).row;
    const auto m = fixture::ruby_rt();
    auto by_energy = rt_pulse(0.0, 1e-12);
    by_energy.set_parameter("pulse_energy", ref.e_opt_pulse);
    auto by_intensity = rt_pulse(0.0, 1e-12);
    by_intensity.set_parameter("peak_intensity", peak_intensity(2e11, m));
    auto by_area = rt_pulse(0.0, 1e-12);
    by_area.set_parameter("pulse_area", 4.0 * std::sqrt(constants::pi) * 2e11 * 1e-12);
    for (const auto& c : {by_energy, by_intensity, by_area}) {
        const auto row = run_scenario(c).row;
        EXPECT_NEAR(row.omega_0 / 2e11, 1.0, 1e-12);
        EXPECT_NEAR(row.e_thz / ref.e_thz, 1.0, 1e-10);
    }
}

TEST(RunScenario, DamageViolationIsFlagged)
{
    auto c = rt_pulse(1e11, 10e-12);
    c.drive = DriveMode::cw;
    const auto row = run_scenario(c).row;
    EXPECT_EQ(row.damage, "fail");
    ASSERT_FALSE(row.flags.empty());
    EXPECT_NE(row.flags.front().find("damage"), std::string::npos);
    EXPECT_GT(row.e_thz, 0.0);
}

TEST(RunScenario, NumericCoherenceWithoutRelaxationMatchesAnalytic)
{
    auto c = rt_pulse(2e11, 1e-12);
    c.coherence = CoherenceMethod::numeric;
    c.relaxation = false;
    ScenarioOptions options;
    options.want_trajectory = true;
    const auto result = run_scenario(c, options);
    EXPECT_NEAR(result.row.sigma_max, run_scenario(rt_pulse(2e11, 1e-12)).row.sigma_max, 1e-6);
    ASSERT_TRUE(result.trajectory.has_value());
    EXPECT_EQ(result.trajectory->times.size(), c.trajectory_samples);
}

TEST(RunScenario, RelaxationLowersCoherence)
{
    auto c = rt_pulse(2e11, 1e-12);
    c.coherence = CoherenceMethod::numeric;
    const auto row = run_scenario(c).row;
    EXPECT_GT(row.sigma_max, 0.0);
    EXPECT_LT(row.sigma_max, 0.212);
}

TEST(RunScenario, SigmaOverrideAndDiffraction)
{
    auto c = rt_pulse(2e11, 1e-12);
    c.sigma_max = 0.5;
    const auto row = run_scenario(c).row;
    EXPECT_EQ(row.sigma_max, 0.5);
    auto with_loss = c;
    with_loss.geometry.aperture = 1e-3;
    with_loss.diffraction = true;
    EXPECT_LT(run_scenario(with_loss).row.e_thz, row.e_thz);
}

TEST(RunScenario, WritesRequestedFiles)
{
    const auto dir = std::filesystem::temp_directory_path() / "thzcoh_scenario_test";
    std::filesystem::create_directories(dir);
    auto c = rt_pulse(2e11, 1e-12);
    c.waveform_out = (dir / "w.csv").string();
    c.trajectory_out = (dir / "t.csv").string();
    c.waveform_samples = 100;
    c.trajectory_samples = 51;
    const auto result = run_scenario(c);
    write_scenario_outputs(c, result);
    std::ifstream t(c.trajectory_out);
    std::string header;
    std::getline(t, header);
    EXPECT_EQ(header, "time_s,rho_a,rho_b,rho_c,re_sigma_ba,im_sigma_ba,re_sigma_ca,im_sigma_ca,re_sigma_cb,im_sigma_cb");
    int lines = 0;
    for (std::string l; std::getline(t, l);) {
        ++lines;
    }
    EXPECT_EQ(lines, 51);
    // Analytic trajectories are reconstructed pure states.
    for (const auto& s : result.trajectory->states) {
        EXPECT_NO_THROW(s.validate());
    }
    EXPECT_NEAR(result.trajectory->states.back().beta(), result.row.sigma_max, 1e-9);
    ASSERT_TRUE(result.waveform.has_value());
    EXPECT_NEAR(result.waveform->energy() / result.row.e_thz, 1.0, 1e-2);
    EXPECT_TRUE(std::filesystem::exists(c.waveform_out));
    std::filesystem::remove_all(dir);
}

TEST(Table, BothTablesPassTheirGates)
{
    EXPECT_TRUE(reproduce_table(TableId::room_temperature).passed());
    EXPECT_TRUE(reproduce_table(TableId::low_temperature).passed());
}

TEST(Table, FlagsAndColumns)
{
    const auto t1 = reproduce_table(TableId::room_temperature);
    auto cell = [](const TableReport& r, const std::string& col, const std::string& q) {
        for (const auto& c : r.cells) {
            if (c.column == col && c.quantity == q) {
                return c;
            }
        }
        throw std::runtime_error("missing cell " + col + "/" + q);
    };
    const auto eta = cell(t1, "1 ps", "efficiency");
    EXPECT_NEAR(eta.computed / 6e-9, 1.0, 0.2);
    EXPECT_EQ(eta.quoted, 1e-11);
    EXPECT_NE(eta.note.find("transposition"), std::string::npos);
    EXPECT_EQ(eta.status(), "info");
    EXPECT_NEAR(cell(t1, "100 fs", "e_thz").computed / 100e-15, 1.0, 0.25);
    EXPECT_EQ(cell(t1, "1 ps", "e_thz").status(), "pass");

    const auto t2 = reproduce_table(TableId::low_temperature);
    EXPECT_NEAR(cell(t2, "long", "efficiency").computed / 3e-5, 1.0, 0.3);
    EXPECT_EQ(t2.rows.size(), 2u);
    EXPECT_EQ(t1.rows.size(), 3u);
}

TEST(Table, OutputIsDeterministic)
{
    for (auto which : {TableId::room_temperature, TableId::low_temperature}) {
        for (auto format : {OutputFormat::text, OutputFormat::csv}) {
            std::ostringstream a;
            std::ostringstream b;
            write_table(a, reproduce_table(which), format);
            write_table(b, reproduce_table(which), format);
            EXPECT_EQ(a.str(), b.str());
        }
    }
}

TEST(Table, ToleranceKinds)
{
    EXPECT_TRUE(Tolerance::relative(0.1).accepts(1.05, 1.0));
    EXPECT_FALSE(Tolerance::relative(0.1).accepts(1.2, 1.0));
    EXPECT_TRUE(Tolerance::absolute(0.01).accepts(0.475, 0.47));
    EXPECT_TRUE(Tolerance::range(6.0, 9.7).accepts(7.0, 7.5));
    EXPECT_FALSE(Tolerance::range(6.0, 9.7).accepts(9.8, 7.5));
    EXPECT_TRUE(Tolerance::factor(2.5).accepts(1.1, 2.3));
    EXPECT_FALSE(Tolerance::factor(2.5).accepts(0.5, 2.3));
    EXPECT_TRUE(Tolerance::none().accepts(1e9, 1.0));
    EXPECT_THROW(parse_table_id("III"), ValidationError);
}

TEST(Sweep, PulseAreaPeaksAtPi)
{
    const auto base = load_scenario(kConfigDir + "area-sweep.cfg");
    const auto rows = sweep(base, {"pulse_area", 0.0, 2.0 * constants::pi, 64, 4});
    ASSERT_EQ(rows.size(), 64u);
    std::size_t best = 0;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        EXPECT_TRUE(rows[i].error.empty());
        if (rows[i].sigma_max > rows[best].sigma_max) {
            best = i;
        }
    }
    EXPECT_NEAR(rows[best].pulse_area, constants::pi, 2.0 * constants::pi / 63.0);
    EXPECT_NEAR(rows[best].sigma_max, 0.5, 2e-3);

    const auto odd = sweep(base, {"pulse_area", 0.0, 2.0 * constants::pi, 65, 4});
    EXPECT_NEAR(odd[32].sigma_max, 0.5, 1e-9);
}

TEST(Sweep, SingleStepEqualsRun)
{
    auto base = rt_pulse(2e11, 1e-12);
    const auto rows = sweep(base, {"peak_rabi", 2e11, 5e11, 1, 1});
    ASSERT_EQ(rows.size(), 1u);
    auto single = run_scenario(base).row;
    single.label = rows[0].label;
    EXPECT_EQ(csv(rows), csv({single}));
}

TEST(Sweep, EnergyScalesAsSigmaSquared)
{
    const auto rows = sweep(rt_pulse(2e11, 1e-12), {"sigma_max", 0.1, 0.4, 4, 2});
    ASSERT_EQ(rows.size(), 4u);
    EXPECT_NEAR(rows[1].e_thz / rows[0].e_thz, 4.0, 1e-12);
    EXPECT_NEAR(rows[3].e_thz / rows[0].e_thz, 16.0, 1e-12);
}

TEST(Sweep, ConcurrentEqualsSerial)
{
    const auto base = rt_pulse(2e11, 1e-12);
    const SweepSpec serial{"duration", 0.1e-12, 3e-12, 17, 1};
    SweepSpec parallel = serial;
    parallel.jobs = 6;
    EXPECT_EQ(csv(sweep(base, serial)), csv(sweep(base, parallel)));
}

TEST(Sweep, FailuresAreRecordedPerPoint)
{
    const auto rows = sweep(rt_pulse(2e11, 1e-12), {"duration", -1e-12, 1e-12, 3, 2});
    ASSERT_EQ(rows.size(), 3u);
    EXPECT_FALSE(rows[0].error.empty());
    EXPECT_TRUE(rows[2].error.empty());
    EXPECT_GT(rows[2].e_thz, 0.0);
    EXPECT_THROW(sweep(rt_pulse(2e11, 1e-12), {"material", 0.0, 1.0, 2, 1}), ValidationError);
}

TEST(Report, CsvShape)
{
    auto row = run_scenario(rt_pulse(2e11, 1e-12)).row;
    row.label = "a,b";
    row.flags = {"one", "two"};
    const auto text = csv({row});
    EXPECT_EQ(text.substr(0, text.find('\n')),
              "label,material,drive,sigma_max,pulse_area,decay_rate,e_thz,peak_field,omega_0,i_peak,e_opt_pulse,"
              "absorbed_fraction,e_opt_total,efficiency,efficiency_absorbed,efficiency_limit,damage_margin,damage,"
              "flags,error");
    EXPECT_NE(text.find("\"a,b\""), std::string::npos);
    EXPECT_NE(text.find("one; two"), std::string::npos);
    EXPECT_THROW(parse_output_format("xml"), ValidationError);
}
