#pragma once

// Scenario documents, case orchestration (criterion + simulation), the
// five-case golden table, and parameter sweeps.
//
// A scenario document is JSON with sections base, topology, sg, pll,
// injections and sim. R_f is given in ohms (`topology.r_f_ohm`) and converted
// to pu on load; every impedance is {re, im} in pu.

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

#include "ibgsg/criterion.hpp"
#include "ibgsg/dynamics.hpp"
#include "ibgsg/equilibria.hpp"
#include "ibgsg/network.hpp"
#include "ibgsg/reduced_model.hpp"
#include "json.hpp"

namespace ibgsg {

using Json = nlohmann::json;

struct Scenario {
    BaseQuantities base;
    NetworkTopology topology;  ///< fault_resistance already in pu
    std::optional<double> fault_resistance_ohm;
    SGParams sg;
    PLLParams pll;
    CurrentInjection prefault_injection;
    CurrentInjection fault_injection;
    SimConfig sim;

    [[nodiscard]] NetworkTopology prefault_topology() const;
    [[nodiscard]] FaultStudy fault_study() const;
};

/// Dotted key=value assignment, e.g. `pll.ki=50`.
struct Override {
    std::string key;
    std::string value;
};

Override parse_override(std::string_view text);

/// Applies a type-checked override to a scenario document.
void apply_override(Json& doc, const Override& override);

/// Numeric leaf paths accepted by overrides and sweep axes.
bool is_numeric_key(std::string_view key);

/// Validates a document against the schema and builds a Scenario.
/// Schema errors and invariant violations raise ValidationError with the
/// dotted field path.
Scenario parse_scenario(const Json& doc);

Json read_scenario_document(const std::filesystem::path& path);

Scenario load_scenario(const std::filesystem::path& path, const std::vector<Override>& overrides = {});

/// Scenario document for the reference system (no fault resistance set).
Json table1_document();

struct CaseReport {
    ModelCoeffs coeffs;
    PowerShortages shortages;
    EquilibriumSet equilibria;
    EquilibriumSet approx_equilibria;
    InitialState initial;
    CriterionVerdict verdict;
    SimResult sim;
    double prefault_power_mismatch;  ///< P_m - P_g at the pre-fault operating point
    bool agreement;
};

struct CaseOptions {
    bool simulate = true;
    bool record_trajectory = false;
    bool stop_on_los = true;
};

CaseReport run_case(const Scenario& scenario, const CaseOptions& options = {});

/// True when the type-specific verdict and the simulated outcome agree on
/// stability and, when unstable, on the LOS direction.
bool outcome_agrees(const CriterionVerdict& verdict, const std::optional<LosEvent>& los);

/// "stable", "accelerating" or "decelerating".
std::string outcome_label(const std::optional<LosType>& los);

struct Table2Row {
    std::string name;
    double ki;
    double kp;
    double tg;
    double rf_ohm;
    double residual_voltage_pu;  ///< expected |U_l|
    LosRisk expected_risk;       ///< expected sign of a
    bool expected_ek_exceeds;    ///< expected E_k,0+ vs area relation
    std::optional<LosType> expected;  ///< expected criterion and simulation result
};

const std::vector<Table2Row>& table2_rows();

Json table2_document(const Table2Row& row);

struct Table2Result {
    Table2Row row;
    CaseReport report;
    double residual_voltage_pu;  ///< computed |U_l| with zero IBG current
    bool ek_exceeds;             ///< computed E_k,0+ vs area relation for the expected sign
    bool condition_match;
    bool criterion_match;
    bool simulation_match;
    [[nodiscard]] bool passed() const { return condition_match && criterion_match && simulation_match; }
};

std::vector<Table2Result> run_table2(const std::vector<Override>& overrides = {});

struct SweepAxis {
    std::string key;
    double start;
    double stop;
    long count;
};

/// Parses `key=start:stop:count`.
SweepAxis parse_axis(std::string_view text);

inline constexpr long kMaxSweepPoints = 1'000'000;

struct SweepSpec {
    Json scenario;
    std::vector<SweepAxis> axes;
    bool check_sim = false;
    unsigned workers = 0;  ///< 0 = hardware concurrency
};

struct SweepRecord {
    std::vector<double> axis_values;
    double a;
    int sign_a;
    bool sep_exists;
    double s1;
    double s2;
    double s3;
    double ek0;
    double margin_decel;
    double margin_accel;
    bool stable_unified;
    bool stable_type_specific;
    std::optional<bool> agreement;
    std::optional<std::string> error;
};

/// One record per grid point in row-major order (last axis fastest).
std::vector<SweepRecord> sweep(const SweepSpec& spec);

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRecord>& records);

/// Structured verdict document with the CriterionVerdict field names.
Json verdict_document(const CriterionVerdict& verdict);

/// Full analysis document: coefficients, equilibria, initial state, verdict.
Json analysis_document(const CaseReport& report);

}  // namespace ibgsg
