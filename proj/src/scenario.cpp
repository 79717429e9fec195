#include "ibgsg/scenario.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <fstream>
#include <thread>

#include "ibgsg/angles.hpp"
#include "ibgsg/csv.hpp"
#include "ibgsg/energy.hpp"
#include "ibgsg/errors.hpp"

namespace ibgsg {

namespace {

enum class FieldType { Number, OptionalNumber, Bool, ModelName };

struct FieldSpec {
    std::string_view path;
    FieldType type;
};

constexpr FieldSpec kFields[] = {
    {"base.s_b", FieldType::Number},
    {"base.u_b", FieldType::Number},
    {"base.omega_b", FieldType::Number},
    {"topology.e_g", FieldType::Number},
    {"topology.z_g.re", FieldType::Number},
    {"topology.z_g.im", FieldType::Number},
    {"topology.z_p.re", FieldType::Number},
    {"topology.z_p.im", FieldType::Number},
    {"topology.z_l.re", FieldType::Number},
    {"topology.z_l.im", FieldType::Number},
    {"topology.r_f_ohm", FieldType::OptionalNumber},
    {"sg.t_g", FieldType::Number},
    {"sg.p_m", FieldType::Number},
    {"pll.kp", FieldType::Number},
    {"pll.ki", FieldType::Number},
    {"injections.rated_current", FieldType::Number},
    {"injections.prefault.i_d", FieldType::Number},
    {"injections.prefault.i_q", FieldType::Number},
    {"injections.fault.i_d", FieldType::Number},
    {"injections.fault.i_q", FieldType::Number},
    {"sim.dt", FieldType::Number},
    {"sim.t_end", FieldType::Number},
    {"sim.t_fault", FieldType::Number},
    {"sim.model", FieldType::ModelName},
    {"sim.damping", FieldType::Bool},
};

constexpr std::string_view kSections[] = {
    "base", "topology", "topology.z_g", "topology.z_p", "topology.z_l", "sg", "pll",
    "injections", "injections.prefault", "injections.fault", "sim",
};

const FieldSpec* find_field(std::string_view path) {
    for (const auto& f : kFields) {
        if (f.path == path) return &f;
    }
    return nullptr;
}

bool is_section(std::string_view path) {
    return std::find(std::begin(kSections), std::end(kSections), path) != std::end(kSections);
}

Json::json_pointer pointer(std::string_view dotted) {
    std::string p = "/";
    for (char c : dotted) p += (c == '.') ? '/' : c;
    return Json::json_pointer(p);
}

void check_schema(const Json& node, const std::string& prefix) {
    if (!node.is_object()) {
        throw ValidationError("expected an object", prefix.empty() ? std::string("<root>") : prefix);
    }
    for (const auto& [key, value] : node.items()) {
        const std::string path = prefix.empty() ? key : prefix + "." + key;
        if (is_section(path)) {
            check_schema(value, path);
            continue;
        }
        const FieldSpec* field = find_field(path);
        if (!field) throw ValidationError("unknown field", path);
        switch (field->type) {
            case FieldType::Number:
                if (!value.is_number()) throw ValidationError("expected a number", path);
                break;
            case FieldType::OptionalNumber:
                if (!value.is_number() && !value.is_null()) throw ValidationError("expected a number or null", path);
                break;
            case FieldType::Bool:
                if (!value.is_boolean()) throw ValidationError("expected true or false", path);
                break;
            case FieldType::ModelName:
                if (!value.is_string() || (value != "full" && value != "reduced")) {
                    throw ValidationError("expected \"full\" or \"reduced\"", path);
                }
                break;
        }
    }
}

std::optional<double> number_at(const Json& doc, std::string_view path) {
    const auto ptr = pointer(path);
    if (!doc.contains(ptr) || doc.at(ptr).is_null()) return std::nullopt;
    return doc.at(ptr).get<double>();
}

double required_number(const Json& doc, std::string_view path) {
    const auto v = number_at(doc, path);
    if (!v) throw ValidationError("missing required field", std::string(path));
    return *v;
}

Complex required_impedance(const Json& doc, const std::string& path) {
    return {required_number(doc, path + ".re"), required_number(doc, path + ".im")};
}

double parse_double(std::string_view text, const std::string& field) {
    double value = 0.0;
    const char* end = text.data() + text.size();
    const auto res = std::from_chars(text.data(), end, value);
    if (res.ec != std::errc() || res.ptr != end) throw ValidationError("not a number: '" + std::string(text) + "'", field);
    return value;
}

CurrentInjection injection_at(const Json& doc, const std::string& section, std::optional<double> rated,
                              CurrentInjection (*fallback)(double)) {
    const auto i_d = number_at(doc, section + ".i_d");
    const auto i_q = number_at(doc, section + ".i_q");
    if (!i_d && !i_q) {
        if (!rated) throw ValidationError("missing: give injections.rated_current or explicit currents", section);
        return fallback(*rated);
    }
    if (!i_d) throw ValidationError("missing required field", section + ".i_d");
    if (!i_q) throw ValidationError("missing required field", section + ".i_q");
    return CurrentInjection(*i_d, *i_q);
}

int sign_of(LosRisk risk) {
    switch (risk) {
        case LosRisk::Accelerating: return 1;
        case LosRisk::Decelerating: return -1;
        case LosRisk::Marginal: return 0;
    }
    return 0;
}

Json number_or_null(double v) { return std::isfinite(v) ? Json(v) : Json(nullptr); }

}  // namespace

NetworkTopology Scenario::prefault_topology() const {
    NetworkTopology t = topology;
    t.fault_resistance.reset();
    return t;
}

FaultStudy Scenario::fault_study() const {
    return FaultStudy{base.omega_b(),     sg, pll, reduce(prefault_topology()), reduce(topology),
                      prefault_injection, fault_injection};
}

Override parse_override(std::string_view text) {
    const auto eq = text.find('=');
    if (eq == std::string_view::npos || eq == 0) {
        throw ValidationError("override must look like key=value: '" + std::string(text) + "'");
    }
    return {std::string(text.substr(0, eq)), std::string(text.substr(eq + 1))};
}

bool is_numeric_key(std::string_view key) {
    const FieldSpec* f = find_field(key);
    return f && (f->type == FieldType::Number || f->type == FieldType::OptionalNumber);
}

void apply_override(Json& doc, const Override& override) {
    const FieldSpec* field = find_field(override.key);
    if (!field) throw ValidationError("unknown field", override.key);
    const auto ptr = pointer(override.key);
    switch (field->type) {
        case FieldType::Number:
            doc[ptr] = parse_double(override.value, override.key);
            break;
        case FieldType::OptionalNumber:
            if (override.value == "null" || override.value == "none") {
                doc[ptr] = nullptr;
            } else {
                doc[ptr] = parse_double(override.value, override.key);
            }
            break;
        case FieldType::Bool:
            if (override.value == "true" || override.value == "1") {
                doc[ptr] = true;
            } else if (override.value == "false" || override.value == "0") {
                doc[ptr] = false;
            } else {
                throw ValidationError("expected true or false", override.key);
            }
            break;
        case FieldType::ModelName:
            if (override.value != "full" && override.value != "reduced") {
                throw ValidationError("expected full or reduced", override.key);
            }
            doc[ptr] = override.value;
            break;
    }
}

Scenario parse_scenario(const Json& doc) {
    check_schema(doc, "");

    const BaseQuantities base(required_number(doc, "base.s_b"), required_number(doc, "base.u_b"),
                              required_number(doc, "base.omega_b"));

    NetworkTopology topology{};
    topology.emf = required_number(doc, "topology.e_g");
    topology.z_g = required_impedance(doc, "topology.z_g");
    topology.z_p = required_impedance(doc, "topology.z_p");
    topology.z_l = required_impedance(doc, "topology.z_l");
    const auto rf_ohm = number_at(doc, "topology.r_f_ohm");
    if (rf_ohm) {
        if (!(*rf_ohm > 0.0)) throw ValidationError("fault resistance must be positive", "topology.r_f_ohm");
        topology.fault_resistance = ohms_to_pu(*rf_ohm, base);
    }
    topology.validate();

    const SGParams sg{required_number(doc, "sg.t_g"), required_number(doc, "sg.p_m"), topology.emf};
    sg.validate();
    const PLLParams pll{required_number(doc, "pll.kp"), required_number(doc, "pll.ki")};
    pll.validate();

    const auto rated = number_at(doc, "injections.rated_current");
    if (rated && !(*rated > 0.0)) throw ValidationError("must be positive", "injections.rated_current");
    const CurrentInjection prefault = injection_at(doc, "injections.prefault", rated,
                                                   [](double ir) { return CurrentInjection(ir, 0.0); });
    const CurrentInjection fault = injection_at(doc, "injections.fault", rated,
                                                [](double ir) { return CurrentInjection(0.0, -ir); });
    if (fault.i_q() == 0.0) {
        throw ValidationError("fault-on reactive current must be non-zero", "injections.fault.i_q");
    }

    SimConfig sim;
    if (auto v = number_at(doc, "sim.dt")) sim.dt = *v;
    if (auto v = number_at(doc, "sim.t_end")) sim.t_end = *v;
    if (auto v = number_at(doc, "sim.t_fault")) sim.t_fault = *v;
    if (doc.contains(pointer("sim.model"))) {
        sim.model = doc.at(pointer("sim.model")) == "reduced" ? ModelKind::Reduced : ModelKind::Full;
    }
    if (doc.contains(pointer("sim.damping"))) sim.damping_enabled = doc.at(pointer("sim.damping")).get<bool>();
    sim.validate();
    // Align the fault switch to the step grid.
    sim.t_fault = static_cast<double>(sim.fault_step()) * sim.dt;

    return Scenario{base, topology, rf_ohm, sg, pll, prefault, fault, sim};
}

Json read_scenario_document(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError("cannot open scenario file '" + path.string() + "'");
    try {
        return Json::parse(in);
    } catch (const Json::parse_error& e) {
        throw ValidationError(std::string("malformed scenario file: ") + e.what());
    }
}

Scenario load_scenario(const std::filesystem::path& path, const std::vector<Override>& overrides) {
    Json doc = read_scenario_document(path);
    for (const auto& o : overrides) apply_override(doc, o);
    return parse_scenario(doc);
}

Json table1_document() {
    return Json{
        {"base", {{"s_b", 20000.0}, {"u_b", 690.0}, {"omega_b", 100.0 * kPi}}},
        {"topology",
         {{"e_g", 1.05},
          {"z_g", {{"re", 0.01}, {"im", 0.1}}},
          {"z_p", {{"re", 0.01}, {"im", 0.3}}},
          {"z_l", {{"re", 0.99}, {"im", 0.1}}}}},
        {"sg", {{"t_g", 0.8}, {"p_m", 0.2465}}},
        {"pll", {{"kp", 1.0}, {"ki", 220.0}}},
        {"injections", {{"rated_current", 0.8}}},
        {"sim", {{"dt", 1e-4}, {"t_end", 3.0}, {"t_fault", 0.5}, {"model", "full"}, {"damping", true}}},
    };
}

bool outcome_agrees(const CriterionVerdict& verdict, const std::optional<LosEvent>& los) {
    if (!verdict.predicted_los) return !los.has_value();
    return los.has_value() && los->type == *verdict.predicted_los;
}

std::string outcome_label(const std::optional<LosType>& los) { return los ? to_string(*los) : "stable"; }

CaseReport run_case(const Scenario& scenario, const CaseOptions& options) {
    const FaultStudy study = scenario.fault_study();
    CaseReport r{};
    r.coeffs = smib_coefficients(study.fault, study.sg, study.pll, study.inj_fault, study.omega_b);
    r.shortages = power_shortages(study.fault, study.sg, study.inj_fault, r.coeffs);
    r.equilibria = find_equilibria(r.coeffs);
    r.approx_equilibria = approx_equilibria(r.coeffs);
    const double delta_pre = prefault_angle(study.pre, study.inj_pre);
    r.initial = initial_jump(study.pre, study.fault, delta_pre, study.pll, study.inj_fault, r.coeffs);
    r.verdict = assess(r.coeffs, r.equilibria, r.initial);
    r.prefault_power_mismatch = study.sg.mech_power - sg_power(study.pre, delta_pre, study.inj_pre);
    if (options.simulate) {
        SimConfig cfg = scenario.sim;
        cfg.record = options.record_trajectory;
        cfg.stop_on_los = options.stop_on_los;
        r.sim = simulate(study, cfg);
        r.agreement = outcome_agrees(r.verdict, r.sim.los);
    }
    return r;
}

const std::vector<Table2Row>& table2_rows() {
    static const std::vector<Table2Row> rows = {
        {"I", 220.0, 1.0, 0.8, 0.05, 0.02, LosRisk::Decelerating, true, LosType::Decelerating},
        {"II", 22.0, 0.44, 0.8, 0.05, 0.02, LosRisk::Accelerating, true, LosType::Accelerating},
        {"III", 50.0, 1.0, 0.8, 0.05, 0.02, LosRisk::Accelerating, false, std::nullopt},
        {"IV", 22.0, 0.44, 1.0, 0.05, 0.02, LosRisk::Accelerating, false, std::nullopt},
        {"V", 22.0, 0.44, 0.8, 0.12, 0.05, LosRisk::Accelerating, false, std::nullopt},
    };
    return rows;
}

Json table2_document(const Table2Row& row) {
    Json doc = table1_document();
    doc["pll"]["ki"] = row.ki;
    doc["pll"]["kp"] = row.kp;
    doc["sg"]["t_g"] = row.tg;
    doc["topology"]["r_f_ohm"] = row.rf_ohm;
    return doc;
}

std::vector<Table2Result> run_table2(const std::vector<Override>& overrides) {
    std::vector<Table2Result> results;
    for (const auto& row : table2_rows()) {
        Json doc = table2_document(row);
        for (const auto& o : overrides) apply_override(doc, o);
        const Scenario scenario = parse_scenario(doc);

        Table2Result res{row, run_case(scenario), 0.0, false, false, false, false};
        res.residual_voltage_pu = load_bus_voltage(scenario.topology, 0.0, CurrentInjection(0.0, 0.0));

        const auto& v = res.report.verdict;
        const bool no_area = v.no_sep || v.beyond_uep;
        res.ek_exceeds = row.expected_risk == LosRisk::Decelerating ? (no_area || v.margin_decel <= 0.0)
                                                                    : (no_area || v.margin_accel <= 0.0);
        res.condition_match = v.risk == row.expected_risk && res.ek_exceeds == row.expected_ek_exceeds;
        res.criterion_match = v.predicted_los == row.expected;
        const auto sim_los = res.report.sim.los ? std::optional<LosType>(res.report.sim.los->type) : std::nullopt;
        res.simulation_match = sim_los == row.expected;
        results.push_back(std::move(res));
    }
    return results;
}

SweepAxis parse_axis(std::string_view text) {
    const Override o = parse_override(text);
    if (!is_numeric_key(o.key)) throw ValidationError("not a numeric scenario field", o.key);
    const auto c1 = o.value.find(':');
    const auto c2 = c1 == std::string::npos ? std::string::npos : o.value.find(':', c1 + 1);
    if (c2 == std::string::npos) throw ValidationError("axis must look like key=start:stop:count", o.key);
    const std::string_view v(o.value);
    SweepAxis axis{o.key, parse_double(v.substr(0, c1), o.key), parse_double(v.substr(c1 + 1, c2 - c1 - 1), o.key), 0};
    const double count = parse_double(v.substr(c2 + 1), o.key);
    if (count < 1.0 || count != std::floor(count)) throw ValidationError("axis count must be a positive integer", o.key);
    axis.count = static_cast<long>(count);
    return axis;
}

std::vector<SweepRecord> sweep(const SweepSpec& spec) {
    if (spec.axes.empty()) throw ValidationError("sweep needs at least one axis");
    long total = 1;
    for (const auto& axis : spec.axes) {
        if (!is_numeric_key(axis.key)) throw ValidationError("not a numeric scenario field", axis.key);
        if (axis.count < 1) throw ValidationError("axis count must be positive", axis.key);
        if (axis.count > kMaxSweepPoints || total > kMaxSweepPoints / axis.count) {
            throw ValidationError("sweep grid exceeds " + std::to_string(kMaxSweepPoints) + " points");
        }
        total *= axis.count;
    }
    // Fail fast on a broken base document.
    check_schema(spec.scenario, "");

    std::vector<SweepRecord> records(static_cast<std::size_t>(total));
    auto evaluate = [&](long index) {
        SweepRecord& rec = records[static_cast<std::size_t>(index)];
        rec.axis_values.resize(spec.axes.size());
        long rem = index;
        for (std::size_t i = spec.axes.size(); i-- > 0;) {
            const auto& axis = spec.axes[i];
            const long k = rem % axis.count;
            rem /= axis.count;
            rec.axis_values[i] =
                axis.count == 1 ? axis.start
                                : axis.start + (axis.stop - axis.start) * static_cast<double>(k) /
                                                   static_cast<double>(axis.count - 1);
        }
        try {
            Json doc = spec.scenario;
            for (std::size_t i = 0; i < spec.axes.size(); ++i) doc[pointer(spec.axes[i].key)] = rec.axis_values[i];
            const Scenario scenario = parse_scenario(doc);
            const CaseReport report = run_case(scenario, CaseOptions{spec.check_sim, false, true});
            const auto& v = report.verdict;
            rec.a = report.coeffs.a;
            rec.sign_a = sign_of(v.risk);
            rec.sep_exists = report.equilibria.exists;
            rec.s1 = v.s1;
            rec.s2 = v.s2;
            rec.s3 = v.s3;
            rec.ek0 = report.initial.e_k_post;
            rec.margin_decel = v.margin_decel;
            rec.margin_accel = v.margin_accel;
            rec.stable_unified = v.stable_unified;
            rec.stable_type_specific = v.stable_type_specific;
            if (spec.check_sim) rec.agreement = report.agreement;
        } catch (const Error& e) {
            rec.error = e.what();
        }
    };

    unsigned workers = spec.workers ? spec.workers : std::max(1u, std::thread::hardware_concurrency());
    workers = static_cast<unsigned>(std::min<long>(workers, total));
    std::atomic<long> next{0};
    auto worker = [&] {
        for (long i = next++; i < total; i = next++) evaluate(i);
    };
    if (workers <= 1) {
        worker();
    } else {
        std::vector<std::jthread> pool;
        for (unsigned w = 0; w < workers; ++w) pool.emplace_back(worker);
    }
    return records;
}

void write_sweep_csv(std::ostream& out, const SweepSpec& spec, const std::vector<SweepRecord>& records) {
    for (const auto& axis : spec.axes) out << axis.key << ',';
    out << "a,sign_a,sep_exists,S1,S2,S3,Ek0,margin_decel,margin_accel,stable_unified,stable_type_specific";
    if (spec.check_sim) out << ",agreement";
    out << '\n';
    for (const auto& r : records) {
        for (double v : r.axis_values) out << format_number(v) << ',';
        if (r.error) {
            const int n = spec.check_sim ? 12 : 11;
            for (int i = 0; i < n; ++i) out << (i ? ",nan" : "nan");
            out << '\n';
            continue;
        }
        out << format_number(r.a) << ',' << r.sign_a << ',' << int(r.sep_exists) << ',' << format_number(r.s1) << ','
            << format_number(r.s2) << ',' << format_number(r.s3) << ',' << format_number(r.ek0) << ','
            << format_number(r.margin_decel) << ',' << format_number(r.margin_accel) << ',' << int(r.stable_unified)
            << ',' << int(r.stable_type_specific);
        if (spec.check_sim) out << ',' << int(r.agreement.value_or(false));
        out << '\n';
    }
}

Json verdict_document(const CriterionVerdict& v) {
    return Json{
        {"risk", to_string(v.risk)},
        {"S_1", number_or_null(v.s1)},
        {"S_2", number_or_null(v.s2)},
        {"S_3", number_or_null(v.s3)},
        {"margin_decel", number_or_null(v.margin_decel)},
        {"margin_accel", number_or_null(v.margin_accel)},
        {"stable_unified", v.stable_unified},
        {"stable_type_specific", v.stable_type_specific},
        {"no_sep", v.no_sep},
        {"beyond_uep", v.beyond_uep},
        {"result", outcome_label(v.predicted_los)},
    };
}

Json analysis_document(const CaseReport& r) {
    const auto eq_doc = [](const EquilibriumSet& eq) {
        return Json{{"delta_e", number_or_null(eq.sep)},
                    {"delta_1", number_or_null(eq.left_uep)},
                    {"delta_2", number_or_null(eq.right_uep)},
                    {"exists", eq.exists},
                    {"margin", eq.margin}};
    };
    Json doc{
        {"coefficients",
         {{"T_p", r.coeffs.tp},
          {"T_eq", r.coeffs.teq},
          {"alpha", r.coeffs.alpha},
          {"a", r.coeffs.a},
          {"b", r.coeffs.b},
          {"phi", r.coeffs.phi},
          {"d", r.coeffs.d}}},
        {"power_shortages",
         {{"P_ps", r.shortages.p_ps},
          {"dP_ps", r.shortages.dp_ps},
          {"alpha_dP_ps", r.shortages.alpha_dp_ps},
          {"P_gs", r.shortages.p_gs},
          {"dP_gs", r.shortages.dp_gs}}},
        {"equilibria", eq_doc(r.equilibria)},
        {"equilibria_approx", eq_doc(r.approx_equilibria)},
        {"initial_state",
         {{"delta_0_minus", r.initial.delta_pre},
          {"delta_0_plus", r.initial.delta_post},
          {"domega_0_plus", r.initial.domega_post},
          {"u_q_0_plus", r.initial.u_q_post},
          {"E_k_0_plus", r.initial.e_k_post}}},
        {"verdict", verdict_document(r.verdict)},
        {"prefault_power_mismatch", r.prefault_power_mismatch},
    };
    return doc;
}

}  // namespace ibgsg
