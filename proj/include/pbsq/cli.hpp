#pragma once

#include <chrono>
#include <filesystem>
#include <future>
#include <json.hpp>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "pbsq/convergence.hpp"
#include "pbsq/dynamics.hpp"
#include "pbsq/io.hpp"
#include "pbsq/metric.hpp"
#include "pbsq/metrics.hpp"
#include "pbsq/model.hpp"
#include "pbsq/rank_one.hpp"
#include "pbsq/resolution.hpp"
#include "pbsq/states.hpp"
#include "pbsq/swanson.hpp"
#include "pbsq/types.hpp"

namespace pbsq::cli {

using nlohmann::json;

// ---------------------------------------------------------------------------
// configuration

struct GridConfig {
    int nodes = 400;
    int n_max = 96;
    std::string scheme = "trapezoid";  // or "gauss-hermite"
};

struct RunConfig {
    std::string model_name = "identity";
    json model_params = json::object();
    int dim = 64;
    GridConfig grid;
    std::vector<json> tasks;
    std::map<std::string, double> tolerances;
    std::string output_dir = "out";
};

namespace detail {

inline void require_keys(const json& obj, const std::set<std::string>& allowed,
                         const std::string& where) {
    for (const auto& item : obj.items())
        if (!allowed.count(item.key()))
            throw UsageError("unknown key \"" + item.key() + "\" in " + where);
}

inline Complex parse_complex(const json& j, const std::string& where) {
    if (j.is_number()) return Complex(j.get<double>(), 0.0);
    if (j.is_array() && j.size() == 2 && j[0].is_number() && j[1].is_number())
        return Complex(j[0].get<double>(), j[1].get<double>());
    throw UsageError(where + ": expected a number or [re, im]");
}

inline FockVector parse_vector(const json& j, const std::string& where) {
    if (!j.is_array() || j.empty()) throw UsageError(where + ": expected a nonempty array");
    FockVector v(j.size());
    for (size_t i = 0; i < j.size(); ++i) v(i) = parse_complex(j[i], where);
    return v;
}

// The tolerance map accepts only known residual names; a silent typo in a
// tolerance key would fake a pass.
inline const std::map<std::string, double>& default_tolerances() {
    static const std::map<std::string, double> defaults = {
        {"biorthogonality", 1e-8},       {"ladder", 1e-9},
        {"commutator", 1e-12},           {"groundstate", 1e-9},
        {"metric_action", 1e-10},        {"operator_relations", 1e-8},
        {"pairing", 1e-7},               {"construction_agreement", 1e-7},
        {"eigen_relation", 1e-8},        {"vacuum_relation", 1e-7},
        {"identity_residual", 1e-5},     {"variance_product", 1e-7},
        {"dynamics_element", 1e-8},      {"ode_agreement", 1e-8},
        {"identification", 1e-7},        {"radius_match", 0.02},
        {"norm_match", 1e-6},            {"uncertainty_product", 1e-6},
        {"eta_probability", 1e-7},       {"number_variance", 1e-6},
    };
    return defaults;
}

inline const std::set<std::string>& known_tasks() {
    static const std::set<std::string> tasks = {"validate", "states", "radius", "dynamics",
                                                "identity"};
    return tasks;
}

}  // namespace detail

inline RunConfig parse_config(const json& j) {
    detail::require_keys(j, {"model", "dim", "grid", "tasks", "tolerances", "output_dir"},
                         "config");
    RunConfig cfg;
    cfg.tolerances = detail::default_tolerances();
    if (j.contains("model")) {
        const json& m = j.at("model");
        detail::require_keys(m, {"name", "params"}, "model");
        cfg.model_name = m.value("name", "identity");
        if (m.contains("params")) cfg.model_params = m.at("params");
    }
    if (j.contains("dim")) cfg.dim = j.at("dim").get<int>();
    if (j.contains("grid")) {
        const json& g = j.at("grid");
        detail::require_keys(g, {"nodes", "n_max", "scheme"}, "grid");
        cfg.grid.nodes = g.value("nodes", cfg.grid.nodes);
        cfg.grid.n_max = g.value("n_max", cfg.grid.n_max);
        cfg.grid.scheme = g.value("scheme", cfg.grid.scheme);
        if (cfg.grid.scheme != "trapezoid" && cfg.grid.scheme != "gauss-hermite")
            throw UsageError("grid.scheme must be \"trapezoid\" or \"gauss-hermite\"");
    }
    if (j.contains("tolerances")) {
        for (const auto& item : j.at("tolerances").items()) {
            if (!cfg.tolerances.count(item.key()))
                throw UsageError("unknown tolerance \"" + item.key() + "\"");
            const double v = item.value().get<double>();
            if (!(v > 0.0)) throw UsageError("tolerance \"" + item.key() + "\" must be positive");
            cfg.tolerances[item.key()] = v;
        }
    }
    if (!j.contains("tasks") || !j.at("tasks").is_array() || j.at("tasks").empty())
        throw UsageError("config needs a nonempty \"tasks\" array");
    for (const json& t : j.at("tasks")) {
        if (!t.is_object() || !t.contains("type"))
            throw UsageError("every task needs a \"type\"");
        if (!detail::known_tasks().count(t.at("type").get<std::string>()))
            throw UsageError("unknown task type \"" + t.at("type").get<std::string>() + "\"");
        cfg.tasks.push_back(t);
    }
    if (j.contains("output_dir")) cfg.output_dir = j.at("output_dir").get<std::string>();
    return cfg;
}

inline DeformationModel build_model(const RunConfig& cfg) {
    if (cfg.model_name == "identity") {
        detail::require_keys(cfg.model_params, {}, "identity params");
        return build_identity(cfg.dim);
    }
    if (cfg.model_name == "rank-one") {
        detail::require_keys(cfg.model_params, {"alpha", "u", "v"}, "rank-one params");
        RankOneSpec spec = default_rank_one_spec(cfg.dim);
        if (cfg.model_params.contains("alpha"))
            spec.alpha = detail::parse_complex(cfg.model_params.at("alpha"), "rank-one alpha");
        if (cfg.model_params.contains("u"))
            spec.u = detail::parse_vector(cfg.model_params.at("u"), "rank-one u");
        if (cfg.model_params.contains("v"))
            spec.v = detail::parse_vector(cfg.model_params.at("v"), "rank-one v");
        return build_rank_one(spec, cfg.dim);
    }
    if (cfg.model_name == "swanson") {
        detail::require_keys(cfg.model_params, {"nu"}, "swanson params");
        const double nu = cfg.model_params.value("nu", 0.3);
        if (nu == 0.0) return build_identity(cfg.dim);  // hermitian limit
        const Grid grid = (cfg.grid.scheme == "gauss-hermite")
                              ? make_gauss_hermite_grid(cfg.grid.nodes)
                              : swanson_default_grid(nu, cfg.grid.n_max, cfg.grid.nodes);
        return build_swanson(SwansonSpec{nu}, cfg.dim, grid, cfg.grid.n_max);
    }
    throw UsageError("unknown model \"" + cfg.model_name + "\"");
}

// ---------------------------------------------------------------------------
// task execution

enum class TaskStatus { pass, flagged, fail };

inline const char* to_string(TaskStatus s) {
    switch (s) {
        case TaskStatus::pass: return "pass";
        case TaskStatus::flagged: return "flagged";
        default: return "fail";
    }
}

struct TaskResult {
    std::string type;
    TaskStatus status = TaskStatus::pass;
    json details = json::object();
    std::vector<std::pair<std::string, CsvTable>> tables;  // suffix -> table
};

namespace detail {

struct CheckSink {
    CsvTable table{{"check", "identity", "value", "tolerance", "status"}, {}};
    TaskStatus status = TaskStatus::pass;

    void add(const std::string& name, const std::string& identity, double value, double tol) {
        const bool ok = value <= tol;
        table.add_row({name, identity, format_full(value), format_full(tol), ok ? "pass" : "fail"});
        if (!ok) status = TaskStatus::fail;
    }
    void flag(const std::string& name, const std::string& identity, const std::string& note) {
        table.add_row({name, identity, note, "", "flagged"});
        if (status == TaskStatus::pass) status = TaskStatus::flagged;
    }
};

inline TaskResult run_validate(const DeformationModel& model, const RunConfig& cfg,
                               const json& task) {
    require_keys(task, {"type", "n_max", "z"}, "validate task");
    const int n_max = task.value("n_max", 16);
    const Complex z = task.contains("z") ? parse_complex(task.at("z"), "validate z")
                                         : Complex(0.3, 0.1);
    const auto tol = [&cfg](const std::string& k) { return cfg.tolerances.at(k); };
    TaskResult res;
    res.type = "validate";
    CheckSink sink;

    const BiorthReport bio = biorthogonality_matrix(model, n_max);
    sink.add("biorthogonality_offdiag", "<phi_n,Psi_m> = delta_nm", bio.max_offdiagonal,
             tol("biorthogonality"));
    sink.add("biorthogonality_diag", "<phi_n,Psi_n> = 1", bio.max_diagonal_deviation,
             tol("biorthogonality"));
    sink.add("ladder_relations", "b phi_n = sqrt(n+1) phi_{n+1} (and the three mirrors)",
             bio.ladder_residuals.maxCoeff(), tol("ladder"));
    if (!bio.flagged.empty())
        sink.flag("tail_reliability", "truncation tail rule",
                  std::to_string(bio.flagged.size()) + " basis vectors above tail tolerance");

    const Eigen::Index lead = model.dim - 1;
    const FockOperator comm = commutator(model.ladder_a, model.ladder_b);
    sink.add("commutator", "[a, b] = 1",
             (comm - FockOperator::Identity(model.dim, model.dim))
                 .topLeftCorner(lead, lead)
                 .norm(),
             tol("commutator"));
    sink.add("groundstate_phi", "a phi_0 = 0", (model.ladder_a * model.phi_fock(0)).norm(),
             tol("groundstate"));
    sink.add("groundstate_psi", "b^dag Psi_0 = 0",
             (model.ladder_b.adjoint() * model.psi_fock(0)).norm(), tol("groundstate"));

    if (model.regular) {
        const MetricResult eta = metric_eta(model);
        double worst = 0.0;
        for (int n = 0; n <= std::min(n_max, model.dim / 2); ++n)
            worst = std::max(worst, (eta.eta * model.phi_fock(n) - model.psi_fock(n)).norm());
        sink.add("metric_action", "eta phi_n = Psi_n", worst, tol("metric_action"));

        const OperatorRelationReport rel = verify_operator_relations(model, z);
        sink.add("operator_relations", "S(z)^{-1} = S(-z) = T(z)^dag and the intertwiner",
                 rel.max_residual, tol("operator_relations"));
    } else {
        sink.add("non_hermiticity_gap", "a^dag != b",
                 0.1 / std::max((model.ladder_a.adjoint() - model.ladder_b).norm(), 1e-300),
                 1.0);  // value below 1 certifies the gap exceeds 0.1
    }

    res.status = sink.status;
    res.tables.emplace_back("checks", std::move(sink.table));
    res.details["n_max"] = n_max;
    res.details["model"] = model.name;
    return res;
}

inline void append_state_csv(CsvTable& t, const std::string& label, const State& s) {
    if (std::holds_alternative<FockVector>(s)) {
        const FockVector& v = std::get<FockVector>(s);
        for (Eigen::Index n = 0; n < v.size(); ++n)
            t.add_row({label, std::to_string(n), format_full(v(n).real()),
                       format_full(v(n).imag())});
    } else {
        const GridFunction& f = std::get<GridFunction>(s);
        for (Eigen::Index i = 0; i < f.grid.size(); ++i)
            t.add_row({label, format_full(f.grid.nodes(i)), format_full(f.values(i).real()),
                       format_full(f.values(i).imag())});
    }
}

inline TaskResult run_states(const DeformationModel& model, const RunConfig& cfg,
                             const json& task) {
    require_keys(task, {"type", "z", "alpha"}, "states task");
    const Complex z = task.contains("z") ? parse_complex(task.at("z"), "states z")
                                         : Complex(0.4, 0.0);
    const auto tol = [&cfg](const std::string& k) { return cfg.tolerances.at(k); };
    TaskResult res;
    res.type = "states";
    CheckSink sink;

    const BiStateResult bc = bi_coherent(model, z);
    const BiCoherentResiduals bc_res = verify_bi_coherent(model, z, bc.pair);
    sink.add("bi_coherent_eigen_left", "a phi_z = z phi_z", bc_res.eigen_left,
             tol("eigen_relation"));
    sink.add("bi_coherent_eigen_right", "b^dag Psi_z = z Psi_z", bc_res.eigen_right,
             tol("eigen_relation"));
    sink.add("bi_coherent_pairing", "<phi_z, Psi_z> = 1", bc_res.pairing_deviation,
             tol("pairing"));

    const BiStateResult bs = bi_squeezed(model, z, Construction::series);
    sink.add("bi_squeezed_pairing", "<tau_z, kappa_z> = 1", std::abs(bs.pair.pairing - 1.0),
             tol("pairing"));
    if (bs.diagnostics.stalled)
        sink.flag("bi_squeezed_series", "series convergence", "basis exhausted before the stop rule");

    if (model.regular) {
        const BiStateResult ta = bi_squeezed(model, z, Construction::t_action);
        const BiStateResult oa = bi_squeezed(model, z, Construction::operator_action);
        const double agree = std::max(
            state_norm(state_difference(ta.pair.left, oa.pair.left)),
            std::max(state_norm(state_difference(ta.pair.left, bs.pair.left)),
                     state_norm(state_difference(oa.pair.left, bs.pair.left))));
        sink.add("bi_squeezed_constructions", "T-action = operator-action = series", agree,
                 tol("construction_agreement"));

        const Complex alpha = task.contains("alpha")
                                  ? parse_complex(task.at("alpha"), "states alpha")
                                  : Complex(0.5, 0.0);
        const CoherentBiSqueezedResult cbs = coherent_bi_squeezed(model, alpha, z);
        const CoherentBiSqueezedResiduals cr =
            verify_coherent_bi_squeezed(model, alpha, z, cbs.pair);
        sink.add("coherent_bi_squeezed_routes", "T W(alpha) S(z) e_0 = U(alpha) S(z) phi_0",
                 std::max(cbs.route_residual_left, cbs.route_residual_right),
                 tol("construction_agreement"));
        sink.add("coherent_bi_squeezed_vacuum",
                 "[cosh r (a - alpha) - e^{i theta} sinh r (b - conj alpha)] tau = 0",
                 std::max(cr.vacuum_left, cr.vacuum_right), tol("vacuum_relation"));
        sink.add("coherent_bi_squeezed_pairing", "<tau^alpha_z, kappa^alpha_z> = 1",
                 cr.pairing_deviation, tol("pairing"));
    }

    CsvTable states_table{{"state", "index_or_x", "re", "im"}, {}};
    append_state_csv(states_table, "phi_z", bc.pair.left);
    append_state_csv(states_table, "Psi_z", bc.pair.right);
    append_state_csv(states_table, "tau_z", bs.pair.left);
    append_state_csv(states_table, "kappa_z", bs.pair.right);

    res.status = sink.status;
    res.tables.emplace_back("checks", std::move(sink.table));
    res.tables.emplace_back("coefficients", std::move(states_table));
    res.details["z"] = {z.real(), z.imag()};
    res.details["series_terms"] = bs.diagnostics.terms_used;
    res.details["series_last_term_norm"] = bs.diagnostics.last_term_norm;
    res.details["radius_margin"] = bs.diagnostics.estimated_radius_margin;
    return res;
}

inline TaskResult run_radius(const DeformationModel& model, const RunConfig& cfg,
                             const json& task) {
    require_keys(task, {"type"}, "radius task");
    TaskResult res;
    res.type = "radius";
    CheckSink sink;
    if (model.rep == Representation::grid) {
        const RadiusReport rep = radius_report(model, model.nu);
        res.details["rho_theoretical"] = rep.rho_theoretical;
        res.details["rho_paper_form"] = rep.rho_paper_form;
        res.details["rho_empirical"] = rep.rho_empirical;
        res.details["agreement"] = to_string(rep.agreement);
        const double best =
            std::min(std::abs(rep.rho_empirical - rep.rho_theoretical) / rep.rho_theoretical,
                     std::abs(rep.rho_empirical - rep.rho_paper_form) / rep.rho_paper_form);
        sink.add("radius_match", "ratio-test radius matches one closed form", best,
                 cfg.tolerances.at("radius_match"));
        CsvTable trace{{"k", "log_term_ratio"}, {}};
        const EmpiricalRadius emp = convergence_radius_empirical(model);
        for (size_t k = 0; k < emp.ratio_trace.size(); k += 20)
            trace.add_row({std::to_string(k), format_full(emp.ratio_trace[k])});
        res.tables.emplace_back("ratio_trace", std::move(trace));
    } else {
        const EmpiricalRadius emp = convergence_radius_empirical(model);
        res.details["rho_empirical"] = emp.infinite ? "inf" : format_full(emp.rho_hat);
        sink.add("radius_entire", "bounded deformation gives an entire series",
                 emp.infinite ? 0.0 : 1.0, 0.5);
    }
    res.status = sink.status;
    res.tables.emplace_back("checks", std::move(sink.table));
    return res;
}

inline TaskResult run_dynamics(const DeformationModel& model, const RunConfig& cfg,
                               const json& task) {
    require_keys(task, {"type", "Lambda", "t_max", "t_points"}, "dynamics task");
    const double lambda = task.value("Lambda", 0.1);
    const double t_max = task.value("t_max", 2.0);
    const int t_points = task.value("t_points", 20);
    const auto tol = [&cfg](const std::string& k) { return cfg.tolerances.at(k); };
    TaskResult res;
    res.type = "dynamics";
    CheckSink sink;

    CsvTable table{{"t", "psi_phi_re", "psi_phi_im", "sinh2_closed", "element_deviation",
                    "variance_product_re", "variance_product_im", "product_deviation"},
                   {}};
    double worst_element = 0.0, worst_product = 0.0;
    for (int i = 1; i <= t_points; ++i) {
        const double t = t_max * i / t_points;
        const DynamicsParams p{0.0, lambda, t};
        const NumberElements e = number_matrix_elements(model, p);
        const double closed = std::pow(std::sinh(2.0 * lambda * t), 2);
        const QuadratureVariances q = quadrature_variance_product(model, p);
        worst_element = std::max(worst_element, std::abs(e.psi_phi - closed));
        worst_product = std::max(worst_product, std::abs(q.product - 0.5));
        table.add_row({format_full(t), format_full(e.psi_phi.real()),
                       format_full(e.psi_phi.imag()), format_full(closed),
                       format_full(std::abs(e.psi_phi - closed)),
                       format_full(q.product.real()), format_full(q.product.imag()),
                       format_full(std::abs(q.product - 0.5))});
    }
    sink.add("number_element", "<Psi_0, N(t) phi_0> = sinh^2(2 Lambda t)", worst_element,
             tol("dynamics_element"));
    sink.add("variance_product", "delta X+ delta X- = 1/2", worst_product,
             tol("variance_product"));

    const DynamicsParams p_end{0.0, lambda, t_max / 2.0};
    const CapitalOps analytic = capital_ops_analytic(model, p_end);
    const CapitalOps numeric = capital_ops_numeric(model, p_end, 1e-9);
    sink.add("ode_agreement", "Heisenberg solution X+-(t) = X+-(0) e^{+-2 Lambda t}",
             std::max((analytic.Xplus_t - numeric.Xplus_t).norm(),
                      (analytic.Xminus_t - numeric.Xminus_t).norm()),
             tol("ode_agreement"));

    const IdentificationReport ident = squeeze_hamiltonian_identification(model, lambda);
    sink.add("squeeze_identification", "exp(-iH)|_{omega=0} is a deformed squeezer",
             std::min(ident.residual_forward, ident.residual_backward), tol("identification"));
    res.details["identification_chosen"] = ident.chosen;
    res.details["identification_residual_forward"] = ident.residual_forward;
    res.details["identification_residual_backward"] = ident.residual_backward;
    res.details["Lambda"] = lambda;

    res.status = sink.status;
    res.tables.emplace_back("checks", std::move(sink.table));
    res.tables.emplace_back("trajectory", std::move(table));
    return res;
}

inline TaskResult run_identity_task(const DeformationModel& model, const RunConfig& cfg,
                                    const json& task) {
    require_keys(task, {"type", "z", "R", "radial_order", "angular_order", "pairs"},
                 "identity task");
    const Complex z = task.contains("z") ? parse_complex(task.at("z"), "identity z")
                                         : Complex(0.0, 0.0);
    QuadratureSpec spec;
    spec.cutoff_radius = task.value("R", 6.0);
    spec.radial_order = task.value("radial_order", 80);
    spec.angular_order = task.value("angular_order", 64);
    std::vector<std::pair<int, int>> pairs = {{0, 0}, {1, 2}, {3, 1}};
    if (task.contains("pairs")) {
        pairs.clear();
        for (const auto& p : task.at("pairs"))
            pairs.emplace_back(p.at(0).get<int>(), p.at(1).get<int>());
    }
    TaskResult res;
    res.type = "identity";
    CheckSink sink;
    CsvTable table{{"f", "g", "residual_re", "residual_im", "abs", "discrete_abs"}, {}};
    for (const auto& [fi, gi] : pairs) {
        const FockVector f = basis_vector(model.dim, fi);
        const FockVector g = basis_vector(model.dim, gi);
        const Complex discrete = discrete_quasi_basis_residual(model, f, g);
        Complex continuous{0.0, 0.0};
        if (model.regular) {
            continuous = identity_resolution_residual(model, z, f, g, spec);
            sink.add("identity_pair_" + std::to_string(fi) + "_" + std::to_string(gi),
                     "(1/pi) int <f,tau^alpha_z><kappa^alpha_z,g> = <f,g>",
                     std::abs(continuous), cfg.tolerances.at("identity_residual"));
        } else {
            sink.add("quasi_basis_pair_" + std::to_string(fi) + "_" + std::to_string(gi),
                     "sum_n <f,phi_n><Psi_n,g> = <f,g>", std::abs(discrete),
                     cfg.tolerances.at("identity_residual"));
        }
        table.add_row({std::to_string(fi), std::to_string(gi),
                       format_full(continuous.real()), format_full(continuous.imag()),
                       format_full(std::abs(continuous)), format_full(std::abs(discrete))});
    }
    res.status = sink.status;
    res.tables.emplace_back("checks", std::move(sink.table));
    res.tables.emplace_back("residuals", std::move(table));
    res.details["R"] = spec.cutoff_radius;
    res.details["radial_order"] = spec.radial_order;
    res.details["angular_order"] = spec.angular_order;
    return res;
}

inline TaskResult run_task(const DeformationModel& model, const RunConfig& cfg,
                           const json& task) {
    const std::string type = task.at("type").get<std::string>();
    try {
        if (type == "validate") return run_validate(model, cfg, task);
        if (type == "states") return run_states(model, cfg, task);
        if (type == "radius") return run_radius(model, cfg, task);
        if (type == "dynamics") return run_dynamics(model, cfg, task);
        if (type == "identity") return run_identity_task(model, cfg, task);
    } catch (const UsageError&) {
        throw;  // configuration mistakes abort the run
    } catch (const Error& err) {
        TaskResult res;
        res.type = type;
        res.status = TaskStatus::fail;
        res.details["error"] = err.what();
        return res;
    }
    throw UsageError("unknown task type \"" + type + "\"");
}

}  // namespace detail

// ---------------------------------------------------------------------------
// run / scan drivers

struct RunReport {
    std::vector<TaskResult> results;
    double wall_seconds = 0.0;

    int exit_code() const {
        bool flagged = false;
        for (const auto& r : results) {
            if (r.status == TaskStatus::fail) return 1;
            if (r.status == TaskStatus::flagged) flagged = true;
        }
        return flagged ? 2 : 0;
    }

    json to_json() const {
        json out;
        out["wall_seconds"] = wall_seconds;
        out["tasks"] = json::array();
        for (const auto& r : results) {
            json t;
            t["type"] = r.type;
            t["status"] = to_string(r.status);
            t["details"] = r.details;
            out["tasks"].push_back(std::move(t));
        }
        return out;
    }
};

/// Executes the configured tasks in declared order (optionally in parallel;
/// outputs are written atomically per task either way) and emits one CSV per
/// table plus a JSON report. Exit status: 0 pass, 2 flagged, 1 fail.
inline RunReport run_config(const json& config_json, bool parallel = false,
                            const std::string& output_dir_override = "") {
    const auto t0 = std::chrono::steady_clock::now();
    RunConfig cfg = parse_config(config_json);
    if (!output_dir_override.empty()) cfg.output_dir = output_dir_override;
    const DeformationModel model = build_model(cfg);

    RunReport report;
    report.results.resize(cfg.tasks.size());
    if (parallel) {
        std::vector<std::future<TaskResult>> futures;
        futures.reserve(cfg.tasks.size());
        for (const json& task : cfg.tasks)
            futures.push_back(std::async(std::launch::async, [&model, &cfg, task] {
                return detail::run_task(model, cfg, task);
            }));
        for (size_t i = 0; i < futures.size(); ++i) report.results[i] = futures[i].get();
    } else {
        for (size_t i = 0; i < cfg.tasks.size(); ++i)
            report.results[i] = detail::run_task(model, cfg, cfg.tasks[i]);
    }

    const std::filesystem::path out_dir(cfg.output_dir);
    for (size_t i = 0; i < report.results.size(); ++i) {
        const TaskResult& r = report.results[i];
        const std::string stem = std::to_string(i) + "_" + r.type;
        for (const auto& [suffix, table] : r.tables)
            atomic_write_file(out_dir / (stem + "_" + suffix + ".csv"), table.to_string());
        json task_json;
        task_json["type"] = r.type;
        task_json["status"] = to_string(r.status);
        task_json["details"] = r.details;
        atomic_write_file(out_dir / (stem + ".json"), task_json.dump(2) + "\n");
    }
    report.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    atomic_write_file(out_dir / "report.json", report.to_json().dump(2) + "\n");
    return report;
}

/// One row per axis value with the scalar outputs of the configured task.
/// Recognized axes: nu (swanson model parameter; radius/validate tasks),
/// r (|z| of the states task), t and Lambda (dynamics task).
inline CsvTable scan_config(const json& config_json, const std::string& axis,
                            const std::vector<double>& values) {
    RunConfig base = parse_config(config_json);
    if (base.tasks.size() != 1)
        throw UsageError("scan expects a config with exactly one task");
    const std::string task_type = base.tasks[0].at("type").get<std::string>();

    const bool axis_ok = (axis == "nu" && (task_type == "radius" || task_type == "validate")) ||
                         (axis == "r" && task_type == "states") ||
                         ((axis == "t" || axis == "Lambda") && task_type == "dynamics");
    if (!axis_ok)
        throw UsageError("axis \"" + axis + "\" is not a parameter of task \"" + task_type +
                         "\"");

    CsvTable out;
    if (task_type == "radius")
        out.header = {"nu", "rho_empirical", "rho_theoretical", "rho_paper_form"};
    else if (task_type == "validate")
        out.header = {"nu", "max_offdiagonal", "max_ladder_residual"};
    else if (task_type == "states")
        out.header = {"r", "pairing_re", "pairing_im", "pairing_deviation"};
    else
        out.header = {axis, "psi_phi_re", "sinh2_closed", "element_deviation",
                      "variance_product_re", "product_deviation"};

    for (double value : values) {
        RunConfig cfg = base;
        json task = cfg.tasks[0];
        if (axis == "nu") {
            if (cfg.model_name != "swanson")
                throw UsageError("axis \"nu\" needs the swanson model");
            cfg.model_params["nu"] = value;
        }
        const DeformationModel model = build_model(cfg);
        if (task_type == "radius") {
            const RadiusReport rep = radius_report(model, value);
            out.add_row({format_full(value), format_full(rep.rho_empirical),
                         format_full(rep.rho_theoretical), format_full(rep.rho_paper_form)});
        } else if (task_type == "validate") {
            const BiorthReport rep = biorthogonality_matrix(model, task.value("n_max", 16));
            out.add_row({format_full(value), format_full(rep.max_offdiagonal),
                         format_full(rep.ladder_residuals.maxCoeff())});
        } else if (task_type == "states") {
            const Complex z0 = task.contains("z")
                                   ? detail::parse_complex(task.at("z"), "states z")
                                   : Complex(0.4, 0.0);
            const Complex z = std::polar(value, std::arg(z0));
            const BiStateResult bs = bi_squeezed(model, z, Construction::series);
            out.add_row({format_full(value), format_full(bs.pair.pairing.real()),
                         format_full(bs.pair.pairing.imag()),
                         format_full(std::abs(bs.pair.pairing - 1.0))});
        } else {
            DynamicsParams p{0.0, task.value("Lambda", 0.1), task.value("t_max", 1.0)};
            if (axis == "t") p.t = value;
            if (axis == "Lambda") p.Lambda = value;
            const NumberElements e = number_matrix_elements(model, p);
            const double closed = std::pow(std::sinh(2.0 * p.Lambda * p.t), 2);
            const QuadratureVariances q = quadrature_variance_product(model, p);
            out.add_row({format_full(value), format_full(e.psi_phi.real()),
                         format_full(closed), format_full(std::abs(e.psi_phi - closed)),
                         format_full(q.product.real()),
                         format_full(std::abs(q.product - 0.5))});
        }
    }
    return out;
}

}  // namespace pbsq::cli
