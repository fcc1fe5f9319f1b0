#pragma once

// Task execution for the command-line tool: synthesis of exterior data (optionally
// on a finer grid), the six run tasks, and deterministic emission of CSV/JSON
// artifacts under an output root.

#include <cstdlib>
#include <filesystem>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "fraccal/config.hpp"

namespace fraccal {

/// Environment variable that replaces the working directory as the output root.
inline constexpr const char* kOutputRootEnv = "FRACCAL_OUTPUT_ROOT";

inline std::filesystem::path output_directory(const RunConfig& cfg) {
    const std::filesystem::path dir(cfg.output.directory);
    if (const char* root = std::getenv(kOutputRootEnv); root && *root)
        return std::filesystem::path(root) / (dir.is_absolute() ? dir.relative_path() : dir);
    return dir;
}

/// Writes artifacts and records them, with their hashes, in manifest.json.
class Emitter {
public:
    Emitter(const RunConfig& cfg, std::string task) : cfg_(cfg), dir_(output_directory(cfg)), task_(std::move(task)) {}

    void csv(const std::string& name, const Matrix& m) {
        if (!cfg_.output.csv) return;
        put(name, format_matrix_csv(m));
    }

    void result(const std::string& name, json j) {
        if (!cfg_.output.json) return;
        j["config_hash"] = cfg_.hash;
        put(name, j.dump(2) + "\n");
    }

    /// Writes manifest.json and returns the list of emitted paths.
    std::vector<std::filesystem::path> finish() {
        json m{{"config_hash", cfg_.hash}, {"task", task_}, {"seed", cfg_.seed}, {"files", files_}};
        put("manifest.json", m.dump(2) + "\n", false);
        return paths_;
    }

private:
    void put(const std::string& name, const std::string& text, bool record = true) {
        const auto path = dir_ / name;
        write_text(path, text);
        if (record) files_[name] = fnv1a_hex(text);
        paths_.push_back(path);
    }

    const RunConfig& cfg_;
    std::filesystem::path dir_;
    std::string task_;
    json files_ = json::object();
    std::vector<std::filesystem::path> paths_;
};

struct RunOutcome {
    std::string summary;
    json result;
    std::vector<std::filesystem::path> files;
};

inline std::shared_ptr<const FracOperator> build_operator(const Grid& grid, const OperatorSpec& spec) {
    return std::make_shared<const FracOperator>(spec.method == Method::fourier_symbol ? assemble_fourier_symbol(grid, spec.s)
                                                                                      : fractional_power(grid, spec.s));
}

inline json metadata(const RunConfig& cfg, const RegionPartition& part) {
    return json{{"config_hash", cfg.hash},
                {"s", cfg.op.s},
                {"method", to_string(cfg.op.method)},
                {"geometry_hash", geometry_hash(part)},
                {"grid", to_json(part.grid)},
                {"omega_nodes", part.omega.size()},
                {"w1_nodes", part.w1.size()},
                {"w2_nodes", part.w2.size()},
                {"seed", cfg.seed}};
}

// ---------------------------------------------------------------------------
// Grid transfer for synthesis on a refined grid

/// Multilinear interpolation from coarse data on `coarse_set` (zero elsewhere) to
/// the nodes of `fine_set`; the fine grid refines the coarse one by `r`.
inline Matrix prolongation(const Grid& coarse, const IndexSet& coarse_set, const Grid& fine, const IndexSet& fine_set,
                           Index r) {
    Matrix p = Matrix::Zero(static_cast<Index>(fine_set.size()), static_cast<Index>(coarse_set.size()));
    for (std::size_t row = 0; row < fine_set.size(); ++row) {
        const auto m = fine.multi(fine_set[row]);
        Index base[2] = {m[0] / r, fine.dim() > 1 ? m[1] / r : 0};
        double frac[2] = {static_cast<double>(m[0] % r) / static_cast<double>(r),
                          fine.dim() > 1 ? static_cast<double>(m[1] % r) / static_cast<double>(r) : 0.0};
        const int corners = fine.dim() > 1 ? 4 : 2;
        for (int c = 0; c < corners; ++c) {
            const Index di = c & 1, dj = (c >> 1) & 1;
            const double w = (di ? frac[0] : 1.0 - frac[0]) * (fine.dim() > 1 ? (dj ? frac[1] : 1.0 - frac[1]) : 1.0);
            if (w == 0.0) continue;
            const Index ci = base[0] + di, cj = base[1] + dj;
            if (ci >= coarse.count(0) || (coarse.dim() > 1 && cj >= coarse.count(1))) continue;
            const Index node = coarse.flat(ci, cj);
            auto it = std::lower_bound(coarse_set.begin(), coarse_set.end(), node);
            if (it != coarse_set.end() && *it == node) p(static_cast<Index>(row), it - coarse_set.begin()) += w;
        }
    }
    return p;
}

/// Injection of fine values on `fine_set` onto the coarse nodes of `coarse_set`.
inline Matrix injection(const Grid& coarse, const IndexSet& coarse_set, const Grid& fine, const IndexSet& fine_set,
                        Index r) {
    Matrix q = Matrix::Zero(static_cast<Index>(coarse_set.size()), static_cast<Index>(fine_set.size()));
    for (std::size_t row = 0; row < coarse_set.size(); ++row) {
        const auto m = coarse.multi(coarse_set[row]);
        const Index node = fine.flat(r * m[0], coarse.dim() > 1 ? r * m[1] : 0);
        auto it = std::lower_bound(fine_set.begin(), fine_set.end(), node);
        if (it == fine_set.end() || *it != node) throw InvalidGeometry("coarse window node is missing from the refined window");
        q(static_cast<Index>(row), it - fine_set.begin()) = 1.0;
    }
    return q;
}

// ---------------------------------------------------------------------------
// Synthesis

struct Synthesized {
    MeasuredData data;  // on the inversion (coarse) grid
    Potential q_true;   // on the coarse omega
    json meta;
};

inline Synthesized synthesize_measurements(const RunConfig& cfg) {
    if (!cfg.potential) throw ConfigError("potential is required for synthesis");
    const Index r = cfg.synthesis.refinement;
    const RegionPartition coarse = cfg.geometry.partition();
    const RegionPartition fine = r == 1 ? coarse : cfg.geometry.partition(r);
    const auto fine_op = build_operator(fine.grid, cfg.op);
    const auto coarse_op = r == 1 ? fine_op : build_operator(coarse.grid, cfg.op);

    const ForwardProblem truth(fine_op, fine, Potential(fine.omega, evaluate(*cfg.potential, fine.grid, fine.omega)));
    truth.require_well_posed();
    const ForwardProblem background(fine_op, fine,
                                    Potential(fine.omega, evaluate(cfg.synthesis.background, fine.grid, fine.omega)));
    background.require_well_posed();
    Matrix dn = assemble_dn(truth).matrix;
    Matrix signal;
    if (cfg.synthesis.noise_level > 0.0 || r > 1) signal = dn_difference(truth, background, fine.w1, fine.w2).matrix;
    if (r > 1) {
        // Only the potential-dependent part crosses grids; the local part of the map
        // comes from the inversion grid's own background problem.
        const Matrix pr = prolongation(coarse.grid, coarse.w1, fine.grid, fine.w1, r);
        const Matrix in = injection(coarse.grid, coarse.w2, fine.grid, fine.w2, r);
        signal = in * signal * pr;
        const ForwardProblem coarse_bg(coarse_op, coarse, Potential(coarse.omega, evaluate(cfg.synthesis.background,
                                                                                           coarse.grid, coarse.omega)));
        coarse_bg.require_well_posed();
        dn = assemble_dn(coarse_bg).matrix + signal;
    }

    Synthesized out;
    out.data.op = coarse_op;
    out.data.geometry = coarse;
    out.data.dn = DnMap{coarse.w1, coarse.w2, dn, coarse.grid.weight()};
    out.data.noise_level = cfg.synthesis.noise_level;
    out.data.noise_sigma = add_measurement_noise(out.data.dn.matrix, signal, cfg.synthesis.noise_level, cfg.seed);
    out.q_true = Potential(coarse.omega, evaluate(*cfg.potential, coarse.grid, coarse.omega));

    out.meta = metadata(cfg, coarse);
    out.meta["inversion_grid"] = to_json(coarse.grid);
    out.meta["synthesis_grid"] = to_json(fine.grid);
    out.meta["synthesis_geometry_hash"] = geometry_hash(fine);
    out.meta["refinement"] = r;
    out.meta["transfer"] = r > 1 ? "background_plus_prolongated_difference" : "none";
    out.meta["noise_level"] = out.data.noise_level;
    out.meta["noise_sigma"] = out.data.noise_sigma;
    out.meta["noise_seed"] = cfg.seed;
    out.meta["potential_kind"] = to_string(cfg.potential->kind);
    return out;
}

/// Writes dn.csv, dn.json (metadata) and q_true.csv.
inline RunOutcome synthesize(const RunConfig& cfg) {
    Synthesized s = synthesize_measurements(cfg);
    Emitter emit(cfg, "synthesize");
    emit.csv("dn.csv", s.data.dn.matrix);
    emit.csv("q_true.csv", s.q_true.values());
    emit.result("dn.json", s.meta);
    RunOutcome o;
    o.result = s.meta;
    o.files = emit.finish();
    char buf[200];
    std::snprintf(buf, sizeof buf, "synthesize: %ldx%ld DN matrix, refinement %ld, noise level %g (sigma %.3e)",
                  static_cast<long>(s.data.dn.matrix.rows()), static_cast<long>(s.data.dn.matrix.cols()),
                  static_cast<long>(cfg.synthesis.refinement), s.data.noise_level, s.data.noise_sigma);
    o.summary = buf;
    return o;
}

/// Measured data from a synthesized CSV; noise figures come from the sibling .json when present.
inline MeasuredData load_measurements(const RunConfig& cfg, const std::filesystem::path& csv) {
    const RegionPartition part = cfg.geometry.partition();
    MeasuredData d;
    d.op = build_operator(part.grid, cfg.op);
    d.geometry = part;
    Matrix m;
    try {
        m = read_matrix_csv(csv);
    } catch (const IoError& e) {
        throw ConfigError(std::string("task.data: ") + e.what());
    }
    if (m.rows() != static_cast<Index>(part.w2.size()) || m.cols() != static_cast<Index>(part.w1.size()))
        throw ConfigError("task.data: matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                          " but the geometry windows need " + std::to_string(part.w2.size()) + "x" +
                          std::to_string(part.w1.size()));
    d.dn = DnMap{part.w1, part.w2, m, part.grid.weight()};
    auto meta_path = csv;
    meta_path.replace_extension(".json");
    if (std::filesystem::exists(meta_path)) {
        const json meta = read_json(meta_path);
        d.noise_level = meta.value("noise_level", 0.0);
        d.noise_sigma = meta.value("noise_sigma", 0.0);
    }
    return d;
}

// ---------------------------------------------------------------------------
// Tasks

namespace detail {

inline std::string fmt(const char* f, double x) {
    char buf[64];
    std::snprintf(buf, sizeof buf, f, x);
    return buf;
}

inline json report_json(const StudyReport& r) {
    return json{{"kind", to_string(r.kind)}, {"parameters", r.parameters}, {"columns", r.columns},
                {"summary", r.summary}, {"warnings", r.warnings}};
}

inline Matrix report_matrix(const StudyReport& r) {
    Matrix m(static_cast<Index>(r.rows.size()), static_cast<Index>(r.columns.size()));
    for (std::size_t i = 0; i < r.rows.size(); ++i)
        for (std::size_t j = 0; j < r.columns.size(); ++j) m(static_cast<Index>(i), static_cast<Index>(j)) = r.rows[i][j];
    return m;
}

inline RunOutcome task_forward(const RunConfig& cfg, Emitter& emit) {
    const RegionPartition part = cfg.geometry.partition();
    const ForwardProblem p(build_operator(part.grid, cfg.op), part,
                           Potential(part.omega, evaluate(cfg.truth(), part.grid, part.omega)));
    p.require_well_posed();
    const GridFunction u = solve_window(p, part.w1, evaluate(cfg.task.datum, part.grid, part.w1));
    RunOutcome o;
    o.result = metadata(cfg, part);
    o.result["sigma_min"] = p.sigma_min();
    o.result["interior_residual"] = interior_residual(p, u);
    o.result["u_norm"] = norm(u);
    o.result["u"] = to_json(u.values());
    emit.csv("u.csv", u.values());
    emit.result("forward.json", o.result);
    o.summary = "forward: " + std::to_string(part.grid.size()) + " nodes, sigma_min = " + fmt("%.3e", p.sigma_min()) +
                ", residual = " + fmt("%.3e", o.result["interior_residual"].get<double>());
    return o;
}

inline RunOutcome task_dnmap(const RunConfig& cfg, Emitter& emit) {
    const RegionPartition part = cfg.geometry.partition();
    const auto op = build_operator(part.grid, cfg.op);
    const ForwardProblem p1(op, part, Potential(part.omega, evaluate(cfg.truth(), part.grid, part.omega)));
    const ForwardProblem p2(op, part, Potential(part.omega, evaluate(cfg.task.q2, part.grid, part.omega)));
    p1.require_well_posed();
    p2.require_well_posed();
    const DnMap d1 = assemble_dn(p1);
    const DnMap diff = dn_difference(p1, p2, part.w1, part.w2);
    const double diff_norm = dn_norm(diff);
    RunOutcome o;
    o.result = metadata(cfg, part);
    o.result["dn_norm_q1"] = dn_norm(d1);
    o.result["dn_diff_norm"] = diff_norm;
    o.result["q_diff_norm"] = weighted_l2(p1.q(), p2.q(), part.grid.weight());
    emit.csv("dn_q1.csv", d1.matrix);
    emit.csv("dn_q2.csv", assemble_dn(p2).matrix);
    emit.csv("dn_diff.csv", diff.matrix);
    emit.result("dnmap.json", o.result);
    o.summary = "dnmap: dn_diff_norm = " + fmt("%.6e", diff_norm);
    return o;
}

inline RunOutcome task_control(const RunConfig& cfg, Emitter& emit) {
    const RegionPartition part = cfg.geometry.partition();
    const ForwardProblem p(build_operator(part.grid, cfg.op), part,
                           Potential(part.omega, evaluate(cfg.truth(), part.grid, part.omega)));
    p.require_well_posed();
    const IndexSet& window = cfg.task.full_exterior_window ? part.exterior : part.w1;
    const Vector v = evaluate(cfg.task.target, part.grid, part.omega);
    const auto curve = cost_curve(p, window, v, cfg.task.alphas);
    const double vn = std::sqrt(part.grid.weight()) * v.norm();
    Matrix table(static_cast<Index>(curve.size()), 4);
    std::size_t best = 0;
    json rows = json::array();
    for (std::size_t k = 0; k < curve.size(); ++k) {
        const double rel = vn > 0.0 ? curve[k].achieved_error / vn : curve[k].achieved_error;
        table.row(static_cast<Index>(k)) << curve[k].alpha, curve[k].achieved_error, rel, curve[k].control_cost;
        rows.push_back({{"alpha", curve[k].alpha}, {"achieved_error", curve[k].achieved_error},
                        {"relative_error", rel}, {"control_cost", curve[k].control_cost}});
        if (curve[k].achieved_error < curve[best].achieved_error) best = k;
    }
    const ControlResult c = compute_control(p, window, v, curve[best].alpha);
    RunOutcome o;
    o.result = metadata(cfg, part);
    o.result["window"] = cfg.task.full_exterior_window ? "exterior" : "w1";
    o.result["columns"] = {"alpha", "achieved_error", "relative_error", "control_cost"};
    o.result["curve"] = rows;
    o.result["best_alpha"] = c.alpha;
    o.result["best_relative_error"] = c.relative_error;
    o.result["f"] = to_json(c.f);
    emit.csv("cost_curve.csv", table);
    emit.csv("control_f.csv", c.f);
    emit.result("control.json", o.result);
    o.summary = "control: best relative error " + fmt("%.3e", c.relative_error) + " at alpha = " + fmt("%.1e", c.alpha) +
                ", cost " + fmt("%.3e", c.control_cost);
    return o;
}

inline RunOutcome task_invert(const RunConfig& cfg, Emitter& emit) {
    std::optional<Potential> q_true;
    MeasuredData data;
    if (cfg.task.data.empty()) {
        Synthesized s = synthesize_measurements(cfg);
        data = std::move(s.data);
        q_true = s.q_true;
    } else {
        data = load_measurements(cfg, cfg.task.data);
        if (cfg.potential) q_true = Potential(data.geometry.omega, evaluate(*cfg.potential, data.geometry.grid, data.geometry.omega));
    }
    const RegionPartition& part = data.geometry;
    const Potential q_ref(part.omega, evaluate(cfg.task.q_ref, part.grid, part.omega));
    const Potential q_init(part.omega, evaluate(cfg.task.q_init, part.grid, part.omega));
    const TaskSpec& t = cfg.task;
    ReconstructionResult r;
    switch (t.method) {
    case InvertMethod::born: r = born_reconstruct(data, q_ref, t.reg); break;
    case InvertMethod::newton: r = newton_refine(data, q_init, t.reg.weight, t.max_iter); break;
    case InvertMethod::ols: r = output_least_squares(data, q_init, t.reg.weight, t.max_iter); break;
    case InvertMethod::discrepancy:
        r = newton_discrepancy(data, q_init, default_discrepancy_ladder(), t.tau, t.max_iter);
        break;
    }
    RunOutcome o;
    o.result = metadata(cfg, part);
    o.result["method"] = to_string(t.method);
    o.result["regularization"] = {{"kind", to_string(r.regularization.kind)}, {"weight", r.regularization.weight}};
    o.result["iterations"] = r.iterations;
    o.result["residual_history"] = r.residual_history;
    o.result["misfit"] = misfit(data, r.q_estimate);
    o.result["q_estimate"] = to_json(r.q_estimate.values());
    o.result["omega_coordinates"] = to_json(Vector(coordinates(part.grid, part.omega).col(0)));
    emit.csv("q_estimate.csv", r.q_estimate.values());
    o.summary = "invert (" + to_string(t.method) + "): " + std::to_string(r.iterations) + " iterations, misfit " +
                fmt("%.3e", o.result["misfit"].get<double>());
    if (q_true) {
        const double w = part.grid.weight();
        const double truth_norm = std::sqrt(w) * q_true->values().norm();
        const double err = weighted_l2(r.q_estimate, *q_true, w);
        const double rel = truth_norm > 0.0 ? err / truth_norm : err;
        o.result["q_true"] = to_json(q_true->values());
        o.result["relative_error"] = rel;
        o.summary += ", relative error vs q_true " + fmt("%.4f", rel);
    }
    emit.result("invert.json", o.result);
    return o;
}

inline RunOutcome task_extension(const RunConfig& cfg, Emitter& emit) {
    const Grid base = cfg.geometry.grid();
    IndexSet all(static_cast<std::size_t>(base.size()));
    for (Index k = 0; k < base.size(); ++k) all[static_cast<std::size_t>(k)] = k;
    const Vector u = evaluate(cfg.task.datum, base, all);
    const double calib = calibrate_trace(base, cfg.op.s, cfg.task.levels, cfg.task.grading, cfg.task.cap);
    const ExtensionProblem p = make_extension(base, cfg.op.s, cfg.task.levels, u, cfg.task.grading, cfg.task.cap);
    const ExtensionSolution sol = solve_extension(p);
    const Vector trace = weighted_neumann_trace(p, sol, calib);
    const Vector ref = fractional_power(base, cfg.op.s).matrix() * u;
    const double gap = ref.norm() > 0.0 ? (trace - ref).norm() / ref.norm() : (trace - ref).norm();
    Matrix table(base.size(), 3);
    table.col(0) = coordinates(base, all).col(0);
    table.col(1) = trace;
    table.col(2) = ref;
    RunOutcome o;
    o.result = json{{"config_hash", cfg.hash}, {"s", cfg.op.s}, {"grid", to_json(base)}, {"levels", cfg.task.levels},
                    {"calibration", calib}, {"relative_l2_gap", gap}, {"residual", extension_residual(p, sol)},
                    {"dirichlet_energy", dirichlet_energy(p, sol)}, {"columns", {"x", "trace", "spectral"}}};
    emit.csv("trace.csv", table);

    const RegionPartition part = cfg.geometry.partition();
    const double h_level = 4.0 * base.spacing();
    const auto family = localized_unit_energy_family(p, part.omega, 6);
    const auto rows = smallness_propagation_demo(p, family, calib, part.w1, part.omega, h_level);
    Matrix small(static_cast<Index>(rows.size()), 5);
    for (std::size_t k = 0; k < rows.size(); ++k)
        small.row(static_cast<Index>(k)) << static_cast<double>(2 * k + 1), rows[k].cauchy_window, rows[k].strip_window,
            rows[k].strip_interior, rows[k].boundary_interior;
    emit.csv("smallness.csv", small);
    o.result["smallness_columns"] = {"frequency", "cauchy_window", "strip_window", "strip_interior", "boundary_interior"};
    o.result["smallness_h_level"] = h_level;
    emit.result("extension.json", o.result);
    o.summary = "extension: " + std::to_string(cfg.task.levels) + " y-levels, relative L2 gap to the spectral operator " +
                fmt("%.4f", gap);
    return o;
}

inline RunOutcome task_study(const RunConfig& cfg, Emitter& emit) {
    const TaskSpec& t = cfg.task;
    const RegionPartition part = cfg.geometry.partition();
    RunOutcome o;
    o.result = metadata(cfg, part);
    std::vector<StudyReport> reports;
    switch (t.study) {
    case StudyKind::antilocality: {
        if (t.sizes.empty()) {
            reports.push_back(antilocality_study(part.grid, cfg.op.s, part.w1));
        } else {
            for (Index n : t.sizes) {
                const Grid g(1, {n}, 1.0 / static_cast<double>(n - 1));
                reports.push_back(antilocality_study(g, cfg.op.s, leftmost_window(g, t.window_fraction)));
            }
        }
        Matrix table(static_cast<Index>(reports.size()), 4);
        for (std::size_t k = 0; k < reports.size(); ++k)
            table.row(static_cast<Index>(k)) << reports[k].parameters.at("nodes"), reports[k].summary.at("sigma_max"),
                reports[k].summary.at("sigma_min"), reports[k].summary.at("sigma_min_rel");
        emit.csv("antilocality.csv", table);
        o.result["columns"] = {"nodes", "sigma_max", "sigma_min", "sigma_min_rel"};
        o.summary = "study antilocality: sigma_min/sigma_max = ";
        for (const auto& r : reports) o.summary += fmt("%.3e ", r.summary.at("sigma_min_rel"));
        break;
    }
    case StudyKind::sv_decay: {
        const ForwardProblem ref(build_operator(part.grid, cfg.op), part,
                                 Potential(part.omega, evaluate(cfg.truth(), part.grid, part.omega)));
        ref.require_well_posed();
        reports.push_back(sv_decay_study(ref, part.w1, part.w2, t.threshold));
        o.summary = "study sv_decay: first index below threshold " +
                    std::to_string(static_cast<long>(reports[0].summary.at("first_index_below_threshold")));
        break;
    }
    case StudyKind::stability_curve: {
        std::vector<int> freqs = t.frequencies;
        if (freqs.empty())
            for (int k = 1; k <= static_cast<int>((part.grid.count(0) - 1) / 4); ++k) freqs.push_back(k);
        reports.push_back(stability_curve(part, build_operator(part.grid, cfg.op),
                                          oscillatory_family(part, t.eps, freqs, t.taper)));
        o.summary = "study stability_curve: dn_norm spans " +
                    fmt("%.2f", reports[0].summary.count("dn_decay_orders") ? reports[0].summary.at("dn_decay_orders") : 0.0) +
                    " orders of magnitude";
        break;
    }
    case StudyKind::refinement: {
        RefinementConfig rc;
        rc.s = cfg.op.s;
        rc.seed = cfg.seed;
        reports.push_back(refinement_study(rc));
        o.summary = "study refinement: worst identity residual " + fmt("%.3e", reports[0].summary.at("worst_identity_residual"));
        break;
    }
    }
    json rs = json::array();
    for (std::size_t k = 0; k < reports.size(); ++k) {
        rs.push_back(report_json(reports[k]));
        emit.csv("study_" + std::to_string(k) + ".csv", report_matrix(reports[k]));
    }
    o.result["reports"] = rs;
    emit.result("study.json", o.result);
    return o;
}

} // namespace detail

inline RunOutcome run(const RunConfig& cfg) {
    Emitter emit(cfg, to_string(cfg.task.type));
    RunOutcome o;
    switch (cfg.task.type) {
    case TaskType::forward: o = detail::task_forward(cfg, emit); break;
    case TaskType::dnmap: o = detail::task_dnmap(cfg, emit); break;
    case TaskType::control: o = detail::task_control(cfg, emit); break;
    case TaskType::invert: o = detail::task_invert(cfg, emit); break;
    case TaskType::extension: o = detail::task_extension(cfg, emit); break;
    case TaskType::study: o = detail::task_study(cfg, emit); break;
    }
    o.files = emit.finish();
    return o;
}

/// Exit status convention of the command-line tool.
enum ExitCode : int { kExitOk = 0, kExitConfig = 1, kExitNumerical = 2 };

} // namespace fraccal
