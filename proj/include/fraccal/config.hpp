#pragma once

// Run configuration: a single JSON file with geometry, operator, potential, task,
// synthesis and output blocks. Parsing validates everything that can be checked
// without a solve, and every error names the offending field.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include "fraccal/experiments.hpp"
#include "fraccal/io.hpp"

namespace fraccal {

class ConfigError : public Error {
public:
    using Error::Error;
};

namespace detail {

/// Typed access to one JSON object that remembers which keys were read.
class Fields {
public:
    Fields(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(label() + " must be a JSON object");
    }

    std::string at(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }
    bool has(const std::string& key) const { return j_.contains(key) && !j_.at(key).is_null(); }

    const json& raw(const std::string& key) {
        seen_.insert(key);
        if (!has(key)) throw ConfigError(at(key) + " is required");
        return j_.at(key);
    }

    double number(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number()) throw ConfigError(at(key) + " must be a number");
        const double x = v.get<double>();
        if (!std::isfinite(x)) throw ConfigError(at(key) + " must be finite");
        return x;
    }
    double number(const std::string& key, double fallback) { return has(key) ? number(key) : fallback; }

    std::int64_t integer(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_number_integer()) throw ConfigError(at(key) + " must be an integer");
        return v.get<std::int64_t>();
    }
    std::int64_t integer(const std::string& key, std::int64_t fallback) {
        return has(key) ? integer(key) : fallback;
    }

    std::string text(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_string()) throw ConfigError(at(key) + " must be a string");
        return v.get<std::string>();
    }
    std::string text(const std::string& key, const std::string& fallback) {
        return has(key) ? text(key) : fallback;
    }

    std::string choice(const std::string& key, const std::vector<std::string>& options, const std::string& fallback = "") {
        const std::string v = fallback.empty() ? text(key) : text(key, fallback);
        for (const auto& o : options)
            if (o == v) return v;
        std::string list;
        for (const auto& o : options) list += (list.empty() ? "" : ", ") + o;
        throw ConfigError(at(key) + " = \"" + v + "\" is not one of {" + list + "}");
    }

    std::vector<double> numbers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(at(key) + " must be an array of numbers");
        std::vector<double> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number()) throw ConfigError(at(key) + "[" + std::to_string(i) + "] must be a number");
            out.push_back(v[i].get<double>());
        }
        return out;
    }

    std::vector<std::int64_t> integers(const std::string& key) {
        const json& v = raw(key);
        if (!v.is_array()) throw ConfigError(at(key) + " must be an array of integers");
        std::vector<std::int64_t> out;
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (!v[i].is_number_integer()) throw ConfigError(at(key) + "[" + std::to_string(i) + "] must be an integer");
            out.push_back(v[i].get<std::int64_t>());
        }
        return out;
    }

    Fields object(const std::string& key) { return Fields(raw(key), at(key)); }

    /// Rejects keys that were never read, which catches misspelled options.
    void finish() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key()) && !it.value().is_null()) throw ConfigError(at(it.key()) + " is not a recognized field");
    }

    const std::string& path() const { return path_; }
    std::string label() const { return path_.empty() ? "config" : path_; }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

inline Box parse_box(Fields f, int dim) {
    const auto lo = f.numbers("lo");
    const auto hi = f.numbers("hi");
    f.finish();
    if (static_cast<int>(lo.size()) != dim) throw ConfigError(f.at("lo") + " must have " + std::to_string(dim) + " entries");
    if (static_cast<int>(hi.size()) != dim) throw ConfigError(f.at("hi") + " must have " + std::to_string(dim) + " entries");
    Box b{{0.0, 0.0}, {0.0, 0.0}};
    for (int a = 0; a < dim; ++a) {
        if (!(lo[static_cast<std::size_t>(a)] <= hi[static_cast<std::size_t>(a)]))
            throw ConfigError(f.label() + " has lo > hi on axis " + std::to_string(a));
        b.lo[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)];
        b.hi[static_cast<std::size_t>(a)] = hi[static_cast<std::size_t>(a)];
    }
    return b;
}

} // namespace detail

// ---------------------------------------------------------------------------

struct GeometrySpec {
    int dim = 1;
    std::vector<Index> counts;
    double spacing = 0.0;
    Point origin{0.0, 0.0};
    Index margin = 0;  // extra nodes added on every side
    Box omega;
    std::optional<Box> w1;  // nullopt: the whole exterior
    std::optional<Box> w2;

    /// Grid refined by an integer factor; node k of this grid is node r k of the result.
    Grid grid(Index refinement = 1) const {
        std::vector<Index> c;
        for (Index n : counts) c.push_back((n + 2 * margin - 1) * refinement + 1);
        Point o = origin;
        for (int a = 0; a < dim; ++a) o[static_cast<std::size_t>(a)] -= static_cast<double>(margin) * spacing;
        return Grid(dim, c, spacing / static_cast<double>(refinement), o);
    }

    RegionPartition partition(Index refinement = 1) const {
        const Grid g = grid(refinement);
        RegionPartition p = partition_full_exterior(g, omega);
        if (w1) p.w1 = rasterize(g, *w1);
        if (w2) p.w2 = rasterize(g, *w2);
        validate(p);
        return p;
    }
};

/// A function on a node set: potentials, exterior data and control targets.
struct FunctionSpec {
    enum class Kind { zero, constant, bump, piecewise, oscillatory, file };
    struct Piece {
        Box box;
        double value = 0.0;
    };

    Kind kind = Kind::zero;
    double value = 0.0;       // constant
    double amplitude = 0.0;   // bump
    Point center{0.0, 0.0};
    double radius = 1.0;
    std::vector<Piece> pieces;  // piecewise
    double background = 0.0;
    double eps = 1e-4;          // oscillatory
    int frequency = 1;
    OscillatoryTaper taper = OscillatoryTaper::indicator;
    std::filesystem::path path; // file, resolved against the config directory

    static FunctionSpec zero() { return {}; }
    static FunctionSpec constant(double v) {
        FunctionSpec f;
        f.kind = Kind::constant;
        f.value = v;
        return f;
    }
};

inline std::string to_string(FunctionSpec::Kind k) {
    switch (k) {
    case FunctionSpec::Kind::zero: return "zero";
    case FunctionSpec::Kind::constant: return "constant";
    case FunctionSpec::Kind::bump: return "bump";
    case FunctionSpec::Kind::piecewise: return "piecewise";
    case FunctionSpec::Kind::oscillatory: return "oscillatory";
    case FunctionSpec::Kind::file: return "file";
    }
    return "?";
}

/// Values of `spec` on `region` of `grid`. Oscillatory members use the extent of
/// `region` along the first axis.
inline Vector evaluate(const FunctionSpec& spec, const Grid& grid, const IndexSet& region) {
    const Index n = static_cast<Index>(region.size());
    const Matrix xy = coordinates(grid, region);
    Vector v = Vector::Zero(n);
    switch (spec.kind) {
    case FunctionSpec::Kind::zero: break;
    case FunctionSpec::Kind::constant: v.setConstant(spec.value); break;
    case FunctionSpec::Kind::bump:
        for (Index i = 0; i < n; ++i) {
            double r2 = 0.0;
            for (int a = 0; a < grid.dim(); ++a) {
                const double d = xy(i, a) - spec.center[static_cast<std::size_t>(a)];
                r2 += d * d;
            }
            v[i] = spec.amplitude * smooth_bump(std::sqrt(r2) / spec.radius);
        }
        break;
    case FunctionSpec::Kind::piecewise:
        v.setConstant(spec.background);
        for (Index i = 0; i < n; ++i)
            for (const auto& piece : spec.pieces)
                if (contains(grid, piece.box, region[static_cast<std::size_t>(i)])) v[i] = piece.value;
        break;
    case FunctionSpec::Kind::oscillatory: {
        RegionPartition p;
        p.grid = grid;
        p.omega = region;
        v = oscillatory_family(p, spec.eps, {spec.frequency}, spec.taper).front().q1.values();
        break;
    }
    case FunctionSpec::Kind::file: {
        v = read_vector_csv(spec.path);
        if (v.size() != n)
            throw ConfigError("file " + spec.path.string() + " holds " + std::to_string(v.size()) + " values for " +
                              std::to_string(n) + " nodes");
        break;
    }
    }
    return v;
}

struct OperatorSpec {
    double s = 0.5;
    Method method = Method::spectral_power;
};

struct SynthesisSpec {
    Index refinement = 1;
    double noise_level = 0.0;
    FunctionSpec background;
};

struct OutputSpec {
    std::string directory = "out";
    bool csv = true;
    bool json = true;
};

enum class TaskType { forward, dnmap, control, invert, extension, study };

inline std::string to_string(TaskType t) {
    switch (t) {
    case TaskType::forward: return "forward";
    case TaskType::dnmap: return "dnmap";
    case TaskType::control: return "control";
    case TaskType::invert: return "invert";
    case TaskType::extension: return "extension";
    case TaskType::study: return "study";
    }
    return "?";
}

enum class InvertMethod { born, newton, ols, discrepancy };

inline std::string to_string(InvertMethod m) {
    switch (m) {
    case InvertMethod::born: return "born";
    case InvertMethod::newton: return "newton";
    case InvertMethod::ols: return "ols";
    case InvertMethod::discrepancy: return "discrepancy";
    }
    return "?";
}

struct TaskSpec {
    TaskType type = TaskType::forward;

    FunctionSpec datum = FunctionSpec::constant(1.0);   // forward (on w1), extension (on the base grid)
    FunctionSpec q2;                                    // dnmap
    FunctionSpec target = FunctionSpec::constant(1.0);  // control
    bool full_exterior_window = true;                   // control: exterior or w1
    std::vector<double> alphas;                         // control sweep, decreasing

    InvertMethod method = InvertMethod::newton;
    Regularization reg{RegKind::tikhonov, 1e-10};
    int max_iter = 30;
    double tau = 1.1;
    FunctionSpec q_ref;
    FunctionSpec q_init;
    std::filesystem::path data;  // synthesized DN CSV; empty: synthesize in-process

    Index levels = 256;  // extension
    double grading = 0.0;
    double cap = 0.0;

    StudyKind study = StudyKind::antilocality;
    double window_fraction = 0.125;
    std::vector<Index> sizes;       // antilocality node counts (1D); empty: the geometry grid
    std::vector<int> frequencies;   // stability curve
    double eps = 1e-6;
    OscillatoryTaper taper = OscillatoryTaper::gaussian;
    double threshold = 1e-8;        // sv_decay
};

struct RunConfig {
    GeometrySpec geometry;
    OperatorSpec op;
    std::optional<FunctionSpec> potential;
    TaskSpec task;
    SynthesisSpec synthesis;
    OutputSpec output;
    std::uint64_t seed = 0;
    std::string hash;  // FNV-1a of the canonical JSON dump
    std::filesystem::path base_dir;

    FunctionSpec truth() const { return potential.value_or(FunctionSpec::zero()); }
};

namespace detail {

inline FunctionSpec parse_function(Fields f, int dim, const std::filesystem::path& base_dir, bool allow_constant) {
    std::vector<std::string> kinds{"zero", "bump", "piecewise", "oscillatory", "file"};
    if (allow_constant) kinds.push_back("constant");
    const std::string kind = f.choice("kind", kinds);
    FunctionSpec s;
    auto point = [&](const std::string& key) {
        const auto xs = f.numbers(key);
        if (static_cast<int>(xs.size()) != dim) throw ConfigError(f.at(key) + " must have " + std::to_string(dim) + " entries");
        Point p{0.0, 0.0};
        for (int a = 0; a < dim; ++a) p[static_cast<std::size_t>(a)] = xs[static_cast<std::size_t>(a)];
        return p;
    };
    if (kind == "zero") {
        s.kind = FunctionSpec::Kind::zero;
    } else if (kind == "constant") {
        s.kind = FunctionSpec::Kind::constant;
        s.value = f.number("value");
    } else if (kind == "bump") {
        s.kind = FunctionSpec::Kind::bump;
        s.amplitude = f.number("amplitude");
        s.center = point("center");
        s.radius = f.number("radius");
        if (!(s.radius > 0.0)) throw ConfigError(f.at("radius") + " must be positive");
    } else if (kind == "piecewise") {
        s.kind = FunctionSpec::Kind::piecewise;
        s.background = f.number("background", 0.0);
        const json& arr = f.raw("pieces");
        if (!arr.is_array() || arr.empty()) throw ConfigError(f.at("pieces") + " must be a nonempty array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Fields pf(arr[i], f.at("pieces") + "[" + std::to_string(i) + "]");
            FunctionSpec::Piece piece;
            piece.value = pf.number("value");
            piece.box = parse_box(pf.object("box"), dim);
            pf.finish();
            s.pieces.push_back(piece);
        }
    } else if (kind == "oscillatory") {
        s.kind = FunctionSpec::Kind::oscillatory;
        s.eps = f.number("eps");
        s.frequency = static_cast<int>(f.integer("frequency"));
        if (s.frequency < 0) throw ConfigError(f.at("frequency") + " must be nonnegative");
        s.taper = f.choice("taper", {"indicator", "gaussian"}, "indicator") == "gaussian" ? OscillatoryTaper::gaussian
                                                                                       : OscillatoryTaper::indicator;
    } else {
        s.kind = FunctionSpec::Kind::file;
        const std::filesystem::path p = f.text("path");
        s.path = p.is_absolute() ? p : base_dir / p;
        if (!std::filesystem::exists(s.path)) throw ConfigError(f.at("path") + ": file " + s.path.string() + " does not exist");
    }
    f.finish();
    return s;
}

inline GeometrySpec parse_geometry(Fields f) {
    GeometrySpec g;
    g.dim = static_cast<int>(f.integer("dim", 1));
    if (g.dim != 1 && g.dim != 2) throw ConfigError(f.at("dim") + " must be 1 or 2");
    const auto counts = f.integers("counts");
    if (static_cast<int>(counts.size()) != g.dim)
        throw ConfigError(f.at("counts") + " must have " + std::to_string(g.dim) + " entries");
    for (auto c : counts) {
        if (c < 3) throw ConfigError(f.at("counts") + " entries must be at least 3");
        g.counts.push_back(static_cast<Index>(c));
    }
    g.spacing = f.number("spacing", 1.0 / static_cast<double>(g.counts[0] - 1));
    if (!(g.spacing > 0.0)) throw ConfigError(f.at("spacing") + " must be positive");
    if (f.has("origin")) {
        const auto o = f.numbers("origin");
        if (static_cast<int>(o.size()) != g.dim) throw ConfigError(f.at("origin") + " must have " + std::to_string(g.dim) + " entries");
        for (int a = 0; a < g.dim; ++a) g.origin[static_cast<std::size_t>(a)] = o[static_cast<std::size_t>(a)];
    }
    g.margin = static_cast<Index>(f.integer("margin", 0));
    if (g.margin < 0) throw ConfigError(f.at("margin") + " must be nonnegative");
    g.omega = parse_box(f.object("omega"), g.dim);
    auto window = [&](const std::string& key) -> std::optional<Box> {
        if (!f.has(key)) return std::nullopt;
        if (f.raw(key).is_string()) {
            if (f.text(key) != "exterior") throw ConfigError(f.at(key) + " must be a box or \"exterior\"");
            return std::nullopt;
        }
        return parse_box(f.object(key), g.dim);
    };
    g.w1 = window("w1");
    g.w2 = window("w2");
    f.finish();
    try {
        (void)g.partition();
    } catch (const Error& e) {
        throw ConfigError(f.label() + ": " + e.what());
    }
    return g;
}

inline std::vector<int> as_ints(const std::vector<std::int64_t>& xs) { return {xs.begin(), xs.end()}; }

inline TaskSpec parse_task(Fields f, int dim, const std::filesystem::path& base_dir) {
    TaskSpec t;
    const std::string type = f.choice("type", {"forward", "dnmap", "control", "invert", "extension", "study"});
    auto function = [&](const std::string& key, FunctionSpec fallback, bool allow_constant) {
        if (!f.has(key)) return fallback;
        return parse_function(f.object(key), dim, base_dir, allow_constant);
    };
    if (type == "forward") {
        t.type = TaskType::forward;
        t.datum = function("datum", FunctionSpec::constant(1.0), true);
    } else if (type == "dnmap") {
        t.type = TaskType::dnmap;
        t.q2 = function("q2", FunctionSpec::zero(), false);
    } else if (type == "control") {
        t.type = TaskType::control;
        t.target = function("target", FunctionSpec::constant(1.0), true);
        t.full_exterior_window = f.choice("window", {"exterior", "w1"}, "exterior") == "exterior";
        if (f.has("alphas")) {
            t.alphas = f.numbers("alphas");
        } else {
            for (int k = 2; k <= 12; ++k) t.alphas.push_back(std::pow(10.0, -k));
        }
        if (t.alphas.empty()) throw ConfigError(f.at("alphas") + " must be nonempty");
        for (std::size_t k = 0; k < t.alphas.size(); ++k) {
            if (!(t.alphas[k] > 0.0)) throw ConfigError(f.at("alphas") + " entries must be positive");
            if (k > 0 && !(t.alphas[k] < t.alphas[k - 1])) throw ConfigError(f.at("alphas") + " must be strictly decreasing");
        }
    } else if (type == "invert") {
        t.type = TaskType::invert;
        const std::string m = f.choice("method", {"born", "newton", "ols", "discrepancy"}, "newton");
        t.method = m == "born" ? InvertMethod::born
                 : m == "ols"  ? InvertMethod::ols
                 : m == "discrepancy" ? InvertMethod::discrepancy
                                      : InvertMethod::newton;
        const std::string rk = f.choice("regularization", {"none", "tsvd", "tikhonov"},
                                        t.method == InvertMethod::born ? "tsvd" : "tikhonov");
        t.reg.kind = rk == "none" ? RegKind::none : rk == "tsvd" ? RegKind::tsvd : RegKind::tikhonov;
        if (t.method != InvertMethod::born && t.reg.kind != RegKind::tikhonov)
            throw ConfigError(f.at("regularization") + " must be tikhonov for method " + m);
        t.reg.weight = f.number("reg_weight", t.method == InvertMethod::born ? 1e-4 : 1e-10);
        if (t.reg.weight < 0.0) throw ConfigError(f.at("reg_weight") + " must be nonnegative");
        t.max_iter = static_cast<int>(f.integer("max_iter", 30));
        if (t.max_iter < 1) throw ConfigError(f.at("max_iter") + " must be at least 1");
        t.tau = f.number("tau", 1.1);
        if (!(t.tau > 0.0)) throw ConfigError(f.at("tau") + " must be positive");
        t.q_ref = function("q_ref", FunctionSpec::zero(), false);
        t.q_init = function("q_init", FunctionSpec::zero(), false);
        if (f.has("data")) {
            const std::filesystem::path p = f.text("data");
            t.data = p.is_absolute() ? p : base_dir / p;
            if (!std::filesystem::exists(t.data)) throw ConfigError(f.at("data") + ": file " + t.data.string() + " does not exist");
        }
    } else if (type == "extension") {
        t.type = TaskType::extension;
        if (dim != 1) throw ConfigError(f.at("type") + " = extension needs geometry.dim = 1");
        t.levels = static_cast<Index>(f.integer("levels", 256));
        if (t.levels < 2) throw ConfigError(f.at("levels") + " must be at least 2");
        t.grading = f.number("grading", 0.0);
        if (t.grading != 0.0 && t.grading < 1.0) throw ConfigError(f.at("grading") + " must be 0 (default) or >= 1");
        t.cap = f.number("cap", 0.0);
        if (t.cap < 0.0) throw ConfigError(f.at("cap") + " must be nonnegative");
        t.datum = function("datum", FunctionSpec::zero(), true);
    } else {
        t.type = TaskType::study;
        const std::string k = f.choice("kind", {"antilocality", "sv_decay", "stability_curve", "refinement"});
        t.study = k == "antilocality" ? StudyKind::antilocality
                : k == "sv_decay"     ? StudyKind::sv_decay
                : k == "stability_curve" ? StudyKind::stability_curve
                                         : StudyKind::refinement;
        t.window_fraction = f.number("window_fraction", 0.125);
        if (!(t.window_fraction > 0.0 && t.window_fraction < 1.0))
            throw ConfigError(f.at("window_fraction") + " must lie in (0,1)");
        if (f.has("sizes")) {
            for (auto n : f.integers("sizes")) {
                if (n < 3) throw ConfigError(f.at("sizes") + " entries must be at least 3");
                t.sizes.push_back(static_cast<Index>(n));
            }
        }
        if (f.has("frequencies")) {
            t.frequencies = as_ints(f.integers("frequencies"));
        }
        t.eps = f.number("eps", 1e-6);
        if (!(t.eps > 0.0)) throw ConfigError(f.at("eps") + " must be positive");
        t.taper = f.choice("taper", {"indicator", "gaussian"}, "gaussian") == "gaussian" ? OscillatoryTaper::gaussian
                                                                                       : OscillatoryTaper::indicator;
        t.threshold = f.number("threshold", 1e-8);
        if (!(t.threshold > 0.0 && t.threshold < 1.0)) throw ConfigError(f.at("threshold") + " must lie in (0,1)");
    }
    f.finish();
    return t;
}

} // namespace detail

/// Parses and validates a configuration document. `base_dir` anchors relative file paths.
inline RunConfig parse_config(const json& doc, const std::filesystem::path& base_dir = ".") {
    detail::Fields root(doc, "");
    RunConfig c;
    c.base_dir = base_dir;
    c.hash = fnv1a_hex(doc.dump());

    c.geometry = detail::parse_geometry(root.object("geometry"));

    detail::Fields op = root.object("operator");
    c.op.s = op.number("s");
    if (!(c.op.s > 0.0 && c.op.s <= 1.0))
        throw ConfigError("operator.s = " + json(c.op.s).dump() +
                          " is outside the admissible interval (0,1) (the endpoint s = 1 is also accepted)");
    c.op.method = op.choice("method", {"spectral_power", "fourier_symbol"}, "spectral_power") == "fourier_symbol"
                      ? Method::fourier_symbol
                      : Method::spectral_power;
    op.finish();

    if (root.has("potential")) c.potential = detail::parse_function(root.object("potential"), c.geometry.dim, base_dir, false);

    c.task = detail::parse_task(root.object("task"), c.geometry.dim, base_dir);
    if (c.task.type == TaskType::extension && !(c.op.s < 1.0))
        throw ConfigError("operator.s must be below 1 for task.type = extension");

    if (root.has("synthesis")) {
        detail::Fields sy = root.object("synthesis");
        const auto r = sy.integer("refinement", 1);
        if (r < 1 || r > 16) throw ConfigError(sy.at("refinement") + " must lie in [1,16]");
        c.synthesis.refinement = static_cast<Index>(r);
        c.synthesis.noise_level = sy.number("noise_level", 0.0);
        if (c.synthesis.noise_level < 0.0) throw ConfigError(sy.at("noise_level") + " must be nonnegative");
        if (sy.has("background"))
            c.synthesis.background = detail::parse_function(sy.object("background"), c.geometry.dim, base_dir, false);
        sy.finish();
    }

    if (root.has("output")) {
        detail::Fields out = root.object("output");
        c.output.directory = out.text("directory", "out");
        if (c.output.directory.empty()) throw ConfigError("output.directory must be nonempty");
        if (out.has("formats")) {
            const json& fm = out.raw("formats");
            if (!fm.is_array()) throw ConfigError("output.formats must be an array");
            c.output.csv = c.output.json = false;
            for (const auto& x : fm) {
                if (!x.is_string()) throw ConfigError("output.formats entries must be strings");
                const std::string v = x.get<std::string>();
                if (v == "csv") c.output.csv = true;
                else if (v == "json") c.output.json = true;
                else throw ConfigError("output.formats entry \"" + v + "\" is not one of {csv, json}");
            }
        }
        out.finish();
    }

    const auto seed = root.integer("seed", 0);
    if (seed < 0) throw ConfigError("seed must be nonnegative");
    c.seed = static_cast<std::uint64_t>(seed);
    root.finish();

    if (c.task.type == TaskType::invert && c.task.data.empty() && !c.potential)
        throw ConfigError("potential is required for task.type = invert without task.data");
    return c;
}

inline RunConfig load_config(const std::filesystem::path& path) {
    json doc;
    try {
        doc = read_json(path);
    } catch (const IoError& e) {
        throw ConfigError(e.what());
    }
    return parse_config(doc, path.has_parent_path() ? path.parent_path() : std::filesystem::path("."));
}

} // namespace fraccal
