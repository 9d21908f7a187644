#include "nsfp/config.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "nsfp/errors.hpp"

namespace nsfp {

namespace {

using json = nlohmann::json;

// Walks one JSON object, remembering which keys were read so the rest can be rejected.
class Section {
public:
    Section(const json& j, std::string path) : j_(j), path_(std::move(path)) {
        if (!j_.is_object()) throw ConfigError(path_.empty() ? "<root>" : path_, "expected an object");
    }

    std::string key(const std::string& k) const { return path_.empty() ? k : path_ + "." + k; }
    bool has(const std::string& k) const { return j_.contains(k); }

    const json* find(const std::string& k) {
        seen_.insert(k);
        auto it = j_.find(k);
        return it == j_.end() ? nullptr : &*it;
    }

    const json& require(const std::string& k) {
        const json* v = find(k);
        if (!v) throw ConfigError(key(k), "missing required key");
        return *v;
    }

    Section sub(const std::string& k) {
        seen_.insert(k);
        static const json empty = json::object();
        auto it = j_.find(k);
        return Section(it == j_.end() ? empty : *it, key(k));
    }

    double number(const std::string& k, double fallback) {
        const json* v = find(k);
        return v ? as_number(*v, key(k)) : fallback;
    }
    double number(const std::string& k) { return as_number(require(k), key(k)); }

    int integer(const std::string& k, int fallback) {
        const json* v = find(k);
        if (!v) return fallback;
        if (!v->is_number_integer()) throw ConfigError(key(k), "expected an integer");
        return v->get<int>();
    }

    bool boolean(const std::string& k, bool fallback) {
        const json* v = find(k);
        if (!v) return fallback;
        if (!v->is_boolean()) throw ConfigError(key(k), "expected true or false");
        return v->get<bool>();
    }

    std::string text(const std::string& k, const std::string& fallback) {
        const json* v = find(k);
        if (!v) return fallback;
        if (!v->is_string()) throw ConfigError(key(k), "expected a string");
        return v->get<std::string>();
    }

    Vec3 vec3(const std::string& k, const Vec3& fallback) {
        const json* v = find(k);
        return v ? as_vec3(*v, key(k)) : fallback;
    }

    void reject_unknown() const {
        for (auto it = j_.begin(); it != j_.end(); ++it)
            if (!seen_.count(it.key())) throw ConfigError(key(it.key()), "unknown key");
    }

    static double as_number(const json& v, const std::string& path) {
        if (!v.is_number()) throw ConfigError(path, "expected a number");
        return v.get<double>();
    }

    static Vec3 as_vec3(const json& v, const std::string& path) {
        if (!v.is_array() || v.size() != 3) throw ConfigError(path, "expected an array of 3 numbers");
        return {as_number(v[0], path + "[0]"), as_number(v[1], path + "[1]"), as_number(v[2], path + "[2]")};
    }

private:
    const json& j_;
    std::string path_;
    std::set<std::string> seen_;
};

Box read_box(Section& s) {
    Box b;
    b.lo = Section::as_vec3(s.require("lower"), s.key("lower"));
    b.hi = Section::as_vec3(s.require("upper"), s.key("upper"));
    s.reject_unknown();
    return b;
}

void read_domain(Section s, RunConfig& c) {
    c.domain.T = s.number("T");
    if (s.has("boxes")) {
        if (s.has("lower") || s.has("upper"))
            throw ConfigError(s.key("boxes"), "give either boxes or lower/upper, not both");
        const json& arr = s.require("boxes");
        if (!arr.is_array() || arr.empty()) throw ConfigError(s.key("boxes"), "expected a non-empty array");
        for (std::size_t i = 0; i < arr.size(); ++i) {
            Section bs(arr[i], s.key(fmt::format("boxes[{}]", i)));
            c.domain.boxes.push_back(read_box(bs));
        }
    } else {
        c.domain.boxes.push_back(read_box(s));
        return;  // read_box already rejected unknown keys
    }
    s.reject_unknown();
}

void require_positive(double v, const std::string& path) {
    if (!(v > 0.0)) throw ConfigError(path, "must be positive");
}

void require_at_least(int v, int lo, const std::string& path) {
    if (v < lo) throw ConfigError(path, fmt::format("must be at least {}", lo));
}

}  // namespace

Grid RunConfig::grid_for(const Box& box) const {
    Grid g;
    g.box = box;
    g.T = domain.T;
    g.n = points;
    return g;
}

EngineSettings RunConfig::engine() const {
    EngineSettings s;
    s.mu = mu;
    s.tau = tau;
    s.quad = HeatQuadrature(legendre_order, hermite_order);
    return s;
}

PicardOptions RunConfig::picard_options() const {
    PicardOptions o;
    o.tol = picard_tol;
    o.max_iter = max_iter;
    o.stop_on_budget = stop_on_budget;
    o.holder_pairs = holder_pairs;
    o.seed = seed;
    return o;
}

int RunConfig::margin_for(const Grid& g) const {
    if (residual_margin > 0) return residual_margin;
    return std::max(1, (std::min({g.n[1], g.n[2], g.n[3]}) - 1) / 4);
}

void validate(const RunConfig& c) {
    if (!c.subcommand.empty() &&
        std::find_if(kSubcommands.begin(), kSubcommands.end(), [&](const char* s) { return c.subcommand == s; }) ==
            kSubcommands.end())
        throw ConfigError("subcommand", "unknown subcommand '" + c.subcommand + "'");
    require_positive(c.domain.T, "domain.T");
    for (std::size_t i = 0; i < c.domain.boxes.size(); ++i)
        for (int a = 0; a < 3; ++a)
            if (!(c.domain.boxes[i].hi[a] > c.domain.boxes[i].lo[a]))
                throw ConfigError(c.domain.boxes.size() == 1 ? "domain.upper" : fmt::format("domain.boxes[{}].upper", i),
                                  "upper corner must exceed the lower corner on every axis");
    for (std::size_t i = 0; i < c.domain.boxes.size(); ++i)
        for (std::size_t j = i + 1; j < c.domain.boxes.size(); ++j)
            if (interiors_overlap(c.domain.boxes[i], c.domain.boxes[j]))
                throw ConfigError(fmt::format("domain.boxes[{}]", j), "boxes must have disjoint interiors");
    require_positive(c.mu, "physics.mu");
    require_positive(c.rho, "physics.rho");
    for (int a = 0; a < 4; ++a) require_at_least(c.points[a], 3, fmt::format("grid.points[{}]", a));
    require_at_least(c.legendre_order, 1, "grid.legendre_order");
    require_at_least(c.hermite_order, 1, "grid.hermite_order");
    require_at_least(c.cells_per_axis, 1, "grid.cells_per_axis");
    require_positive(c.budget.M, "budget.M");
    require_positive(c.budget.C, "budget.C");
    if (!(c.budget.C1 >= 0.0)) throw ConfigError("budget.C1", "must be non-negative");
    if (!(c.budget.C >= 2.0 * c.budget.C1)) throw ConfigError("budget.C", "must be at least 2 C1");
    if (!(c.budget.alpha > 0.0 && c.budget.alpha < 1.0)) throw ConfigError("budget.alpha", "must lie in (0, 1)");
    if (c.epsilon_trunc < 0.0) throw ConfigError("budget.epsilon_trunc", "must be non-negative");
    require_positive(c.picard_tol, "tolerances.picard_tol");
    require_at_least(c.max_iter, 1, "tolerances.max_iter");
    require_positive(c.rank_tol, "tolerances.rank_tol");
    require_at_least(c.refinement_levels, 2, "tolerances.refinement_levels");
    require_at_least(c.residual_margin, 0, "tolerances.residual_margin");
    require_at_least(c.frequency_samples, 1, "verify.frequency_samples");
    require_at_least(c.capacity_samples, 2, "verify.capacity_samples");
    require_at_least(c.partition_max_depth, 0, "verify.partition_max_depth");
    require_at_least(c.holder_pairs, 1, "verify.holder_pairs");
    if (c.forcing.amplitude < 0.0) throw ConfigError("forcing.amplitude", "must be non-negative");
    require_positive(c.forcing.radius, "forcing.radius");
}

RunConfig parse_config(const std::string& text) {
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigError("<root>", std::string("malformed document: ") + e.what());
    }
    RunConfig c;
    Section root(doc, "");
    c.subcommand = root.text("subcommand", "");
    {
        const json& seed = root.require("seed");
        if (!seed.is_number_unsigned() && !(seed.is_number_integer() && seed.get<long long>() >= 0))
            throw ConfigError("seed", "expected a non-negative integer");
        c.seed = seed.get<unsigned long long>();
    }
    c.output = root.text("output", c.output);

    if (!root.has("domain")) throw ConfigError("domain", "missing required key");
    read_domain(root.sub("domain"), c);

    {
        Section s = root.sub("physics");
        if (!root.has("physics")) throw ConfigError("physics", "missing required key");
        c.mu = s.number("mu");
        c.rho = s.number("rho");
        if (!(c.rho > 0.0)) throw ConfigError(s.key("rho"), "must be positive");
        c.tau = 1.0 / c.rho;
        s.reject_unknown();
    }
    {
        Section s = root.sub("grid");
        if (const json* p = s.find("points")) {
            if (p->is_number_integer()) {
                c.points.fill(p->get<int>());
            } else if (p->is_array() && p->size() == 4) {
                for (int a = 0; a < 4; ++a) {
                    if (!(*p)[a].is_number_integer())
                        throw ConfigError(s.key(fmt::format("points[{}]", a)), "expected an integer");
                    c.points[a] = (*p)[a].get<int>();
                }
            } else {
                throw ConfigError(s.key("points"), "expected an integer or an array [t, x1, x2, x3]");
            }
        }
        c.legendre_order = s.integer("legendre_order", c.legendre_order);
        c.hermite_order = s.integer("hermite_order", c.hermite_order);
        c.cells_per_axis = s.integer("cells_per_axis", c.cells_per_axis);
        s.reject_unknown();
    }
    {
        Section s = root.sub("budget");
        c.budget.M = s.number("M", c.budget.M);
        c.budget.C = s.number("C", c.budget.C);
        c.budget.C1 = s.number("C1", c.budget.C1);
        c.budget.alpha = s.number("alpha", c.budget.alpha);
        c.epsilon_trunc = s.number("epsilon_trunc", c.epsilon_trunc);
        s.reject_unknown();
    }
    {
        Section s = root.sub("forcing");
        const Box bb = c.domain.bounding_box();
        c.forcing.preset = s.text("preset", "zero");
        c.forcing.amplitude = s.number("amplitude", 0.0);
        c.forcing.center = s.vec3("center", bb.center());
        c.forcing.radius = s.number("radius", 0.4 * std::min({bb.extent(0), bb.extent(1), bb.extent(2)}));
        c.forcing.direction = s.vec3("direction", c.forcing.direction);
        s.reject_unknown();
    }
    {
        Section s = root.sub("tolerances");
        c.picard_tol = s.number("picard_tol", c.picard_tol);
        c.max_iter = s.integer("max_iter", c.max_iter);
        c.rank_tol = s.number("rank_tol", c.rank_tol);
        c.refinement_levels = s.integer("refinement_levels", c.refinement_levels);
        c.residual_margin = s.integer("residual_margin", c.residual_margin);
        s.reject_unknown();
    }
    {
        Section s = root.sub("verify");
        c.frequency_samples = s.integer("frequency_samples", c.frequency_samples);
        c.capacity_samples = s.integer("capacity_samples", c.capacity_samples);
        c.partition_max_depth = s.integer("partition_max_depth", c.partition_max_depth);
        c.holder_pairs = s.integer("holder_pairs", c.holder_pairs);
        c.stop_on_budget = s.boolean("stop_on_budget", c.stop_on_budget);
        s.reject_unknown();
    }
    root.reject_unknown();
    validate(c);
    return c;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("<file>", "cannot read " + path.string());
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str());
}

std::string describe(const RunConfig& c) {
    std::string out;
    auto line = [&](std::string_view k, const std::string& v) { out += fmt::format("  {:<22} {}\n", k, v); };
    auto vec = [](const Vec3& v) { return fmt::format("[{:.17g}, {:.17g}, {:.17g}]", v[0], v[1], v[2]); };
    out += "configuration\n";
    line("subcommand", c.subcommand);
    line("seed", std::to_string(c.seed));
    line("T", fmt::format("{:.17g}", c.domain.T));
    for (std::size_t i = 0; i < c.domain.boxes.size(); ++i)
        line(fmt::format("box[{}]", i), vec(c.domain.boxes[i].lo) + " - " + vec(c.domain.boxes[i].hi));
    line("mu", fmt::format("{:.17g}", c.mu));
    line("rho / tau", fmt::format("{:.17g} / {:.17g}", c.rho, c.tau));
    line("grid points", fmt::format("{} x {} x {} x {}", c.points[0], c.points[1], c.points[2], c.points[3]));
    line("legendre / hermite", fmt::format("{} / {}", c.legendre_order, c.hermite_order));
    line("cells per axis", std::to_string(c.cells_per_axis));
    line("budget M C C1 alpha",
         fmt::format("{:.17g} {:.17g} {:.17g} {:.17g}", c.budget.M, c.budget.C, c.budget.C1, c.budget.alpha));
    line("epsilon_trunc", fmt::format("{:.17g}", c.epsilon_trunc));
    line("forcing", fmt::format("{} amplitude {:.17g} radius {:.17g}", c.forcing.preset, c.forcing.amplitude,
                                c.forcing.radius));
    line("forcing center", vec(c.forcing.center));
    line("forcing direction", vec(c.forcing.direction));
    line("picard tol / max", fmt::format("{:.17g} / {}", c.picard_tol, c.max_iter));
    line("rank tol", fmt::format("{:.17g}", c.rank_tol));
    line("refinement levels", std::to_string(c.refinement_levels));
    line("residual margin", std::to_string(c.residual_margin));
    line("frequency samples", std::to_string(c.frequency_samples));
    line("capacity samples", std::to_string(c.capacity_samples));
    line("partition max depth", std::to_string(c.partition_max_depth));
    line("holder pairs", std::to_string(c.holder_pairs));
    line("stop on budget", c.stop_on_budget ? "yes" : "no");
    return out;
}

}  // namespace nsfp
