/*
 * Copyright 2026 The cpwalk Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <toml.hpp>

#include "cpwalk/errors.hpp"
#include "cpwalk/harness.hpp"
#include "json_util.hpp"

namespace cpwalk {

namespace {

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
    fail(ErrorCode::validation_error, "field '" + field + "': " + why);
}

// Typed access to one TOML table; keys that are never read are rejected.
class Section {
public:
    Section(const toml::table* table, std::string prefix) : table_(table), prefix_(std::move(prefix)) {}

    bool present() const { return table_ != nullptr; }
    std::string field(std::string_view key) const {
        return prefix_.empty() ? std::string(key) : prefix_ + "." + std::string(key);
    }

    const toml::node* raw(std::string_view key) {
        used_.insert(std::string(key));
        return table_ ? table_->get(key) : nullptr;
    }

    std::optional<double> number(std::string_view key) {
        const toml::node* n = raw(key);
        if (!n) return std::nullopt;
        if (auto v = n->value_exact<double>()) return check_finite(key, *v);
        if (auto v = n->value_exact<std::int64_t>()) return double(*v);
        invalid(field(key), "expected a number");
    }

    std::optional<std::int64_t> integer(std::string_view key) {
        const toml::node* n = raw(key);
        if (!n) return std::nullopt;
        if (auto v = n->value_exact<std::int64_t>()) return *v;
        invalid(field(key), "expected an integer");
    }

    std::optional<bool> boolean(std::string_view key) {
        const toml::node* n = raw(key);
        if (!n) return std::nullopt;
        if (auto v = n->value_exact<bool>()) return *v;
        invalid(field(key), "expected true or false");
    }

    std::optional<std::string> string(std::string_view key) {
        const toml::node* n = raw(key);
        if (!n) return std::nullopt;
        if (auto v = n->value_exact<std::string>()) return *v;
        invalid(field(key), "expected a string");
    }

    std::optional<std::vector<double>> numbers(std::string_view key) {
        const toml::node* n = raw(key);
        if (!n) return std::nullopt;
        const toml::array* a = n->as_array();
        if (!a) invalid(field(key), "expected an array of numbers");
        std::vector<double> out;
        for (const auto& e : *a) {
            if (auto v = e.value_exact<double>())
                out.push_back(check_finite(key, *v));
            else if (auto i = e.value_exact<std::int64_t>())
                out.push_back(double(*i));
            else
                invalid(field(key), "expected an array of numbers");
        }
        return out;
    }

    std::optional<std::vector<int>> integers(std::string_view key) {
        auto xs = numbers(key);
        if (!xs) return std::nullopt;
        std::vector<int> out;
        for (double x : *xs) {
            if (x != std::floor(x) || std::abs(x) > 1e9) invalid(field(key), "expected integers");
            out.push_back(int(x));
        }
        return out;
    }

    void finish() const {
        if (!table_) return;
        for (const auto& [k, v] : *table_) {
            if (!used_.count(std::string(k.str()))) invalid(field(k.str()), "unknown key");
        }
    }

private:
    double check_finite(std::string_view key, double v) const {
        if (!std::isfinite(v)) invalid(field(key), "must be finite");
        return v;
    }

    const toml::table* table_;
    std::string prefix_;
    std::set<std::string> used_;
};

Section sub(Section& parent, std::string_view key) {
    const toml::node* n = parent.raw(key);
    if (n && !n->is_table()) invalid(std::string(key), "expected a table");
    return Section(n ? n->as_table() : nullptr, std::string(key));
}

template <class T, class Pred>
void require_all(const std::string& field, const std::vector<T>& xs, Pred ok, const char* why) {
    for (const auto& x : xs)
        if (!ok(x)) invalid(field, why);
}

KernelSpec read_kernel(Section& k, int env_dim) {
    const int dim = int(k.integer("dimension").value_or(env_dim));
    if (dim != env_dim) invalid(k.field("dimension"), "must equal environment.dimension");
    const auto gamma = k.number("gamma");
    const toml::node* n = k.raw("rates");
    if (!n) invalid(k.field("rates"), "required");
    const toml::array* rows = n->as_array();
    if (!rows || rows->empty()) invalid(k.field("rates"), "expected a non-empty array of tables");
    std::vector<RateEntry> entries;
    for (std::size_t i = 0; i < rows->size(); ++i) {
        const toml::table* row = rows->get(i)->as_table();
        const std::string where = k.field("rates") + "[" + std::to_string(i) + "]";
        if (!row) invalid(where, "expected a table {state, z, rate}");
        Section r(row, where);
        RateEntry e;
        const auto state = r.integer("state");
        if (!state || (*state != 0 && *state != 1)) invalid(r.field("state"), "must be 0 or 1");
        e.state = int(*state);
        const auto z = r.integers("z");
        if (!z) invalid(r.field("z"), "required");
        e.displacement = *z;
        const auto rate = r.number("rate");
        if (!rate) invalid(r.field("rate"), "required");
        e.rate = *rate;
        r.finish();
        entries.push_back(std::move(e));
    }
    try {
        return build_kernel(entries, dim, gamma);
    } catch (const Error& e) {
        invalid(k.field("rates"), e.what());
    }
}

double positive(Section& s, std::string_view key, double fallback) {
    const double v = s.number(key).value_or(fallback);
    if (!(v > 0.0)) invalid(s.field(key), "must be > 0");
    return v;
}

} // namespace

void resolve_radius(ExperimentConfig& c) {
    double horizon = c.section_horizon;
    for (double t : c.grids.t) horizon = std::max(horizon, t);
    for (double t : c.grids.T) horizon = std::max(horizon, t);
    double lam = c.lambda;
    for (double l : c.grids.lambda) lam = std::max(lam, l);
    c.horizon = horizon;
    c.window = c.kernel ? walk_reach(*c.kernel, horizon) : 0;
    if (!c.radius) {
        c.resolved_radius = safety_radius(c.window, lam, horizon, c.pad_factor);
        return;
    }
    if (*c.radius <= c.window)
        invalid("environment.radius", "must exceed the walker reach " + std::to_string(c.window));
    c.resolved_radius = *c.radius;
    if (horizon > 0.0) c.pad_factor = double(*c.radius - c.window) / (lam * horizon);
}

ExperimentConfig parse_config(std::string_view text, std::string_view source) {
    toml::table root;
    try {
        root = toml::parse(text, source);
    } catch (const toml::parse_error& e) {
        const auto& b = e.source().begin;
        fail(ErrorCode::parse_error, std::string(source) + ":" + std::to_string(b.line) + ":" +
                                         std::to_string(b.column) + ": " + std::string(e.description()));
    }

    ExperimentConfig c;
    c.source = std::string(source);
    Section top(&root, "");
    if (auto v = top.string("experiment")) {
        if (v->empty()) invalid("experiment", "must not be empty");
        c.experiment = *v;
    }
    if (auto v = top.integer("seed")) {
        if (*v < 0) invalid("seed", "must be >= 0");
        c.seed = std::uint64_t(*v);
    }
    if (auto v = top.integer("replicas")) {
        if (*v < 1) invalid("replicas", "must be >= 1");
        c.replicas = std::size_t(*v);
    }
    if (auto v = top.string("output")) c.output = *v;
    if (auto v = top.number("abort_budget")) {
        if (!(*v >= 0.0 && *v <= 1.0)) invalid("abort_budget", "must lie in [0, 1]");
        c.abort_budget = *v;
    }
    if (auto v = top.number("level")) {
        if (!(*v > 0.0 && *v < 1.0)) invalid("level", "must lie in (0, 1)");
        c.level = *v;
    }
    if (auto v = top.integer("threads")) {
        if (*v < 1 || *v > 4096) invalid("threads", "must lie in [1, 4096]");
        c.threads = unsigned(*v);
    }

    Section env = sub(top, "environment");
    c.lambda = positive(env, "lambda", c.lambda);
    if (auto v = env.integer("dimension")) {
        if (*v < 1 || *v > kMaxDim) invalid(env.field("dimension"), "must lie in [1, 4]");
        c.dimension = int(*v);
    }
    if (const toml::node* r = env.raw("radius")) {
        if (auto s = r->value_exact<std::string>()) {
            if (*s != "auto") invalid(env.field("radius"), "expected \"auto\" or a positive integer");
        } else if (auto i = r->value_exact<std::int64_t>()) {
            if (*i < 1 || *i > 1000000) invalid(env.field("radius"), "must lie in [1, 1e6]");
            c.radius = int(*i);
        } else {
            invalid(env.field("radius"), "expected \"auto\" or a positive integer");
        }
    }
    if (auto v = env.number("pad_factor")) {
        if (c.radius) invalid(env.field("pad_factor"), "give either an explicit radius or pad_factor");
        if (!(*v > 0.0)) invalid(env.field("pad_factor"), "must be > 0");
        c.pad_factor = *v;
    }
    if (auto v = env.string("boundary")) {
        try {
            c.boundary = parse_boundary(*v);
        } catch (const Error&) {
            invalid(env.field("boundary"), "expected \"truncate\" or \"periodic\"");
        }
    }
    if (auto v = env.string("initial")) {
        try {
            c.initial = parse_initial(*v);
        } catch (const Error& e) {
            invalid(env.field("initial"), e.what());
        }
    }
    c.initial.burn_in = positive(env, "burn_in", c.initial.burn_in);
    env.finish();

    Section k = sub(top, "kernel");
    if (k.present()) c.kernel = read_kernel(k, c.dimension);
    k.finish();

    Section g = sub(top, "grids");
    auto grid = [&](std::string_view key, std::vector<double>& dst, bool strictly_positive) {
        if (auto v = g.numbers(key)) {
            if (v->empty()) invalid(g.field(key), "must not be empty");
            if (strictly_positive) require_all(g.field(key), *v, [](double x) { return x > 0.0; }, "values must be > 0");
            dst = *v;
        }
    };
    grid("t", c.grids.t, true);
    grid("lambda", c.grids.lambda, true);
    grid("T", c.grids.T, true);
    grid("L", c.grids.L, false);
    grid("epsilon", c.grids.epsilon, true);
    grid("m", c.grids.m, true);
    if (auto v = g.integers("K")) {
        if (v->empty()) invalid(g.field("K"), "must not be empty");
        require_all(g.field("K"), *v, [](int x) { return x >= 1; }, "values must be >= 1");
        c.grids.K = *v;
    }
    g.finish();

    Section sa = sub(top, "subadd");
    c.subadd.t = positive(sa, "t", c.subadd.t);
    c.subadd.s = positive(sa, "s", c.subadd.s);
    if (auto v = sa.integer("k_max")) {
        if (*v < 1) invalid(sa.field("k_max"), "must be >= 1");
        c.subadd.k_max = int(*v);
    }
    if (double(c.subadd.k_max) > c.subadd.s) invalid(sa.field("k_max"), "must be <= subadd.s");
    if (auto v = sa.number("ks_alpha")) {
        if (!(*v > 0.0 && *v < 1.0)) invalid(sa.field("ks_alpha"), "must lie in (0, 1)");
        c.subadd.ks_alpha = *v;
    }
    c.subadd.shared = sa.boolean("shared").value_or(false);
    sa.finish();

    Section ld = sub(top, "ldp");
    c.ldp.center = ld.number("center");
    if (auto v = ld.numbers("walk_center")) {
        if (int(v->size()) != c.dimension) invalid(ld.field("walk_center"), "needs one entry per dimension");
        Vector w{};
        for (std::size_t i = 0; i < v->size(); ++i) w[i] = (*v)[i];
        c.ldp.walk_center = w;
    }
    if (auto v = ld.integer("reference_replicas")) {
        if (*v < 2) invalid(ld.field("reference_replicas"), "must be >= 2");
        c.ldp.reference_replicas = std::size_t(*v);
    }
    ld.finish();

    Section cp = sub(top, "coupling");
    if (auto v = cp.number("density")) {
        if (!(*v > 0.0 && *v < 1.0)) invalid(cp.field("density"), "must lie in (0, 1)");
        c.coupling.density = *v;
    }
    c.coupling.window = positive(cp, "window", c.coupling.window);
    c.coupling.dual = cp.boolean("dual").value_or(true);
    cp.finish();

    Section cn = sub(top, "conemix");
    if (auto v = cn.integer("reference")) {
        if (*v != 0 && *v != 1) invalid(cn.field("reference"), "must be 0 or 1");
        c.cone.reference = int(*v);
    }
    if (auto v = cn.number("extra_horizon")) {
        if (!(*v >= 0.0)) invalid(cn.field("extra_horizon"), "must be >= 0");
        c.cone.extra_horizon = *v;
    }
    c.cone.grid_step = positive(cn, "grid_step", c.cone.grid_step);
    c.cone.exact = cn.boolean("exact").value_or(false);
    cn.finish();

    Section sl = sub(top, "slab");
    c.slab.t_end = positive(sl, "t_end", c.slab.t_end);
    sl.finish();

    Section rc = sub(top, "rho_curve");
    c.rho_curve.t = positive(rc, "t", c.rho_curve.t);
    rc.finish();

    Section dl = sub(top, "density_lb");
    if (auto v = dl.string("observer")) {
        if (*v == "rightmost")
            c.density.observer = ObserverKind::d1_rightmost;
        else if (*v == "slab")
            c.density.observer = ObserverKind::slab;
        else
            invalid(dl.field("observer"), "expected \"rightmost\" or \"slab\"");
    } else {
        c.density.observer = c.dimension == 1 ? ObserverKind::d1_rightmost : ObserverKind::slab;
    }
    if (c.density.observer == ObserverKind::d1_rightmost && c.dimension != 1)
        invalid(dl.field("observer"), "the rightmost observer needs dimension 1");
    c.density.horizon = positive(dl, "horizon", c.density.horizon);
    if (auto v = dl.integer("K")) {
        if (*v < 1) invalid(dl.field("K"), "must be >= 1");
        c.density.K = int(*v);
    }
    c.density.L = dl.number("L").value_or(0.0);
    if (auto v = dl.number("delta")) {
        if (!(*v >= 0.0)) invalid(dl.field("delta"), "must be >= 0");
        c.density.delta = *v;
    }
    c.density.shared = dl.boolean("shared").value_or(false);
    dl.finish();

    top.finish();

    // Sections with their own time scale extend the horizon.
    if (sa.present()) c.section_horizon = std::max(c.section_horizon, c.subadd.t + c.subadd.s);
    if (sl.present()) c.section_horizon = std::max(c.section_horizon, c.slab.t_end);
    if (rc.present()) c.section_horizon = std::max(c.section_horizon, c.rho_curve.t);
    if (dl.present()) c.section_horizon = std::max(c.section_horizon, 2.0 * c.density.horizon);
    resolve_radius(c);
    return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorCode::parse_error, path.string() + ": cannot open file");
    std::ostringstream ss;
    ss << in.rdbuf();
    return parse_config(ss.str(), path.string());
}

RunSpec ExperimentConfig::run_spec() const {
    RunSpec r;
    r.experiment = experiment;
    r.seed = seed;
    r.replicas = replicas;
    r.threads = resolve_threads(threads.value_or(0));
    r.level = level;
    r.abort_budget = abort_budget;
    r.pad_factor = pad_factor;
    return r;
}

std::string ExperimentConfig::to_json() const { return detail::config_json(*this).dump(2); }

} // namespace cpwalk
