#include "regfrac/config.hpp"

#include "regfrac/error.hpp"
#include "regfrac/field_io.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace regfrac {

namespace {

struct Entry {
    std::string value;
    int line = 0;
    bool used = false;
};

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r");
    return s.substr(b, e - b + 1);
}

std::string fmt(double v) {
    std::ostringstream o;
    o.precision(17);
    o << v;
    return o.str();
}

class Parser {
public:
    Parser(const std::string& text, std::string origin, std::filesystem::path base)
        : origin_(std::move(origin)), base_(std::move(base)) {
        std::istringstream in(text);
        std::string raw, section;
        int line = 0;
        while (std::getline(in, raw)) {
            ++line;
            const auto hash = raw.find('#');
            std::string s = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
            if (s.empty()) continue;
            if (s.front() == '[') {
                if (s.back() != ']') fail(line, "malformed section header '" + s + "'");
                section = trim(s.substr(1, s.size() - 2));
                if (!kSections.count(section)) fail(line, "unknown section [" + section + "]");
                if (section_line_.count(section)) fail(line, "section [" + section + "] appears twice");
                section_line_[section] = line;
                order_.push_back(section);
                continue;
            }
            const auto eq = s.find('=');
            if (eq == std::string::npos) fail(line, "expected 'key = value', got '" + s + "'");
            if (section.empty()) fail(line, "key outside of any section");
            const std::string key = trim(s.substr(0, eq));
            const std::string value = trim(s.substr(eq + 1));
            if (key.empty()) fail(line, "empty key");
            auto& sec = entries_[section];
            if (sec.count(key)) fail(line, section + "." + key + ": given twice");
            sec[key] = {value, line, false};
        }
    }

    [[noreturn]] void fail(int line, const std::string& msg) const {
        throw InvalidArgument(origin_ + ":" + std::to_string(line) + ": " + msg);
    }
    [[noreturn]] void fail_key(const std::string& sec, const std::string& key, const std::string& msg) const {
        fail(line_of(sec, key), sec + "." + key + ": " + msg);
    }

    int line_of(const std::string& sec, const std::string& key) const {
        auto s = entries_.find(sec);
        if (s != entries_.end()) {
            auto k = s->second.find(key);
            if (k != s->second.end()) return k->second.line;
        }
        auto l = section_line_.find(sec);
        return l == section_line_.end() ? 0 : l->second;
    }

    const Entry* find(const std::string& sec, const std::string& key) {
        auto s = entries_.find(sec);
        if (s == entries_.end()) return nullptr;
        auto k = s->second.find(key);
        if (k == s->second.end()) return nullptr;
        k->second.used = true;
        return &k->second;
    }

    double number(const std::string& sec, const std::string& key, std::optional<double> def) {
        const Entry* e = find(sec, key);
        if (!e) {
            if (!def) fail_key(sec, key, "required");
            echo(sec, key, fmt(*def));
            return *def;
        }
        double v = parse_number(sec, key, e->value);
        echo(sec, key, e->value);
        return v;
    }

    int integer(const std::string& sec, const std::string& key, int def) {
        const Entry* e = find(sec, key);
        if (!e) {
            echo(sec, key, std::to_string(def));
            return def;
        }
        int v = 0;
        auto [p, ec] = std::from_chars(e->value.data(), e->value.data() + e->value.size(), v);
        if (ec != std::errc() || p != e->value.data() + e->value.size())
            fail_key(sec, key, "expected an integer, got '" + e->value + "'");
        echo(sec, key, e->value);
        return v;
    }

    bool boolean(const std::string& sec, const std::string& key, bool def) {
        const Entry* e = find(sec, key);
        if (!e) {
            echo(sec, key, def ? "true" : "false");
            return def;
        }
        echo(sec, key, e->value);
        if (e->value == "true" || e->value == "yes" || e->value == "1") return true;
        if (e->value == "false" || e->value == "no" || e->value == "0") return false;
        fail_key(sec, key, "expected true or false, got '" + e->value + "'");
    }

    std::string word(const std::string& sec, const std::string& key, const std::string& def,
                     const std::set<std::string>& allowed) {
        const Entry* e = find(sec, key);
        const std::string v = e ? e->value : def;
        if (!allowed.count(v)) {
            std::string list;
            for (const auto& a : allowed) list += (list.empty() ? "" : ", ") + a;
            fail_key(sec, key, "'" + v + "' is not one of " + list);
        }
        echo(sec, key, v);
        return v;
    }

    std::filesystem::path file(const std::string& sec, const std::string& key) {
        const Entry* e = find(sec, key);
        if (!e) fail_key(sec, key, "required");
        echo(sec, key, e->value);
        std::filesystem::path p(e->value);
        if (p.is_relative()) p = base_ / p;
        if (!std::filesystem::exists(p)) fail_key(sec, key, "file not found: " + p.string());
        return p;
    }

    std::vector<double> numbers(const std::string& sec, const std::string& key, std::vector<double> def) {
        const Entry* e = find(sec, key);
        if (!e) {
            std::string s;
            for (double v : def) s += (s.empty() ? "" : ", ") + fmt(v);
            echo(sec, key, s);
            return def;
        }
        std::vector<double> out;
        std::string item;
        std::istringstream in(e->value);
        while (std::getline(in, item, ',')) {
            item = trim(item);
            if (item.empty()) fail_key(sec, key, "empty list entry");
            out.push_back(parse_number(sec, key, item));
        }
        echo(sec, key, e->value);
        return out;
    }

    Vec2 vec2(const std::string& sec, const std::string& key, Vec2 def) {
        auto v = numbers(sec, key, {def.x, def.y});
        if (v.size() != 2) fail_key(sec, key, "expected two numbers 'x, y'");
        return {v[0], v[1]};
    }

    std::vector<Vec2> points(const std::string& sec, const std::string& key) {
        const Entry* e = find(sec, key);
        if (!e) fail_key(sec, key, "required");
        std::vector<Vec2> out;
        std::string item;
        std::istringstream in(e->value);
        while (std::getline(in, item, ';')) {
            std::istringstream pt(item);
            std::string xs, ys, extra;
            if (!(pt >> xs >> ys) || (pt >> extra)) fail_key(sec, key, "expected 'x y; x y; ...'");
            out.push_back({parse_number(sec, key, xs), parse_number(sec, key, ys)});
        }
        echo(sec, key, e->value);
        return out;
    }

    // Every key present in the file must have been consumed.
    void reject_unused() const {
        for (const auto& [sec, keys] : entries_)
            for (const auto& [key, e] : keys)
                if (!e.used) fail(e.line, "unknown or inapplicable key " + sec + "." + key);
    }

    void echo(const std::string& sec, const std::string& key, const std::string& value) {
        for (auto& [s, kv] : echo_)
            if (s == sec) {
                kv.emplace_back(key, value);
                return;
            }
        echo_.push_back({sec, {{key, value}}});
    }

    auto take_echo() { return std::move(echo_); }
    const std::filesystem::path& base() const { return base_; }

private:
    double parse_number(const std::string& sec, const std::string& key, const std::string& s) const {
        double v = 0.0;
        auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
        if (ec != std::errc() || p != s.data() + s.size() || !std::isfinite(v))
            fail_key(sec, key, "expected a number, got '" + s + "'");
        return v;
    }

    inline static const std::set<std::string> kSections{"grid", "obstacle", "kernel", "reaction",
                                                        "time", "initial", "output"};
    std::string origin_;
    std::filesystem::path base_;
    std::map<std::string, std::map<std::string, Entry>> entries_;
    std::map<std::string, int> section_line_;
    std::vector<std::string> order_;
    std::vector<std::pair<std::string, std::vector<std::pair<std::string, std::string>>>> echo_;
};

// Runs f, re-throwing library errors anchored at section.key.
template <class F>
auto at_key(const Parser& p, const std::string& sec, const std::string& key, F&& f) {
    try {
        return f();
    } catch (const InvalidArgument& e) {
        p.fail_key(sec, key, e.what());
    }
}

}  // namespace

RunConfig parse_config(const std::string& text, const std::string& origin, const std::filesystem::path& base_dir) {
    Parser p(text, origin, base_dir);
    RunConfig rc;
    SimConfig& c = rc.sim;

    c.halfwidth = p.number("grid", "halfwidth", 20.0);
    c.n_cells = p.integer("grid", "n_cells", 128);
    c.liouville_closure = p.boolean("grid", "liouville_closure", false);

    const std::string shape = p.word("obstacle", "shape", "none", {"none", "disk", "ellipse", "polygon", "raster"});
    if (shape == "disk") {
        const Vec2 ctr = p.vec2("obstacle", "center", {0.0, 0.0});
        const double r = p.number("obstacle", "radius", std::nullopt);
        c.obstacle = at_key(p, "obstacle", "radius", [&] { return Obstacle::disk(ctr, r); });
    } else if (shape == "ellipse") {
        const Vec2 ctr = p.vec2("obstacle", "center", {0.0, 0.0});
        const double a = p.number("obstacle", "a", std::nullopt);
        const double b = p.number("obstacle", "b", std::nullopt);
        c.obstacle = at_key(p, "obstacle", "a", [&] { return Obstacle::ellipse(ctr, a, b); });
    } else if (shape == "polygon") {
        auto v = p.points("obstacle", "vertices");
        c.obstacle = at_key(p, "obstacle", "vertices", [&] { return Obstacle::polygon(v); });
    } else if (shape == "raster") {
        auto f = p.file("obstacle", "file");
        c.obstacle = at_key(p, "obstacle", "file", [&] { return Obstacle::raster(read_mask_pgm(f, c.halfwidth)); });
    }

    const std::string family = p.word("kernel", "family", "regularized", {"regularized", "table"});
    const double c_norm = p.number("kernel", "c_norm", 1.0);
    if (family == "regularized") {
        const double s = p.number("kernel", "s", 0.5);
        const double delta = p.number("kernel", "delta", 0.01);
        at_key(p, "kernel", "s", [&] {
            if (!(s > 0.0 && s < 1.0)) throw InvalidArgument("must lie in (0,1), got " + fmt(s));
            return 0;
        });
        at_key(p, "kernel", "delta", [&] {
            if (!(delta > 0.0)) throw InvalidArgument("must be > 0 (the singular kernel is 1-D only)");
            return 0;
        });
        c.kernel = at_key(p, "kernel", "c_norm",
                          [&] { return make_kernel(KernelFamily::RegularizedFractional, s, 2, delta, c_norm); });
    } else {
        auto f = p.file("kernel", "file");
        const bool normalize = p.boolean("kernel", "normalize", true);
        c.kernel = at_key(p, "kernel", "file", [&] {
            RadialTable t;
            for (auto [r, v] : read_two_column_csv(f)) {
                t.radius.push_back(r);
                t.value.push_back(v);
            }
            if (normalize) t = normalize_table_mass(t, 2);
            return make_table_kernel(t, 2, c_norm);
        });
    }

    const std::string kind = p.word("reaction", "kind", "cubic", {"cubic", "tabulated"});
    if (kind == "cubic") {
        const double theta = p.number("reaction", "theta", 0.1);
        c.reaction = at_key(p, "reaction", "theta", [&] { return BistableSpec::cubic(theta); });
    } else {
        auto f = p.file("reaction", "file");
        c.reaction = at_key(p, "reaction", "file", [&] {
            std::vector<double> u, fv;
            for (auto [a, b] : read_two_column_csv(f)) {
                u.push_back(a);
                fv.push_back(b);
            }
            return BistableSpec::tabulated(u, fv);
        });
    }

    c.t_end = p.number("time", "t_end", 280.0);
    {
        const Entry* e = p.find("time", "dt");
        if (!e || e->value == "auto") {
            p.echo("time", "dt", "auto");
        } else {
            c.dt = p.number("time", "dt", std::nullopt);
        }
    }
    c.steady_tol = p.number("time", "steady_tol", 1e-6);
    c.snapshot_times = p.numbers("time", "snapshots", {0, 40, 80, 120, 160, 200, 240, 280});

    const std::string ik = p.word("initial", "kind", "heaviside", {"heaviside", "constant", "file"});
    if (ik == "heaviside") {
        c.initial.kind = InitialKind::HeavisideHalfPlane;
        c.initial.direction = p.vec2("initial", "direction", {1.0, 0.0});
        c.initial.offset = p.number("initial", "offset", 0.0);
    } else if (ik == "constant") {
        c.initial.kind = InitialKind::Constant;
        c.initial.value = p.number("initial", "value", std::nullopt);
    } else {
        c.initial.kind = InitialKind::Custom;
        auto f = p.file("initial", "file");
        c.initial.custom_path = f.string();
        c.initial.custom = at_key(p, "initial", "file", [&] { return read_field_csv(f, c.n_cells); });
        for (double& v : c.initial.custom)
            if (std::isnan(v)) v = 0.0;
    }

    {
        const Entry* e = p.find("output", "name");
        rc.name = e ? e->value : "run";
        p.echo("output", "name", rc.name);
    }

    p.reject_unused();
    try {
        c.validate();
        if (c.obstacle) (void)c.make_grid();
    } catch (const InvalidArgument& e) {
        // validate() messages start with "section.key: "
        const std::string msg = e.what();
        const auto dot = msg.find('.');
        const auto colon = msg.find(':');
        if (dot != std::string::npos && colon != std::string::npos && dot < colon) {
            const std::string sec = msg.substr(0, dot), key = msg.substr(dot + 1, colon - dot - 1);
            p.fail(p.line_of(sec, key), msg);
        }
        p.fail(0, msg);
    }
    rc.echo = p.take_echo();
    return rc;
}

RunConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw InvalidArgument("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str(), path.string(), path.parent_path().empty() ? "." : path.parent_path());
}

}  // namespace regfrac
