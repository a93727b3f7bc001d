#include "atomlight/config.hpp"

#include "atomlight/error.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <functional>
#include <set>
#include <sstream>
#include <thread>

namespace atomlight {

namespace {

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

// Drops a trailing comment, leaving '#' inside strings alone.
std::string strip_comment(const std::string& line) {
    bool quoted = false;
    for (std::size_t i = 0; i < line.size(); ++i) {
        if (line[i] == '"' && (i == 0 || line[i - 1] != '\\')) quoted = !quoted;
        if (line[i] == '#' && !quoted) return line.substr(0, i);
    }
    return line;
}

bool valid_key(const std::string& key) {
    if (key.empty()) return false;
    return std::all_of(key.begin(), key.end(), [](char c) {
        return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' || c == '.';
    });
}

struct Number {
    double value = 0.0;
    bool integer = false;
};

bool parse_number(std::string text, Number& out) {
    text.erase(std::remove(text.begin(), text.end(), '_'), text.end());
    if (text.empty()) return false;
    std::size_t start = text[0] == '+' ? 1 : 0;
    const char* first = text.data() + start;
    const char* last = text.data() + text.size();
    auto [ptr, ec] = std::from_chars(first, last, out.value);
    if (ec != std::errc() || ptr != last) return false;
    out.integer = text.find_first_of(".eE") == std::string::npos;
    return std::isfinite(out.value);
}

} // namespace

TomlDocument parse_toml(const std::string& text, const std::string& source) {
    TomlDocument doc;
    std::set<std::string> tables;
    std::string table;
    std::istringstream in(text);
    std::string raw;
    int line_no = 0;
    auto fail = [&](const std::string& msg) -> void {
        throw ValidationError(source + ":" + std::to_string(line_no) + ": " + msg);
    };

    while (std::getline(in, raw)) {
        ++line_no;
        const std::string line = trim(strip_comment(raw));
        if (line.empty()) continue;

        if (line.front() == '[') {
            if (line.size() < 3 || line.back() != ']' || line[1] == '[') fail("malformed table header");
            table = trim(std::string_view(line).substr(1, line.size() - 2));
            if (!valid_key(table)) fail("invalid table name '" + table + "'");
            if (!tables.insert(table).second) fail("duplicate table [" + table + "]");
            continue;
        }

        const auto eq = line.find('=');
        if (eq == std::string::npos) fail("expected key = value");
        const std::string key = trim(std::string_view(line).substr(0, eq));
        const std::string value = trim(std::string_view(line).substr(eq + 1));
        if (!valid_key(key) || key.find('.') != std::string::npos) fail("invalid key '" + key + "'");
        if (value.empty()) fail("missing value for '" + key + "'");

        const std::string full = table.empty() ? key : table + "." + key;
        if (doc.count(full)) fail("duplicate key '" + full + "'");

        TomlEntry entry;
        entry.line = line_no;
        if (value.front() == '"') {
            if (value.size() < 2 || value.back() != '"') fail("unterminated string");
            entry.value = value.substr(1, value.size() - 2);
        } else if (value == "true" || value == "false") {
            entry.value = value == "true";
        } else if (value.front() == '[') {
            if (value.back() != ']') fail("arrays must close on the same line");
            std::vector<double> items;
            std::string body = value.substr(1, value.size() - 2);
            std::stringstream parts(body);
            std::string item;
            while (std::getline(parts, item, ',')) {
                item = trim(item);
                if (item.empty()) {
                    if (parts.eof()) break; // trailing comma
                    fail("empty array element");
                }
                Number n;
                if (!parse_number(item, n)) fail("array elements must be numbers, got '" + item + "'");
                items.push_back(n.value);
            }
            entry.value = std::move(items);
        } else {
            Number n;
            if (!parse_number(value, n)) fail("cannot parse value '" + value + "'");
            entry.value = n.value;
            entry.is_integer = n.integer;
        }
        doc.emplace(full, std::move(entry));
    }
    return doc;
}

// ---- physics parameter table --------------------------------------------

namespace {

struct ParamSlot {
    const char* name;
    double PhysicalParams::*member;
    bool required;
};

const std::vector<ParamSlot>& physics_slots() {
    static const std::vector<ParamSlot> slots = {
        {"mass", &PhysicalParams::m, true},
        {"g13", &PhysicalParams::g13, true},
        {"delta", &PhysicalParams::delta, true},
        {"omega23", &PhysicalParams::omega23, true},
        {"omega_trap", &PhysicalParams::omega_trap, true},
        {"n_atoms", &PhysicalParams::n_atoms, true},
        {"probe_flux", &PhysicalParams::probe_flux, true},
        {"r", &PhysicalParams::r, true},
        {"theta_sq", &PhysicalParams::theta_sq, false},
        {"k0", &PhysicalParams::k0, false},
        {"kp", &PhysicalParams::kp, false},
        {"omega0", &PhysicalParams::omega0, false},
        {"delta2", &PhysicalParams::delta2, false},
    };
    return slots;
}

const ParamSlot* find_slot(const std::string& name) {
    for (const auto& s : physics_slots())
        if (name == s.name) return &s;
    return nullptr;
}

} // namespace

const std::vector<std::string>& simulation_axis_names() {
    static const std::vector<std::string> names = [] {
        std::vector<std::string> n;
        for (const auto& s : physics_slots()) n.emplace_back(s.name);
        return n;
    }();
    return names;
}

const std::vector<std::string>& oracle_axis_names() {
    static const std::vector<std::string> names = {"eta", "r", "theta_sq"};
    return names;
}

void set_physics_parameter(PhysicalParams& params, const std::string& name, double value) {
    const ParamSlot* slot = find_slot(name);
    if (!slot) throw ValidationError("sweep.axes." + name + ": not a physics parameter");
    params.*(slot->member) = value;
}

double get_physics_parameter(const PhysicalParams& params, const std::string& name) {
    const ParamSlot* slot = find_slot(name);
    if (!slot) throw ValidationError("physics." + name + ": unknown parameter");
    return params.*(slot->member);
}

// ---- RunConfig ----------------------------------------------------------------

namespace {

class Reader {
public:
    Reader(const TomlDocument& doc, std::string source) : doc_(doc), source_(std::move(source)) {}

    const TomlEntry* find(const std::string& key) {
        used_.insert(key);
        auto it = doc_.find(key);
        return it == doc_.end() ? nullptr : &it->second;
    }

    void number(const std::string& key, double& out, bool required = false) {
        const TomlEntry* e = find(key);
        if (!e) {
            if (required) throw ValidationError(key + ": required key missing from " + source_);
            return;
        }
        if (!std::holds_alternative<double>(e->value)) fail(*e, key, "expected a number");
        out = std::get<double>(e->value);
    }

    void count(const std::string& key, std::size_t& out) {
        const TomlEntry* e = find(key);
        if (!e) return;
        if (!std::holds_alternative<double>(e->value) || !e->is_integer || std::get<double>(e->value) < 0.0)
            fail(*e, key, "expected a non-negative integer");
        out = static_cast<std::size_t>(std::get<double>(e->value));
    }

    void flag(const std::string& key, bool& out) {
        const TomlEntry* e = find(key);
        if (!e) return;
        if (!std::holds_alternative<bool>(e->value)) fail(*e, key, "expected true or false");
        out = std::get<bool>(e->value);
    }

    bool text(const std::string& key, std::string& out) {
        const TomlEntry* e = find(key);
        if (!e) return false;
        if (!std::holds_alternative<std::string>(e->value)) fail(*e, key, "expected a string");
        out = std::get<std::string>(e->value);
        return true;
    }

    [[noreturn]] void fail(const TomlEntry& e, const std::string& key, const std::string& msg) const {
        throw ValidationError(key + ": " + msg + " (" + source_ + ":" + std::to_string(e.line) + ")");
    }

    // Every key not consumed above is an error.
    void reject_unknown(const std::string& prefix_allowed) const {
        for (const auto& [key, entry] : doc_) {
            if (used_.count(key)) continue;
            if (!prefix_allowed.empty() && key.rfind(prefix_allowed, 0) == 0) continue;
            throw ValidationError(key + ": unknown key (" + source_ + ":" + std::to_string(entry.line) + ")");
        }
    }

private:
    const TomlDocument& doc_;
    std::string source_;
    std::set<std::string> used_;
};

const char* detuning_name(DetuningMode m) {
    switch (m) {
    case DetuningMode::Fixed: return "fixed";
    case DetuningMode::Estimate: return "estimate";
    case DetuningMode::Calibrate: return "calibrate";
    }
    return "fixed";
}

} // namespace

void resolve(RunConfig& config) {
    auto& s = config.scenario;
    if (config.detuning != DetuningMode::Fixed) s.params.delta2 = resonance_estimate(s.params, s.options);
    if (config.input_bins == 0) throw ValidationError("input.bins: must be at least 1");
    s.input_modes = s.duration > 0.0 ? make_input_bins(0.0, s.duration, config.input_bins) : std::vector<InputMode>{};
}

RunConfig parse_config_text(const std::string& text, const std::string& source) {
    const TomlDocument doc = parse_toml(text, source);
    Reader rd(doc, source);
    RunConfig cfg;
    auto& s = cfg.scenario;

    for (const auto& slot : physics_slots()) {
        if (std::string(slot.name) == "delta2") continue;
        rd.number(std::string("physics.") + slot.name, s.params.*(slot.member), slot.required);
    }

    std::string mode = "calibrate";
    const bool mode_given = rd.text("run.detuning", mode);
    if (mode == "fixed") cfg.detuning = DetuningMode::Fixed;
    else if (mode == "estimate") cfg.detuning = DetuningMode::Estimate;
    else if (mode == "calibrate") cfg.detuning = DetuningMode::Calibrate;
    else rd.fail(*rd.find("run.detuning"), "run.detuning", "expected fixed, estimate or calibrate");

    if (const TomlEntry* e = rd.find("physics.delta2")) {
        if (mode_given && cfg.detuning != DetuningMode::Fixed)
            rd.fail(*e, "physics.delta2", "conflicts with run.detuning = \"" + mode + "\"");
        rd.number("physics.delta2", s.params.delta2);
        cfg.detuning = DetuningMode::Fixed;
    } else if (cfg.detuning == DetuningMode::Fixed) {
        throw ValidationError("physics.delta2: required when run.detuning = \"fixed\"");
    }

    rd.number("grid.x_min", s.grid.x_min);
    rd.number("grid.x_max", s.grid.x_max);
    rd.count("grid.points", s.grid.n_points);
    rd.number("grid.dt", s.grid.dt);

    rd.number("run.duration", s.duration);
    rd.count("run.snapshots", s.snapshot_count);
    rd.count("run.workers", cfg.workers);
    double seed = 0.0;
    rd.number("run.seed", seed);
    if (seed < 0.0 || seed != std::floor(seed)) throw ValidationError("run.seed: must be a non-negative integer");
    cfg.seed = static_cast<std::uint64_t>(seed);
    rd.number("run.adiabatic_factor", s.validity.adiabatic_factor);

    rd.count("input.bins", cfg.input_bins);

    auto& d = s.detection;
    rd.number("detection.x1", d.x1);
    rd.number("detection.x2", d.x2);
    rd.number("detection.x_det", d.x_det);
    rd.number("detection.lo_wavenumber", d.lo_wavenumber);
    rd.number("detection.lo_phase_atom", d.lo_phase_atom);
    rd.number("detection.lo_phase_light", d.lo_phase_light);
    rd.flag("detection.optimize_lo_phase", d.optimize_lo_phase);
    rd.number("detection.eval_interval", d.eval_interval);

    auto& o = s.options;
    rd.flag("options.control_light_shift", o.control_light_shift);
    rd.flag("options.probe_light_shift", o.probe_light_shift);
    rd.flag("options.fluctuation_backaction", o.fluctuation_backaction);
    rd.flag("options.evolve_condensate", o.evolve_condensate);
    rd.number("options.absorber_fraction", o.absorber_fraction);
    rd.number("options.absorber_rate", o.absorber_rate);

    rd.text("output.directory", cfg.output_dir);
    rd.flag("output.plots", cfg.plots);

    std::string path = "simulation";
    if (rd.text("sweep.path", path)) {
        if (path == "simulation") cfg.sweep_path = SweepPath::Simulation;
        else if (path == "oracle") cfg.sweep_path = SweepPath::Oracle;
        else rd.fail(*rd.find("sweep.path"), "sweep.path", "expected simulation or oracle");
    }
    rd.number("sweep.eta", cfg.sweep_eta);

    const auto& allowed = cfg.sweep_path == SweepPath::Oracle ? oracle_axis_names() : simulation_axis_names();
    for (const auto& [key, entry] : doc) {
        if (key.rfind("sweep.axes.", 0) != 0) continue;
        const std::string name = key.substr(11);
        if (std::find(allowed.begin(), allowed.end(), name) == allowed.end())
            rd.fail(entry, key, "not a sweepable parameter on this path");
        if (!std::holds_alternative<std::vector<double>>(entry.value)) rd.fail(entry, key, "expected an array");
        const auto& values = std::get<std::vector<double>>(entry.value);
        if (values.empty()) rd.fail(entry, key, "axis has no values");
        cfg.axes.push_back({name, values});
    }
    rd.reject_unknown("sweep.axes.");

    validate(s.params, s.validity);
    s.grid.validate(s.params.m);
    resolve(cfg);
    s.validate();
    return cfg;
}

RunConfig parse_config(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ValidationError(path + ": cannot open config file");
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str(), path);
}

std::string emit_config(const RunConfig& cfg) {
    const auto& s = cfg.scenario;
    std::ostringstream out;
    auto num = [](double v) {
        char buf[40];
        std::snprintf(buf, sizeof buf, "%.17g", v);
        std::string t = buf;
        // keep a float marker so integers parse back as the same type
        if (t.find_first_of(".eEn") == std::string::npos) t += ".0";
        return t;
    };
    auto flag = [](bool b) { return b ? "true" : "false"; };

    out << "[physics]\n";
    out << "mass = " << num(s.params.m) << "          # kg\n";
    out << "g13 = " << num(s.params.g13) << "          # rad s^-1 m^1/2\n";
    out << "delta = " << num(s.params.delta) << "          # rad s^-1\n";
    out << "omega23 = " << num(s.params.omega23) << "          # rad s^-1\n";
    out << "omega_trap = " << num(s.params.omega_trap) << "          # rad s^-1\n";
    out << "n_atoms = " << num(s.params.n_atoms) << "\n";
    out << "probe_flux = " << num(s.params.probe_flux) << "          # photons s^-1\n";
    out << "r = " << num(s.params.r) << "\n";
    out << "theta_sq = " << num(s.params.theta_sq) << "          # rad\n";
    out << "k0 = " << num(s.params.k0) << "          # m^-1\n";
    out << "kp = " << num(s.params.kp) << "          # m^-1\n";
    out << "omega0 = " << num(s.params.omega0) << "          # rad s^-1\n";
    if (cfg.detuning == DetuningMode::Fixed) out << "delta2 = " << num(s.params.delta2) << "          # rad s^-1\n";

    out << "\n[grid]\n";
    out << "x_min = " << num(s.grid.x_min) << "          # m\n";
    out << "x_max = " << num(s.grid.x_max) << "          # m\n";
    out << "points = " << s.grid.n_points << "\n";
    out << "dt = " << num(s.grid.dt) << "          # s\n";

    out << "\n[run]\n";
    out << "duration = " << num(s.duration) << "          # s\n";
    out << "detuning = \"" << detuning_name(cfg.detuning) << "\"\n";
    out << "snapshots = " << s.snapshot_count << "\n";
    out << "workers = " << cfg.workers << "\n";
    out << "seed = " << cfg.seed << "\n";
    out << "adiabatic_factor = " << num(s.validity.adiabatic_factor) << "\n";

    out << "\n[input]\n";
    out << "bins = " << cfg.input_bins << "\n";

    const auto& d = s.detection;
    out << "\n[detection]\n";
    out << "x1 = " << num(d.x1) << "          # m\n";
    out << "x2 = " << num(d.x2) << "          # m\n";
    out << "x_det = " << num(d.x_det) << "          # m\n";
    out << "lo_wavenumber = " << num(d.lo_wavenumber) << "          # m^-1, 0 = atom kick\n";
    out << "lo_phase_atom = " << num(d.lo_phase_atom) << "          # rad\n";
    out << "lo_phase_light = " << num(d.lo_phase_light) << "          # rad\n";
    out << "optimize_lo_phase = " << flag(d.optimize_lo_phase) << "\n";
    out << "eval_interval = " << num(d.eval_interval) << "          # s\n";

    const auto& o = s.options;
    out << "\n[options]\n";
    out << "control_light_shift = " << flag(o.control_light_shift) << "\n";
    out << "probe_light_shift = " << flag(o.probe_light_shift) << "\n";
    out << "fluctuation_backaction = " << flag(o.fluctuation_backaction) << "\n";
    out << "evolve_condensate = " << flag(o.evolve_condensate) << "\n";
    out << "absorber_fraction = " << num(o.absorber_fraction) << "\n";
    out << "absorber_rate = " << num(o.absorber_rate) << "          # s^-1\n";

    out << "\n[output]\n";
    std::string dir;
    for (char c : cfg.output_dir) {
        if (c == '"' || c == '\\') dir += '\\';
        dir += c;
    }
    out << "directory = \"" << dir << "\"\n";
    out << "plots = " << flag(cfg.plots) << "\n";

    if (!cfg.axes.empty() || cfg.sweep_path == SweepPath::Oracle) {
        out << "\n[sweep]\n";
        out << "path = \"" << (cfg.sweep_path == SweepPath::Oracle ? "oracle" : "simulation") << "\"\n";
        out << "eta = " << num(cfg.sweep_eta) << "\n";
        if (!cfg.axes.empty()) {
            out << "\n[sweep.axes]\n";
            for (const auto& a : cfg.axes) {
                out << a.name << " = [";
                for (std::size_t i = 0; i < a.values.size(); ++i) out << (i ? ", " : "") << num(a.values[i]);
                out << "]\n";
            }
        }
    }
    return out.str();
}

bool operator==(const Scenario& a, const Scenario& b) {
    const auto& p = a.params;
    const auto& q = b.params;
    const bool params = p.m == q.m && p.g13 == q.g13 && p.delta == q.delta && p.omega23 == q.omega23 &&
                        p.k0 == q.k0 && p.kp == q.kp && p.omega_trap == q.omega_trap && p.n_atoms == q.n_atoms &&
                        p.probe_flux == q.probe_flux && p.r == q.r && p.theta_sq == q.theta_sq &&
                        p.delta2 == q.delta2 && p.omega0 == q.omega0;
    const bool grid = a.grid.x_min == b.grid.x_min && a.grid.x_max == b.grid.x_max &&
                      a.grid.n_points == b.grid.n_points && a.grid.dt == b.grid.dt;
    const auto& d = a.detection;
    const auto& e = b.detection;
    const bool det = d.x1 == e.x1 && d.x2 == e.x2 && d.x_det == e.x_det && d.lo_wavenumber == e.lo_wavenumber &&
                     d.lo_phase_atom == e.lo_phase_atom && d.lo_phase_light == e.lo_phase_light &&
                     d.optimize_lo_phase == e.optimize_lo_phase && d.eval_interval == e.eval_interval;
    const auto& o = a.options;
    const auto& w = b.options;
    const bool opts = o.control_light_shift == w.control_light_shift && o.probe_light_shift == w.probe_light_shift &&
                      o.fluctuation_backaction == w.fluctuation_backaction &&
                      o.evolve_condensate == w.evolve_condensate && o.absorber_fraction == w.absorber_fraction &&
                      o.absorber_rate == w.absorber_rate;
    bool modes = a.input_modes.size() == b.input_modes.size();
    for (std::size_t k = 0; modes && k < a.input_modes.size(); ++k) {
        const auto& s1 = a.input_modes[k].segments;
        const auto& s2 = b.input_modes[k].segments;
        modes = s1.size() == s2.size();
        for (std::size_t j = 0; modes && j < s1.size(); ++j)
            modes = s1[j].t_start == s2[j].t_start && s1[j].t_end == s2[j].t_end && s1[j].amplitude == s2[j].amplitude;
    }
    return params && grid && det && opts && modes && a.duration == b.duration &&
           a.validity.adiabatic_factor == b.validity.adiabatic_factor && a.snapshot_count == b.snapshot_count;
}

} // namespace atomlight
