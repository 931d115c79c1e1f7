#include "fastslow/config.hpp"

#include <charconv>
#include <fstream>
#include <map>
#include <sstream>

namespace fastslow {

namespace {

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

class KeyValues {
public:
    explicit KeyValues(const std::string& text) {
        std::istringstream in(text);
        std::string line;
        int lineno = 0;
        while (std::getline(in, line)) {
            ++lineno;
            const auto hash = line.find('#');
            if (hash != std::string::npos) line.erase(hash);
            line = trim(line);
            if (line.empty()) continue;
            const auto eq = line.find('=');
            if (eq == std::string::npos) {
                std::ostringstream msg;
                msg << "config line " << lineno << " is not 'key = value': '" << line << "'";
                raise(errc::config_parse, msg.str());
            }
            const std::string key = trim(line.substr(0, eq));
            const std::string value = trim(line.substr(eq + 1));
            if (key.empty() || value.empty()) {
                std::ostringstream msg;
                msg << "config line " << lineno << " has an empty key or value";
                raise(errc::config_parse, msg.str());
            }
            kv_[key] = value;
        }
    }

    bool has(const std::string& key) const { return kv_.count(key) != 0; }

    double number(const std::string& key) const {
        return parse_number(key, raw(key));
    }

    double number_or(const std::string& key, double fallback) const {
        return has(key) ? number(key) : fallback;
    }

    long integer(const std::string& key) const {
        const double v = number(key);
        const long n = static_cast<long>(v);
        if (static_cast<double>(n) != v)
            raise(errc::config_parse, "config key '" + key + "' must be an integer");
        return n;
    }

    bool boolean(const std::string& key) const {
        const std::string& v = raw(key);
        if (v == "true" || v == "1") return true;
        if (v == "false" || v == "0") return false;
        raise(errc::config_parse, "config key '" + key + "' must be true or false");
    }

    std::vector<double> list(const std::string& key) const {
        std::istringstream in(raw(key));
        std::vector<double> out;
        std::string tok;
        while (in >> tok) out.push_back(parse_number(key, tok));
        if (out.empty())
            raise(errc::config_parse, "config key '" + key + "' must be a nonempty list");
        return out;
    }

    std::vector<double> list_or(const std::string& key) const {
        return has(key) ? list(key) : std::vector<double>{};
    }

private:
    const std::string& raw(const std::string& key) const {
        const auto it = kv_.find(key);
        if (it == kv_.end())
            raise(errc::config_parse, "missing config key '" + key + "'\n" + config_schema_hint());
        return it->second;
    }

    static double parse_number(const std::string& key, const std::string& tok) {
        try {
            std::size_t used = 0;
            const double v = std::stod(tok, &used);
            if (used != tok.size()) throw std::invalid_argument(tok);
            return v;
        } catch (const std::exception&) {
            raise(errc::config_parse, "config key '" + key + "' has a non-numeric value '" + tok + "'");
        }
    }

    std::map<std::string, std::string> kv_;
};

std::vector<GaussianSpec> gaussians(const KeyValues& kv, const std::string& prefix) {
    if (!kv.has(prefix + ".widths")) return {};
    const auto widths = kv.list(prefix + ".widths");
    const auto amps = kv.list(prefix + ".amps");
    if (widths.size() != amps.size())
        raise(errc::config_parse, prefix + ".widths and " + prefix + ".amps must match in length");
    std::vector<GaussianSpec> out;
    for (std::size_t i = 0; i < widths.size(); ++i) out.push_back({widths[i], amps[i]});
    return out;
}

} // namespace

std::string config_schema_hint() {
    return "expected keys:\n"
           "  system.alpha system.beta system.gamma system.delta system.mu system.nu\n"
           "  ladder.eps            (space-separated, strictly decreasing, >= 4 entries)\n"
           "  lattice.dim lattice.cutoff lattice.dk\n"
           "  data.v0.widths data.v0.amps [data.u0.widths data.u0.amps] data.on_critical\n"
           "  time.T time.samples [time.tmin_over_T]\n"
           "  [bounds.ladder.eps] [bounds.time.samples] [bounds.time.tmin_over_T]\n"
           "  [bounds.quasi_static_from] [seed]";
}

ExperimentConfig parse_config_text(const std::string& text) {
    const KeyValues kv(text);
    ExperimentConfig cfg;
    cfg.base.alpha = kv.number("system.alpha");
    cfg.base.beta = kv.number("system.beta");
    cfg.base.gamma = kv.number("system.gamma");
    cfg.base.delta = kv.number("system.delta");
    cfg.base.mu = kv.number("system.mu");
    cfg.base.nu = kv.number("system.nu");
    cfg.eps_ladder = kv.list("ladder.eps");
    cfg.dim = static_cast<int>(kv.integer("lattice.dim"));
    cfg.cutoff = kv.number("lattice.cutoff");
    cfg.dk = kv.number("lattice.dk");
    cfg.v0_spec = gaussians(kv, "data.v0");
    cfg.u0_spec = gaussians(kv, "data.u0");
    cfg.on_critical = kv.boolean("data.on_critical");
    cfg.time.horizon = kv.number("time.T");
    cfg.time.samples = static_cast<int>(kv.integer("time.samples"));
    cfg.time.tmin_over_t = kv.number_or("time.tmin_over_T", 0.5);
    cfg.bounds_ladder = kv.list_or("bounds.ladder.eps");
    if (kv.has("bounds.time.samples") || kv.has("bounds.time.tmin_over_T")) {
        TimeGrid bt = cfg.time;
        if (kv.has("bounds.time.samples"))
            bt.samples = static_cast<int>(kv.integer("bounds.time.samples"));
        bt.tmin_over_t = kv.number_or("bounds.time.tmin_over_T", bt.tmin_over_t);
        cfg.bounds_time = bt;
    }
    cfg.bounds_quasi_static_from = kv.number_or("bounds.quasi_static_from", 0.1);
    cfg.seed = static_cast<std::uint64_t>(kv.number_or("seed", 1.0));
    return cfg;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in)
        raise(errc::config_parse, "cannot read config file '" + path.string() + "'\n" +
                                  config_schema_hint());
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config_text(buf.str());
}

} // namespace fastslow
