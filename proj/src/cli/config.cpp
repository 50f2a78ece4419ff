#include "tropo/cli.hpp"

#include "tropo/errors.hpp"

#include <yaml-cpp/yaml.h>

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

namespace tropo::cli {

namespace {

const std::set<std::string> kKnownKeys{
    "injection", "kappa_per_second", "kappa_p_per_second", "mu_p", "mu", "g_per_second", "transmission",
    "transmission_pump", "sweep", "omega_rad_per_second", "omega_log_range_rad_per_second",
    "omega_linear_range_rad_per_second", "tau_seconds", "param_name", "param_values", "outputs", "output_path",
    "format", "threads"};

const std::set<std::string> kSweepableParams{"kappa_per_second", "kappa_p_per_second", "mu_p", "mu",
                                             "g_per_second", "transmission", "transmission_pump"};

double scalar(const YAML::Node& root, const std::string& key)
{
    const auto n = root[key];
    if (!n) throw ConfigError("missing key '" + key + "'");
    if (!n.IsScalar()) throw ConfigError("key '" + key + "' must be a number");
    try {
        const double v = n.as<double>();
        if (!std::isfinite(v)) throw ConfigError("key '" + key + "' must be finite");
        return v;
    } catch (const YAML::Exception&) {
        throw ConfigError("key '" + key + "' is not a number: '" + n.Scalar() + "'");
    }
}

double scalar_or(const YAML::Node& root, const std::string& key, double fallback)
{
    return root[key] ? scalar(root, key) : fallback;
}

std::string text(const YAML::Node& root, const std::string& key)
{
    const auto n = root[key];
    if (!n) throw ConfigError("missing key '" + key + "'");
    if (!n.IsScalar()) throw ConfigError("key '" + key + "' must be a string");
    return n.Scalar();
}

// A scalar is accepted as a one-element list.
std::vector<double> numbers(const YAML::Node& root, const std::string& key)
{
    const auto n = root[key];
    if (!n) throw ConfigError("missing key '" + key + "'");
    if (n.IsScalar()) return {scalar(root, key)};
    if (!n.IsSequence()) throw ConfigError("key '" + key + "' must be a number or a list of numbers");
    std::vector<double> out;
    for (const auto& item : n) {
        try {
            out.push_back(item.as<double>());
        } catch (const YAML::Exception&) {
            throw ConfigError("key '" + key + "' has a non-numeric entry");
        }
        if (!std::isfinite(out.back())) throw ConfigError("key '" + key + "' has a non-finite entry");
    }
    return out;
}

void require_sweep_list(const std::vector<double>& v, const std::string& key)
{
    if (v.empty()) throw ConfigError("sweep list '" + key + "' is empty");
    for (std::size_t i = 1; i < v.size(); ++i)
        if (!(v[i] > v[i - 1])) throw ConfigError("sweep list '" + key + "' must be strictly increasing");
}

std::vector<double> range(const YAML::Node& root, const std::string& key, bool logarithmic)
{
    const auto r = numbers(root, key);
    if (r.size() != 3) throw ConfigError("key '" + key + "' must be [start, stop, count]");
    const double a = r[0], b = r[1];
    const double count = r[2];
    if (count < 2 || count != std::floor(count) || count > 1e7)
        throw ConfigError("key '" + key + "' needs an integer count >= 2");
    if (!(b > a)) throw ConfigError("key '" + key + "' needs stop > start");
    if (logarithmic && !(a > 0)) throw ConfigError("key '" + key + "' needs a positive start");
    const int n = static_cast<int>(count);
    std::vector<double> out(n);
    for (int i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / (n - 1);
        out[i] = logarithmic ? a * std::pow(b / a, t) : a + (b - a) * t;
    }
    out.front() = a;
    out.back() = b;
    return out;
}

Quantity parse_quantity(const std::string& s)
{
    for (auto q : {Quantity::Spectra, Quantity::Covariance, Quantity::Purity, Quantity::PartialPurity,
                   Quantity::Squeezing, Quantity::Glauber, Quantity::Counting})
        if (s == to_string(q)) return q;
    throw ConfigError("unknown output '" + s +
                      "'; expected spectra, covariance, purity, partial_purity, squeezing, glauber or counting");
}

} // namespace

const char* to_string(Quantity q)
{
    switch (q) {
    case Quantity::Spectra: return "spectra";
    case Quantity::Covariance: return "covariance";
    case Quantity::Purity: return "purity";
    case Quantity::PartialPurity: return "partial_purity";
    case Quantity::Squeezing: return "squeezing";
    case Quantity::Glauber: return "glauber";
    case Quantity::Counting: return "counting";
    }
    return "?";
}

RunConfig parse_config_text(const std::string& text_in, const std::filesystem::path& base_dir)
{
    YAML::Node root;
    try {
        root = YAML::Load(text_in);
    } catch (const YAML::Exception& e) {
        throw ConfigError(std::string("malformed config: ") + e.what());
    }
    if (!root.IsMap()) throw ConfigError("config must be a flat key: value mapping");
    for (const auto& kv : root) {
        const auto key = kv.first.as<std::string>();
        if (!kKnownKeys.count(key)) throw ConfigError("unknown key '" + key + "'");
        if (kv.second.IsMap()) throw ConfigError("key '" + key + "' must not be nested");
    }

    RunConfig c;
    const auto injection = text(root, "injection");
    if (injection == "symmetric")
        c.params.injection = model::InjectionMode::Symmetric;
    else if (injection == "asymmetric")
        c.params.injection = model::InjectionMode::Asymmetric;
    else
        throw ConfigError("injection must be 'symmetric' or 'asymmetric'");
    c.params.kappa = scalar(root, "kappa_per_second");
    c.params.kappa_p = scalar(root, "kappa_p_per_second");
    c.params.mu_p = scalar(root, "mu_p");
    c.params.mu = scalar(root, "mu");
    c.params.g = scalar(root, "g_per_second");
    c.params.transmission.signal = scalar_or(root, "transmission", 1.0);
    c.params.transmission.pump = scalar_or(root, "transmission_pump", 1.0);

    const auto sweep = text(root, "sweep");
    const bool has_list = static_cast<bool>(root["omega_rad_per_second"]);
    const bool has_log = static_cast<bool>(root["omega_log_range_rad_per_second"]);
    const bool has_lin = static_cast<bool>(root["omega_linear_range_rad_per_second"]);
    if (sweep == "frequency") {
        c.sweep = SweepKind::Frequency;
        if (has_list + has_log + has_lin != 1)
            throw ConfigError("a frequency sweep needs exactly one of omega_rad_per_second, "
                              "omega_log_range_rad_per_second, omega_linear_range_rad_per_second");
        if (has_list) c.omegas = numbers(root, "omega_rad_per_second");
        if (has_log) c.omegas = range(root, "omega_log_range_rad_per_second", true);
        if (has_lin) c.omegas = range(root, "omega_linear_range_rad_per_second", false);
        require_sweep_list(c.omegas, "omega");
        if (root["tau_seconds"]) c.taus = {scalar(root, "tau_seconds")};
    } else {
        if (has_log || has_lin) throw ConfigError("omega ranges are only valid in a frequency sweep");
        c.omegas = {scalar_or(root, "omega_rad_per_second", 0.0)};
        if (sweep == "tau") {
            c.sweep = SweepKind::Tau;
            c.taus = numbers(root, "tau_seconds");
            require_sweep_list(c.taus, "tau_seconds");
        } else if (sweep == "parameter") {
            c.sweep = SweepKind::Parameter;
            c.param_name = text(root, "param_name");
            if (!kSweepableParams.count(c.param_name))
                throw ConfigError("param_name '" + c.param_name + "' is not a sweepable parameter");
            c.param_values = numbers(root, "param_values");
            require_sweep_list(c.param_values, "param_values");
            if (root["tau_seconds"]) c.taus = {scalar(root, "tau_seconds")};
        } else {
            throw ConfigError("sweep must be 'frequency', 'tau' or 'parameter'");
        }
    }
    if (c.sweep != SweepKind::Parameter && (root["param_name"] || root["param_values"]))
        throw ConfigError("param_name and param_values belong to a parameter sweep");
    for (double t : c.taus)
        if (!(t > 0.0)) throw ConfigError("tau_seconds must be positive");

    const auto outs = root["outputs"];
    if (!outs) throw ConfigError("missing key 'outputs'");
    if (outs.IsScalar())
        c.outputs.push_back(parse_quantity(outs.Scalar()));
    else if (outs.IsSequence())
        for (const auto& o : outs) c.outputs.push_back(parse_quantity(o.as<std::string>()));
    else
        throw ConfigError("outputs must be a name or a list of names");
    if (c.outputs.empty()) throw ConfigError("outputs is empty");
    std::sort(c.outputs.begin(), c.outputs.end());
    c.outputs.erase(std::unique(c.outputs.begin(), c.outputs.end()), c.outputs.end());
    if (std::count(c.outputs.begin(), c.outputs.end(), Quantity::Counting) && c.taus.empty())
        throw ConfigError("counting output needs tau_seconds");

    c.output_path = text(root, "output_path");
    if (c.output_path.empty()) throw ConfigError("output_path is empty");
    if (c.output_path.is_relative() && !base_dir.empty()) c.output_path = base_dir / c.output_path;
    const auto format = root["format"] ? text(root, "format") : std::string("csv");
    if (format == "csv")
        c.format = Format::Csv;
    else if (format == "json-lines")
        c.format = Format::JsonLines;
    else
        throw ConfigError("format must be 'csv' or 'json-lines'");
    if (root["threads"]) {
        const double t = scalar(root, "threads");
        if (t < 0 || t != std::floor(t) || t > 1024) throw ConfigError("threads must be an integer in [0, 1024]");
        c.threads = static_cast<unsigned>(t);
    }

    // Hard parameter violations surface now rather than mid-sweep.
    for (const auto& pt : expand(c)) model::validate(pt.params);
    return c;
}

RunConfig parse_config(const std::filesystem::path& path)
{
    std::ifstream in(path);
    if (!in) throw IoError("cannot read config '" + path.string() + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_text(ss.str(), path.parent_path());
}

std::vector<SweepPoint> expand(const RunConfig& c)
{
    std::vector<SweepPoint> pts;
    const double tau = c.taus.empty() ? 0.0 : c.taus.front();
    switch (c.sweep) {
    case SweepKind::Frequency:
        for (double w : c.omegas) pts.push_back({pts.size(), c.params, w, tau});
        break;
    case SweepKind::Tau:
        for (double t : c.taus) pts.push_back({pts.size(), c.params, c.omegas.front(), t});
        break;
    case SweepKind::Parameter:
        for (double v : c.param_values) {
            auto p = c.params;
            const auto& n = c.param_name;
            if (n == "kappa_per_second") p.kappa = v;
            else if (n == "kappa_p_per_second") p.kappa_p = v;
            else if (n == "mu_p") p.mu_p = v;
            else if (n == "mu") p.mu = v;
            else if (n == "g_per_second") p.g = v;
            else if (n == "transmission") p.transmission.signal = v;
            else if (n == "transmission_pump") p.transmission.pump = v;
            pts.push_back({pts.size(), p, c.omegas.front(), tau});
        }
        break;
    }
    return pts;
}

} // namespace tropo::cli
