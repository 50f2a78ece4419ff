#include "tropo/cli.hpp"

#include "tropo/covariance.hpp"
#include "tropo/errors.hpp"
#include "tropo/glauber.hpp"
#include "tropo/photon_stats.hpp"
#include "tropo/spectra.hpp"

#include <json.hpp>

#include <algorithm>
#include <atomic>
#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <limits>
#include <thread>
#include <unordered_map>

namespace tropo::cli {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::size_t column(const std::string& name)
{
    static const auto index = [] {
        std::unordered_map<std::string, std::size_t> m;
        const auto& cols = columns();
        for (std::size_t i = 0; i < cols.size(); ++i) m.emplace(cols[i], i);
        return m;
    }();
    return index.at(name);
}

class RowBuilder {
public:
    RowBuilder(const SweepPoint& pt, Quantity q) : row_{pt.index, q, std::vector<double>(columns().size(), kNaN)}
    {
        const auto& p = pt.params;
        set("kappa_per_second", p.kappa);
        set("kappa_p_per_second", p.kappa_p);
        set("mu_p", p.mu_p);
        set("mu", p.mu);
        set("g_per_second", p.g);
        set("transmission", p.transmission.signal);
        set("transmission_pump", p.transmission.pump);
        set("omega_rad_per_second", pt.omega);
        set("omega_over_kappa", pt.omega / p.kappa);
        if (pt.tau > 0.0) set("tau_seconds", pt.tau);
    }
    void set(const std::string& name, double v) { row_.cells[column(name)] = v; }
    Row take() { return std::move(row_); }

private:
    Row row_;
};

std::vector<Row> evaluate_point(const RunConfig& c, const SweepPoint& pt)
{
    const auto& p = pt.params;
    const auto s = model::steady_state(p);
    std::vector<Row> rows;
    for (auto q : c.outputs) {
        RowBuilder b(pt, q);
        switch (q) {
        case Quantity::Spectra: {
            const auto v = spectra::closed_form(p, s, pt.omega).values();
            for (std::size_t i = 0; i < v.size(); ++i) b.set(spectra::field_name(i), v[i]);
            break;
        }
        case Quantity::Covariance: {
            const auto v = covariance::output_variances(p, s, spectra::closed_form(p, s, pt.omega));
            b.set("x_pp", v.x_pp);
            b.set("x_plus_plus", v.x_plus_plus);
            b.set("x_minus_minus", v.x_minus_minus);
            b.set("x_p_plus", v.x_p_plus);
            b.set("y_pp", v.y_pp);
            b.set("y_plus_plus", v.y_plus_plus);
            b.set("y_minus_minus", v.y_minus_minus);
            b.set("y_p_plus", v.y_p_plus);
            break;
        }
        case Quantity::Purity: {
            const auto r = covariance::purity_at(p, s, pt.omega);
            b.set("purity_total", r.purity_total);
            b.set("factor_n_minus", r.factor_n_minus);
            b.set("factor_dx", r.factor_dx);
            b.set("factor_dy", r.factor_dy);
            b.set("purity_direct", r.purity_direct);
            b.set("condition_number", r.condition_number);
            break;
        }
        case Quantity::PartialPurity: {
            const auto r = covariance::purity_at(p, s, pt.omega);
            b.set("purity_total", r.purity_total);
            b.set("purity_partial_is", r.purity_partial_is);
            b.set("det_difference_mode", r.det_difference_mode);
            break;
        }
        case Quantity::Squeezing: {
            const auto r = covariance::squeezing_entanglement(p, s, pt.omega);
            b.set("x_is_variance", r.x_is_variance);
            b.set("y_p_variance", r.y_p_variance);
            b.set("duan_x_minus", r.duan_x_minus);
            b.set("duan_y_plus", r.duan_y_plus);
            b.set("entangled", r.entangled ? 1.0 : 0.0);
            break;
        }
        case Quantity::Glauber: {
            const auto o = glauber::output_pfunction_rescale(p, s);
            const auto f = glauber::fano_intracavity(p);
            const auto r = glauber::stationary_purity(p, s);
            b.set("var_eps_plus", o.var_eps_plus);
            b.set("var_eps_p", o.var_eps_p);
            b.set("cov_eps", o.cov_eps);
            b.set("var_eps_minus", o.var_eps_minus);
            b.set("var_phi_p", o.var_phi_p);
            b.set("var_phi_plus", o.var_phi_plus);
            b.set("cov_phi", o.cov_phi);
            b.set("var_phi_minus", o.var_phi_minus);
            b.set("f_is", f.f_is);
            b.set("f_p", f.f_p);
            b.set("pi1", r.pi1);
            b.set("pi2", r.pi2);
            b.set("pi3", r.pi3);
            b.set("pi4", r.pi4);
            b.set("pi_st", r.pi_st);
            b.set("pi_intracavity", r.pi_intracavity);
            break;
        }
        case Quantity::Counting: {
            const auto r = photon_stats::joint_out(p, s, pt.tau);
            b.set("n_out", r.n_out);
            b.set("d_plus", r.d_plus);
            b.set("d_minus", r.d_minus);
            b.set("f_out", r.f_out);
            b.set("f_in", r.f_in);
            b.set("lambda", r.lambda);
            break;
        }
        }
        rows.push_back(b.take());
    }
    return rows;
}

std::string number(double v)
{
    if (std::isnan(v)) return "";
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

std::ofstream open_out(const std::filesystem::path& path)
{
    std::ofstream out(path, std::ios::out | std::ios::trunc);
    if (!out) throw IoError("cannot write '" + path.string() + "'");
    return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path)
{
    out.flush();
    if (!out) throw IoError("write to '" + path.string() + "' failed");
}

int exit_code(ErrorKind k)
{
    switch (k) {
    case ErrorKind::InvalidParameter:
    case ErrorKind::ConfigError: return 1;
    case ErrorKind::Io: return 2;
    default: return 3;
    }
}

std::string one_line(std::string s)
{
    std::replace(s.begin(), s.end(), '\n', ' ');
    return s;
}

} // namespace

// Maps a failure to its exit code after printing one machine-parsable line.
int report_failure(std::ostream& err, const std::exception_ptr& ep)
{
    try {
        std::rethrow_exception(ep);
    } catch (const Error& e) {
        const int code = exit_code(e.kind());
        err << "error kind=" << to_string(e.kind()) << " exit=" << code << " message=\"" << one_line(e.what())
            << "\"\n";
        return code;
    } catch (const std::exception& e) {
        err << "error kind=Internal exit=3 message=\"" << one_line(e.what()) << "\"\n";
        return 3;
    }
}

const std::vector<std::string>& columns()
{
    static const std::vector<std::string> cols = [] {
        std::vector<std::string> c{"kappa_per_second", "kappa_p_per_second", "mu_p", "mu", "g_per_second",
                                   "transmission", "transmission_pump", "omega_rad_per_second",
                                   "omega_over_kappa", "tau_seconds"};
        for (std::size_t i = 0; i < spectra::SpectralSet::field_count; ++i) c.emplace_back(spectra::field_name(i));
        for (const char* n : {"x_pp", "x_plus_plus", "x_minus_minus", "x_p_plus", "y_pp", "y_plus_plus",
                              "y_minus_minus", "y_p_plus", "purity_total", "factor_n_minus", "factor_dx", "factor_dy",
                              "purity_direct", "condition_number", "purity_partial_is", "det_difference_mode",
                              "x_is_variance", "y_p_variance", "duan_x_minus", "duan_y_plus", "entangled",
                              "var_eps_plus", "var_eps_p", "cov_eps", "var_eps_minus", "var_phi_p", "var_phi_plus",
                              "cov_phi", "var_phi_minus", "f_is", "f_p", "pi1", "pi2", "pi3", "pi4", "pi_st",
                              "pi_intracavity", "n_out", "d_plus", "d_minus", "f_out", "f_in", "lambda"})
            c.emplace_back(n);
        return c;
    }();
    return cols;
}

RunResult evaluate(const RunConfig& c)
{
    const auto pts = expand(c);
    std::vector<std::vector<Row>> per_point(pts.size());
    std::vector<std::exception_ptr> failures(pts.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < pts.size(); i = next++) {
            try {
                per_point[i] = evaluate_point(c, pts[i]);
            } catch (...) {
                failures[i] = std::current_exception();
            }
        }
    };
    const unsigned hw = std::max(1u, std::thread::hardware_concurrency());
    const auto n_threads = std::min<std::size_t>(c.threads ? c.threads : hw, std::max<std::size_t>(1, pts.size()));
    {
        std::vector<std::jthread> pool;
        for (std::size_t t = 0; t < n_threads; ++t) pool.emplace_back(worker);
    }
    // The earliest failing point decides, independent of scheduling.
    for (const auto& f : failures)
        if (f) std::rethrow_exception(f);

    RunResult r;
    for (std::size_t i = 0; i < pts.size(); ++i) {
        for (auto& row : per_point[i]) r.rows.push_back(std::move(row));
        for (auto w : model::validate(pts[i].params))
            r.warnings.push_back("point " + std::to_string(i) + ": " + model::to_string(w));
    }
    return r;
}

void write_table(const RunConfig& c, const RunResult& r)
{
    const char* injection = model::to_string(c.params.injection);
    auto out = open_out(c.output_path);
    if (c.format == Format::Csv) {
        out << "schema,point,quantity,injection";
        for (const auto& col : columns()) out << ',' << col;
        out << '\n';
        for (const auto& row : r.rows) {
            out << kSchemaVersion << ',' << row.point << ',' << to_string(row.quantity) << ',' << injection;
            for (double v : row.cells) out << ',' << number(v);
            out << '\n';
        }
    } else {
        for (const auto& row : r.rows) {
            nlohmann::ordered_json j;
            j["schema"] = kSchemaVersion;
            j["point"] = row.point;
            j["quantity"] = to_string(row.quantity);
            j["injection"] = injection;
            for (std::size_t i = 0; i < row.cells.size(); ++i)
                if (!std::isnan(row.cells[i])) j[columns()[i]] = row.cells[i];
            out << j.dump() << '\n';
        }
    }
    finish(out, c.output_path);

    auto log_path = c.output_path;
    log_path += ".log";
    auto log = open_out(log_path);
    log << "schema " << kSchemaVersion << '\n';
    for (const auto& w : r.warnings) log << "warning " << w << '\n';
    finish(log, log_path);
}

int run(const std::filesystem::path& config, std::ostream& err)
{
    try {
        const auto c = parse_config(config);
        const auto r = evaluate(c);
        write_table(c, r);
        return 0;
    } catch (...) {
        return report_failure(err, std::current_exception());
    }
}

} // namespace tropo::cli
