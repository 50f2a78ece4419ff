#include "tropo/cli.hpp"

#include "tropo/covariance.hpp"
#include "tropo/errors.hpp"
#include "tropo/presets.hpp"
#include "tropo/verify.hpp"

#include <CLI11.hpp>

#include <charconv>
#include <chrono>
#include <fstream>
#include <iostream>

namespace tropo::cli {

namespace {

std::string number(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

} // namespace

int selftest(std::ostream& out, std::ostream& err)
{
    try {
        const auto t0 = std::chrono::steady_clock::now();
        const auto results = verify::run_acceptance();
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
        int passed = 0;
        for (const auto& r : results) {
            out << (r.pass ? "PASS " : "FAIL ") << r.id << ' ' << r.name << ": " << r.detail << '\n';
            passed += r.pass;
        }
        out << "selftest " << passed << '/' << results.size() << " passed in " << number(secs) << " s\n";
        return passed == static_cast<int>(results.size()) ? 0 : 3;
    } catch (...) {
        return report_failure(err, std::current_exception());
    }
}

int figures(const std::string& id, const std::filesystem::path& outdir, std::ostream& out, std::ostream& err)
{
    try {
        const auto f = presets::figure(id);
        std::error_code ec;
        std::filesystem::create_directories(outdir, ec);
        if (ec) throw IoError("cannot create '" + outdir.string() + "': " + ec.message());
        const auto path = outdir / ("fig" + id + ".csv");
        std::ofstream csv(path, std::ios::out | std::ios::trunc);
        if (!csv) throw IoError("cannot write '" + path.string() + "'");
        const bool partial = id == "2";
        csv << "schema,figure,injection,mu_p,mu,omega_over_kappa,purity" << (partial ? ",purity_partial_is" : "")
            << '\n';
        std::vector<std::string> warnings;
        for (double mu : f.mu_values)
            for (double mp : f.mu_p_values) {
                auto p = f.base;
                p.mu = mu;
                p.mu_p = mp;
                for (auto w : model::validate(p))
                    warnings.push_back("mu_p=" + number(mp) + " mu=" + number(mu) + ": " + model::to_string(w));
                const auto s = model::steady_state(p);
                for (double wk : f.omega_over_kappa) {
                    const auto r = covariance::purity_at(p, s, wk * p.kappa);
                    csv << kFigureSchemaVersion << ',' << id << ',' << model::to_string(p.injection) << ','
                        << number(mp) << ',' << number(mu) << ',' << number(wk) << ',' << number(r.purity_total);
                    if (partial) csv << ',' << number(r.purity_partial_is);
                    csv << '\n';
                }
            }
        csv.flush();
        if (!csv) throw IoError("write to '" + path.string() + "' failed");

        auto log_path = path;
        log_path += ".log";
        std::ofstream log(log_path, std::ios::out | std::ios::trunc);
        if (!log) throw IoError("cannot write '" + log_path.string() + "'");
        log << "schema " << kFigureSchemaVersion << "\nfigure " << id << ": " << f.description << '\n';
        for (const auto& w : warnings) log << "warning " << w << '\n';
        log.flush();
        if (!log) throw IoError("write to '" + log_path.string() + "' failed");
        out << path.string() << '\n';
        return 0;
    } catch (...) {
        return report_failure(err, std::current_exception());
    }
}

int main(int argc, char** argv)
{
    CLI::App app{"Quantum noise of an injected triply resonant OPO above threshold"};
    app.require_subcommand(1);

    std::string config;
    auto* run_cmd = app.add_subcommand("run", "Evaluate the sweep described by a config file");
    run_cmd->add_option("config", config, "Flat YAML config")->required();

    app.add_subcommand("selftest", "Run the acceptance checks; exit 0 only if all pass");

    std::string figure_id, outdir;
    auto* fig_cmd = app.add_subcommand("figures", "Emit purity curves for a figure preset");
    fig_cmd->add_option("figure", figure_id, "1a, 1b, 2, 3a or 3b")
        ->required()
        ->check(CLI::IsMember(presets::figure_ids()));
    fig_cmd->add_option("outdir", outdir, "Output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        std::cerr << "error kind=ConfigError exit=1 message=\"" << e.what() << "\"\n";
        return 1;
    }

    if (*run_cmd) return run(config, std::cerr);
    if (*fig_cmd) return figures(figure_id, outdir, std::cout, std::cerr);
    return selftest(std::cout, std::cerr);
}

} // namespace tropo::cli
