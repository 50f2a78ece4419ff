// Prints one PASS/FAIL line per acceptance criterion and exits nonzero if any fails.
#include "tropo/verify.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <string>
#include <sys/wait.h>

int main()
{
    bool all = true;
    for (const auto& r : tropo::verify::run_acceptance()) {
        std::printf("%s criterion %d (%s): %s\n", r.pass ? "PASS" : "FAIL", r.id, r.name.c_str(), r.detail.c_str());
        all = all && r.pass;
    }

    // Criterion 11: the shipped executable's selftest must exit 0 within 60 s.
    const std::string cmd = std::string("\"") + TROPO_EXE + "\" selftest > /dev/null 2>&1";
    const auto t0 = std::chrono::steady_clock::now();
    const int status = std::system(cmd.c_str());
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    const int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    const bool pass = code == 0 && secs < 60.0;
    std::printf("%s criterion 11 (selftest): exit %d after %.2f s\n", pass ? "PASS" : "FAIL", code, secs);
    all = all && pass;
    return all ? 0 : 1;
}
