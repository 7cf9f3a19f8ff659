// Command-line front end: expands sweep specifications or figure presets,
// runs the measure pipeline over the parameter grid and writes CSV/JSON.
//
// Exit codes: 0 success, 2 usage error, 3 numerical contract violation,
// 4 I/O error.

#include <chrono>
#include <exception>
#include <iostream>
#include <string>
#include <vector>

#include "qhorizon/qhorizon.hpp"

namespace {

void print_usage(std::ostream& os) {
  os << "qhorizon " << qhorizon::kVersion
     << " -- horizon-state coherence/entanglement sweeps\n\n"
        "Usage: qhorizon [flags]\n\n"
        "  --preset NAME          figure preset (fig2a..fig13d); other flags override it\n"
        "  --scenario S           ABC | Abc | AbB | ABc or any 3 labels from {A,b,B,c,C}\n"
        "  --sweep AXIS:START:STOP:POINTS[:log|:linear]\n"
        "                         swept axis (alpha, omega, th); repeat for a 2-D grid\n"
        "  --alpha X --omega X --th X\n"
        "                         fixed values for axes that are not swept\n"
        "  --measures LIST        comma list of qc,foc,gc,cf,tradeoff,mi (or all)\n"
        "  --restarts N           convex-roof random restarts (default 32)\n"
        "  --iters N              objective evaluations per restart (default 2000)\n"
        "  --seed N               RNG seed for the roof optimizer (default 12345)\n"
        "  --threads N            worker threads over grid points (default 1)\n"
        "  --format csv|json      output format (default csv)\n"
        "  --out PATH             output file, '-' for stdout (default '-')\n"
        "  --fast                 quick mode: 8 restarts x 500 iterations\n"
        "  --gc-scale X           display scale for the gc column (default 1)\n"
        "  --help                 this text\n\n"
        "Examples:\n"
        "  qhorizon --preset fig2a --out fig2a.csv\n"
        "  qhorizon --scenario Abc --sweep th:0.01:100:200:log --alpha 0.70710678 --omega 1\n";
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv + 1, argv + argc);
  for (const std::string& a : args) {
    if (a == "--help" || a == "-h") {
      print_usage(std::cout);
      return 0;
    }
  }

  try {
    const qhorizon::SweepSpec spec = qhorizon::parse_args(args);
    const auto t0 = std::chrono::steady_clock::now();
    const qhorizon::SweepResult result = qhorizon::run_sweep(spec);
    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    qhorizon::emit(result, wall);
    return 0;
  } catch (const qhorizon::usage_error& e) {
    std::cerr << "error: " << e.what() << "\n\n";
    print_usage(std::cerr);
    return 2;
  } catch (const qhorizon::io_error& e) {
    std::cerr << "I/O error: " << e.what() << "\n";
    return 4;
  } catch (const std::exception& e) {
    std::cerr << "numerical error: " << e.what() << "\n";
    return 3;
  }
}
