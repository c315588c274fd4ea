#pragma once

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "izeros/equimodular.hpp"
#include "izeros/lattice.hpp"
#include "izeros/polynomial.hpp"

namespace izeros::cli {

enum ExitCode { kOk = 0, kValidation = 1, kResource = 2, kNumeric = 3 };

struct RunConfig {
    std::string command;
    LatticeSpec spec{8, 8, Boundary::Toroidal, Model::IsingField};
    std::vector<std::string> x_list{"1"};
    std::string u = "3/10";  // fixed u for Lee-Yang x-zeros
    Variable variable = Variable::u;
    Convention convention = Convention::BrascampKunz;
    std::optional<Window> window;
    int resolution = 48;
    std::optional<int> momentum;
    int precision_digits = 12;
    int threads = 1;
    long max_bits = 1 << 16;
    std::string out = ".";
    // density
    std::string estimator = "scale";
    double p = 0.5;
    double c = 1.0;
    std::string source = "closed";
    // spectrum
    std::vector<std::string> points;  // "re,im"
    std::string method = "auto";
    // equimodular
    bool profile = false;
    int max_segments = 64;
    // verify
    int max_sites = 16;
};

// Runs one command line. Diagnostics go to `err` as a single line; progress to `out`.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// First 16 hex digits of SHA-256 of the canonical config text.
std::string config_hash(const std::string& canonical);
std::string module_versions();
Window parse_window(const std::string& text);
Boundary parse_boundary(const std::string& text);
Model parse_model(const std::string& text);
Convention parse_convention(const std::string& text);

}  // namespace izeros::cli
