#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <json.hpp>
#include <map>
#include <regex>
#include <sstream>

#include "cli.hpp"

namespace fs = std::filesystem;
using namespace izeros::cli;

namespace {

struct Result {
    int code;
    std::string out, err;
};

Result invoke(std::vector<std::string> args) {
    args.insert(args.begin(), "izeros");
    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    std::ostringstream out, err;
    const int code = run(static_cast<int>(argv.size()), argv.data(), out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const auto d = fs::temp_directory_path() / ("izeros_cli_" + name);
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
}

std::string slurp(const fs::path& p) {
    std::ifstream is(p, std::ios::binary);
    return {std::istreambuf_iterator<char>(is), {}};
}

std::map<std::string, std::string> files_in(const fs::path& d) {
    std::map<std::string, std::string> m;
    for (const auto& e : fs::directory_iterator(d)) m[e.path().filename().string()] = slurp(e.path());
    return m;
}

std::vector<std::string> lines(const std::string& text) {
    std::vector<std::string> v;
    std::istringstream is(text);
    for (std::string l; std::getline(is, l);) v.push_back(l);
    return v;
}

// Header comment lines and the data lines that follow.
std::pair<std::vector<std::string>, std::vector<std::string>> split_header(const std::string& text) {
    std::pair<std::vector<std::string>, std::vector<std::string>> r;
    for (auto& l : lines(text)) (l.rfind("#", 0) == 0 ? r.first : r.second).push_back(l);
    return r;
}

std::string header_value(const std::vector<std::string>& h, const std::string& key) {
    for (const auto& l : h)
        if (l.rfind("# " + key + " ", 0) == 0) return l.substr(key.size() + 3);
    return {};
}

std::string only_file(const fs::path& d, const std::string& prefix) {
    std::string found;
    for (const auto& e : fs::directory_iterator(d)) {
        const auto n = e.path().filename().string();
        if (n.rfind(prefix, 0) == 0) {
            CHECK(found.empty());
            found = n;
        }
    }
    REQUIRE(!found.empty());
    return found;
}

}  // namespace

TEST_CASE("config hash is a SHA-256 prefix") {
    CHECK(config_hash("abc") == "ba7816bf8f01cfea");
    CHECK(config_hash("") == "e3b0c44298fc1c14");
}

TEST_CASE("exit codes") {
    const auto d = fresh_dir("codes").string();
    SUBCASE("validation") {
        for (auto args : std::vector<std::vector<std::string>>{
                 {"zeros", "--bc", "moebius", "--out", d},
                 {"zeros", "--bc", "bk", "--lv", "4", "--lh", "5", "--out", d},
                 {"zeros", "--x", "-1/2", "--out", d},
                 {"zeros", "--lv", "0", "--out", d},
                 {"spectrum", "--lh", "4", "--point", "0,0", "--out", d},
                 {"density", "--estimator", "scale", "--bc", "torus", "--out", d},
                 {"frobnicate"}}) {
            const auto r = invoke(args);
            CHECK(r.code == kValidation);
            CHECK(r.err.rfind("error: ", 0) == 0);
            CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
        }
    }
    SUBCASE("resource") {
        const auto r = invoke({"zeros", "--bc", "cyl", "--lv", "4", "--lh", "28", "--out", d});
        CHECK(r.code == kResource);
        CHECK(r.err.find("hint") != std::string::npos);
        CHECK(fs::is_empty(d));
    }
    SUBCASE("uncertified") {
        const auto r = invoke({"zeros", "--bc", "free", "--lv", "6", "--lh", "6", "--max-bits", "64",
                               "--precision", "40", "--out", d});
        CHECK(r.code == kNumeric);
        const auto text = slurp(fs::path(d) / only_file(d, "zeros_"));
        CHECK(header_value(split_header(text).first, "certified") == "no");
    }
}

TEST_CASE("zeros files: header, naming and schema") {
    const auto d = fresh_dir("zeros");
    const auto r = invoke({"zeros", "--bc", "bk", "--lv", "6", "--lh", "6", "--var", "y", "--x", "1", "--x", "1/2",
                           "--out", d.string()});
    REQUIRE(r.code == kOk);
    const auto files = files_in(d);
    REQUIRE(files.size() == 2);
    const std::regex name(R"(zeros_x(1|1-2)_([0-9a-f]{16})\.csv)");
    for (const auto& [n, text] : files) {
        std::smatch m;
        REQUIRE(std::regex_match(n, m, name));
        const auto [h, body] = split_header(text);
        CHECK(h.front() == "# izeros zeros");
        CHECK(header_value(h, "config_hash") == m[2].str());
        CHECK(config_hash(header_value(h, "config")) == m[2].str());
        CHECK(header_value(h, "versions").find("gmp") != std::string::npos);
        CHECK(!header_value(h, "precision").empty());
        CHECK(header_value(h, "certified") == "yes");
        REQUIRE(!body.empty());
        CHECK(body.front() == "variable,re,im,radius,multiplicity");
        int total = 0;
        for (std::size_t i = 1; i < body.size(); ++i) {
            std::istringstream is(body[i]);
            std::string var, re, im, rad, mult;
            std::getline(is, var, ',');
            std::getline(is, re, ',');
            std::getline(is, im, ',');
            std::getline(is, rad, ',');
            std::getline(is, mult, ',');
            CHECK(var == "y");
            CHECK(std::stod(rad) < 1e-10);
            total += std::stoi(mult);
        }
        CHECK(std::to_string(total) == header_value(h, "zeros"));
    }
}

TEST_CASE("reruns are byte-identical across thread counts") {
    const auto a = fresh_dir("rerun_a"), b = fresh_dir("rerun_b");
    std::vector<std::string> args{"zeros", "--bc", "cyl", "--lv", "4", "--lh", "4", "--x", "1", "--x", "1/2",
                                  "--x", "3/10", "--x", "2"};
    auto one = args, four = args;
    one.insert(one.end(), {"--threads", "1", "--out", a.string()});
    four.insert(four.end(), {"--threads", "4", "--out", b.string()});
    const auto ra = invoke(one), rb = invoke(four);
    REQUIRE(ra.code == kOk);
    REQUIRE(rb.code == kOk);
    CHECK(ra.out == rb.out);
    const auto fa = files_in(a), fb = files_in(b);
    CHECK(fa.size() == 4);
    CHECK(fa == fb);
    // Output lines list the jobs in command-line order.
    const auto l = lines(ra.out);
    REQUIRE(l.size() == 4);
    CHECK(l[0].rfind("zeros_x1_", 0) == 0);
    CHECK(l[1].rfind("zeros_x1-2_", 0) == 0);
    CHECK(l[2].rfind("zeros_x3-10_", 0) == 0);
    CHECK(l[3].rfind("zeros_x2_", 0) == 0);
}

TEST_CASE("density files") {
    SUBCASE("scale estimator, closed form, large lattice") {
        const auto d = fresh_dir("density_scale");
        const auto r = invoke({"density", "--bc", "bk", "--lv", "100", "--lh", "100", "--estimator", "scale",
                               "--p", "0.5", "--c", "1", "--out", d.string()});
        REQUIRE(r.code == kOk);
        const auto [h, body] = split_header(slurp(d / only_file(d, "density_")));
        CHECK(h.front() == "# izeros density");
        REQUIRE(body.size() > 1);
        CHECK(body.front() == "abscissa,value,a,N,estimator");
        CHECK(body[1].find(",100,10000,scale") != std::string::npos);
        const auto ref = lines(slurp(d / only_file(d, "reference_")));
        CHECK(std::find(ref.begin(), ref.end(), "abscissa,value") != ref.end());
    }
    SUBCASE("lee-yang estimator") {
        const auto d = fresh_dir("density_ly");
        const auto r = invoke({"density", "--estimator", "leeyang", "--bc", "torus", "--lv", "4", "--lh", "4",
                               "--u", "3/10", "--out", d.string()});
        REQUIRE(r.code == kOk);
        const auto n = only_file(d, "density_u3-10_");
        const auto [h, body] = split_header(slurp(d / n));
        REQUIRE(body.size() == 17);
        CHECK(body[1].find(",lee_yang_nn") != std::string::npos);
    }
    SUBCASE("inner-loop estimator writes one file per x") {
        const auto d = fresh_dir("density_inner");
        const auto r = invoke({"density", "--estimator", "inner", "--bc", "bk", "--lv", "6", "--lh", "6", "--x",
                               "4/5", "--x", "1/2", "--out", d.string()});
        REQUIRE(r.code == kOk);
        only_file(d, "density_x4-5_");
        only_file(d, "density_x1-2_");
        CHECK(files_in(d).size() == 2);
    }
}

TEST_CASE("equimodular files") {
    SUBCASE("traced segments and junctions") {
        const auto d = fresh_dir("equi");
        const auto r = invoke({"equimodular", "--bc", "cyl", "--lv", "2", "--lh", "4", "--x", "1", "--momentum",
                               "0", "--window", "-2,2,-2,2", "--resolution", "24", "--max-segments", "6", "--out",
                               d.string()});
        REQUIRE(r.code == kOk);
        const auto [h, body] = split_header(slurp(d / only_file(d, "equimodular_x1_")));
        REQUIRE(body.size() > 1);
        CHECK(body.front() == "u_re,u_im,modulus,multiplicity,crossing_class,segment_id");
        const auto [jh, jbody] = split_header(slurp(d / only_file(d, "junctions_x1_")));
        std::string joined;
        for (const auto& l : jbody) joined += l + "\n";
        const auto j = nlohmann::json::parse(joined);
        CHECK(j.is_array());
        for (const auto& e : j) {
            CHECK(e.contains("u_re"));
            CHECK(e["segments"].is_array());
        }
        CHECK(header_value(h, "config_hash") == header_value(jh, "config_hash"));
    }
    SUBCASE("profile json") {
        const auto d = fresh_dir("equi_profile");
        const auto r = invoke({"equimodular", "--bc", "torus", "--lv", "2", "--lh", "10", "--x", "1", "--momentum",
                               "0", "--profile", "--out", d.string()});
        REQUIRE(r.code == kOk);
        const auto [h, body] = split_header(slurp(d / only_file(d, "profile_x1_")));
        std::string joined;
        for (const auto& l : body) joined += l + "\n";
        const auto j = nlohmann::json::parse(joined);
        CHECK(j["antiferromagnetic"] == nlohmann::json({2, 4, 8, 4, 18, 24}));
        CHECK(j["ferromagnetic"].size() == 8);
    }
    SUBCASE("profile needs zero field") {
        const auto d = fresh_dir("equi_bad");
        CHECK(invoke({"equimodular", "--lh", "6", "--x", "1/2", "--profile", "--out", d.string()}).code ==
              kValidation);
    }
}

TEST_CASE("spectrum jsonl") {
    const auto d = fresh_dir("spectrum");
    const auto r = invoke({"spectrum", "--lh", "4", "--point", "0.3,0.4", "--point", "-0.5,0.1", "--x", "1",
                           "--x", "1/2", "--out", d.string()});
    REQUIRE(r.code == kOk);
    for (const std::string prefix : {"spectrum_x1_", "spectrum_x1-2_"}) {
        const auto n = only_file(d, prefix);
        const auto l = lines(slurp(d / n));
        REQUIRE(l.size() == 3);
        const auto h = nlohmann::json::parse(l[0]);
        CHECK(h["header"]["command"] == "spectrum");
        CHECK(n.find(h["header"]["config_hash"].get<std::string>()) != std::string::npos);
        for (std::size_t i = 1; i < l.size(); ++i) {
            const auto rec = nlohmann::json::parse(l[i]);
            CHECK(rec.contains("u_re"));
            REQUIRE(rec["eigenvalues"].is_array());
            CHECK(rec["eigenvalues"].size() == 16);
            for (const auto& e : rec["eigenvalues"]) {
                CHECK(e.contains("re"));
                CHECK(e.contains("im"));
                CHECK(e.contains("P"));
                CHECK(e["deg"].get<int>() >= 1);
            }
        }
    }
}

TEST_CASE("verify on small lattices") {
    const auto d = fresh_dir("verify");
    const auto r = invoke({"verify", "--max-sites", "6", "--out", d.string()});
    CHECK(r.code == kOk);
    const auto text = slurp(d / only_file(d, "verify_"));
    CHECK(text.rfind("# izeros verify", 0) == 0);
}
