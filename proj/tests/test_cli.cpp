#include <doctest.h>

#include <array>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

const std::string kBin = TENSOR1_CLI_BIN;
const fs::path kCorpus = fs::path(TENSOR1_SOURCE_DIR) / "corpus";

struct RunResult {
    int exit_code;
    std::string out;
};

// Runs the CLI with stderr folded into stdout. `input`, when given, is
// piped to stdin; `env_prefix` prepends environment assignments.
RunResult run(const std::string& args, const std::string& input = "",
              const std::string& env_prefix = "") {
    std::string cmd;
    if (!input.empty()) cmd += "printf '%s' \"" + input + "\" | ";
    if (!env_prefix.empty()) cmd += "env " + env_prefix + " ";
    cmd += kBin + " " + args + " 2>&1";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    std::array<char, 4096> buf{};
    std::size_t n;
    while ((n = fread(buf.data(), 1, buf.size(), pipe)) > 0) out.append(buf.data(), n);
    int status = pclose(pipe);
    return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, std::move(out)};
}

std::string env2d() { return (kCorpus / "envs" / "basic2d.json").string(); }

std::string quoted(const std::string& s) { return "'" + s + "'"; }

}  // namespace

TEST_CASE("parse: canonical XML from compact and XML inputs") {
    auto r = run("parse --compact " + quoted((kCorpus / "valid" / "02_cartesian.omc").string()));
    CHECK(r.exit_code == 0);
    CHECK(r.out ==
          "<OMOBJ>\n"
          "  <OMA>\n"
          "    <OMS cd=\"tensor1\" name=\"Cartesian\"/>\n"
          "    <OMI>1</OMI>\n"
          "  </OMA>\n"
          "</OMOBJ>\n");

    auto x = run("parse " + quoted((kCorpus / "valid" / "02_cartesian.om").string()));
    CHECK(x.exit_code == 0);
    CHECK(x.out == r.out);

    auto piped = run("parse --compact -", "plus(1, 2)");
    CHECK(piped.exit_code == 0);
    CHECK(piped.out.find("arith1") != std::string::npos);
}

TEST_CASE("parse: malformed input exits 2 with a located diagnostic") {
    auto r = run("parse " + quoted((kCorpus / "invalid" / "i03_malformed.om").string()));
    CHECK(r.exit_code == 2);
    CHECK(r.out.find("XmlSyntax") != std::string::npos);
    CHECK(r.out.find(":") != std::string::npos);

    auto c = run("parse --compact -", "frobnicate(1)");
    CHECK(c.exit_code == 2);
    CHECK(c.out.find("AmbiguousName") != std::string::npos);
}

TEST_CASE("parse: missing file exits 3") {
    auto r = run("parse /no/such/file.om");
    CHECK(r.exit_code == 3);
    CHECK(r.out.find("IoError") != std::string::npos);
}

TEST_CASE("validate: implicit Einstein corpus file exits 1 with the code") {
    auto r = run("validate --compact --env " + quoted(env2d()) + " " +
                 quoted((kCorpus / "invalid" / "i05_implicit_einstein.omc").string()));
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("ImplicitEinstein") != std::string::npos);
    CHECK(r.out.substr(0, 6) == "error ");
}

TEST_CASE("validate: clean file exits 0 with no output") {
    auto r = run("validate --compact --env " + quoted(env2d()) + " " +
                 quoted((kCorpus / "valid" / "09_matvec.omc").string()));
    CHECK(r.exit_code == 0);
    CHECK(r.out.empty());
}

TEST_CASE("validate: coordinate-tuple warning keeps exit 0") {
    auto r = run("validate --compact --env " + quoted(env2d()) + " " +
                 quoted((kCorpus / "invalid" / "i13_vector_selector.omc").string()));
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("warning CoordinateTupleNotVector") != std::string::npos);
}

TEST_CASE("eval: norm of (3,4) prints 25 in both frames") {
    std::string norm_file = quoted((kCorpus / "valid" / "10_norm.omc").string());
    auto r = run("eval --compact --env " + quoted(env2d()) + " " + norm_file);
    CHECK(r.exit_code == 0);
    CHECK(r.out == "25\n");

    // matvec: u^1 = 17
    auto m = run("eval --compact --env " + quoted(env2d()) + " " +
                 quoted((kCorpus / "valid" / "09_matvec.omc").string()));
    CHECK(m.exit_code == 0);
    CHECK(m.out == "17\n");
}

TEST_CASE("eval: unbound variable exits 1") {
    auto r = run("eval --compact --env " + quoted(env2d()) + " -", "plus(nosuch, 1)");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("UnboundVariable") != std::string::npos);
}

TEST_CASE("eval: missing --env exits 4") {
    auto r = run("eval --compact -", "3");
    CHECK(r.exit_code == 4);
    auto s = run("eval --env /tmp/definitely_missing_env.json --compact -", "3");
    CHECK(s.exit_code == 3);
}

TEST_CASE("eval: malformed env schema exits 4") {
    fs::path bad = fs::temp_directory_path() / "tensor1_bad_env.json";
    std::FILE* f = std::fopen(bad.string().c_str(), "w");
    REQUIRE(f);
    std::fputs("{\"frames\": [{\"name\": \"F\"}]}", f);
    std::fclose(f);
    auto r = run("eval --env " + quoted(bad.string()) + " --compact -", "3");
    CHECK(r.exit_code == 4);
    CHECK(r.out.find("SchemaError") != std::string::npos);
    fs::remove(bad);
}

TEST_CASE("eval: json output round-trips the value") {
    auto r = run("eval --format json --compact --env " + quoted(env2d()) + " -",
                 "tensor_selector(metric_tensor, tuple(covar_index(2), covar_index(2)), P)");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("kind") == "scalar");
    CHECK(j.at("value").get<double>() == 4.0);

    auto t = run("eval --format json --compact --env " + quoted(env2d()) + " -", "times(2, v)");
    nlohmann::json jt = nlohmann::json::parse(t.out);
    CHECK(jt.at("kind") == "tensor");
    CHECK(jt.at("dim") == 2);
    CHECK(jt.at("signature") == nlohmann::json::array({"contra"}));
    CHECK(jt.at("components") == nlohmann::json::array({10.0, 12.0}));
    CHECK(jt.at("frame").at("chart") == "cartesian2");

    auto tup = run("eval --format json --compact --env " + quoted(env2d()) + " -",
                   "tuple(1, 2.5)");
    nlohmann::json jtup = nlohmann::json::parse(tup.out);
    CHECK(jtup.at("kind") == "tuple");
    CHECK(jtup.at("items").size() == 2);
    CHECK(jtup.at("items").at(1).at("value").get<double>() == 2.5);
}

TEST_CASE("eval: 17 significant digits round-trip exactly in json") {
    auto r = run("eval --format json --compact --env " + quoted(env2d()) + " -", "divide(1, 3)");
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("value").get<double>() == 1.0 / 3.0);
}

TEST_CASE("eval: --frame supplies the context for Cartesian(i)") {
    auto r = run("eval --frame P --compact --env " + quoted(env2d()) + " -", "Cartesian(1)");
    CHECK(r.exit_code == 0);
    CHECK(r.out == "2\n");
    auto bare = run("eval --compact --env " + quoted(env2d()) + " -", "Cartesian(1)");
    CHECK(bare.exit_code == 1);
    CHECK(bare.out.find("FrameRequired") != std::string::npos);
}

TEST_CASE("frame-info prints the polar metric") {
    auto r = run("frame-info --env " + quoted(env2d()) + " --frame P");
    CHECK(r.exit_code == 0);
    CHECK(r.out.find("metric") != std::string::npos);
    CHECK(r.out.find("[1, 0]") != std::string::npos);
    CHECK(r.out.find("[0, 4]") != std::string::npos);
    CHECK(r.out.find("det(basis): 2") != std::string::npos);

    auto j = run("frame-info --format json --env " + quoted(env2d()) + " --frame C");
    nlohmann::json jj = nlohmann::json::parse(j.out);
    CHECK(jj.at("metric") == nlohmann::json::array({{1.0, 0.0}, {0.0, 1.0}}));

    auto unknown = run("frame-info --env " + quoted(env2d()) + " --frame nosuch");
    CHECK(unknown.exit_code == 1);
    CHECK(unknown.out.find("UnknownFrame") != std::string::npos);
}

TEST_CASE("frame-info: singular point exits 1 with SingularChart") {
    fs::path env = fs::temp_directory_path() / "tensor1_singular_env.json";
    std::FILE* f = std::fopen(env.string().c_str(), "w");
    REQUIRE(f);
    std::fputs(R"({"frames": [{"name": "O", "chart": "polar", "point": [0, 0]}]})", f);
    std::fclose(f);
    auto r = run("frame-info --env " + quoted(env.string()) + " --frame O");
    CHECK(r.exit_code == 1);
    CHECK(r.out.find("SingularChart") != std::string::npos);
    fs::remove(env);
}

TEST_CASE("transform: Cartesian vector into polar components") {
    fs::path env = fs::temp_directory_path() / "tensor1_transform_env.json";
    std::FILE* f = std::fopen(env.string().c_str(), "w");
    REQUIRE(f);
    std::fputs(
        R"({"frames": [
             {"name": "C", "chart": "cartesian2", "point": [2, 0]},
             {"name": "P", "chart": "polar", "point": [2, 0]},
             {"name": "Elsewhere", "chart": "polar", "point": [1, 1]}],
            "tensors": [
             {"name": "r10", "dim": 2, "signature": ["contra"], "components": [1, 0], "frame": "C"},
             {"name": "loose", "dim": 2, "signature": ["contra"], "components": [1, 0], "frame": "unspecified"}]})",
        f);
    std::fclose(f);

    auto r = run("transform --env " + quoted(env.string()) + " --frame P r10 --format json");
    CHECK(r.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(r.out);
    CHECK(j.at("components").at(0).get<double>() == doctest::Approx(1.0));
    CHECK(j.at("components").at(1).get<double>() == doctest::Approx(0.0));
    CHECK(j.at("frame").at("chart") == "polar");

    // same frame: unchanged
    auto same = run("transform --env " + quoted(env.string()) + " --frame C r10 --format json");
    nlohmann::json js = nlohmann::json::parse(same.out);
    CHECK(js.at("components") == nlohmann::json::array({1.0, 0.0}));

    auto mismatch = run("transform --env " + quoted(env.string()) + " --frame Elsewhere r10");
    CHECK(mismatch.exit_code == 1);
    CHECK(mismatch.out.find("PointMismatch") != std::string::npos);

    auto unspec = run("transform --env " + quoted(env.string()) + " --frame P loose");
    CHECK(unspec.exit_code == 1);
    CHECK(unspec.out.find("UnspecifiedFrame") != std::string::npos);
    fs::remove(env);
}

TEST_CASE("emit-cd: well-formed, 11 definitions, byte-stable") {
    auto a = run("emit-cd");
    auto b = run("emit-cd");
    CHECK(a.exit_code == 0);
    CHECK(a.out == b.out);
    CHECK(a.out.find("<CDName>tensor1</CDName>") != std::string::npos);

    std::size_t count = 0, pos = 0;
    while ((pos = a.out.find("<CDDefinition>", pos)) != std::string::npos) {
        ++count;
        pos += 14;
    }
    CHECK(count == 11);

    fs::path out = fs::temp_directory_path() / "tensor1.ocd";
    auto f1 = run("emit-cd --out " + quoted(out.string()));
    CHECK(f1.exit_code == 0);
    CHECK(fs::exists(out));
    fs::remove(out);
}

TEST_CASE("transform without --frame is a configuration error") {
    auto r = run("transform --env " + quoted(env2d()) + " v");
    CHECK(r.exit_code == 4);
    CHECK(r.out.find("SchemaError") != std::string::npos);
}

TEST_CASE("xml and json output formats render values") {
    auto x = run("eval --format xml --compact --env " + quoted(env2d()) + " -", "times(2, v)");
    CHECK(x.exit_code == 0);
    CHECK(x.out.find("<tensor dim=\"2\"") != std::string::npos);
    CHECK(x.out.find("<components>10 12</components>") != std::string::npos);

    auto p = run("parse --format json --compact -", "plus(1, x)");
    CHECK(p.exit_code == 0);
    nlohmann::json j = nlohmann::json::parse(p.out);
    CHECK(j.at("kind") == "apply");
    CHECK(j.at("head").at("name") == "plus");
}

TEST_CASE("TENSOR1_MAX_ORDER raises the order cap") {
    fs::path env = fs::temp_directory_path() / "tensor1_order_env.json";
    std::FILE* f = std::fopen(env.string().c_str(), "w");
    REQUIRE(f);
    // order 9 tensor of dim 2: 512 components
    std::string tensor = R"({"tensors": [{"name": "big", "dim": 2, "signature": [)";
    for (int i = 0; i < 9; ++i) tensor += i ? ",\"contra\"" : "\"contra\"";
    tensor += R"(], "components": [)";
    for (int i = 0; i < 512; ++i) tensor += i ? ",0" : "0";
    tensor += "]}]}";
    std::fputs(tensor.c_str(), f);
    std::fclose(f);

    auto r = run("eval --compact --env " + quoted(env.string()) + " -", "plus(1, 1)");
    CHECK(r.exit_code == 4);  // order 9 exceeds the default cap of 8

    auto ok = run("eval --compact --env " + quoted(env.string()) + " -", "plus(1, 1)",
                  "TENSOR1_MAX_ORDER=9");
    CHECK(ok.exit_code == 0);
    CHECK(ok.out == "2\n");
    fs::remove(env);
}
