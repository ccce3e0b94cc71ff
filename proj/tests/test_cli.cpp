#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include <json.hpp>

namespace fs = std::filesystem;

namespace {

struct Result {
    int code = -1;
    std::string out;
};

std::string bin() {
    const char* b = std::getenv("RINGSPECTRA_BIN");
    return b ? b : "./ringspectra";
}

Result run(const std::string& args, const std::string& env = "") {
    const std::string cmd = env + (env.empty() ? "" : " ") + bin() + " " + args + " 2>/dev/null";
    Result r;
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return r;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
    const int status = pclose(pipe);
    r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    return r;
}

class Cli : public ::testing::Test {
protected:
    void SetUp() override {
        dir_ = fs::temp_directory_path() / ("ringspectra_cli_" + std::to_string(::getpid()));
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write(const std::string& name, const std::string& text) {
        const fs::path p = dir_ / name;
        std::ofstream(p) << text;
        return p.string();
    }

    fs::path dir_;
};

}  // namespace

TEST_F(Cli, EvalFromFile) {
    const auto f = write("f.rng", "E x. x*x + 1 = 0\n");
    const auto r = run("eval --modulus 5 --formula " + f);
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "true\n");
    EXPECT_EQ(run("eval --modulus 7 --formula " + f).out, "false\n");
}

TEST_F(Cli, EvalOpenFormula) {
    const auto r = run("eval -m 5 --text 'x*x = 4'");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "x\n2\n3\n");
}

TEST_F(Cli, SpectrumCsv) {
    const auto f = write("f.rng", "E x. x*x + 1 = 0\n");
    const auto r = run("spectrum --formula " + f + " --bound 100");
    ASSERT_EQ(r.code, 0);
    EXPECT_EQ(r.out.rfind("prime,member\n", 0), 0u);
    std::size_t members = 0;
    for (std::size_t i = 0; (i = r.out.find(",1\n", i)) != std::string::npos; ++i) ++members;
    EXPECT_EQ(members, 12u);
}

TEST_F(Cli, SpectrumClassifyDensity) {
    const auto out = (dir_ / "s.json").string();
    ASSERT_EQ(run("spectrum --text 'E x. x*x + 1 = 0' --bound 3000 --out json -o " + out).code, 0);
    const auto c = run("classify --spectrum " + out + " --max-d 8");
    ASSERT_EQ(c.code, 0);
    const auto j = nlohmann::json::parse(c.out);
    EXPECT_EQ(j["fits"].size(), 2u);
    const auto d = run("density --spectrum " + out + " --samples 100,3000 --h log");
    ASSERT_EQ(d.code, 0);
    EXPECT_EQ(d.out.rfind("n,pi_S,pi,ratio\n100,", 0), 0u);
}

TEST_F(Cli, ConstructAndParse) {
    const auto r = run("construct --family cyclotomic --params n=4");
    EXPECT_EQ(r.code, 0);
    EXPECT_EQ(r.out, "E x. x*x + 1 = 0\n");
    const auto p = run("parse --text 'A x. x = y' --full-parens");
    EXPECT_EQ(p.code, 0);
    EXPECT_NE(p.out.find("free: y"), std::string::npos);
}

TEST_F(Cli, ExitCodes) {
    EXPECT_EQ(run("eval --modulus 5").code, 2);
    EXPECT_EQ(run("eval --modulus 5 --formula " + (dir_ / "missing.rng").string()).code, 3);
    EXPECT_EQ(run("eval --modulus 5 --text 'E x x = 1'").code, 4);
    EXPECT_EQ(run("spectrum --text '0 = 0' --bound 6000000").code, 5);
    EXPECT_EQ(run("frobnicate").code, 2);
    EXPECT_EQ(run("spectrum --text '0 = 0' --bound 50", "RINGSPECTRA_WORKERS=zero").code, 2);
    EXPECT_EQ(run("spectrum --text '0 = 0' --bound 50", "RINGSPECTRA_WORKERS=3").code, 0);
}

TEST_F(Cli, VerifySubsetAndDeterminism) {
    const auto a = run("verify --suite paper --only 4,13 --workers 1");
    ASSERT_EQ(a.code, 0);
    const auto j = nlohmann::json::parse(a.out);
    EXPECT_EQ(j["schema"], "ringspectra.verification/1");
    ASSERT_EQ(j["claims"].size(), 2u);
    EXPECT_EQ(j["claims"][0]["id"], "C4");
    EXPECT_EQ(j["claims"][1]["status"], "pass");

    const auto b = run("verify --suite paper --only 1,2,4 --workers 1");
    const auto c = run("verify --suite paper --only 1,2,4 --workers 8");
    EXPECT_EQ(b.code, 0);
    const auto jb = nlohmann::json::parse(b.out), jc = nlohmann::json::parse(c.out);
    EXPECT_EQ(jb["claims"].dump(), jc["claims"].dump());
    EXPECT_EQ(run("verify --suite other").code, 2);
}
