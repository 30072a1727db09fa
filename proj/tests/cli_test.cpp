// End-to-end tests driving the installed CLI binary.

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <catch2/catch_amalgamated.hpp>

namespace fs = std::filesystem;

namespace {

struct RunResult {
  int exit_code;
  std::string out;
  std::string err;
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

fs::path work_dir() {
  static fs::path dir = [] {
    fs::path d = fs::temp_directory_path() / "headlayer_cli_tests";
    fs::remove_all(d);
    fs::create_directories(d);
    return d;
  }();
  return dir;
}

RunResult run(const std::string& args) {
  fs::path out = work_dir() / "stdout.txt";
  fs::path err = work_dir() / "stderr.txt";
  std::string cmd = std::string(HEADLAYER_CLI_PATH) + " " + args + " > " + out.string() + " 2> " +
                    err.string();
  int status = std::system(cmd.c_str());
  int code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  return {code, slurp(out), slurp(err)};
}

void write(const fs::path& p, const std::string& content) {
  std::ofstream f(p, std::ios::binary);
  f << content;
}

std::string data(const char* rel) { return std::string(HEADLAYER_DATA_DIR) + "/" + rel; }

std::string path(const char* name) { return (work_dir() / name).string(); }

bool contains(const std::string& haystack, const std::string& needle) {
  return haystack.find(needle) != std::string::npos;
}

}  // namespace

TEST_CASE("induce-heads writes the sidecar format") {
  RunResult r = run("induce-heads --trees " + data("fixtures/fixture_a.mrg") + " --deps " +
                    data("fixtures/fixture_a.conll") + " --out " + path("heads_a.txt"));
  CHECK(r.exit_code == 0);
  CHECK(slurp(path("heads_a.txt")) == "0:2 1:2 2:1\n");
}

TEST_CASE("unknown subcommand exits 2 with help text") {
  RunResult r = run("frobnicate");
  CHECK(r.exit_code == 2);
  CHECK(contains(r.err, "Usage"));
}

TEST_CASE("usage error inside a subcommand exits 2") {
  RunResult r = run("induce-heads --no-such-flag");
  CHECK(r.exit_code == 2);
}

TEST_CASE("eval-uas diagnoses mismatched sentence counts") {
  write(path("one.conll"), "1\ta\t_\t_\tX\t_\t0\troot\n\n");
  write(path("two.conll"),
        "1\ta\t_\t_\tX\t_\t0\troot\n\n1\tb\t_\t_\tX\t_\t0\troot\n\n");
  RunResult r = run("eval-uas --gold " + path("one.conll") + " --pred " + path("two.conll"));
  CHECK(r.exit_code == 1);
  CHECK(contains(r.err, "1"));
  CHECK(contains(r.err, "2"));
}

TEST_CASE("pipeline composability: normalize | binarize | debinarize | eval-brackets") {
  std::string mini = data("fixtures/mini.mrg");
  std::string deps = data("fixtures/mini.conll");
  CHECK(run("normalize --trees " + mini + " --out " + path("norm.mrg")).exit_code == 0);
  CHECK(run("--quiet binarize --trees " + path("norm.mrg") + " --heads oracle --deps " + deps +
            " --out " + path("bin.mrg"))
            .exit_code == 0);
  // binarized output is strictly binary and @-marked somewhere
  CHECK(contains(slurp(path("bin.mrg")), "(@"));
  CHECK(run("debinarize --trees " + path("bin.mrg") + " --out " + path("deb.mrg")).exit_code == 0);
  RunResult r = run("eval-brackets --gold " + mini + " --pred " + path("deb.mrg"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "f1=100.00"));
  CHECK(contains(r.out, "complete_match=100.00"));
}

TEST_CASE("binarize --heads oracle then debinarize recovers the input exactly") {
  std::string mini = data("fixtures/mini.mrg");
  std::string deps = data("fixtures/mini.conll");
  CHECK(run("--quiet binarize --trees " + mini + " --heads oracle --deps " + deps + " --out " +
            path("direct_bin.mrg"))
            .exit_code == 0);
  CHECK(run("debinarize --trees " + path("direct_bin.mrg") + " --out " + path("direct_deb.mrg"))
            .exit_code == 0);
  RunResult r = run("eval-brackets --gold " + mini + " --pred " + path("direct_deb.mrg"));
  CHECK(contains(r.out, "f1=100.00"));
}

TEST_CASE("convert of a binarized corpus matches convert of the original") {
  std::string mini = data("fixtures/mini.mrg");
  std::string deps = data("fixtures/mini.conll");
  write(path("conv.rules"), "S left VP\nNP right NN\nVP left VBZ\nDEFAULT left\n");
  CHECK(run("--quiet binarize --trees " + mini + " --heads oracle --deps " + deps + " --out " +
            path("conv_bin.mrg"))
            .exit_code == 0);
  CHECK(run("convert --trees " + mini + " --heads rules --rules " + path("conv.rules") +
            " --out " + path("conv_flat.conll"))
            .exit_code == 0);
  CHECK(run("convert --trees " + path("conv_bin.mrg") + " --heads rules --rules " +
            path("conv.rules") + " --out " + path("conv_from_bin.conll"))
            .exit_code == 0);
  CHECK(slurp(path("conv_flat.conll")) == slurp(path("conv_from_bin.conll")));
}

TEST_CASE("convert rejects @-input under --no-auto-debinarize") {
  std::string mini = data("fixtures/mini.mrg");
  std::string deps = data("fixtures/mini.conll");
  CHECK(run("--quiet binarize --trees " + mini + " --heads oracle --deps " + deps + " --out " +
            path("nad_bin.mrg"))
            .exit_code == 0);
  write(path("nad.rules"), "DEFAULT left\n");
  RunResult r = run("convert --trees " + path("nad_bin.mrg") +
                    " --heads rules --rules " + path("nad.rules") + " --no-auto-debinarize");
  CHECK(r.exit_code == 1);
  CHECK(contains(r.err, "IntermediateNodePresent"));
}

TEST_CASE("convert --heads oracle reproduces convert-realizable dependencies") {
  std::string mini = data("fixtures/mini.mrg");
  std::string deps = data("fixtures/mini.conll");
  CHECK(run("--quiet convert --trees " + mini + " --heads oracle --deps " + deps + " --out " +
            path("conv.conll"))
            .exit_code == 0);
  RunResult r = run("eval-uas --gold " + deps + " --pred " + path("conv.conll"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "uas=100.00"));
}

TEST_CASE("traces are stripped wherever trees align with dependencies") {
  RunResult r = run("induce-heads --trees " + data("fixtures/traced.mrg") + " --deps " +
                    data("fixtures/traced.conll") + " --out " + path("traced_heads.txt"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.err, "induced 1/1"));
}

TEST_CASE("percolate applies a rule table") {
  write(path("tiny.rules"), "S left VP\nNP right NN\nVP left VBZ\nDEFAULT left\n");
  RunResult r = run("percolate --rules " + path("tiny.rules") + " --trees " +
                    data("fixtures/fixture_a.mrg"));
  CHECK(r.exit_code == 0);
  CHECK(r.out == "0:2 1:2 2:1\n");
}

TEST_CASE("shipped english rule table parses and runs") {
  RunResult r = run("percolate --rules " + data("rules/english_collins.rules") + " --trees " +
                    data("fixtures/mini.mrg") + " --out " + path("eng_heads.txt"));
  CHECK(r.exit_code == 0);
  CHECK(!slurp(path("eng_heads.txt")).empty());
  RunResult zh = run("percolate --rules " + data("rules/chinese_ctb.rules") + " --trees " +
                     data("fixtures/mini.mrg") + " --out " + path("zh_heads.txt"));
  CHECK(zh.exit_code == 0);
}

TEST_CASE("train, predict-heads, eval-heads close the loop") {
  std::string mini = data("fixtures/mini.mrg");
  std::string deps = data("fixtures/mini.conll");
  CHECK(run("--quiet train --trees " + mini + " --deps " + deps + " --epochs 25 --out " +
            path("mini.model"))
            .exit_code == 0);
  CHECK(run("predict-heads --model " + path("mini.model") + " --trees " + mini + " --out " +
            path("mini_pred.txt"))
            .exit_code == 0);
  RunResult r = run("--quiet eval-heads --trees " + mini + " --deps " + deps + " --pred " +
                    path("mini_pred.txt") + " --per-category");
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "accuracy=100.00"));
  CHECK(contains(r.out, "category_NP="));
}

TEST_CASE("train honors a dev set for checkpoint selection") {
  std::string mini = data("fixtures/mini.mrg");
  std::string deps = data("fixtures/mini.conll");
  RunResult r = run("train --trees " + mini + " --deps " + deps + " --dev-trees " + mini +
                    " --dev-deps " + deps + " --epochs 3 --out " + path("dev.model"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.err, "dev loss"));
}

TEST_CASE("transfer with an identity map matches predict-heads") {
  std::string mini = data("fixtures/mini.mrg");
  std::string deps = data("fixtures/mini.conll");
  write(path("identity.map"), "FALLBACK identity\n");
  CHECK(run("--quiet train --trees " + mini + " --deps " + deps + " --epochs 25 --out " +
            path("mini2.model"))
            .exit_code == 0);
  RunResult r = run("--quiet transfer --model " + path("mini2.model") + " --map " +
                    path("identity.map") + " --trees " + mini + " --deps " + deps);
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "accuracy=100.00"));
}

TEST_CASE("diff-binarized separates head conventions") {
  std::string mini = data("fixtures/mini.mrg");
  write(path("left.rules"), "DEFAULT left\n");
  write(path("right.rules"), "DEFAULT right\n");
  CHECK(run("binarize --trees " + mini + " --heads rules --rules " + path("left.rules") +
            " --out " + path("bin_left.mrg"))
            .exit_code == 0);
  CHECK(run("binarize --trees " + mini + " --heads rules --rules " + path("right.rules") +
            " --out " + path("bin_right.mrg"))
            .exit_code == 0);
  RunResult r = run("diff-binarized --a " + path("bin_left.mrg") + " --b " + path("bin_right.mrg"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.out, "f1="));
  CHECK(!contains(r.out, "f1=100.00"));
  // stripping the spines makes them identical again
  CHECK(run("debinarize --trees " + path("bin_left.mrg") + " --out " + path("deb_left.mrg"))
            .exit_code == 0);
  CHECK(run("debinarize --trees " + path("bin_right.mrg") + " --out " + path("deb_right.mrg"))
            .exit_code == 0);
  RunResult flat =
      run("eval-brackets --gold " + path("deb_left.mrg") + " --pred " + path("deb_right.mrg"));
  CHECK(contains(flat.out, "f1=100.00"));
}

TEST_CASE("binarize --heads file consumes sidecar assignments") {
  std::string a = data("fixtures/fixture_a.mrg");
  write(path("manual.txt"), "0:2 1:2 2:1\n");
  RunResult r = run("binarize --trees " + a + " --heads file --heads-file " + path("manual.txt"));
  CHECK(r.exit_code == 0);
  CHECK(r.out == "(S (NP (DT the) (NN dog)) (VP (VBZ barks)))\n");
}

TEST_CASE("malformed input exits 1 with a one-line diagnostic") {
  write(path("broken.mrg"), "(S (NP (DT the)\n");
  RunResult r = run("normalize --trees " + path("broken.mrg"));
  CHECK(r.exit_code == 1);
  CHECK(contains(r.err, "UnbalancedParens"));
  CHECK(std::count(r.err.begin(), r.err.end(), '\n') == 1);
}

TEST_CASE("--exclude drops listed sentences before alignment") {
  std::string mini = data("fixtures/mini.mrg");
  std::string deps = data("fixtures/mini.conll");
  write(path("skip.txt"), "1\n");
  RunResult r = run("--exclude " + path("skip.txt") + " induce-heads --trees " + mini +
                    " --deps " + deps + " --out " + path("excl_heads.txt"));
  CHECK(r.exit_code == 0);
  CHECK(contains(r.err, "exclusion list"));
  CHECK(contains(r.err, "induced 2/2"));
}

TEST_CASE("--jobs does not change outputs") {
  std::string mini = data("fixtures/mini.mrg");
  CHECK(run("normalize --trees " + mini + " --out " + path("n1.mrg")).exit_code == 0);
  CHECK(run("--jobs 4 normalize --trees " + mini + " --out " + path("n4.mrg")).exit_code == 0);
  CHECK(slurp(path("n1.mrg")) == slurp(path("n4.mrg")));
}
