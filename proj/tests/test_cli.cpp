#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

namespace fs = std::filesystem;

namespace {

const fs::path kCli = STEPPARSE_CLI;
const fs::path kData = STEPPARSE_DATA_DIR;
const fs::path kFixtures = STEPPARSE_FIXTURE_DIR;

fs::path tmpDir() {
    fs::path dir = fs::temp_directory_path() / "stepparse_cli_test";
    fs::create_directories(dir);
    return dir;
}

int runCommand(const std::string& args, const fs::path& stdoutFile = {}) {
    std::string cmd = kCli.string() + " " + args;
    if (!stdoutFile.empty()) cmd += " > " + stdoutFile.string();
    int rc = std::system(cmd.c_str());
    return WEXITSTATUS(rc);
}

std::string readFile(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    REQUIRE(in.good());
    return std::string((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
}

void writeFile(const fs::path& p, const std::string& text) {
    std::ofstream out(p, std::ios::binary);
    out << text;
}

fs::path writeRunConfig() {
    fs::path cfg = tmpDir() / "run.toml";
    writeFile(cfg, "[paths]\n"
                   "signature = \"" + (kData / "calendar.sig").string() + "\"\n"
                   "elementary = \"" + (kData / "elementary.jsonl").string() + "\"\n"
                   "train = \"" + (kData / "complex_train.jsonl").string() + "\"\n"
                   "test = \"" + (kData / "complex_test.jsonl").string() + "\"\n"
                   "transcript = \"" +
                       (kFixtures / "transcripts" / "suite.jsonl").string() + "\"\n"
                   "[run]\n"
                   "m = 20\n"
                   "k = 10\n"
                   "[backend]\n"
                   "model = \"fixture-model\"\n");
    return cfg;
}

}  // namespace

TEST_CASE("check accepts a good program and rejects a bad one") {
    fs::path good = tmpDir() / "good.prog";
    writeFile(good, "val s1 = findEvents(queryAt(Monday)).head\n");
    CHECK(runCommand("check " + good.string() + " --sig " + (kData / "calendar.sig").string()) ==
          0);

    fs::path bad = tmpDir() / "bad.prog";
    writeFile(bad, "val s1 = fooBarBaz(7)\n");
    CHECK(runCommand("check " + bad.string() + " --sig " + (kData / "calendar.sig").string()) ==
          1);
}

TEST_CASE("usage errors exit with 2") {
    CHECK(runCommand("check") == 2);
    CHECK(runCommand("definitely-not-a-subcommand") == 2);
}

TEST_CASE("normalize reads stdin and writes the canonical form") {
    fs::path out = tmpDir() / "norm.out";
    std::string cmd = "echo 'val  s1=a concat b' | " + kCli.string() + " normalize --sig " +
                      (kData / "calendar.sig").string() + " > " + out.string();
    REQUIRE(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(readFile(out) == "val s1 = a + b\n");
}

TEST_CASE("mock suite runs are deterministic across invocations") {
    fs::path cfg = writeRunConfig();
    fs::path out1 = tmpDir() / "results1.jsonl";
    fs::path out2 = tmpDir() / "results2.jsonl";
    std::string base = "run --mode decomposed --config " + cfg.string();
    REQUIRE(runCommand(base + " --out " + out1.string()) == 0);
    REQUIRE(runCommand(base + " --out " + out2.string()) == 0);
    CHECK(readFile(out1) == readFile(out2));
    CHECK(readFile(out1).find("\"config\"") != std::string::npos);
}

TEST_CASE("run then eval produces a perfect scoreboard on the gold transcript") {
    fs::path cfg = writeRunConfig();
    fs::path results = tmpDir() / "results_eval.jsonl";
    REQUIRE(runCommand("run --mode decomposed --config " + cfg.string() + " --out " +
                       results.string()) == 0);
    fs::path table = tmpDir() / "table.txt";
    REQUIRE(runCommand("eval --results " + results.string() + " --gold " +
                           (kData / "complex_test.jsonl").string() + " --sig " +
                           (kData / "calendar.sig").string() + " --out-prefix " +
                           (tmpDir() / "report").string(),
                       table) == 0);
    std::string rendered = readFile(table);
    CHECK(rendered.find("1.00") != std::string::npos);  // EM of the gold-scripted run
    CHECK(fs::exists(tmpDir() / "report.records.jsonl"));
    CHECK(fs::exists(tmpDir() / "report.summary.json"));
}

TEST_CASE("retrieve prints ranked exemplars") {
    fs::path out = tmpDir() / "retrieve.out";
    REQUIRE(runCommand("retrieve --input " + (kData / "elementary.jsonl").string() +
                           " --query \"find meetings on Monday\" -m 3",
                       out) == 0);
    std::string text = readFile(out);
    CHECK(text.find("Find all meetings on Monday.") != std::string::npos);
}

TEST_CASE("prompt dry run renders without a backend") {
    fs::path cfg = writeRunConfig();
    fs::path out = tmpDir() / "prompt.out";
    REQUIRE(runCommand("prompt --mode step --utterance \"u\" --step \"Find vacation next "
                       "week\" --config " +
                           cfg.string() + " --dry-run",
                       out) == 0);
    std::string text = readFile(out);
    std::string tail = "Step 1: Find vacation next week\nProgram 1:";
    REQUIRE(text.size() >= tail.size());
    CHECK(text.substr(text.size() - tail.size()) == tail);
}

TEST_CASE("stats subcommand reports dataset statistics") {
    fs::path out = tmpDir() / "stats.out";
    REQUIRE(runCommand("stats --input " + (kData / "complex_test.jsonl").string() + " --sig " +
                           (kData / "calendar.sig").string(),
                       out) == 0);
    CHECK(readFile(out).find("\"meanSteps\"") != std::string::npos);
}

TEST_CASE("version flag") {
    CHECK(runCommand("--version") == 0);
}
