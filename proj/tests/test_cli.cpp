#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>

#include "chainparity/io.hpp"

using namespace chainparity;

namespace {

namespace fs = std::filesystem;

const fs::path work_dir = fs::temp_directory_path() / "chainparity_cli_tests";

struct run_result {
    int exit_code = -1;
    std::string out;
    std::string err;
};

std::string slurp(const fs::path& p) {
    std::ifstream in(p);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

run_result run_cli(const std::string& args) {
    fs::create_directories(work_dir);
    const fs::path out = work_dir / "stdout.txt";
    const fs::path err = work_dir / "stderr.txt";
    const std::string cmd = std::string(CHAINPARITY_CLI_PATH) + " " + args + " > " +
                            out.string() + " 2> " + err.string();
    const int status = std::system(cmd.c_str());
    run_result r;
    r.exit_code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
    r.out = slurp(out);
    r.err = slurp(err);
    return r;
}

fs::path write_instance(const char* name, ring_size ring, std::vector<unsigned> values) {
    fs::create_directories(work_dir);
    discrete_instance inst;
    inst.ring = ring;
    inst.values = std::move(values);
    const fs::path p = work_dir / name;
    save_instance(p.string(), inst);
    return p;
}

std::vector<std::string> lines_of(const std::string& text) {
    std::vector<std::string> out;
    std::istringstream ss(text);
    std::string line;
    while (std::getline(ss, line))
        if (!line.empty()) out.push_back(line);
    return out;
}

} // namespace

TEST_CASE("usage errors exit 2") {
    CHECK(run_cli("").exit_code == 2);
    CHECK(run_cli("bogus").exit_code == 2);
    CHECK(run_cli("quantum").exit_code == 2);            // missing --instance
    CHECK(run_cli("search --n 2 --k 2").exit_code == 2); // missing --max-l
    CHECK(run_cli("--help").exit_code == 0);
}

TEST_CASE("quantum subcommand") {
    const auto inst = write_instance("odd.json", ring_size::from_half(2), {1, 1});

    for (const char* model : {"angle", "amplitude", "continuous"}) {
        const auto r = run_cli("quantum --instance " + inst.string() + " --model " + model);
        CHECK(r.exit_code == 0);
        const json j = json::parse(r.out);
        CHECK(j.at("true_parity") == "odd");
        CHECK(j.at("report").at("verdict") == "odd");
        CHECK(j.at("config").at("model") == model);
    }

    // Replay is byte-identical.
    const std::string a = run_cli("quantum --instance " + inst.string()).out;
    const std::string b = run_cli("quantum --instance " + inst.string()).out;
    CHECK(a == b);
}

TEST_CASE("quantum error paths") {
    fs::create_directories(work_dir);
    const fs::path bad = work_dir / "bad.json";
    write_text_file(bad.string(), R"({"K": 2, "k": [1, 2]})");
    CHECK(run_cli("quantum --instance " + bad.string()).exit_code == 3);
    CHECK(run_cli("quantum --instance " + (work_dir / "absent.json").string()).exit_code == 6);

    // Rings past the sumset word cap are fine for the simulators.
    const fs::path huge = work_dir / "huge.json";
    write_text_file(huge.string(), R"({"K": 64, "k": [0, 0]})");
    CHECK(run_cli("quantum --instance " + huge.string()).exit_code == 0);
}

TEST_CASE("rod subcommand") {
    const auto inst = write_instance("rod.json", ring_size::from_half(2), {1, 3});
    const auto r = run_cli("rod --instance " + inst.string() + " --jitter 0.01 --seed 5");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("report").at("verdict") == "even");
    CHECK(j.at("config").at("jitter") == 0.01);
}

TEST_CASE("verify subcommand") {
    fs::create_directories(work_dir);
    const fs::path good = work_dir / "partial_sum.json";
    save_protocol(good.string(), partial_sum_protocol(3, ring_size::from_half(2)));
    const auto ok = run_cli("verify --protocol " + good.string());
    CHECK(ok.exit_code == 0);
    CHECK(json::parse(ok.out).at("report").at("perfect") == true);

    protocol_table flawed;
    flawed.n_parties = 2;
    flawed.ring = ring_size::from_half(2);
    flawed.alphabet = 1;
    flawed.transitions = {{0, 0, 0, 0}};
    flawed.decision.assign(4, parity::even);
    const fs::path bad = work_dir / "flawed.json";
    save_protocol(bad.string(), flawed);
    const auto no = run_cli("verify --protocol " + bad.string());
    CHECK(no.exit_code == 1);
    const json j = json::parse(no.out);
    CHECK(j.at("report").at("perfect") == false);
    CHECK(j.at("report").at("counterexample").is_object());

    const fs::path garbage = work_dir / "garbage.json";
    write_text_file(garbage.string(), R"({"N": 2})");
    CHECK(run_cli("verify --protocol " + garbage.string()).exit_code == 3);
}

TEST_CASE("search subcommand: csv on stdout, json on request") {
    fs::create_directories(work_dir);
    const fs::path jpath = work_dir / "search.json";
    const auto r = run_cli("search --n 2 --k 2 --max-l 4 --json " + jpath.string());
    REQUIRE(r.exit_code == 0);

    const auto rows = lines_of(r.out);
    REQUIRE(rows.size() == 5);
    CHECK(rows[0] == csv_header());
    CHECK(rows[1].rfind("2,2,1,impossible,", 0) == 0);
    CHECK(rows[2].rfind("2,2,2,exists,", 0) == 0);
    CHECK(rows[3].rfind("2,2,3,exists,", 0) == 0);
    for (const auto& row : rows) {
        const auto commas = static_cast<std::size_t>(
            std::count(row.begin(), row.end(), ','));
        CHECK(commas == 6);
    }

    const json j = json::parse(slurp(jpath));
    CHECK(j.at("minimal_l") == 2);
    CHECK(j.at("results").size() == 4);
    CHECK(j.at("results")[1].at("witness").is_object());
    CHECK_FALSE(j.at("results")[0].contains("seconds"));

    // Identical flags replay to identical JSON bytes.
    const std::string first = slurp(jpath);
    run_cli("search --n 2 --k 2 --max-l 4 --json " + jpath.string());
    CHECK(first == slurp(jpath));
}

TEST_CASE("search subcommand: guard rails") {
    CHECK(run_cli("search --n 2 --k 3 --max-l 2").exit_code == 3);
    CHECK(run_cli("search --n 2 --k 3 --max-l 2 --allow-non-power-of-two").exit_code == 0);
    CHECK(run_cli("search --n 2 --k 2 --max-l 4 --method exhaustive --budget 10").exit_code ==
          4);
    CHECK(run_cli("search --n 2 --k 2 --max-l 4 --method sideways").exit_code == 2);
}

TEST_CASE("lemma-check subcommand") {
    const auto power = run_cli("lemma-check --two-k 8");
    CHECK(power.exit_code == 0);
    const json j = json::parse(power.out);
    CHECK(j.at("report").at("zero_growth_count") == 0);
    CHECK(j.at("report").at("asserted") == true);

    CHECK(run_cli("lemma-check --two-k 6").exit_code == 3);
    const auto six = run_cli("lemma-check --two-k 6 --allow-non-power-of-two");
    CHECK(six.exit_code == 0);
    const json js = json::parse(six.out);
    CHECK(js.at("report").at("zero_growth_count") == 12);
    CHECK(js.at("report").at("zero_growth_cases")[0].at("set") == json::array({0, 2, 4}));

    CHECK(run_cli("lemma-check --two-k 70 --allow-non-power-of-two").exit_code == 7);
}

TEST_CASE("teleport subcommand") {
    const auto inst = write_instance("tele.json", ring_size::from_half(4), {3, 2, 3});
    const auto r = run_cli("teleport --instance " + inst.string() + " --seed 11 --trials 64");
    CHECK(r.exit_code == 0);
    const json j = json::parse(r.out);
    CHECK(j.at("true_parity") == "even");
    CHECK(j.at("trials_correct") == true);
    CHECK(j.at("report").at("bits_per_hop") == 2);
    CHECK(j.at("report").at("total_bits") == 4);

    const std::string again =
        run_cli("teleport --instance " + inst.string() + " --seed 11 --trials 64").out;
    CHECK(again == r.out);
}

TEST_CASE("reports also land in --out files") {
    const auto inst = write_instance("outfile.json", ring_size::from_half(2), {0, 2});
    const fs::path out = work_dir / "report.json";
    const auto r = run_cli("quantum --instance " + inst.string() + " --out " + out.string());
    CHECK(r.exit_code == 0);
    CHECK(slurp(out) == r.out);
}
