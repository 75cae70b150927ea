#include "r2d/report.hpp"
#include "r2d/shifts.hpp"

#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

using namespace r2d;

namespace {

std::string models_dir() { return std::string(R2D_SOURCE_DIR) + "/models/"; }
std::string golden_dir() { return std::string(R2D_SOURCE_DIR) + "/tests/golden/"; }

std::string run_cli(const std::string& args, int* exit_code = nullptr) {
    std::string cmd = std::string(R2D_CLI_PATH) + " " + args + " 2>/dev/null";
    FILE* pipe = popen(cmd.c_str(), "r");
    REQUIRE(pipe != nullptr);
    std::string out;
    char buf[4096];
    size_t n;
    while ((n = fread(buf, 1, sizeof(buf), pipe)) > 0) out.append(buf, n);
    int status = pclose(pipe);
    if (exit_code) *exit_code = WEXITSTATUS(status);
    return out;
}

std::string read_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in.good());
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

} // namespace

TEST_CASE("bundled specs parse to the right handles") {
    ParsedModel led = parse_model_spec(models_dir() + "ledrappier.json");
    CHECK(led.model.kind() == ModelKind::Sft);
    CHECK(led.model.sft().allowed.size() == 4);
    CHECK(led.fingerprint.substr(0, 8) == "fnv1a64:");

    ParsedModel circle = parse_model_spec(models_dir() + "circle-2-3.json");
    CHECK(circle.model.kind() == ModelKind::Circle);
    CHECK(circle.model.circle().p1 == 2);
    CHECK(circle.model.circle().p2 == 3);

    ParsedModel full = parse_model_spec(models_dir() + "fullshift-2.json");
    CHECK(full.model.kind() == ModelKind::FullShift);
    CHECK(full.measure.dir1.mode == DirectionMeasure::Mode::ProductWeights);
    CHECK(full.measure.dir1.symbol_weights[0] == Rational(1, 2));

    ParsedModel kg = parse_model_spec(models_dir() + "kgraph-2-3-loops.json");
    CHECK(kg.model.kind() == ModelKind::KGraph);
    CHECK(kg.model.graph().hEdges.size() == 2);
    CHECK(kg.model.graph().vEdges.size() == 3);

    ParsedModel red = parse_model_spec(models_dir() + "kgraph-reducible.json");
    CHECK(red.model.graph().vertices.size() == 2);
}

TEST_CASE("unknown fields are rejected by name") {
    json j = {{"kind", "circle"}, {"degrees", {2, 3}}, {"wibble", 1}};
    try {
        parse_model_json(j);
        FAIL("expected parse-error");
    } catch (const Error& e) {
        CHECK(e.code() == "parse-error");
        CHECK(std::string(e.what()).find("wibble") != std::string::npos);
    }
}

TEST_CASE("fingerprints are stable under formatting but not content changes") {
    ParsedModel a = parse_model_spec(models_dir() + "ledrappier.json");
    json j = a.canonical;
    ParsedModel b = parse_model_json(j);
    CHECK(a.fingerprint == b.fingerprint);

    json changed = j;
    changed["allowed"].erase(0);
    ParsedModel c = parse_model_json(changed);
    CHECK(a.fingerprint != c.fingerprint);
}

TEST_CASE("ledrappier measure defaults to counting, full shift to Bernoulli") {
    ParsedModel led = parse_model_spec(models_dir() + "ledrappier.json");
    CHECK(led.measure.dir1.mode == DirectionMeasure::Mode::CountingNormalized);
    ParsedModel full = parse_model_spec(models_dir() + "fullshift-2.json");
    Rational sum(0);
    for (const auto& w : full.measure.dir2.symbol_weights) sum += w;
    CHECK(sum == 1);
}

TEST_CASE("cli reports are byte-identical across runs") {
    std::string args = "--model " + models_dir() + "ledrappier.json patterns --shape 2,2";
    int code1 = 0, code2 = 0;
    std::string a = run_cli(args, &code1);
    std::string b = run_cli(args, &code2);
    CHECK(code1 == 0);
    CHECK(code2 == 0);
    CHECK(a == b);
    CHECK_FALSE(a.empty());
}

TEST_CASE("cli golden files") {
    struct Entry {
        const char* name;
        std::string args;
    };
    std::vector<Entry> entries = {
        {"patterns_ledrappier_2x2.json",
         "--model " + models_dir() + "ledrappier.json patterns --shape 2,2"},
        {"k0_circle23.json",
         "--model " + models_dir() + "circle-2-3.json k0 --chain \"0,0;1,1;2,2;3,3\""},
        {"localhomeo_fullshift.json",
         "--model " + models_dir() + "fullshift-2.json localhomeo --dir 1 --window 0,0 --depth 4,4"},
    };
    for (const auto& e : entries) {
        CAPTURE(e.name);
        int code = 0;
        std::string got = run_cli(e.args, &code);
        CHECK(code == 0);
        CHECK(got == read_file(golden_dir() + e.name));
    }
}

TEST_CASE("cli refutation reports round-trip through the library") {
    std::string args = "--model " + models_dir() +
                       "fullshift-2.json localhomeo --dir 1 --window 0,0 --depth 4,4";
    int code = 0;
    json doc = json::parse(run_cli(args, &code));
    CHECK(code == 0);
    REQUIRE(doc["results"]["status"] == "RefutedWithWitness");

    // revalidate the witness against the library
    ModelHandle m = build_model_full_shift({"0", "1"});
    auto parse_pattern = [&](const std::string& s) {
        // format: rows joined by '/', symbols by ','
        RectPattern p;
        std::vector<std::vector<int>> rows;
        std::stringstream ss(s);
        std::string row;
        while (std::getline(ss, row, '/')) {
            std::vector<int> cells;
            std::stringstream rs(row);
            std::string cell;
            while (std::getline(rs, cell, ',')) cells.push_back(m.sft().symbol_index(cell));
            rows.push_back(cells);
        }
        p.shape = {static_cast<int>(rows[0].size()), static_cast<int>(rows.size())};
        for (const auto& r : rows)
            for (int c : r) p.cells.push_back(static_cast<std::uint8_t>(c));
        return p;
    };
    RectPattern y = parse_pattern(doc["results"]["witness"]["first"].get<std::string>());
    RectPattern z = parse_pattern(doc["results"]["witness"]["second"].get<std::string>());
    CHECK_FALSE(y == z);
    CHECK(pattern_admissible(m.sft(), y));
    CHECK(pattern_admissible(m.sft(), z));
    CHECK(y.at(0, 0) == z.at(0, 0));
    CHECK(pattern_eq(apply_shift(m, Pattern(y), {1, 0}), apply_shift(m, Pattern(z), {1, 0})));
}

TEST_CASE("cli maps errors to a nonzero exit with an error report") {
    int code = 0;
    json doc = json::parse(run_cli("--model /nonexistent.json validate", &code));
    CHECK(code == 2);
    CHECK(doc["results"]["error"]["code"] == "parse-error");
}

TEST_CASE("cli bratteli writes a DOT diagram file") {
    std::string out = std::string(R2D_SOURCE_DIR) + "/build/test_diagram.dot";
    std::remove(out.c_str());
    int code = 0;
    run_cli("--model " + models_dir() + "circle-2-3.json --diagram " + out +
                " bratteli --chain \"0,0;1,1;2,2\"",
            &code);
    CHECK(code == 0);
    std::string dot = read_file(out);
    CHECK(dot.find("digraph bratteli") != std::string::npos);
    std::remove(out.c_str());
}
