// r2d: exact finite-depth computations for 2D shift dynamics, transfer
// operators, groupoid truncations and AF-core invariants.
//
// Reports are JSON with sorted keys and exact rational scalars, so a command
// re-run on the same model file is byte-identical.

#include "r2d/report.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>

using namespace r2d;

namespace {

Vec2 parse_vec2(const std::string& s) {
    auto comma = s.find(',');
    if (comma == std::string::npos)
        throw Error("parse-error", "expected 'x,y' but got '" + s + "'");
    return {std::stoi(s.substr(0, comma)), std::stoi(s.substr(comma + 1))};
}

std::vector<Vec2> parse_vec2_list(const std::string& s) {
    std::vector<Vec2> out;
    size_t start = 0;
    while (start <= s.size()) {
        size_t semi = s.find(';', start);
        std::string tok = s.substr(start, semi == std::string::npos ? std::string::npos
                                                                    : semi - start);
        if (!tok.empty()) out.push_back(parse_vec2(tok));
        if (semi == std::string::npos) break;
        start = semi + 1;
    }
    return out;
}

std::uint64_t candidate_bound_from_env() {
    const char* v = std::getenv("R2D_CANDIDATE_BOUND");
    if (!v) return kDefaultCandidateBound;
    return std::strtoull(v, nullptr, 10);
}

Vec2 default_depth(const ModelHandle& model) {
    if (model.kind() == ModelKind::Circle) return {6, 6};  // Laurent span |k| <= 6
    return {3, 3};
}

struct Cli {
    std::string model_path;
    std::string out_path;
    std::string diagram_path;
    std::string command;
    json args;
    json results;
    json verdicts = json::array();
    bool had_error = false;

    void verdict(const std::string& name, bool ok, const std::string& detail = "") {
        json v;
        v["name"] = name;
        v["status"] = ok ? "ok" : "check-failed";
        if (!detail.empty()) v["detail"] = detail;
        verdicts.push_back(v);
    }

    int emit(const ParsedModel* pm) {
        json doc;
        doc["command"] = command;
        doc["args"] = args;
        if (pm) {
            doc["model"] = {{"kind", pm->canonical.at("kind")},
                            {"fingerprint", pm->fingerprint},
                            {"file", std::filesystem::path(model_path).filename().string()}};
        }
        doc["results"] = results;
        doc["verdicts"] = verdicts;
        std::string text = doc.dump(1, ' ') + "\n";
        if (out_path.empty()) {
            std::cout << text;
        } else {
            std::ofstream out(out_path, std::ios::binary);
            out << text;
        }
        return had_error ? 2 : 0;
    }
};

json run_prodsys_check(const ParsedModel& pm, Vec2 depth, std::uint64_t bound) {
    json j;
    j["commutingExpectations"] = to_json(check_commuting_expectations(pm.model, pm.measure, depth, bound));
    Vec2 small_depth = pm.model.kind() == ModelKind::Circle ? depth : cmin(depth, Vec2{2, 2});
    j["phiLemma"] = [&] {
        PhiLemmaReport rep = phi_lemma_check(pm.model, pm.measure, small_depth, bound);
        json pj;
        pj["innerProductsMatch"] = rep.inner_products_match;
        pj["inverseRight"] = rep.inverse_right;
        pj["inverseLeft"] = rep.inverse_left;
        pj["pairsChecked"] = rep.pairs_checked;
        if (!rep.witness.empty()) pj["witness"] = rep.witness;
        return pj;
    }();
    j["flip"] = to_json(flip_unitary_check(pm.model, pm.measure, small_depth, bound));
    return j;
}

json run_convolve_check(const ParsedModel& pm, Vec2 n, Vec2 depth, std::uint64_t bound) {
    json j;
    j["n"] = to_json(n);
    if (pm.model.kind() == ModelKind::Circle) {
        // Laurent kernel basis from monomial theta pairs; three paths:
        // coefficient convolution, operator composition, theta rule.
        long span = 2;
        bool all_ok = true;
        long checked = 0;
        for (long a = -span; a <= span && all_ok; ++a)
            for (long b = -span; b <= span && all_ok; ++b)
                for (long a2 = -span; a2 <= span && all_ok; ++a2)
                    for (long b2 = -span; b2 <= span; ++b2) {
                        auto xi = CylinderFunction::monomial(pm.model, a);
                        auto eta = CylinderFunction::monomial(pm.model, b);
                        auto xi2 = CylinderFunction::monomial(pm.model, a2);
                        auto eta2 = CylinderFunction::monomial(pm.model, b2);
                        LaurentKernel k1 = laurent_theta(xi, eta, n);
                        LaurentKernel k2 = laurent_theta(xi2, eta2, n);
                        LaurentKernel conv = laurent_convolve(k1, k2);
                        CylinderFunction acomp = inner_product(eta, xi2, pm.measure, n);
                        LaurentKernel rule =
                            laurent_theta(right_action(xi, acomp, n), eta2, n);
                        if (!exactly_equal(conv, rule)) {
                            all_ok = false;
                            break;
                        }
                        for (long c = -span; c <= span; ++c) {
                            auto zeta = CylinderFunction::monomial(pm.model, c);
                            CylinderFunction path1 = laurent_kernel_apply(conv, zeta);
                            CylinderFunction path2 =
                                laurent_kernel_apply(k1, laurent_kernel_apply(k2, zeta));
                            if (!(path1 == path2)) {
                                all_ok = false;
                                break;
                            }
                        }
                        ++checked;
                    }
        j["pairsChecked"] = checked;
        j["threePathsAgree"] = all_ok;
        return j;
    }

    auto basis = PatternBasis::make(pm.model, depth, bound);
    RnPartition part = rn_classes(pm.model, n, depth, bound);
    bool all_ok = true;
    long checked = 0;
    std::vector<CylinderFunction> fns;
    for (const auto& p : basis->patterns) fns.push_back(CylinderFunction::indicator(basis, p));
    for (size_t i = 0; i < fns.size() && all_ok; ++i)
        for (size_t k = 0; k < fns.size() && all_ok; ++k)
            for (size_t i2 = 0; i2 < fns.size() && all_ok; ++i2)
                for (size_t k2 = 0; k2 < fns.size(); ++k2) {
                    KernelFunction t1 = theta_kernel(pm.measure, fns[i], fns[k], n);
                    KernelFunction t2 = theta_kernel(pm.measure, fns[i2], fns[k2], n);
                    KernelFunction conv = kernel_convolve(t1, t2);
                    KernelFunction rule =
                        theta_compose_rule(pm.measure, fns[i], fns[k], fns[i2], fns[k2], n);
                    OperatorMatrix b1 = kernel_to_block_matrix(t1);
                    OperatorMatrix b2 = kernel_to_block_matrix(t2);
                    OperatorMatrix bc = kernel_to_block_matrix(conv);
                    bool ok = exactly_equal(conv, rule) &&
                              exactly_equal(CMat(b1.entries * b2.entries), bc.entries);
                    ++checked;
                    if (!ok) all_ok = false;
                }
    (void)part;
    j["pairsChecked"] = checked;
    j["threePathsAgree"] = all_ok;
    return j;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact finite-depth toolkit for commuting shift dynamics"};
    app.require_subcommand(1);

    Cli cli;
    std::string shape_s = "2,2", depth_s, window_s = "0,0", n_s = "1,0", chain_s, seed_s;
    int direction = 1;
    int budget = 2;
    int levels = 4;

    app.add_option("--model", cli.model_path, "model spec file (JSON)");
    app.add_option("--out", cli.out_path, "write the report here instead of stdout");
    app.add_option("--diagram", cli.diagram_path, "write a DOT diagram file (bratteli/k0)");

    auto* c_validate = app.add_subcommand("validate", "validate the model spec");
    c_validate->add_option("--depth", depth_s, "depth d1,d2");

    auto* c_patterns = app.add_subcommand("patterns", "enumerate admissible patterns");
    c_patterns->add_option("--shape", shape_s, "shape m,n");

    auto* c_localhomeo = app.add_subcommand("localhomeo", "local injectivity verdict");
    c_localhomeo->add_option("--dir", direction, "direction 1|2");
    c_localhomeo->add_option("--window", window_s, "window cells x,y;x,y;...");
    c_localhomeo->add_option("--depth", depth_s, "depth d1,d2");

    auto* c_expectation = app.add_subcommand("expectation", "conditional expectation matrix");
    c_expectation->add_option("--dir", direction, "direction 1|2");
    c_expectation->add_option("--depth", depth_s, "depth d1,d2");

    auto* c_transfer = app.add_subcommand("transfer", "transfer operator matrix");
    c_transfer->add_option("--dir", direction, "direction 1|2");
    c_transfer->add_option("--depth", depth_s, "depth d1,d2");

    auto* c_frame = app.add_subcommand("frame", "Parseval frame and reconstruction check");
    c_frame->add_option("--dir", direction, "direction 1|2");
    c_frame->add_option("--depth", depth_s, "depth d1,d2");

    auto* c_prodsys = app.add_subcommand("prodsys-check",
                                         "commuting expectations, Phi lemma, flip isomorphism");
    c_prodsys->add_option("--depth", depth_s, "depth d1,d2");

    auto* c_groupoid = app.add_subcommand("groupoid", "R_n classes and algebra description");
    c_groupoid->add_option("--n", n_s, "exponent a,b");
    c_groupoid->add_option("--depth", depth_s, "depth d1,d2");

    auto* c_convolve = app.add_subcommand("convolve-check",
                                          "kernel convolution vs operator composition vs theta rule");
    c_convolve->add_option("--n", n_s, "exponent a,b");
    c_convolve->add_option("--depth", depth_s, "depth d1,d2");

    auto* c_bratteli = app.add_subcommand("bratteli", "Bratteli diagram along a chain");
    c_bratteli->add_option("--chain", chain_s, "chain a,b;a,b;...");
    c_bratteli->add_option("--depth", depth_s, "depth d1,d2");

    auto* c_k0 = app.add_subcommand("k0", "dimension group report of the chain diagram");
    c_k0->add_option("--chain", chain_s, "chain a,b;a,b;...");
    c_k0->add_option("--depth", depth_s, "depth d1,d2");

    auto* c_simplicity = app.add_subcommand("simplicity", "minimality and freeness evidence");
    c_simplicity->add_option("--budget", budget, "depth budget (diagonal)");

    auto* c_growth = app.add_subcommand("growth", "compactness growth diagnostic");
    c_growth->add_option("--dir", direction, "direction 1|2");
    c_growth->add_option("--levels", levels, "depth indices 1..levels");

    auto* c_report = app.add_subcommand("report", "run the whole battery");
    bool report_all = false;
    c_report->add_flag("--all", report_all, "include every section");

    CLI11_PARSE(app, argc, argv);

    std::uint64_t bound = candidate_bound_from_env();

    try {
        if (cli.model_path.empty()) throw Error("parse-error", "--model is required");
        ParsedModel pm = parse_model_spec(cli.model_path);
        const ModelHandle& model = pm.model;
        Vec2 depth = depth_s.empty() ? default_depth(model) : parse_vec2(depth_s);
        cli.args["depth"] = to_json(depth);
        cli.args["candidateBound"] = std::to_string(bound);

        if (app.got_subcommand(c_validate)) {
            cli.command = "validate";
            if (model.is_symbolic()) {
                ValidationReport rep = validate_sft(model.sft(), cmax(depth, model.sft().window_bbox()), bound);
                cli.results = to_json(rep);
                cli.verdict("model-valid", rep.ok);
            } else if (model.kind() == ModelKind::KGraph) {
                Rank2Graph g = model.graph();
                ValidationReport rep = validate_rank2_graph(g);
                cli.results = to_json(rep);
                cli.verdict("model-valid", rep.ok);
            } else {
                cli.results = {{"ok", true}, {"degrees", {model.circle().p1, model.circle().p2}}};
                cli.verdict("model-valid", true);
            }
        } else if (app.got_subcommand(c_patterns)) {
            cli.command = "patterns";
            Vec2 shape = parse_vec2(shape_s);
            cli.args["shape"] = to_json(shape);
            auto pats = admissible_patterns(model, shape, bound);
            json list = json::array();
            for (const auto& p : pats) list.push_back(pattern_json(model, p));
            cli.results["count"] = static_cast<long>(pats.size());
            cli.results["patterns"] = list;
            cli.verdict("patterns-enumerated", true);
        } else if (app.got_subcommand(c_localhomeo)) {
            cli.command = "localhomeo";
            cli.args["dir"] = direction;
            cli.args["window"] = window_s;
            auto verdict = check_local_injectivity(model, direction, parse_vec2_list(window_s),
                                                   depth, bound);
            cli.results = to_json(model, verdict);
            // A refutation is an answer, not an error.
            cli.verdict("localhomeo-decided",
                        verdict.status != LocalInjectivityVerdict::Status::Inconclusive);
        } else if (app.got_subcommand(c_expectation) || app.got_subcommand(c_transfer)) {
            bool is_expectation = app.got_subcommand(c_expectation);
            cli.command = is_expectation ? "expectation" : "transfer";
            cli.args["dir"] = direction;
            OperatorMatrix m = is_expectation
                                   ? expectation_matrix(model, pm.measure, direction, depth, bound)
                                   : transfer_matrix(model, pm.measure, direction, depth, bound);
            cli.results = to_json(m);
            cli.verdict(cli.command + "-computed", true);
        } else if (app.got_subcommand(c_frame)) {
            cli.command = "frame";
            cli.args["dir"] = direction;
            Vec2 fdepth = model.kind() == ModelKind::Circle ? depth : cmin(depth, Vec2{2, 2});
            auto frame = frame_compute(model, pm.measure, direction, fdepth, bound);
            json elems = json::array();
            for (const auto& u : frame) {
                json e;
                e["weightSquared"] = rational_to_string(u.weight_squared);
                if (u.indicator.backend() == CylinderFunction::Backend::Laurent) {
                    json coeffs;
                    for (const auto& [exp, c] : u.indicator.coeffs())
                        coeffs[std::to_string(exp)] = to_string(c);
                    e["monomial"] = coeffs;
                } else {
                    json supp = json::array();
                    for (size_t i = 0; i < u.indicator.basis()->size(); ++i)
                        if (!u.indicator.values()(static_cast<Eigen::Index>(i)).is_zero())
                            supp.push_back(
                                pattern_json(model, u.indicator.basis()->patterns[i]));
                    e["support"] = supp;
                }
                elems.push_back(e);
            }
            cli.results["elements"] = elems;
            bool recon = true;
            if (model.kind() == ModelKind::Circle) {
                for (long k = -4; k <= 4 && recon; ++k)
                    recon = frame_reconstructs(pm.measure, direction, frame,
                                               CylinderFunction::monomial(model, k));
            } else {
                auto basis = PatternBasis::make(model, fdepth, bound);
                for (const auto& p : basis->patterns) {
                    if (!frame_reconstructs(pm.measure, direction, frame,
                                            CylinderFunction::indicator(basis, p))) {
                        recon = false;
                        break;
                    }
                }
            }
            cli.results["reconstructionExact"] = recon;
            cli.verdict("frame-reconstruction", recon);
        } else if (app.got_subcommand(c_prodsys)) {
            cli.command = "prodsys-check";
            cli.results = run_prodsys_check(pm, depth, bound);
            bool ok = cli.results["commutingExpectations"]["commute"].get<bool>() &&
                      cli.results["phiLemma"]["innerProductsMatch"].get<bool>() &&
                      cli.results["flip"]["innerProductsPreserved"].get<bool>();
            cli.verdict("product-system-identities", ok);
        } else if (app.got_subcommand(c_groupoid)) {
            cli.command = "groupoid";
            Vec2 n = parse_vec2(n_s);
            cli.args["n"] = to_json(n);
            if (model.kind() != ModelKind::Circle) {
                RnPartition part = rn_classes(model, n, depth, bound);
                json classes = json::array();
                for (const auto& cls : part.classes) {
                    json members = json::array();
                    for (int i : cls)
                        members.push_back(pattern_json(model, part.basis->patterns[static_cast<size_t>(i)]));
                    classes.push_back(members);
                }
                cli.results["classes"] = classes;
            }
            cli.results["algebra"] = to_json(model, rn_algebra_description(model, n, depth, bound));
            cli.verdict("groupoid-computed", true);
        } else if (app.got_subcommand(c_convolve)) {
            cli.command = "convolve-check";
            Vec2 n = parse_vec2(n_s);
            Vec2 cdepth = model.kind() == ModelKind::Circle ? depth : cmin(depth, n + Vec2{1, 1});
            cli.args["n"] = to_json(n);
            cli.results = run_convolve_check(pm, n, cdepth, bound);
            cli.verdict("convolution-three-paths", cli.results["threePathsAgree"].get<bool>());
        } else if (app.got_subcommand(c_bratteli) || app.got_subcommand(c_k0)) {
            bool k0_only = app.got_subcommand(c_k0);
            cli.command = k0_only ? "k0" : "bratteli";
            std::vector<Vec2> chain = chain_s.empty()
                                          ? std::vector<Vec2>{{0, 0}, {1, 1}, {2, 2}}
                                          : parse_vec2_list(chain_s);
            cli.args["chain"] = [&] {
                json c = json::array();
                for (Vec2 v : chain) c.push_back(to_json(v));
                return c;
            }();
            Vec2 bdepth = depth;
            if (model.kind() != ModelKind::Circle && !leq(chain.back() + Vec2{1, 1}, bdepth))
                bdepth = chain.back() + Vec2{1, 1};
            if (model.kind() == ModelKind::Circle && !leq(chain.back() + Vec2{1, 1}, bdepth))
                bdepth = chain.back() + Vec2{1, 1};
            cli.args["depth"] = to_json(bdepth);
            BratteliDiagram d = model.kind() == ModelKind::KGraph
                                    ? bratteli_from_kgraph(model.graph(), chain)
                                    : bratteli_build(model, chain, bdepth, bound);
            cli.results["diagram"] = to_json(d);
            cli.results["dimensionGroup"] = to_json(dimension_group_report(d));
            if (!cli.diagram_path.empty()) {
                std::ofstream out(cli.diagram_path, std::ios::binary);
                out << diagram_to_dot(d);
                cli.results["diagramFile"] = cli.diagram_path;
            }
            cli.verdict("diagram-consistent", true);
        } else if (app.got_subcommand(c_simplicity)) {
            cli.command = "simplicity";
            cli.args["budget"] = budget;
            SimplicityBudget b;
            b.depth = {budget, budget};
            b.kmax = {budget, budget};
            if (model.kind() == ModelKind::FullShift) {
                b.depth = {1, 1};
                b.kmax = {1, 1};
            }
            b.bound = bound;
            SimplicityReport rep = simplicity_report(model, b);
            cli.results = to_json(rep);
            cli.verdict("simplicity-evidence", true);
        } else if (app.got_subcommand(c_growth)) {
            cli.command = "growth";
            cli.args["dir"] = direction;
            cli.args["levels"] = levels;
            cli.results = to_json(compactness_growth_diagnostic(model, pm.measure, direction,
                                                                levels, bound));
            cli.verdict("growth-computed", true);
        } else if (app.got_subcommand(c_report)) {
            cli.command = "report";
            cli.args["all"] = true;
            json sections;
            if (model.is_symbolic()) {
                sections["validate"] =
                    to_json(validate_sft(model.sft(), cmax(depth, model.sft().window_bbox()), bound));
            }
            Vec2 shape{2, 2};
            sections["patternCount"] =
                static_cast<long>(admissible_patterns(model, shape, bound).size());
            for (int dir = 1; dir <= 2; ++dir) {
                auto v = check_local_injectivity(model, dir, {{0, 0}}, depth, bound);
                sections["localhomeo"]["dir" + std::to_string(dir)] = to_json(model, v);
            }
            sections["prodsys"] = run_prodsys_check(pm, depth, bound);
            if (model.kind() != ModelKind::Circle) {
                sections["groupoid"] =
                    to_json(model, rn_algebra_description(model, {1, 0}, depth, bound));
            }
            std::vector<Vec2> chain{{0, 0}, {1, 1}, {2, 2}};
            Vec2 bdepth = cmax(depth, chain.back() + Vec2{1, 1});
            BratteliDiagram d = model.kind() == ModelKind::KGraph
                                    ? bratteli_from_kgraph(model.graph(), chain)
                                    : bratteli_build(model, chain, bdepth, bound);
            sections["k0"] = to_json(dimension_group_report(d));
            cli.results = sections;
            cli.verdict("report-complete", true);
        }

        return cli.emit(&pm);
    } catch (const Error& e) {
        cli.had_error = true;
        cli.results = {{"error", {{"code", e.code()}, {"message", e.what()}}}};
        json v;
        v["name"] = "error";
        v["status"] = "error";
        v["detail"] = e.what();
        cli.verdicts.push_back(v);
        return cli.emit(nullptr);
    } catch (const std::exception& e) {
        cli.had_error = true;
        cli.results = {{"error", {{"code", "internal"}, {"message", e.what()}}}};
        return cli.emit(nullptr);
    }
}
