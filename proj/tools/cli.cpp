#include "cli.hpp"

#include <charconv>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include "CLI11.hpp"
#include "pingpong_lab/convexrep.hpp"
#include "pingpong_lab/estimates.hpp"
#include "pingpong_lab/pingpong.hpp"

namespace pplab::cli {

namespace {

namespace fs = std::filesystem;

struct Options {
    std::string config, out;
    std::uint64_t seed = 0;
    int trials = 1000;
    int max_syllables = 0, max_syllable_len = 0;
    double tol = kDefaultTol;
    int budget = 0;
    int d = 2;
    double eta = 0.25, eps = 0.5;
};

std::string num(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
}

nlohmann::json read_json(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw Error(ErrorCode::Input, "cannot open " + path);
    try {
        return nlohmann::json::parse(f);
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::Input, "malformed JSON in " + path + ": " + e.what());
    }
}

void write_atomic(const fs::path& path, const std::string& text) {
    if (path.has_parent_path()) fs::create_directories(path.parent_path());
    fs::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f) throw Error(ErrorCode::Input, "cannot write " + tmp.string());
        f << text;
        if (!f) throw Error(ErrorCode::Input, "write failed for " + tmp.string());
    }
    fs::rename(tmp, path);
}

fs::path sibling(const fs::path& out, const std::string& ext) {
    fs::path p = out;
    p.replace_extension(ext);
    return p;
}

nlohmann::json header(const std::string& task, const Options& o) {
    return {{"task", task}, {"seed", o.seed}};
}

struct Outcome {
    nlohmann::json summary;
    std::string csv, plot;
    bool pass = false;
};

Outcome do_certify(const Options& o) {
    PingPongConfig cfg = PingPongConfig::from_json(read_json(o.config));
    CertifyReport rep = certify_report(cfg);
    Outcome out;
    out.summary = header("certify", o);
    out.summary["report"] = rep.to_json();
    out.pass = rep.ok;
    return out;
}

Outcome do_estimate(const Options& o) {
    PingPongConfig cfg = PingPongConfig::from_json(read_json(o.config));
    std::vector<WordSample> words = sample_words(cfg.gamma1, cfg.gamma2, o.max_syllables, o.max_syllable_len);
    std::vector<EstimateReport> reps;
    reps.push_back(verify_t12_i(cfg, words));
    reps.push_back(verify_t12_ii(words));
    reps.push_back(verify_t12_iii(words));
    reps.push_back(verify_t12_iv(words, reps[1].fitted.at("C2")));
    Outcome out;
    out.summary = header("estimate", o);
    out.summary["max_syllables"] = o.max_syllables;
    out.summary["max_syllable_len"] = o.max_syllable_len;
    out.summary["words"] = words.size();
    out.summary["reports"] = nlohmann::json::array();
    out.pass = true;
    for (const auto& r : reps) {
        out.summary["reports"].push_back(r.summary_json());
        out.pass = out.pass && r.all_pass;
    }
    out.csv = reports_csv(reps);
    out.plot = plot_data(words);
    return out;
}

Outcome do_qi(const Options& o) {
    PingPongConfig cfg = PingPongConfig::from_json(read_json(o.config));
    std::vector<WordSample> words = sample_words(cfg.gamma1, cfg.gamma2, o.max_syllables, o.max_syllable_len);
    EstimateReport r = verify_qi(cfg, words);
    Outcome out;
    out.summary = header("qi", o);
    out.summary["max_syllables"] = o.max_syllables;
    out.summary["max_syllable_len"] = o.max_syllable_len;
    out.summary["report"] = r.summary_json();
    out.csv = reports_csv({r});
    out.plot = plot_data(words);
    out.pass = r.all_pass;
    return out;
}

Outcome do_lemmas(const Options& o) {
    std::vector<LemmaResult> res = lemma_suite(o.seed, o.trials, o.tol);
    Outcome out;
    out.summary = header("lemmas", o);
    out.summary["trials"] = o.trials;
    out.summary["tol"] = o.tol;
    out.summary["lemmas"] = nlohmann::json::array();
    out.csv = "lemma,trials,passed,violations,skipped,worst_slack\n";
    out.pass = true;
    for (const auto& r : res) {
        out.summary["lemmas"].push_back(r.to_json());
        out.csv += r.lemma + ',' + std::to_string(r.trials) + ',' + std::to_string(r.passed) + ',' +
                   std::to_string(r.violations) + ',' + std::to_string(r.skipped) + ',' + num(r.worst_slack) + '\n';
        out.pass = out.pass && r.violations == 0;
    }
    return out;
}

Outcome do_freeprod(const Options& o) {
    PingPongConfig cfg = PingPongConfig::from_json(read_json(o.config));
    if (cfg.dim() != o.d) throw Error(ErrorCode::Dimension, "config acts on R^" + std::to_string(cfg.dim()) + ", not R^" + std::to_string(o.d));
    RepPair pair = build_rep_pair(o.d, o.eta, o.budget);
    EstimateReport r = verify_t15(pair, cfg.gamma1, cfg.gamma2, o.max_syllables, o.eps, o.max_syllable_len);
    Outcome out;
    out.summary = header("freeprod", o);
    out.summary["max_syllables"] = o.max_syllables;
    out.summary["rep_pair"] = pair.to_json();
    out.summary["report"] = r.summary_json();
    out.csv = reports_csv({r});
    out.pass = r.all_pass;
    return out;
}

Outcome do_anosov(const Options& o) {
    nlohmann::json j = read_json(o.config);
    if (!j.contains("gamma")) throw Error(ErrorCode::Input, "anosov config needs 'gamma'");
    SemigroupGens g = SemigroupGens::from_json(j.at("gamma"), 1);
    int depth = j.value("depth", 3);
    double mu = j.value("mu", 2.0);
    AnosovResult res = anosov_semigroup_search(g, depth, o.budget, mu);
    Outcome out;
    out.summary = header("anosov-search", o);
    out.summary["result"] = res.to_json();
    out.pass = true;
    return out;
}

int exit_code(ErrorCode c) { return c == ErrorCode::Input || c == ErrorCode::Dimension ? 1 : 2; }

}  // namespace

int run(const std::vector<std::string>& args) {
    CLI::App app{"ping-pong and singular value gap experiments"};
    app.require_subcommand(1);
    Options o;
    struct Defaults {
        int syl, len, budget;
    };
    // Options are shared across subcommands, so per-subcommand defaults are
    // applied after parsing rather than through default_val.
    std::map<std::string, Defaults> defaults;
    auto add = [&](const std::string& name, const std::string& help, bool config, Defaults def) {
        CLI::App* s = app.add_subcommand(name, help);
        defaults[name] = def;
        if (config) s->add_option("--config", o.config, "input JSON")->required();
        s->add_option("--out", o.out, "summary JSON path (CSV and plot data go next to it)");
        s->add_option("--seed", o.seed, "seed, recorded in every output");
        s->add_option("--tol", o.tol, "relative tolerance");
        if (def.syl > 0) {
            s->add_option("--max-syllables", o.max_syllables, "default " + std::to_string(def.syl))
                ->check(CLI::PositiveNumber);
            s->add_option("--max-syllable-len", o.max_syllable_len, "default " + std::to_string(def.len))
                ->check(CLI::PositiveNumber);
        }
        if (def.budget > 0)
            s->add_option("--budget", o.budget, "default " + std::to_string(def.budget))->check(CLI::PositiveNumber);
        return s;
    };
    add("certify", "certify ping-pong position of a config", true, {0, 0, 0});
    add("estimate", "singular value gap estimates over enumerated reduced words", true, {6, 2, 0});
    add("qi", "quasi-isometry constants of the free product", true, {6, 2, 0});
    CLI::App* lem = add("lemmas", "randomized lemma suite", false, {0, 0, 0});
    lem->add_option("--trials", o.trials, "default 1000")->check(CLI::PositiveNumber);
    CLI::App* fp = add("freeprod", "gap bound for a representation of SL_d * SL_d", true, {4, 1, 40});
    fp->add_option("--d", o.d, "default 2");
    fp->add_option("--eta", o.eta, "default 0.25");
    fp->add_option("--eps", o.eps, "default 0.5");
    add("anosov-search", "proximal element in ping-pong with a group", true, {0, 0, 64});

    std::vector<std::string> rev(args.rbegin(), args.rend());
    try {
        app.parse(rev);
    } catch (const CLI::ParseError& e) {
        int rc = app.exit(e);
        return rc == 0 ? 0 : 1;
    }
    const std::string task = app.get_subcommands().front()->get_name();
    if (o.out.empty()) o.out = task + ".json";
    const Defaults& def = defaults.at(task);
    if (o.max_syllables == 0) o.max_syllables = def.syl;
    if (o.max_syllable_len == 0) o.max_syllable_len = def.len;
    if (o.budget == 0) o.budget = def.budget;

    Outcome res;
    try {
        if (task == "certify") res = do_certify(o);
        else if (task == "estimate") res = do_estimate(o);
        else if (task == "qi") res = do_qi(o);
        else if (task == "lemmas") res = do_lemmas(o);
        else if (task == "freeprod") res = do_freeprod(o);
        else res = do_anosov(o);
    } catch (const Error& e) {
        std::cerr << e.what() << '\n';
        int rc = exit_code(e.code());
        if (rc == 2) {
            nlohmann::json j = header(task, o);
            j["error"] = {{"code", error_code_name(e.code())}, {"message", e.what()}};
            try {
                write_atomic(o.out, j.dump(2) + '\n');
            } catch (const std::exception&) {
            }
        }
        return rc;
    } catch (const std::exception& e) {
        std::cerr << "E_INPUT: " << e.what() << '\n';
        return 1;
    }
    res.summary["pass"] = res.pass;
    try {
        write_atomic(o.out, res.summary.dump(2) + '\n');
        if (!res.csv.empty()) write_atomic(sibling(o.out, ".csv"), res.csv);
        if (!res.plot.empty()) write_atomic(sibling(o.out, ".plot.dat"), res.plot);
    } catch (const std::exception& e) {
        std::cerr << "E_INPUT: " << e.what() << '\n';
        return 1;
    }
    std::cout << task << ": " << (res.pass ? "pass" : "FAIL") << " -> " << o.out << '\n';
    return res.pass ? 0 : 2;
}

}  // namespace pplab::cli
