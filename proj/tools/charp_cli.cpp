#include <fstream>
#include <iostream>
#include <random>

#include "CLI11.hpp"

#include "charp/registry.hpp"

using namespace charp;

namespace {

struct Options {
    int prime = 0;
    uint64_t seed = 42;
    std::string report = "text";
    std::string out;
    int degree_cap = 0;
};

void emit(const std::string& text, const Options& opt) {
    if (opt.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream f(opt.out);
    if (!f) throw Error(ErrKind::BadInput, "cannot write " + opt.out);
    f << text;
}

std::string render(const std::vector<ScenarioReport>& reports, const Options& opt) {
    if (opt.report == "json") {
        Json arr = Json::array();
        for (const auto& r : reports) arr.push_back(report_to_json(r));
        return arr.dump(2) + "\n";
    }
    std::string text;
    bool all = true;
    for (const auto& r : reports) {
        text += report_to_text(r) + "\n";
        all = all && r.ok;
    }
    text += std::string("suite: ") + (all ? "PASS" : "FAIL") + "\n";
    return text;
}

bool reports_ok(const std::vector<ScenarioReport>& reports) {
    for (const auto& r : reports)
        if (!r.ok) return false;
    return true;
}

// Random element of the commutant of the 3x3 shift matrix: a1 S + a2 S^2
// with small polynomial coefficients.  Everything here commutes and is
// nilpotent of order <= 2, so r = 2 works for every p >= 3.
MatE random_commuting_nilpotent(const RingPtr& ring, Modulus mod, std::mt19937_64& rng) {
    std::uniform_int_distribution<int64_t> coeff(0, mod.m() - 1);
    std::uniform_int_distribution<int> deg(0, 2);
    auto rand_elem = [&] {
        RingElem e = RingElem::zero(ring, mod);
        for (int d = 0; d <= deg(rng); ++d)
            e += RingElem::var(ring, mod, size_t(0)).pow(d).scale(coeff(rng));
        return e;
    };
    MatE a = MatE::zero(3, ring, mod);
    a.at(0, 1) = rand_elem();
    a.at(1, 2) = a.at(0, 1);
    a.at(0, 2) = rand_elem();
    return a;
}

ScenarioReport exp_algebra_suite(int p, uint64_t seed, int iterations) {
    ScenarioReport rep;
    rep.scenario = "exp-algebra p=" + std::to_string(p);
    std::mt19937_64 rng(seed + uint64_t(p));
    Modulus mod = Modulus::fp(p);
    RingPtr ring = RingDescriptor::make({{"x", false}}, {});
    MatE id = MatE::identity(3, ring, mod);
    CheckResult inv{"exp-inverse", true, ""}, add{"exp-additive", true, ""},
        gate{"assumption-gate", true, ""};
    for (int it = 0; it < iterations; ++it) {
        MatE a = random_commuting_nilpotent(ring, mod, rng);
        MatE b = random_commuting_nilpotent(ring, mod, rng);
        if (!(trunc_exp(a, 2) * trunc_exp(-a, 2) == id)) {
            inv.ok = false;
            inv.detail = "iteration " + std::to_string(it);
        }
        if (!(trunc_exp(a + b, 2) == trunc_exp(a, 2) * trunc_exp(b, 2))) {
            add.ok = false;
            add.detail = "iteration " + std::to_string(it);
        }
    }
    try {
        (void)trunc_exp(MatE::zero(3, ring, mod), p);
        gate.ok = false;
        gate.detail = "r = p accepted";
    } catch (const Error& e) {
        gate.ok = e.kind() == ErrKind::FactorialNotInvertible;
        if (!gate.ok) gate.detail = errkind_name(e.kind());
    }
    for (auto& c : {inv, add, gate}) {
        rep.ok = rep.ok && c.ok;
        rep.checks.push_back(c);
    }
    return rep;
}

ScenarioReport roundtrip_suite(int p, uint64_t seed, int iterations) {
    ScenarioReport rep;
    rep.scenario = "lemma22-roundtrip p=" + std::to_string(p);
    std::mt19937_64 rng(seed * 3 + uint64_t(p));
    Modulus mod = Modulus::fp(p);
    RingPtr ring = RingDescriptor::make({{"x", false}}, {});
    std::uniform_int_distribution<int64_t> coeff(0, p - 1);
    size_t maxrank = std::min<size_t>(4, size_t(p));
    std::uniform_int_distribution<size_t> rank_dist(2, maxrank);
    CheckResult res{"roundtrip", true, std::to_string(iterations) + " iterations"};
    for (int it = 0; it < iterations; ++it) {
        size_t rank = rank_dist(rng);
        HiggsLocal h = HiggsLocal::zero(ring, mod, rank);
        for (size_t i = 0; i < rank; ++i)
            for (size_t j = i + 1; j < rank; ++j)
                h.theta[0].at(i, j) =
                    RingElem::var(ring, mod, size_t(0)).pow(int(coeff(rng) % 3)).scale(coeff(rng));
        int r = int(rank) - 1;
        ArModule m = higgs_to_armodule(h, r);
        HiggsLocal back = armodule_to_higgs(m);
        if (!(back == h) || back.rank != h.rank) {
            res.ok = false;
            res.detail = "iteration " + std::to_string(it);
            break;
        }
    }
    rep.ok = res.ok;
    rep.checks.push_back(res);
    return rep;
}

std::vector<ScenarioReport> run_suite(const std::string& suite, const Options& opt) {
    std::vector<ScenarioReport> reports;
    std::vector<int> primes = opt.prime ? std::vector<int>{opt.prime}
                                        : std::vector<int>{3, 5, 7};
    if (suite == "exp-algebra") {
        for (int p : primes) reports.push_back(exp_algebra_suite(p, opt.seed, 100));
    } else if (suite == "lemma22-roundtrip") {
        for (int p : primes) reports.push_back(roundtrip_suite(p, opt.seed, 100));
    } else if (suite == "registry") {
        for (const auto& e : registry_list()) {
            Scenario s = make_scenario(e.name, opt.prime);
            ScenarioReport r = run_scenario(s, {}, opt.degree_cap);
            r.scenario = e.name + " p=" + std::to_string(s.prime);
            reports.push_back(std::move(r));
        }
    } else if (suite == "all") {
        for (int p : primes) {
            reports.push_back(exp_algebra_suite(p, opt.seed, 100));
            reports.push_back(roundtrip_suite(p, opt.seed, 100));
            for (const auto& e : registry_list()) {
                Scenario s = make_scenario(e.name, p);
                ScenarioReport r = run_scenario(s, {}, opt.degree_cap);
                r.scenario = e.name + " p=" + std::to_string(p);
                reports.push_back(std::move(r));
            }
        }
    } else {
        throw Error(ErrKind::BadInput, "unknown suite \"" + suite + "\"");
    }
    return reports;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact verifier for twisted pullbacks and the local inverse "
                 "Cartier transform in characteristic p"};
    app.require_subcommand(1);
    Options opt;

    auto add_common = [&](CLI::App* cmd) {
        cmd->add_option("--prime", opt.prime, "override the prime");
        cmd->add_option("--seed", opt.seed, "seed for randomized suites");
        cmd->add_option("--report", opt.report, "report format: text|json")
            ->check(CLI::IsMember({"text", "json"}));
        cmd->add_option("--out", opt.out, "write the report to a file");
        cmd->add_option("--degree-cap", opt.degree_cap,
                        "degree cap for the Prop 2.8 isomorphism search");
    };

    std::string suite, scenario_path;
    std::vector<std::string> only_checks;
    CLI::App* verify = app.add_subcommand("verify", "run a verification suite");
    verify->add_option("--suite", suite, "suite name or \"all\"")->required();
    add_common(verify);

    CLI::App* run = app.add_subcommand("run", "run one scenario file");
    run->add_option("scenario", scenario_path, "scenario JSON file")->required();
    run->add_option("--check", only_checks, "restrict to the named checks");
    add_common(run);

    CLI::App* examples = app.add_subcommand("examples", "registry inspection");
    std::string action = "list";
    examples->add_option("action", action, "list");

    CLI11_PARSE(app, argc, argv);

    try {
        if (examples->parsed()) {
            if (action != "list") {
                std::cerr << "unknown examples action \"" << action << "\"\n";
                return 2;
            }
            for (const auto& e : registry_list()) {
                std::cout << e.name << "\n  " << e.description << "\n  statements:";
                for (const auto& s : e.statements) std::cout << " [" << s << "]";
                std::cout << "\n";
            }
            return 0;
        }
        if (verify->parsed()) {
            std::vector<ScenarioReport> reports = run_suite(suite, opt);
            emit(render(reports, opt), opt);
            return reports_ok(reports) ? 0 : 1;
        }
        // run
        Json j;
        {
            std::ifstream in(scenario_path);
            if (!in) throw Error(ErrKind::BadInput, "cannot open " + scenario_path);
            try {
                in >> j;
            } catch (const std::exception& e) {
                throw Error(ErrKind::BadInput,
                            "JSON parse error in " + scenario_path + ": " + e.what());
            }
        }
        if (opt.prime) j["prime"] = opt.prime;
        Scenario s = scenario_from_json(j);
        ScenarioReport rep = run_scenario(s, only_checks, opt.degree_cap);
        emit(render({rep}, opt), opt);
        return rep.ok ? 0 : 1;
    } catch (const Error& e) {
        std::cerr << errkind_name(e.kind()) << ": " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    }
}
