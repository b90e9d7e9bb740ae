// Copyright 2026 The eml Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "eml/builders.hpp"
#include "eml/circuit.hpp"
#include "eml/dem.hpp"
#include "eml/faults.hpp"
#include "eml/matching.hpp"
#include "eml/noise.hpp"
#include "eml/runner.hpp"
#include "eml/sampler.hpp"

#ifdef _OPENMP
#include <omp.h>
#endif

using json = nlohmann::json;

namespace {

struct CliError : std::runtime_error {
    CliError(std::string f, const std::string& message)
        : std::runtime_error(message), field(std::move(f)) {}
    std::string field;
};

void reject_unknown_keys(const json& obj, std::initializer_list<const char*> allowed,
                         const std::string& where) {
    for (auto it = obj.begin(); it != obj.end(); ++it) {
        bool known = false;
        for (const char* key : allowed)
            known = known || it.key() == key;
        if (!known)
            throw CliError(where + "." + it.key(), "unknown config key");
    }
}

eml::NoiseParams parse_noise(const json& cfg) {
    if (!cfg.contains("noise"))
        return {};
    const json& n = cfg.at("noise");
    if (n.contains("scenario")) {
        reject_unknown_keys(n, {"scenario"}, "noise");
        try {
            return eml::NoiseParams::scenario(n.at("scenario").get<std::string>());
        } catch (const std::invalid_argument& ex) {
            throw CliError("noise.scenario", ex.what());
        }
    }
    reject_unknown_keys(n,
                        {"p1", "p2", "p_spam", "e1", "e2", "e_spam", "e_fp", "e_fn", "pn1",
                         "pn2", "pn_spam", "uniform_p", "uniform_e"},
                        "noise");
    if (n.contains("uniform_p") || n.contains("uniform_e"))
        return eml::NoiseParams::uniform(n.value("uniform_p", 0.0), n.value("uniform_e", 0.0));
    eml::NoiseParams p;
    p.p1 = n.value("p1", 0.0);
    p.p2 = n.value("p2", 0.0);
    p.p_spam = n.value("p_spam", 0.0);
    p.e1 = n.value("e1", 0.0);
    p.e2 = n.value("e2", 0.0);
    p.e_spam = n.value("e_spam", 0.0);
    p.e_fp = n.value("e_fp", 0.0);
    p.e_fn = n.value("e_fn", 0.0);
    p.pn1 = n.value("pn1", 0.0);
    p.pn2 = n.value("pn2", 0.0);
    p.pn_spam = n.value("pn_spam", 0.0);
    return p;
}

eml::Circuit build_from_config(const json& cfg) {
    if (!cfg.contains("protocol"))
        throw CliError("protocol", "missing protocol section");
    const json& p = cfg.at("protocol");
    reject_unknown_keys(p, {"kind", "d1", "r", "d2", "rounds", "memory_rounds", "expand"},
                        "protocol");
    std::string kind = p.value("kind", "hook");
    eml::Circuit c;
    if (kind == "hook") {
        c = eml::build_hook_injection(
            {p.value("d1", 3u), p.value("r", 2u)});
    } else if (kind == "lao_criger") {
        c = eml::build_lao_criger_injection({p.value("d1", 3u), p.value("r", 2u)});
    } else if (kind == "memory") {
        c = eml::build_memory({p.value("d1", 3u), p.value("rounds", 3u)});
    } else if (kind == "color") {
        c = eml::build_color_unitary_injection();
    } else {
        throw CliError("protocol.kind", "unknown protocol kind '" + kind + "'");
    }
    if (p.contains("expand")) {
        const json& ex = p.at("expand");
        reject_unknown_keys(ex, {"d2", "memory_rounds"}, "protocol.expand");
        c = eml::build_expansion({ex.value("d2", 7u), ex.value("memory_rounds", 7u)}, c);
    }
    return c;
}

eml::ErasurePlan parse_plan(const json& cfg, const eml::Circuit& circuit) {
    if (!cfg.contains("erasure"))
        return eml::ErasurePlan::none();
    const json& e = cfg.at("erasure");
    reject_unknown_keys(e, {"qubits", "cadence", "discard_threshold"}, "erasure");
    eml::ErasurePlan plan;
    const json& q = e.at("qubits");
    if (q.is_string()) {
        std::string name = q.get<std::string>();
        if (name == "all")
            plan = eml::ErasurePlan::all_qubits(circuit);
        else if (name == "none")
            plan = eml::ErasurePlan::none();
        else if (name == "hybrid")
            for (uint32_t qi : eml::hybrid_erasure_set(circuit))
                plan.erasure_qubits.insert(qi);
        else
            throw CliError("erasure.qubits", "unknown qubit set '" + name + "'");
    } else {
        for (const json& qi : q)
            plan.erasure_qubits.insert(qi.get<uint32_t>());
    }
    std::string cadence = e.value("cadence", "per_round");
    if (cadence == "per_round")
        plan.cadence = eml::DetectionCadence::per_round;
    else if (cadence == "end_only")
        plan.cadence = eml::DetectionCadence::end_only;
    else if (cadence == "per_gate")
        plan.cadence = eml::DetectionCadence::per_gate;
    else
        throw CliError("erasure.cadence", "unknown cadence '" + cadence + "'");
    plan.discard_threshold = e.value("discard_threshold", 1);
    return plan;
}

eml::PostSelectionPolicy parse_policy(const json& cfg) {
    eml::PostSelectionPolicy policy;
    if (!cfg.contains("policy"))
        return policy;
    const json& p = cfg.at("policy");
    reject_unknown_keys(p, {"pauli_rule", "discard_threshold"}, "policy");
    policy.pauli_rule = p.value("pauli_rule", true);
    policy.discard_threshold = p.value("discard_threshold", 1);
    return policy;
}

eml::Circuit load_or_build(const json& cfg) {
    if (cfg.contains("circuit")) {
        std::ifstream in(cfg.at("circuit").get<std::string>());
        if (!in)
            throw CliError("circuit", "cannot open circuit file");
        std::stringstream ss;
        ss << in.rdbuf();
        return eml::parse(ss.str());
    }
    return build_from_config(cfg);
}

eml::Circuit annotated_from_config(const json& cfg) {
    eml::Circuit clean = load_or_build(cfg);
    if (clean.meta_int("annotated", 0))
        return clean;
    return eml::annotate(clean, parse_noise(cfg), parse_plan(cfg, clean));
}

void emit(const std::string& text, const std::string& out) {
    if (out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream file(out);
    if (!file)
        throw CliError("out", "cannot open output file " + out);
    file << text;
}

struct CommonArgs {
    std::string config_path;
    std::string out;
    std::optional<uint64_t> seed;
    std::optional<uint64_t> shots;
    bool no_header_timestamp = false;
    int threads = 0;
};

json load_config(const CommonArgs& args) {
    if (args.config_path.empty())
        return json::object();
    std::ifstream in(args.config_path);
    if (!in)
        throw CliError("config", "cannot open config file " + args.config_path);
    return json::parse(in);
}

void apply_threads(const CommonArgs& args) {
    int threads = args.threads;
    if (threads == 0)
        if (const char* env = std::getenv("EML_THREADS"))
            threads = std::atoi(env);
#ifdef _OPENMP
    if (threads > 0)
        omp_set_num_threads(threads);
#else
    (void)threads;
#endif
}

uint64_t pick_seed(const CommonArgs& args, const json& cfg) {
    if (args.seed)
        return *args.seed;
    return cfg.value("seed", uint64_t(1));
}

uint64_t pick_shots(const CommonArgs& args, const json& cfg) {
    if (args.shots)
        return *args.shots;
    return cfg.value("shots", uint64_t(10000));
}

std::string pick_out(const CommonArgs& args, const json& cfg) {
    if (!args.out.empty())
        return args.out;
    return cfg.value("out", std::string());
}

int cmd_build(const CommonArgs& args) {
    json cfg = load_config(args);
    emit(eml::serialize(build_from_config(cfg)), pick_out(args, cfg));
    return 0;
}

int cmd_annotate(const CommonArgs& args) {
    json cfg = load_config(args);
    eml::Circuit clean = load_or_build(cfg);
    emit(eml::serialize(eml::annotate(clean, parse_noise(cfg), parse_plan(cfg, clean))),
         pick_out(args, cfg));
    return 0;
}

int cmd_sample(const CommonArgs& args) {
    json cfg = load_config(args);
    eml::Circuit noisy = annotated_from_config(cfg);
    bool per_gate = cfg.contains("erasure") &&
                    cfg.at("erasure").value("cadence", "per_round") == std::string("per_gate");
    uint64_t shots = pick_shots(args, cfg);
    uint64_t seed = pick_seed(args, cfg);
    std::ostringstream ss;
    ss << "shot,detectors,observable_flip,erasure_flags\n";
    eml::FrameSampler sampler(noisy, per_gate);
    eml::ShotRecord rec;
    for (uint64_t s = 0; s < shots; ++s) {
        sampler.sample_shot(seed, s, rec);
        ss << s << ",";
        for (uint8_t d : rec.detectors)
            ss << int(d);
        ss << "," << int(rec.observable_flip) << ",";
        for (uint8_t f : rec.erasure_flags)
            ss << int(f);
        ss << "\n";
    }
    emit(ss.str(), pick_out(args, cfg));
    return 0;
}

int cmd_decode(const CommonArgs& args) {
    json cfg = load_config(args);
    eml::Circuit noisy = annotated_from_config(cfg);
    eml::DetectorErrorModel dem = eml::build_dem(noisy);
    eml::Matcher matcher(dem);
    uint64_t shots = pick_shots(args, cfg);
    uint64_t seed = pick_seed(args, cfg);
    std::ostringstream ss;
    ss << "shot,predicted,actual,weight\n";
    ss.precision(10);
    eml::FrameSampler sampler(noisy);
    eml::ShotRecord rec;
    for (uint64_t s = 0; s < shots; ++s) {
        sampler.sample_shot(seed, s, rec);
        eml::MatchResult res = matcher.decode(rec.detectors);
        int predicted = 0;
        for (uint32_t o : res.observables)
            predicted ^= o == 0;
        ss << s << "," << predicted << "," << int(rec.observable_flip) << "," << res.weight
           << "\n";
    }
    emit(ss.str(), pick_out(args, cfg));
    return 0;
}

int cmd_run(const CommonArgs& args) {
    json cfg = load_config(args);
    eml::Circuit clean = load_or_build(cfg);
    std::string tag = "custom";
    if (cfg.contains("noise") && cfg.at("noise").contains("scenario"))
        tag = cfg.at("noise").at("scenario").get<std::string>();
    eml::RunResult res =
        eml::run_protocol(clean, parse_noise(cfg), parse_plan(cfg, clean),
                          parse_policy(cfg), pick_shots(args, cfg), pick_seed(args, cfg), tag);
    emit(eml::results_csv({res}, !args.no_header_timestamp), pick_out(args, cfg));
    return 0;
}

int cmd_sweep(const CommonArgs& args) {
    json cfg = load_config(args);
    if (!cfg.contains("sweep"))
        throw CliError("sweep", "missing sweep section (list of [d1, r])");
    std::vector<eml::SweepConfig> configs;
    for (const json& item : cfg.at("sweep"))
        configs.push_back({item.at(0).get<int64_t>(), item.at(1).get<int64_t>()});
    std::string tag = "custom";
    if (cfg.contains("noise") && cfg.at("noise").contains("scenario"))
        tag = cfg.at("noise").at("scenario").get<std::string>();
    // The plan's qubit set is resolved per config from each built circuit.
    std::vector<eml::SweepRow> rows;
    {
        eml::NoiseParams params = parse_noise(cfg);
        eml::PostSelectionPolicy policy = parse_policy(cfg);
        uint64_t shots = pick_shots(args, cfg);
        uint64_t seed = pick_seed(args, cfg);
        for (const eml::SweepConfig& sc : configs) {
            eml::SweepRow row;
            row.d1 = sc.d1;
            row.r = sc.r;
            try {
                eml::Circuit clean =
                    eml::build_hook_injection({uint32_t(sc.d1), uint32_t(sc.r)});
                row.result = eml::run_protocol(clean, params, parse_plan(cfg, clean),
                                               policy, shots, seed, tag);
            } catch (const std::exception& ex) {
                row.error = ex.what();
            }
            rows.push_back(std::move(row));
        }
    }
    // Dominance over the successful rows.
    for (eml::SweepRow& row : rows) {
        if (row.error || !row.result.volume_defined)
            continue;
        bool dominated = false;
        for (const eml::SweepRow& other : rows) {
            if (&other == &row || other.error || !other.result.volume_defined)
                continue;
            bool le_v = other.result.volume <= row.result.volume;
            bool le_p = other.result.logical.rate <= row.result.logical.rate;
            bool strict = other.result.volume < row.result.volume ||
                          other.result.logical.rate < row.result.logical.rate;
            if (le_v && le_p && strict) {
                dominated = true;
                break;
            }
        }
        row.dominant = !dominated;
    }
    std::ostringstream ss;
    bool first = true;
    for (const eml::SweepRow& row : rows) {
        if (row.error) {
            ss << "# d1=" << row.d1 << " r=" << row.r << " error: " << *row.error << "\n";
            continue;
        }
        std::string csv = eml::results_csv({row.result}, first && !args.no_header_timestamp);
        if (!first) {
            // Drop the repeated column header.
            csv = csv.substr(csv.find('\n') + 1);
        } else {
            size_t head = csv.rfind("scenario,");
            csv.insert(csv.find('\n', head), ",dominant");
            first = false;
        }
        csv.insert(csv.rfind('\n'), std::string(",") + (row.dominant ? "1" : "0"));
        ss << csv;
    }
    emit(ss.str(), pick_out(args, cfg));
    return 0;
}

int cmd_enumerate(const CommonArgs& args) {
    json cfg = load_config(args);
    eml::Circuit noisy = annotated_from_config(cfg);
    eml::FaultEnumeration e = eml::enumerate_faults(noisy);
    eml::FaultCoefficients co = eml::coefficients(e);
    eml::FaultReport report = eml::detection_histogram(e, noisy);
    json out;
    out["num_faults"] = e.faults.size();
    out["coefficients"] = {{"n_a", co.n_a},
                           {"n_b", co.n_b},
                           {"n_c", co.n_c},
                           {"a", co.a},
                           {"b", co.b},
                           {"c", co.c},
                           {"effective_factor", co.effective_factor},
                           {"n_a_terms", co.n_a_terms},
                           {"n_b_terms", co.n_b_terms},
                           {"n_c_terms", co.n_c_terms},
                           {"term_factor", co.term_factor}};
    const char* source_names[] = {"p1", "p2", "spam"};
    for (int s = 0; s < 3; ++s) {
        out["channel"][source_names[s]] = co.channel[s];
        out["term_channel"][source_names[s]] = co.term_channel[s];
    }
    out["ar_p"] = report.ar_p;
    out["histogram_1q"] = report.histogram_1q;
    out["histogram_2q"] = report.histogram_2q;
    out["histogram_spam"] = report.histogram_spam;
    const char* class_names[] = {"detected", "undetected_logical", "harmless"};
    const char* logical_names[] = {"I", "X", "Y", "Z"};
    json rows = json::array();
    for (const eml::Fault& f : e.faults) {
        rows.push_back({{"instruction", f.instruction},
                        {"term", f.term},
                        {"probability", f.probability},
                        {"class", class_names[int(f.cls)]},
                        {"logical", logical_names[f.logical]}});
    }
    out["faults"] = std::move(rows);
    emit(out.dump(2) + "\n", pick_out(args, cfg));
    return 0;
}

int cmd_fit(const CommonArgs& args) {
    json cfg = load_config(args);
    if (!cfg.contains("fit"))
        throw CliError("fit", "missing fit section");
    const json& f = cfg.at("fit");
    reject_unknown_keys(f, {"form", "points"}, "fit");
    std::string form_name = f.value("form", "erasure");
    eml::AnsatzForm form;
    if (form_name == "erasure")
        form = eml::AnsatzForm::erasure;
    else if (form_name == "non_erasure")
        form = eml::AnsatzForm::non_erasure;
    else
        throw CliError("fit.form", "unknown ansatz form '" + form_name + "'");
    std::vector<eml::FitPoint> points;
    for (const json& row : f.at("points")) {
        eml::FitPoint pt;
        pt.x = row.at(0).get<double>();
        pt.d = row.at(1).get<double>();
        pt.p_l = row.at(2).get<double>();
        pt.weight = row.size() > 3 ? row.at(3).get<double>() : 1.0;
        points.push_back(pt);
    }
    eml::FitResult fit = eml::fit_ansatz(points, form);
    json out = {{"c", fit.c},
                {"x_th", fit.x_th},
                {"alpha", fit.alpha},
                {"form", form_name},
                {"residual", fit.residual}};
    emit(out.dump(2) + "\n", pick_out(args, cfg));
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"erasure magic-state injection laboratory"};
    app.require_subcommand(1);
    CommonArgs args;
    app.add_option("--config", args.config_path, "JSON experiment config");
    app.add_option("--seed", args.seed, "RNG seed (overrides config)");
    app.add_option("--shots", args.shots, "shot count (overrides config)");
    app.add_option("--out", args.out, "output path (default stdout)");
    app.add_flag("--no-header-timestamp", args.no_header_timestamp,
                 "suppress the timestamp comment in CSV output");
    app.add_option("--threads", args.threads, "worker threads (or EML_THREADS)");

    int (*handler)(const CommonArgs&) = nullptr;
    using Handler = int (*)(const CommonArgs&);
    const std::pair<const char*, Handler> commands[] = {
        {"build", cmd_build},   {"annotate", cmd_annotate}, {"sample", cmd_sample},
        {"decode", cmd_decode}, {"run", cmd_run},           {"sweep", cmd_sweep},
        {"enumerate", cmd_enumerate}, {"fit", cmd_fit}};
    for (auto [name, fn] : commands) {
        CLI::App* sub = app.add_subcommand(name);
        // Let "eml_cli run --config x.json" resolve the global options too.
        sub->fallthrough();
        sub->callback([&handler, fn = fn]() { handler = fn; });
    }

    CLI11_PARSE(app, argc, argv);
    apply_threads(args);
    try {
        return handler(args);
    } catch (const CliError& ex) {
        json err = {{"error", ex.what()}, {"field", ex.field}};
        std::cerr << err.dump() << "\n";
        return 2;
    } catch (const std::exception& ex) {
        json err = {{"error", ex.what()}};
        std::cerr << err.dump() << "\n";
        return 1;
    }
}
