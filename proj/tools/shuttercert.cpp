// Command-line frontend: simulate shutter-protocol rounds, certify their
// min-entropy under a chosen trust level, extract near-uniform bits, and
// cross-check the closed-form bounds against the LP oracle.

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "shuttercert/certify.hpp"
#include "shuttercert/extractor.hpp"
#include "shuttercert/io.hpp"
#include "shuttercert/oracle_check.hpp"
#include "shuttercert/pipeline.hpp"
#include "shuttercert/protocol.hpp"
#include "shuttercert/rng.hpp"

namespace sc = shuttercert;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitIo = 3;
constexpr int kExitInfeasible = 4;
constexpr int kExitInsufficientEntropy = 5;
constexpr int kExitOracleBreach = 6;

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ModelFlags {
    std::string model;
    std::optional<double> p;
    std::optional<double> mu;
    std::optional<double> pi;
    std::string gamma_file;
    double tail_epsilon = 1e-12;
};

void add_model_flags(CLI::App* cmd, ModelFlags& f, bool assumption_names) {
    const std::vector<std::string> names =
        assumption_names ? std::vector<std::string>{"simple", "known", "mean"}
                         : std::vector<std::string>{"simple", "mixed", "mean"};
    cmd->add_option(assumption_names ? "--assumption" : "--model", f.model)
        ->required()
        ->check(CLI::IsMember(names));
    cmd->add_option("--p", f.p, "signal probability (simple source)");
    cmd->add_option("--mu", f.mu, "mean photon number");
    cmd->add_option("--pi", f.pi, "beam-splitter reflection probability");
    cmd->add_option("--gamma-file", f.gamma_file, "mixture file: one 'gamma p' pair per line");
    cmd->add_option("--tail-epsilon", f.tail_epsilon,
                    "Poisson truncation tail mass (folded into a p=1 component)");
}

sc::SourceModel build_model(const ModelFlags& f) {
    if (f.model == "simple") {
        if (!f.p) throw UsageError("--model simple requires --p");
        return sc::SimpleSource(*f.p);
    }
    if (f.model == "mixed" || f.model == "known") {
        if (!f.gamma_file.empty()) return sc::read_gamma_file(f.gamma_file);
        if (f.mu && f.pi) return sc::poisson_mixture(*f.mu, *f.pi, f.tail_epsilon);
        throw UsageError("mixed/known model requires --gamma-file or --mu with --pi");
    }
    if (f.model == "mean") {
        if (!f.mu || !f.pi) throw UsageError("--model mean requires --mu and --pi");
        return sc::MeanConstrainedSource(*f.mu, *f.pi);
    }
    throw UsageError("unknown model: " + f.model);
}

sc::Assumption assumption_from(const std::string& name) {
    if (name == "simple") return sc::Assumption::Simple;
    if (name == "known") return sc::Assumption::KnownDistribution;
    if (name == "mean") return sc::Assumption::MeanConstraint;
    throw UsageError("unknown assumption: " + name);
}

sc::StrategyMix parse_lambda(const std::string& text) {
    std::istringstream ss(text);
    double v[4];
    char comma;
    if (!(ss >> v[0] >> comma >> v[1] >> comma >> v[2] >> comma >> v[3])) {
        throw UsageError("--lambda expects 'never,always,honest,dishonest'");
    }
    try {
        return sc::StrategyMix(v[0], v[1], v[2], v[3]);
    } catch (const std::invalid_argument& e) {
        throw UsageError(std::string("bad --lambda: ") + e.what());
    }
}

struct ClickSummary {
    std::size_t test_open = 0, test_closed = 0, gen = 0;
    std::size_t clicks_open = 0, clicks_closed = 0, clicks_gen = 0;
};

ClickSummary summarize(const std::vector<sc::RoundRecord>& records) {
    ClickSummary s;
    for (const auto& r : records) {
        if (r.type == sc::RoundType::Test) {
            if (r.x == 0) {
                ++s.test_open;
                s.clicks_open += r.y;
            } else {
                ++s.test_closed;
                s.clicks_closed += r.y;
            }
        } else {
            ++s.gen;
            s.clicks_gen += r.y;
        }
    }
    return s;
}

int cmd_simulate(const ModelFlags& model_flags, std::size_t batches, std::size_t rounds,
                 double test_rate, double shutter_split, std::uint64_t seed,
                 const std::string& device_kind, const std::vector<std::string>& lambda_flags,
                 double eta, double dark, double extinction, const std::string& out_path) {
    const sc::SourceModel model = build_model(model_flags);

    std::vector<sc::RoundRecord> all;
    all.reserve(batches * rounds);
    double guess_rate_sum = 0.0;

    for (std::size_t b = 0; b < batches; ++b) {
        sc::ProtocolConfig config;
        config.batch_size = rounds;
        config.test_rate = test_rate;
        config.shutter_split = shutter_split;
        config.rng_seed = sc::derive_seed(seed, b);

        if (device_kind == "honest") {
            sc::HonestDevice device{model, eta, dark, extinction};
            auto records = sc::run_protocol(config, device);
            all.insert(all.end(), records.begin(), records.end());
        } else {
            sc::MixedSource mix = std::holds_alternative<sc::SimpleSource>(model)
                                      ? sc::MixedSource({{1.0, std::get<sc::SimpleSource>(model).p}})
                                      : std::get<sc::MixedSource>(model);
            if (lambda_flags.empty()) throw UsageError("--device adversarial requires --lambda");
            std::vector<sc::StrategyMix> lambdas;
            for (const auto& text : lambda_flags) lambdas.push_back(parse_lambda(text));
            if (lambdas.size() == 1 && mix.size() > 1) {
                lambdas.assign(mix.size(), lambdas.front());
            }
            sc::AdversarialDevice device(std::move(mix), std::move(lambdas),
                                         sc::derive_seed(seed ^ 0xadu, b));
            auto run = sc::run_protocol(config, device);
            guess_rate_sum += sc::adversary_guess_rate(device, run);
            all.insert(all.end(), run.records.begin(), run.records.end());
        }
    }

    sc::write_rounds(out_path, {test_rate, all});

    const ClickSummary s = summarize(all);
    std::printf("wrote %zu rounds (%zu batches) to %s\n", all.size(), batches, out_path.c_str());
    std::printf("test rounds: %zu open / %zu closed, generation rounds: %zu\n", s.test_open,
                s.test_closed, s.gen);
    if (s.test_open) {
        std::printf("click rate | open:   %.5f\n", double(s.clicks_open) / double(s.test_open));
    }
    if (s.test_closed) {
        std::printf("click rate | closed: %.5f\n", double(s.clicks_closed) / double(s.test_closed));
    }
    if (s.gen) {
        std::printf("click rate | gen:    %.5f\n", double(s.clicks_gen) / double(s.gen));
    }
    if (device_kind == "adversarial") {
        std::printf("empirical adversary guess rate: %.5f\n", guess_rate_sum / double(batches));
    }
    return 0;
}

int cmd_certify(const ModelFlags& model_flags, const std::string& in_path,
                const std::string& json_path, double epsilon, std::size_t batch_rounds,
                bool clamp) {
    const sc::SourceModel model = build_model(model_flags);
    const sc::Assumption assumption = assumption_from(model_flags.model);

    const sc::RoundsFile rounds = sc::read_rounds(in_path);
    sc::PipelineOptions opt;
    opt.epsilon = epsilon;
    opt.clamp = clamp;
    const auto batches = sc::certify_batches(rounds.records, batch_rounds, assumption, model, opt);

    std::vector<sc::CertRecord> records;
    records.reserve(batches.size());
    std::size_t infeasible = 0;
    double h_sum = 0.0;
    for (const auto& b : batches) {
        records.push_back(sc::cert_from_batch(b));
        if (b.discard == sc::DiscardReason::InfeasibleStats) ++infeasible;
        h_sum += b.h;
    }
    sc::write_cert_jsonl(json_path, records);

    std::printf("certified %zu batches under '%s': %zu infeasible, mean h = %.4f bits/bit\n",
                batches.size(), sc::to_string(assumption).c_str(), infeasible,
                batches.empty() ? 0.0 : h_sum / double(batches.size()));
    if (infeasible > 0 && !clamp) return kExitInfeasible;
    return 0;
}

int cmd_extract(const std::string& in_path, const std::string& cert_path, double delta_log2,
                std::size_t y_length, std::uint64_t seed, std::size_t batch_rounds,
                double max_reuse, const std::string& out_path, const std::string& manifest_path) {
    const sc::RoundsFile rounds = sc::read_rounds(in_path);
    const auto certs = sc::read_cert_jsonl(cert_path);

    const std::size_t full = rounds.records.size() / batch_rounds;
    std::vector<sc::BatchResult> batches(full);
    std::vector<bool> seen(full, false);
    for (const auto& c : certs) {
        if (c.batch >= full) continue;  // certs beyond the rounds file are ignored
        batches[c.batch] = sc::batch_from_cert(c);
        seen[c.batch] = true;
    }
    for (std::size_t b = 0; b < full; ++b) {
        if (!seen[b]) {
            throw sc::FormatError("certification missing for batch " + std::to_string(b));
        }
    }

    sc::PipelineOptions opt;
    opt.delta_log2 = delta_log2;
    opt.y_length = y_length;
    opt.master_seed = seed;
    opt.max_seed_reuse = max_reuse;
    sc::PipelineReport report = sc::extract_batches(rounds.records, batch_rounds,
                                                    std::move(batches), sc::Assumption::Simple,
                                                    opt);
    if (report.batches_used == 0 || report.extracted_bits == 0) {
        std::fprintf(stderr, "no batch produced output (cutoff %.4f)\n", report.cutoff_h);
        return kExitInsufficientEntropy;
    }

    sc::write_bits(out_path, report.output);

    json manifest;
    manifest["bit_count"] = report.extracted_bits;
    manifest["n"] = y_length;
    manifest["m"] = report.m_bits;
    manifest["h"] = report.cutoff_h;
    manifest["delta_log2"] = delta_log2;
    manifest["seed_sha256"] = report.seed_digest;
    manifest["seed_bits"] = y_length + report.m_bits - 1;
    manifest["seed_reuse_count"] = report.seed_reuse_count;
    manifest["batches_total"] = report.batches.size();
    manifest["surplus_bits_discarded"] = report.surplus_bits_discarded;
    json used = json::array();
    json discards = json::object();
    for (const auto& b : report.batches) {
        if (b.discard == sc::DiscardReason::None) used.push_back(b.index);
    }
    manifest["batches_used"] = used;
    manifest["discards"] = {
        {"below_cutoff", report.discard_count(sc::DiscardReason::BelowCutoff)},
        {"infeasible_stats", report.discard_count(sc::DiscardReason::InfeasibleStats)},
        {"short_batch", report.discard_count(sc::DiscardReason::ShortBatch)}};
    if (report.monobit) {
        manifest["monobit_z"] = *report.monobit;
        if (std::abs(*report.monobit) > 4.0) {
            std::fprintf(stderr, "warning: monobit z = %.2f exceeds 4\n", *report.monobit);
        }
    }
    sc::write_text(manifest_path, manifest.dump(2) + "\n");

    std::printf("extracted %llu bits from %zu/%zu batches (cutoff h = %.4f, m = %zu)\n",
                static_cast<unsigned long long>(report.extracted_bits), report.batches_used,
                report.batches.size(), report.cutoff_h, report.m_bits);
    std::printf("wrote %s and %s\n", out_path.c_str(), manifest_path.c_str());
    return 0;
}

int cmd_oracle_check(int instances, std::uint64_t seed, std::vector<std::string> scopes) {
    if (scopes.empty()) scopes = {"simple", "mixed", "mean", "photon"};
    json out = json::array();
    bool all_pass = true;
    for (const auto& name : scopes) {
        const sc::OracleReport report =
            sc::run_oracle_check(sc::parse_oracle_scope(name), instances, seed);
        out.push_back(json::parse(report.to_json()));
        all_pass = all_pass && report.pass;
    }
    std::printf("%s\n", out.dump(2).c_str());
    return all_pass ? 0 : kExitOracleBreach;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"shutter-based randomness certification and extraction"};
    app.require_subcommand(1);

    // simulate
    auto* sim = app.add_subcommand("simulate", "generate protocol rounds from a device model");
    ModelFlags sim_model;
    add_model_flags(sim, sim_model, /*assumption_names=*/false);
    std::size_t sim_batches = 1, sim_rounds = 100000;
    double sim_q = 0.08, sim_split = 0.5, sim_eta = 1.0, sim_dark = 0.0, sim_ext = 0.0;
    std::uint64_t sim_seed = 0;
    std::string sim_device = "honest", sim_out;
    std::vector<std::string> sim_lambda;
    sim->add_option("--batches", sim_batches)->check(CLI::PositiveNumber);
    sim->add_option("--rounds", sim_rounds, "rounds per batch")->check(CLI::PositiveNumber);
    sim->add_option("--test-rate", sim_q)->check(CLI::Range(0.0, 1.0));
    sim->add_option("--shutter-split", sim_split)->check(CLI::Range(0.0, 1.0));
    sim->add_option("--seed", sim_seed);
    sim->add_option("--device", sim_device)->check(CLI::IsMember({"honest", "adversarial"}));
    sim->add_option("--lambda", sim_lambda,
                    "strategy mix 'never,always,honest,dishonest'; repeat per component in "
                    "nondecreasing-p order, or give one mix for all");
    sim->add_option("--eta", sim_eta)->check(CLI::Range(0.0, 1.0));
    sim->add_option("--dark", sim_dark)->check(CLI::Range(0.0, 1.0));
    sim->add_option("--extinction", sim_ext)->check(CLI::Range(0.0, 1.0));
    sim->add_option("--out", sim_out)->required();

    // certify
    auto* cert = app.add_subcommand("certify", "per-batch min-entropy certification");
    ModelFlags cert_model;
    add_model_flags(cert, cert_model, /*assumption_names=*/true);
    std::string cert_in, cert_json;
    double cert_epsilon = 1e-6;
    std::size_t cert_batch_rounds = 100000;
    bool cert_clamp = false;
    cert->add_option("--in", cert_in)->required();
    cert->add_option("--json", cert_json, "output cert.jsonl path")->required();
    cert->add_option("--epsilon", cert_epsilon, "per-side confidence parameter");
    cert->add_option("--batch-rounds", cert_batch_rounds)->check(CLI::PositiveNumber);
    cert->add_flag("--clamp", cert_clamp,
                   "project infeasible stats onto the polytope instead of failing");

    // extract
    auto* ext = app.add_subcommand("extract", "cutoff-optimized Toeplitz extraction");
    std::string ext_in, ext_cert, ext_out, ext_manifest;
    double ext_delta = -100.0, ext_max_reuse = 1e20;
    std::size_t ext_y = 83000, ext_batch_rounds = 100000;
    std::uint64_t ext_seed = 0;
    ext->add_option("--in", ext_in)->required();
    ext->add_option("--cert", ext_cert)->required();
    ext->add_option("--delta-log2", ext_delta)->check(CLI::Range(-1e6, -1e-9));
    ext->add_option("--y-length", ext_y)->check(CLI::PositiveNumber);
    ext->add_option("--seed", ext_seed, "master seed for the Toeplitz matrix");
    ext->add_option("--batch-rounds", ext_batch_rounds)->check(CLI::PositiveNumber);
    ext->add_option("--max-reuse", ext_max_reuse);
    ext->add_option("--out", ext_out)->required();
    ext->add_option("--manifest", ext_manifest)->required();

    // oracle-check
    auto* oc = app.add_subcommand("oracle-check", "closed form vs LP oracle property run");
    int oc_instances = 100;
    std::uint64_t oc_seed = 1;
    std::vector<std::string> oc_scopes;
    oc->add_option("--instances", oc_instances)->required()->check(CLI::PositiveNumber);
    oc->add_option("--seed", oc_seed);
    oc->add_option("--scope", oc_scopes, "simple|mixed|mean|photon (repeatable; default all)")
        ->check(CLI::IsMember({"simple", "mixed", "mean", "photon"}));

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return kExitUsage;
    }

    try {
        if (sim->parsed()) {
            return cmd_simulate(sim_model, sim_batches, sim_rounds, sim_q, sim_split, sim_seed,
                                sim_device, sim_lambda, sim_eta, sim_dark, sim_ext, sim_out);
        }
        if (cert->parsed()) {
            return cmd_certify(cert_model, cert_in, cert_json, cert_epsilon, cert_batch_rounds,
                               cert_clamp);
        }
        if (ext->parsed()) {
            return cmd_extract(ext_in, ext_cert, ext_delta, ext_y, ext_seed, ext_batch_rounds,
                               ext_max_reuse, ext_out, ext_manifest);
        }
        if (oc->parsed()) {
            return cmd_oracle_check(oc_instances, oc_seed, oc_scopes);
        }
    } catch (const UsageError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const std::invalid_argument& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitUsage;
    } catch (const sc::InsufficientEntropy& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInsufficientEntropy;
    } catch (const sc::InfeasibleStats& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitInfeasible;
    } catch (const sc::IoError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const sc::FormatError& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return kExitIo;
    } catch (const sc::Error& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
