#include "decorr/cli.hpp"

#include <CLI11.hpp>

#include <cstdio>
#include <optional>
#include <sstream>

#include "decorr/audit.hpp"
#include "decorr/error.hpp"
#include "decorr/estimation.hpp"
#include "decorr/outcome_equal.hpp"
#include "decorr/serialization.hpp"
#include "decorr/synth.hpp"

namespace decorr {

namespace {

namespace fs = std::filesystem;
using nlohmann::json;

std::string num(double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

// Signals that a command already printed its diagnostics.
struct Exit {
    int code;
};

struct SynthArgs {
    std::string input;
    std::string output;
    std::string schema_out;
    std::optional<std::uint64_t> seed;
};

struct EstimateArgs {
    std::string input;
    std::string schema;
    std::string output;
    double alpha = 0.0;
};

struct EqualizeArgs {
    std::string input;
    std::string schema;
    std::string output;
    double alpha = 0.0;
    std::vector<std::string> scope;
    double tol = kDefaultVerifyTolerance;
    bool oracle = false;
    std::size_t samples = OracleOptions{}.samples;
    std::size_t iterations = OracleOptions{}.iterations;
    std::uint64_t seed = 0;
};

struct VerifyArgs {
    std::string input;
    double tol = kDefaultVerifyTolerance;
    std::vector<std::string> scope;
};

struct AuditArgs {
    std::vector<std::string> inputs;
    std::string output;
    std::string target;
    std::optional<double> tau;
};

fs::path sibling(const fs::path& csv, const char* suffix) {
    auto p = csv;
    p.replace_extension();
    p += suffix;
    return p;
}

std::optional<ScopeSpec> scope_of(const std::vector<std::string>& names) {
    if (names.empty()) return std::nullopt;
    return ScopeSpec{names};
}

int cmd_synth(const SynthArgs& a, std::ostream& out) {
    auto config = synth_config_from_json(read_json_file(a.input));
    if (a.seed) config.seed = *a.seed;
    const fs::path csv = a.output;
    const fs::path schema_path = a.schema_out.empty() ? sibling(csv, ".schema.json") : fs::path(a.schema_out);
    const fs::path truth_path = sibling(csv, ".truth.json");

    const auto truth = ground_truth_joint(config);
    const auto data = sample(config);

    RunManifest m{"synth", {a.input}, {csv.string(), schema_path.string(), truth_path.string()},
                  json{{"samples", config.sample_count}}, config.seed};
    std::ostringstream csv_text;
    write_csv(csv_text, data);
    auto schema_doc = schema_to_json(config.schema);
    schema_doc["manifest"] = manifest_to_json(m);
    auto truth_doc = joint_to_json(truth);
    truth_doc["manifest"] = manifest_to_json(m);
    write_files_atomically(
        {{csv, csv_text.str()}, {schema_path, dump_json(schema_doc)}, {truth_path, dump_json(truth_doc)}});

    out << "records: " << data.records.size() << "\n"
        << "wrote " << csv.string() << ", " << schema_path.string() << ", " << truth_path.string() << "\n";
    return kExitOk;
}

json estimation_doc(const Estimate& est, double alpha) {
    const auto& schema = est.joint.schema();
    json empty = json::array();
    for (auto i : est.empty_cells) {
        const auto c = schema.cell_of(i);
        empty.push_back(schema.s_label(c.s) + " | " + schema.u_label(c.u) + " | " + schema.w_label(c.w));
    }
    return {{"records", est.record_count},
            {"alpha", alpha},
            {"effective_sample_size", est.effective_sample_size},
            {"empty_cells", empty}};
}

int cmd_estimate(const EstimateArgs& a, std::ostream& out, std::ostream& err) {
    const auto schema = schema_from_json(read_json_file(a.schema));
    const auto est = estimate_joint(load_csv(a.input, schema), SmoothingSpec{a.alpha});

    RunManifest m{"estimate", {a.schema, a.input}, {a.output}, json{{"alpha", a.alpha}}, std::nullopt};
    auto doc = joint_to_json(est.joint);
    doc["estimation"] = estimation_doc(est, a.alpha);
    doc["manifest"] = manifest_to_json(m);
    write_files_atomically({{a.output, dump_json(doc)}});

    out << "records: " << est.record_count << "\n"
        << "empty cells: " << est.empty_cells.size() << " of " << schema.cell_count() << "\n";
    if (!est.empty_cells.empty() && a.alpha == 0.0)
        err << "warning: " << est.empty_cells.size()
            << " empty cell(s) kept as zeros; they may block equalization (see --alpha)\n";
    return kExitOk;
}

void print_scope_verification(const InsensitivityReport& r, const ScopePartition& part,
                              const JointDistribution& dist, std::ostream& out) {
    if (!part.scoped()) return;
    const auto pw = marginal(dist, {Axis::W}).values;
    std::vector<double> pg(part.cell_count(), 0.0);
    for (std::size_t w = 0; w < pw.size(); ++w) pg[part.cell_of(w)] += pw[w];
    for (std::size_t g = 0; g < part.cell_count(); ++g) {
        out << "scope " << part.label(g) << ": ";
        if (pg[g] <= 0.0)
            out << "no mass\n";
        else
            out << "max violation " << num(r.cell_violation[g]) << "\n";
    }
}

int cmd_equalize(const EqualizeArgs& a, bool alpha_given, std::ostream& out, std::ostream& err) {
    std::optional<JointDistribution> input;
    json estimation;
    std::vector<std::string> inputs{a.input};
    if (!a.schema.empty()) {
        const auto schema = schema_from_json(read_json_file(a.schema));
        const auto est = estimate_joint(load_csv(a.input, schema), SmoothingSpec{a.alpha});
        if (!est.empty_cells.empty() && !alpha_given) {
            err << "error: estimated joint has " << est.empty_cells.size() << " empty cell(s).\n"
                << "Structural zeros can block equalization and smoothing erases them; pass --alpha explicitly\n"
                << "(--alpha 0 keeps the zeros, --alpha > 0 smooths them away).\n";
            return kExitInfeasible;
        }
        estimation = estimation_doc(est, a.alpha);
        inputs.insert(inputs.begin(), a.schema);
        input.emplace(est.joint);
    } else {
        input.emplace(joint_from_json(read_json_file(a.input)));
    }
    const auto& original = *input;
    const auto scope = scope_of(a.scope);
    const auto part = resolve_scope(original.schema(), scope);
    if (a.oracle && scope) {
        err << "error: --oracle supports unscoped equalization only\n";
        return kExitInputError;
    }

    JointDistribution equalized = [&] {
        try {
            return outcome_equalize(original, scope);
        } catch (const InfeasibleError& e) {
            err << "error: " << e.what() << "\n" << e.report().render(original.schema());
            if (!scope) err << "hint: exempt whole protected variables with --scope <name>\n";
            throw Exit{kExitInfeasible};
        }
    }();

    const auto before = scope ? verify_insensitivity(original, a.tol, *scope) : verify_insensitivity(original, a.tol);
    const auto after = scope ? verify_insensitivity(equalized, a.tol, *scope) : verify_insensitivity(equalized, a.tol);
    const double cost = information_cost(original, equalized);

    json params{{"scope", a.scope}, {"tol", a.tol}, {"oracle", a.oracle}};
    if (!a.schema.empty()) params["alpha"] = a.alpha;
    if (a.oracle) {
        params["samples"] = a.samples;
        params["iterations"] = a.iterations;
    }
    RunManifest m{"equalize", inputs, {a.output}, params,
                  a.oracle ? std::optional<std::uint64_t>(a.seed) : std::nullopt};

    json summary{{"max_violation_before", before.max_violation},
                 {"max_violation_after", after.max_violation},
                 {"information_cost_nats", cost},
                 {"scope", a.scope}};

    int code = after.pass ? kExitOk : kExitVerificationFailed;
    out << "insensitivity max violation before: " << num(before.max_violation) << "\n"
        << "insensitivity max violation after: " << num(after.max_violation) << " (tol " << num(a.tol) << ", "
        << (after.pass ? "pass" : "FAIL") << ")\n";
    print_scope_verification(after, part, equalized, out);
    out << "information cost: " << num(cost) << " nats\n";

    if (a.oracle) {
        const auto oracle = brute_force_project(original, OracleOptions{a.iterations, a.samples, a.seed});
        double gap = 0.0;
        for (std::size_t i = 0; i < oracle.mass().size(); ++i)
            gap = std::max(gap, std::abs(oracle.mass()[i] - equalized.mass()[i]));
        summary["oracle_max_cell_disagreement"] = gap;
        summary["oracle_information_cost_nats"] = information_cost(original, oracle);
        const bool agree = gap <= kOracleAgreementTolerance;
        out << "oracle max cell disagreement: " << num(gap) << " (" << (agree ? "agree" : "DISAGREE") << ")\n";
        if (!agree) code = kExitVerificationFailed;
    }

    auto doc = joint_to_json(equalized);
    if (!estimation.is_null()) doc["estimation"] = estimation;
    doc["equalization"] = summary;
    doc["manifest"] = manifest_to_json(m);
    write_files_atomically({{a.output, dump_json(doc)}});
    return code;
}

int cmd_verify(const VerifyArgs& a, std::ostream& out) {
    const auto dist = joint_from_json(read_json_file(a.input));
    const auto scope = scope_of(a.scope);
    const auto part = resolve_scope(dist.schema(), scope);
    const auto r = scope ? verify_insensitivity(dist, a.tol, *scope) : verify_insensitivity(dist, a.tol);
    out << "max violation: " << num(r.max_violation) << " at outcome=" << dist.schema().s_label(r.worst_s) << " "
        << dist.schema().w_label(r.worst_w) << "\n";
    print_scope_verification(r, part, dist, out);
    out << (r.pass ? "pass" : "FAIL") << " (tol " << num(a.tol) << ")\n";
    return r.pass ? kExitOk : kExitVerificationFailed;
}

int cmd_audit(const AuditArgs& a, std::ostream& out, std::ostream& err) {
    const auto original = joint_from_json(read_json_file(a.inputs.at(0)));
    const auto equalized = joint_from_json(read_json_file(a.inputs.at(1)));
    if (!(original.schema() == equalized.schema())) {
        err << "error: the two joints use different schemas\n";
        return kExitInputError;
    }
    std::optional<ThresholdPolicy> policy;
    if (!a.target.empty() || a.tau) {
        if (a.target.empty() || !a.tau) {
            err << "error: a policy needs both --target and --tau\n";
            return kExitInputError;
        }
        policy = make_policy(original.schema(), a.target, *a.tau);
    }
    const auto report = audit(original, equalized, policy);
    out << render_audit(report, original.schema());
    if (!a.output.empty()) {
        json params = json::object();
        if (policy) params = {{"target", a.target}, {"tau", *a.tau}};
        RunManifest m{"audit", a.inputs, {a.output}, params, std::nullopt};
        auto doc = audit_to_json(report, original.schema());
        doc["manifest"] = manifest_to_json(m);
        write_files_atomically({{a.output, dump_json(doc)}});
    }
    return kExitOk;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Decorrelate discrete predictive distributions from protected attributes", "decorr"};
    app.require_subcommand(1);
    app.set_version_flag("--version", kToolVersion);

    SynthArgs synth;
    auto* synth_cmd = app.add_subcommand("synth", "Sample a dataset from a W -> U -> S generative chain");
    synth_cmd->add_option("--input", synth.input, "Synth config (JSON)")->required();
    synth_cmd->add_option("--output", synth.output, "CSV output; schema and truth files are written beside it")
        ->required();
    synth_cmd->add_option("--schema", synth.schema_out, "Schema config output path");
    synth_cmd->add_option("--seed", synth.seed, "Override the config seed");

    EstimateArgs estimate;
    auto* estimate_cmd = app.add_subcommand("estimate", "Estimate a joint distribution from CSV records");
    estimate_cmd->add_option("--schema", estimate.schema, "Schema config (JSON)")->required();
    estimate_cmd->add_option("--input", estimate.input, "CSV records")->required();
    estimate_cmd->add_option("--output", estimate.output, "Joint output (JSON)")->required();
    estimate_cmd->add_option("--alpha", estimate.alpha, "Additive pseudo-count per cell")->check(CLI::NonNegativeNumber);

    EqualizeArgs equalize;
    auto* equalize_cmd = app.add_subcommand("equalize", "Project a joint onto the outcome-equal set");
    equalize_cmd->add_option("--input", equalize.input, "Joint (JSON), or CSV records when --schema is given")
        ->required();
    equalize_cmd->add_option("--schema", equalize.schema, "Schema config; treats --input as CSV");
    auto* alpha_opt = equalize_cmd->add_option("--alpha", equalize.alpha, "Pseudo-count for CSV estimation")
                          ->check(CLI::NonNegativeNumber);
    equalize_cmd->add_option("--scope", equalize.scope, "Protected variables exempt from cross-cell equalization");
    equalize_cmd->add_option("--output", equalize.output, "Equalized joint (JSON)")->required();
    equalize_cmd->add_option("--tol", equalize.tol, "Verification tolerance")->check(CLI::PositiveNumber);
    equalize_cmd->add_flag("--oracle", equalize.oracle, "Cross-check against the brute-force projection");
    equalize_cmd->add_option("--samples", equalize.samples, "Oracle random starts per cell");
    equalize_cmd->add_option("--iterations", equalize.iterations, "Oracle coordinate-descent sweeps");
    equalize_cmd->add_option("--seed", equalize.seed, "Oracle seed");

    VerifyArgs verify;
    auto* verify_cmd = app.add_subcommand("verify", "Check the insensitivity constraint on a joint");
    verify_cmd->add_option("--input", verify.input, "Joint (JSON)")->required();
    verify_cmd->add_option("--tol", verify.tol, "Tolerance")->check(CLI::PositiveNumber);
    verify_cmd->add_option("--scope", verify.scope, "Verify within scope cells of these protected variables");

    AuditArgs audit_args;
    auto* audit_cmd = app.add_subcommand("audit", "Compare an original and an equalized joint");
    audit_cmd->add_option("--input", audit_args.inputs, "ORIGINAL EQUALIZED joints (JSON)")->required()->expected(2);
    audit_cmd->add_option("--output", audit_args.output, "Audit report (JSON)");
    audit_cmd->add_option("--target", audit_args.target, "Outcome level allocated by the threshold policy");
    audit_cmd->add_option("--tau", audit_args.tau, "Policy threshold in [0, 1]")->check(CLI::Range(0.0, 1.0));

    std::vector<const char*> argv;
    for (const auto& a : args) argv.push_back(a.c_str());
    try {
        app.parse(static_cast<int>(argv.size()), argv.data());
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? kExitOk : kExitInputError;
    }

    try {
        if (*synth_cmd) return cmd_synth(synth, out);
        if (*estimate_cmd) return cmd_estimate(estimate, out, err);
        if (*equalize_cmd) return cmd_equalize(equalize, alpha_opt->count() > 0, out, err);
        if (*verify_cmd) return cmd_verify(verify, out);
        if (*audit_cmd) return cmd_audit(audit_args, out, err);
    } catch (const Exit& e) {
        return e.code;
    } catch (const InfeasibleError& e) {
        err << "error: " << e.what() << "\n";
        return kExitInfeasible;
    } catch (const Error& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return kExitInputError;
    }
    return kExitInputError;
}

}  // namespace decorr
