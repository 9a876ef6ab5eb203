#include "decorr/synth.hpp"

#include <cmath>
#include <string>

#include "decorr/error.hpp"
#include "decorr/random.hpp"
#include "decorr/serialization.hpp"

namespace decorr {

StochasticTable::StochasticTable(std::size_t rows, std::size_t cols, std::vector<double> values)
    : rows_(rows), cols_(cols), values_(std::move(values)) {
    if (values_.size() != rows_ * cols_)
        throw Error(ErrorCode::InvalidTable, "table has " + std::to_string(values_.size()) + " entries, expected " +
                                                 std::to_string(rows_ * cols_));
    for (std::size_t r = 0; r < rows_; ++r) {
        double total = 0.0;
        for (double v : row(r)) {
            if (!(v >= 0.0) || !std::isfinite(v))
                throw Error(ErrorCode::InvalidTable, "row " + std::to_string(r) + " has a negative or non-finite entry");
            total += v;
        }
        if (std::abs(total - 1.0) > kNormalizationTolerance)
            throw Error(ErrorCode::InvalidTable, "row " + std::to_string(r) + " sums to " + std::to_string(total));
    }
}

void validate(const SynthConfig& c) {
    const auto& s = c.schema;
    auto expect = [](const StochasticTable& t, std::size_t rows, std::size_t cols, const char* what) {
        if (t.rows() != rows || t.cols() != cols)
            throw Error(ErrorCode::InvalidTable, std::string(what) + " must be " + std::to_string(rows) + " x " +
                                                     std::to_string(cols));
    };
    expect(c.protected_prior, 1, s.w_size(), "protected_prior");
    expect(c.unprotected_given_protected, s.w_size(), s.u_size(), "unprotected_given_protected");
    expect(c.outcome_given, s.u_size() * s.w_size(), s.s_size(), "outcome_given");
    if (c.sample_count == 0) throw Error(ErrorCode::InvalidTable, "sample count must be at least 1");
}

JointDistribution ground_truth_joint(const SynthConfig& c) {
    validate(c);
    const auto& schema = c.schema;
    std::vector<double> mass(schema.cell_count());
    for (std::size_t s = 0; s < schema.s_size(); ++s)
        for (std::size_t u = 0; u < schema.u_size(); ++u)
            for (std::size_t w = 0; w < schema.w_size(); ++w)
                mass[schema.flat_index({s, u, w})] = c.protected_prior.at(0, w) *
                                                     c.unprotected_given_protected.at(w, u) *
                                                     c.outcome_given.at(u * schema.w_size() + w, s);
    return JointDistribution(schema, std::move(mass));
}

Dataset sample(const SynthConfig& c) {
    validate(c);
    const auto& schema = c.schema;
    Rng rng(c.seed);
    Dataset data{schema, {}};
    data.records.reserve(c.sample_count);
    for (std::size_t i = 0; i < c.sample_count; ++i) {
        const auto w = categorical(rng, c.protected_prior.row(0));
        const auto u = categorical(rng, c.unprotected_given_protected.row(w));
        const auto s = categorical(rng, c.outcome_given.row(u * schema.w_size() + w));
        data.records.push_back(schema.assignment_of({s, u, w}));
    }
    return data;
}

SynthConfig synth_config_from_json(const nlohmann::json& doc) {
    try {
        auto schema = schema_from_json(doc.at("schema"));
        const auto prior = doc.at("protected_prior").get<std::vector<double>>();
        const auto u_rows = doc.at("unprotected_given_protected").get<std::vector<std::vector<double>>>();
        const auto s_rows = doc.at("outcome_given").get<std::vector<std::vector<std::vector<double>>>>();

        const auto nu = schema.u_size(), nw = schema.w_size(), ns = schema.s_size();
        auto flatten2 = [](const std::vector<std::vector<double>>& rows, std::size_t cols, const char* what) {
            std::vector<double> flat;
            for (const auto& r : rows) {
                if (r.size() != cols)
                    throw Error(ErrorCode::InvalidTable, std::string(what) + " row has " + std::to_string(r.size()) +
                                                             " entries, expected " + std::to_string(cols));
                flat.insert(flat.end(), r.begin(), r.end());
            }
            return flat;
        };
        if (u_rows.size() != nw) throw Error(ErrorCode::InvalidTable, "unprotected_given_protected needs one row per w");
        if (s_rows.size() != nu) throw Error(ErrorCode::InvalidTable, "outcome_given needs one block per u");
        std::vector<double> s_flat;
        for (const auto& block : s_rows) {
            if (block.size() != nw) throw Error(ErrorCode::InvalidTable, "outcome_given block needs one row per w");
            const auto f = flatten2(block, ns, "outcome_given");
            s_flat.insert(s_flat.end(), f.begin(), f.end());
        }

        SynthConfig c{schema,
                      StochasticTable(1, nw, prior),
                      StochasticTable(nw, nu, flatten2(u_rows, nu, "unprotected_given_protected")),
                      StochasticTable(nu * nw, ns, std::move(s_flat)),
                      doc.value("samples", std::size_t{1}),
                      doc.value("seed", std::uint64_t{0})};
        validate(c);
        return c;
    } catch (const nlohmann::json::exception& e) {
        throw Error(ErrorCode::ParseError, std::string("synth config: ") + e.what());
    }
}

nlohmann::json synth_config_to_json(const SynthConfig& c) {
    const auto& schema = c.schema;
    std::vector<std::vector<double>> u_rows(schema.w_size());
    for (std::size_t w = 0; w < schema.w_size(); ++w) {
        const auto r = c.unprotected_given_protected.row(w);
        u_rows[w].assign(r.begin(), r.end());
    }
    std::vector<std::vector<std::vector<double>>> s_rows(schema.u_size(), std::vector<std::vector<double>>(schema.w_size()));
    for (std::size_t u = 0; u < schema.u_size(); ++u)
        for (std::size_t w = 0; w < schema.w_size(); ++w) {
            const auto r = c.outcome_given.row(u * schema.w_size() + w);
            s_rows[u][w].assign(r.begin(), r.end());
        }
    const auto prior = c.protected_prior.row(0);
    return {{"schema", schema_to_json(schema)},
            {"protected_prior", std::vector<double>(prior.begin(), prior.end())},
            {"unprotected_given_protected", u_rows},
            {"outcome_given", s_rows},
            {"samples", c.sample_count},
            {"seed", c.seed}};
}

}  // namespace decorr
