#include "ntzone/config.hpp"

#include "ntzone/errors.hpp"

#include "json.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

namespace ntzone {

using nlohmann::json;

namespace {

[[noreturn]] void parse_fail(const std::string& key, const std::string& what) {
    fail(ErrKind::parse, "config key '" + key + "': " + what);
}

double get_number(const json& obj, const std::string& key) {
    if (!obj.contains(key)) parse_fail(key, "missing");
    if (!obj[key].is_number()) parse_fail(key, "expected a number");
    return obj[key].get<double>();
}

double get_number_or(const json& obj, const std::string& key, double fallback) {
    if (!obj.contains(key)) return fallback;
    if (!obj[key].is_number()) parse_fail(key, "expected a number");
    return obj[key].get<double>();
}

la::Vec get_vector(const json& obj, const std::string& key) {
    if (!obj.contains(key)) parse_fail(key, "missing");
    if (!obj[key].is_array() || obj[key].empty()) parse_fail(key, "expected a nonempty array");
    la::Vec out;
    for (const auto& v : obj[key]) {
        if (!v.is_number()) parse_fail(key, "expected numeric entries");
        out.push_back(v.get<double>());
    }
    return out;
}

la::Mat get_matrix(const json& obj, const std::string& key, std::size_t d) {
    if (!obj[key].is_array() || obj[key].size() != d)
        parse_fail(key, "expected " + std::to_string(d) + " rows");
    la::Mat out(d);
    for (std::size_t i = 0; i < d; ++i) {
        const auto& row = obj[key][i];
        if (!row.is_array() || row.size() != d)
            parse_fail(key, "row " + std::to_string(i) + " must have " + std::to_string(d) +
                                " entries");
        for (std::size_t j = 0; j < d; ++j) {
            if (!row[j].is_number()) parse_fail(key, "expected numeric entries");
            out(i, j) = row[j].get<double>();
        }
    }
    return out;
}

} // namespace

FileConfig parse_config(const std::string& json_text) {
    json doc;
    try {
        doc = json::parse(json_text);
    } catch (const json::parse_error& err) {
        fail(ErrKind::parse, std::string("config is not valid JSON: ") + err.what());
    }
    if (!doc.is_object()) fail(ErrKind::parse, "config must be a JSON object");

    FileConfig out;
    out.market.r = get_number(doc, "r");
    out.market.mu = get_vector(doc, "mu");
    const std::size_t d = out.market.mu.size();

    if (doc.contains("sigma")) {
        if (doc.contains("vols") || doc.contains("corr"))
            parse_fail("sigma", "give either sigma or vols+corr, not both");
        out.market.sigma = get_matrix(doc, "sigma", d);
    } else if (doc.contains("vols") || doc.contains("corr")) {
        if (!doc.contains("vols")) parse_fail("vols", "missing (required with corr)");
        if (!doc.contains("corr")) parse_fail("corr", "missing (required with vols)");
        const la::Vec vols = get_vector(doc, "vols");
        if (vols.size() != d) parse_fail("vols", "must have one entry per asset");
        const la::Mat corr = get_matrix(doc, "corr", d);
        for (std::size_t i = 0; i < d; ++i) {
            if (std::abs(corr(i, i) - 1.0) > 1e-12)
                fail(ErrKind::bad_input, "corr must have unit diagonal");
            for (std::size_t j = 0; j < d; ++j)
                if (std::abs(corr(i, j) - corr(j, i)) > 1e-12)
                    fail(ErrKind::bad_input, "corr must be symmetric");
        }
        // sigma = diag(vols) * chol(corr): rows scaled by per-asset vol.
        const la::Mat chol = la::cholesky(corr);
        out.market.sigma = la::Mat(d);
        for (std::size_t i = 0; i < d; ++i)
            for (std::size_t j = 0; j < d; ++j) out.market.sigma(i, j) = vols[i] * chol(i, j);
    } else {
        parse_fail("sigma", "missing (give sigma or vols+corr)");
    }

    out.prefs.gamma = get_number(doc, "gamma");
    out.prefs.beta = get_number(doc, "beta");

    out.sim.market = out.market;
    out.sim.prefs = out.prefs;
    if (doc.contains("sim")) {
        const json& sim = doc["sim"];
        if (!sim.is_object()) parse_fail("sim", "expected an object");
        out.has_sim = true;
        out.sim.lambda = get_number_or(sim, "lambda", 0.0);
        out.sim.z0 = get_number_or(sim, "z0", 1.0);
        if (sim.contains("initial_weights")) out.sim.initial_weights = get_vector(sim, "initial_weights");
        out.sim.dt = get_number_or(sim, "dt", 0.0);
        out.sim.horizon = get_number_or(sim, "horizon", 0.0);
        if (sim.contains("n_paths")) {
            if (!sim["n_paths"].is_number_integer()) parse_fail("sim.n_paths", "expected an integer");
            out.sim.n_paths = sim["n_paths"].get<std::int64_t>();
        }
        if (sim.contains("seed")) {
            if (!sim["seed"].is_number_integer()) parse_fail("sim.seed", "expected an integer");
            out.sim.seed = sim["seed"].get<std::uint64_t>();
        }
        out.sim.eta = get_number_or(sim, "eta", 2.0);
        if (sim.contains("tail_mode")) {
            if (!sim["tail_mode"].is_string()) parse_fail("sim.tail_mode", "expected a string");
            const std::string mode = sim["tail_mode"].get<std::string>();
            if (mode == "frictionless_value") out.sim.tail_mode = TailMode::frictionless_value;
            else if (mode == "zero") out.sim.tail_mode = TailMode::zero;
            else parse_fail("sim.tail_mode", "expected 'frictionless_value' or 'zero'");
        }
    }
    return out;
}

FileConfig load_config(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrKind::parse, "cannot read config file: " + path);
    std::ostringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char out[17];
    std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
    return std::string(out);
}

} // namespace ntzone
