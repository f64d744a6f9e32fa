#pragma once

#include "ntzone/simulate.hpp"

#include <string>

namespace ntzone {

// Parsed run configuration: market and preferences are required; the "sim"
// block is optional and pre-populates the Monte Carlo settings.
struct FileConfig {
    MarketParams market;
    Preferences prefs;
    SimConfig sim; // market/prefs duplicated inside for convenience
    bool has_sim = false;
};

// Parse a JSON document. Market keys: r, mu (array), and either sigma (d x d,
// rows as arrays) or vols + corr (sigma = diag(vols) chol(corr)); preference
// keys: gamma, beta. Optional "sim": lambda, z0, initial_weights, dt,
// horizon, n_paths, seed, eta, tail_mode ("frictionless_value" | "zero").
// Structural problems throw Error(parse) naming the offending key; value
// problems (e.g. a correlation matrix that is not positive definite) throw
// validation kinds.
FileConfig parse_config(const std::string& json_text);

// parse_config over the contents of a file; nonexistent/unreadable files are
// parse errors.
FileConfig load_config(const std::string& path);

// FNV-1a 64-bit digest as 16 hex characters; used to fingerprint configs in
// run manifests.
std::string fnv1a_hex(const std::string& bytes);

} // namespace ntzone
