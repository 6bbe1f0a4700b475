// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#ifndef GLN_SUITE_HPP
#define GLN_SUITE_HPP

#include <json.hpp>

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace gln {

/// Run configuration. Read from a key = value file, then overridden by flags, then GLN_THREADS.
struct Config
{
    long default_p = 2;
    int default_n = 3;
    int lambda_bound = 40;
    int truncation_depth_k = 6;
    double tolerance = 1e-6;
    int quadrature_nodes = 64;
    int threads = 1;
    unsigned long seed = 20260101;
    long fuzz_size = 100000; ///< support-predicate fuzz corpus
    bool timing = true;      ///< false zeroes runtime_ms so reports are byte-identical
};

/// Parse "key = value" lines (# comments, blank lines allowed). Throws std::invalid_argument on unknown keys
/// or malformed values.
Config parse_config(const std::string& text, Config base = {});
Config load_config(const std::string& path, Config base = {});
/// Apply GLN_THREADS if set.
Config apply_environment(Config c);
void validate(const Config& c);
nlohmann::json to_json(const Config& c);

enum class Status { pass, fail, skip };
std::string to_string(Status s);

struct CaseResult
{
    std::string id;
    std::string anchor;
    int criterion = 0; ///< acceptance criterion 1..8, or 0 for supplementary cases
    Status status = Status::skip;
    double value = 0, reference = 0, error = 0;
    std::optional<std::string> exact_value, exact_reference; ///< "num/den" where the comparison is exact
    std::string detail;
    double runtime_ms = 0;
};

struct SuiteReport
{
    std::string suite;
    std::vector<CaseResult> cases;
    Config config;
    bool ok() const;
    std::size_t count(Status s) const;
};

/// Suite names accepted by run_suite, without "all".
const std::vector<std::string>& suite_names();

/// Runs the named suite ("all" concatenates every suite). Cases run on config.threads workers and are
/// reported in declaration order. Throws std::invalid_argument for an unknown name.
SuiteReport run_suite(const std::string& name, const Config& config);

nlohmann::json to_json(const SuiteReport& r);
std::string to_csv(const SuiteReport& r);

/// Number formatting used by every report: 17 significant digits.
std::string format_double(double x);
/// Pretty-printed JSON with floating values written by format_double.
std::string dump_json(const nlohmann::json& j);

} // namespace gln

#endif // GLN_SUITE_HPP
