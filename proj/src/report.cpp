// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#include "suite_internal.hpp"

#include <algorithm>
#include <atomic>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace gln {

namespace {

std::string trim(const std::string& s)
{
    auto a = s.find_first_not_of(" \t\r");
    if (a == std::string::npos) return {};
    auto b = s.find_last_not_of(" \t\r");
    return s.substr(a, b - a + 1);
}

template <class T>
T parse_number(const std::string& key, const std::string& v)
{
    T out{};
    auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), out);
    if (ec != std::errc() || ptr != v.data() + v.size()) throw std::invalid_argument("config: bad value for " + key + ": '" + v + "'");
    return out;
}

double parse_double(const std::string& key, const std::string& v)
{
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (v.empty() || end != v.c_str() + v.size()) throw std::invalid_argument("config: bad value for " + key + ": '" + v + "'");
    return d;
}

bool parse_bool(const std::string& key, const std::string& v)
{
    if (v == "true" || v == "1") return true;
    if (v == "false" || v == "0") return false;
    throw std::invalid_argument("config: bad value for " + key + ": '" + v + "'");
}

void escape_into(std::string& out, const std::string& s)
{
    out += '"';
    for (char ch : s) {
        switch (ch) {
        case '"': out += "\\\""; break;
        case '\\': out += "\\\\"; break;
        case '\n': out += "\\n"; break;
        case '\t': out += "\\t"; break;
        default:
            if (static_cast<unsigned char>(ch) < 0x20) {
                char buf[8];
                std::snprintf(buf, sizeof buf, "\\u%04x", ch);
                out += buf;
            } else {
                out += ch;
            }
        }
    }
    out += '"';
}

void dump_into(std::string& out, const nlohmann::json& j, int indent)
{
    std::string pad(static_cast<std::size_t>(indent + 2), ' '), close(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
    case nlohmann::json::value_t::object: {
        if (j.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = j.begin(); it != j.end(); ++it) {
            if (!first) out += ",\n";
            first = false;
            out += pad;
            escape_into(out, it.key());
            out += ": ";
            dump_into(out, it.value(), indent + 2);
        }
        out += "\n" + close + "}";
        return;
    }
    case nlohmann::json::value_t::array: {
        if (j.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < j.size(); ++i) {
            if (i) out += ",\n";
            out += pad;
            dump_into(out, j[i], indent + 2);
        }
        out += "\n" + close + "]";
        return;
    }
    case nlohmann::json::value_t::number_float: out += format_double(j.get<double>()); return;
    case nlohmann::json::value_t::string: escape_into(out, j.get<std::string>()); return;
    default: out += j.dump(); return;
    }
}

} // namespace

std::string format_double(double x)
{
    if (std::isnan(x)) return "NaN";
    if (std::isinf(x)) return x > 0 ? "Infinity" : "-Infinity";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string dump_json(const nlohmann::json& j)
{
    std::string out;
    dump_into(out, j, 0);
    out += '\n';
    return out;
}

Config parse_config(const std::string& text, Config c)
{
    std::istringstream in(text);
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        auto hash = line.find('#');
        if (hash != std::string::npos) line.resize(hash);
        line = trim(line);
        if (line.empty()) continue;
        auto eq = line.find('=');
        if (eq == std::string::npos) throw std::invalid_argument("config line " + std::to_string(lineno) + ": expected key = value");
        std::string key = trim(line.substr(0, eq)), v = trim(line.substr(eq + 1));
        if (key == "default_p") c.default_p = parse_number<long>(key, v);
        else if (key == "default_n") c.default_n = parse_number<int>(key, v);
        else if (key == "lambda_bound") c.lambda_bound = parse_number<int>(key, v);
        else if (key == "truncation_depth_k") c.truncation_depth_k = parse_number<int>(key, v);
        else if (key == "tolerance") c.tolerance = parse_double(key, v);
        else if (key == "quadrature_nodes") c.quadrature_nodes = parse_number<int>(key, v);
        else if (key == "threads") c.threads = parse_number<int>(key, v);
        else if (key == "seed") c.seed = parse_number<unsigned long>(key, v);
        else if (key == "fuzz_size") c.fuzz_size = parse_number<long>(key, v);
        else if (key == "timing") c.timing = parse_bool(key, v);
        else throw std::invalid_argument("config line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
    validate(c);
    return c;
}

Config load_config(const std::string& path, Config base)
{
    std::ifstream f(path);
    if (!f) throw std::invalid_argument("cannot read config file " + path);
    std::stringstream ss;
    ss << f.rdbuf();
    return parse_config(ss.str(), base);
}

Config apply_environment(Config c)
{
    if (const char* t = std::getenv("GLN_THREADS"); t && *t) c.threads = parse_number<int>("GLN_THREADS", t);
    validate(c);
    return c;
}

void validate(const Config& c)
{
    auto bad = [](const std::string& m) { throw std::invalid_argument("config: " + m); };
    if (c.default_p < 2) bad("default_p must be a prime");
    for (long d = 2; d * d <= c.default_p; ++d)
        if (c.default_p % d == 0) bad("default_p must be a prime");
    if (c.default_n < 2 || c.default_n > 6) bad("default_n must be in [2, 6]");
    if (c.lambda_bound < 1) bad("lambda_bound must be positive");
    if (c.truncation_depth_k < 1) bad("truncation_depth_k must be positive");
    if (!(c.tolerance > 0)) bad("tolerance must be positive");
    if (c.quadrature_nodes < 2) bad("quadrature_nodes must be >= 2");
    if (c.threads < 1) bad("threads must be >= 1");
    if (c.fuzz_size < 1) bad("fuzz_size must be positive");
}

nlohmann::json to_json(const Config& c)
{
    return {{"default_p", c.default_p},
            {"default_n", c.default_n},
            {"lambda_bound", c.lambda_bound},
            {"truncation_depth_k", c.truncation_depth_k},
            {"tolerance", c.tolerance},
            {"quadrature_nodes", c.quadrature_nodes},
            {"threads", c.threads},
            {"seed", c.seed},
            {"fuzz_size", c.fuzz_size},
            {"timing", c.timing}};
}

std::string to_string(Status s)
{
    switch (s) {
    case Status::pass: return "pass";
    case Status::fail: return "fail";
    case Status::skip: return "skip";
    }
    return "?";
}

bool SuiteReport::ok() const { return count(Status::fail) == 0; }

std::size_t SuiteReport::count(Status s) const
{
    return static_cast<std::size_t>(std::count_if(cases.begin(), cases.end(), [&](const CaseResult& c) { return c.status == s; }));
}

const std::vector<std::string>& suite_names()
{
    static const std::vector<std::string> names{"symfun", "coset", "iwasawa", "whittaker", "oldforms", "plancherel"};
    return names;
}

SuiteReport run_suite(const std::string& name, const Config& config)
{
    validate(config);
    std::vector<suites::CaseSpec> specs;
    auto add = [&](std::vector<suites::CaseSpec> v) { specs.insert(specs.end(), std::make_move_iterator(v.begin()), std::make_move_iterator(v.end())); };
    bool all = name == "all";
    if (all || name == "symfun") add(suites::symfun_cases(config));
    if (all || name == "coset") add(suites::coset_cases(config));
    if (all || name == "iwasawa") add(suites::iwasawa_cases(config));
    if (all || name == "whittaker") add(suites::whittaker_cases(config));
    if (all || name == "oldforms") add(suites::oldforms_cases(config));
    if (all || name == "plancherel") add(suites::plancherel_cases(config));
    if (specs.empty()) throw std::invalid_argument("unknown suite '" + name + "'");

    SuiteReport rep;
    rep.suite = name;
    rep.config = config;
    rep.cases.resize(specs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i; (i = next.fetch_add(1)) < specs.size();) {
            auto t0 = std::chrono::steady_clock::now();
            CaseResult r;
            try {
                r = specs[i].run();
            } catch (const std::exception& e) {
                r.status = Status::fail;
                r.detail = std::string("exception: ") + e.what();
            }
            r.id = specs[i].id;
            r.anchor = specs[i].anchor;
            r.criterion = specs[i].criterion;
            r.runtime_ms = config.timing ? std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count() : 0.0;
            rep.cases[i] = std::move(r);
        }
    };
    int T = std::max(1, std::min<int>(config.threads, static_cast<int>(specs.size())));
    std::vector<std::thread> pool;
    for (int t = 1; t < T; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    return rep;
}

nlohmann::json to_json(const SuiteReport& r)
{
    nlohmann::json cases = nlohmann::json::array();
    for (const auto& c : r.cases) {
        nlohmann::json j{{"id", c.id},
                         {"anchor", c.anchor},
                         {"criterion", c.criterion},
                         {"status", to_string(c.status)},
                         {"value", c.value},
                         {"reference", c.reference},
                         {"abs_error", c.error},
                         {"runtime_ms", c.runtime_ms}};
        if (c.exact_value) j["exact_value"] = *c.exact_value;
        if (c.exact_reference) j["exact_reference"] = *c.exact_reference;
        if (!c.detail.empty()) j["detail"] = c.detail;
        cases.push_back(std::move(j));
    }
    return {{"suite", r.suite},
            {"config", to_json(r.config)},
            {"summary", {{"pass", r.count(Status::pass)}, {"fail", r.count(Status::fail)}, {"skip", r.count(Status::skip)}}},
            {"cases", cases}};
}

std::string to_csv(const SuiteReport& r)
{
    std::string out = "id,anchor,criterion,status,value,reference,abs_error,runtime_ms\n";
    auto quote = [](const std::string& s) {
        std::string q = "\"";
        for (char ch : s) q += ch == '"' ? std::string("\"\"") : std::string(1, ch);
        return q + "\"";
    };
    for (const auto& c : r.cases)
        out += quote(c.id) + "," + quote(c.anchor) + "," + std::to_string(c.criterion) + "," + to_string(c.status) + "," + format_double(c.value) +
               "," + format_double(c.reference) + "," + format_double(c.error) + "," + format_double(c.runtime_ms) + "\n";
    return out;
}

} // namespace gln
