// Copyright (c) 2026 The gln-local authors.
// SPDX-License-Identifier: MIT

#ifndef GLN_SRC_SUITE_INTERNAL_HPP
#define GLN_SRC_SUITE_INTERNAL_HPP

#include <gln/suite.hpp>

#include <cmath>
#include <functional>
#include <string>
#include <utility>
#include <vector>

namespace gln::suites {

struct CaseSpec
{
    std::string id, anchor;
    int criterion = 0;
    std::function<CaseResult()> run;
};

/// Numeric comparison: pass iff error <= tol and everything is finite.
inline CaseResult numeric(double value, double reference, double error, double tol, std::string detail = {})
{
    CaseResult r;
    r.value = value;
    r.reference = reference;
    r.error = error;
    bool finite = std::isfinite(value) && std::isfinite(reference) && std::isfinite(error);
    r.status = finite && error <= tol ? Status::pass : Status::fail;
    r.detail = std::move(detail);
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += "tol " + format_double(tol);
    return r;
}

/// Exact check over a corpus: value = instances that agree, reference = instances checked, error = mismatches.
inline CaseResult exact(long agreed, long checked, std::string detail = {})
{
    CaseResult r;
    r.value = static_cast<double>(agreed);
    r.reference = static_cast<double>(checked);
    r.error = static_cast<double>(checked - agreed);
    r.exact_value = std::to_string(agreed);
    r.exact_reference = std::to_string(checked);
    r.status = checked > 0 && agreed == checked ? Status::pass : Status::fail;
    r.detail = std::move(detail);
    return r;
}

std::vector<CaseSpec> symfun_cases(const Config& c);
std::vector<CaseSpec> coset_cases(const Config& c);
std::vector<CaseSpec> iwasawa_cases(const Config& c);
std::vector<CaseSpec> whittaker_cases(const Config& c);
std::vector<CaseSpec> oldforms_cases(const Config& c);
std::vector<CaseSpec> plancherel_cases(const Config& c);

} // namespace gln::suites

#endif // GLN_SRC_SUITE_INTERNAL_HPP
