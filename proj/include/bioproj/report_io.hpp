#pragma once

#include <string>

#include "json.hpp"

#include "bioproj/mc_verify.hpp"

namespace bioproj {

/// Write to `path.tmp` then rename over `path`.
void atomic_write(const std::string& path, const std::string& content);

/// Shortest text that round-trips (%.17g); "nan"/"inf" spelled out.
std::string format_real(double v);

/// One CSV row per grid point, preceded by `#<header>` when header is set.
std::string suite_to_csv(const mc::SuiteResult& result, const std::string& header = {});

/// JSON summary: invocation, config echo, records, all_pass. No timing, so
/// reruns with the same seed are byte-identical.
nlohmann::ordered_json suite_to_json(const mc::SuiteResult& result, const mc::McConfig& cfg,
                                     const std::string& invocation);

}  // namespace bioproj
