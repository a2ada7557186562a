#include "bioproj/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>

namespace bioproj {
namespace {

nlohmann::ordered_json real_or_null(double v) {
  if (std::isnan(v)) return nullptr;
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

}  // namespace

void atomic_write(const std::string& path, const std::string& content) {
  const std::string tmp = path + ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp);
    out << content;
    if (!out.flush()) throw std::runtime_error("write failed for " + tmp);
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw std::runtime_error("cannot rename " + tmp + " to " + path + ": " + ec.message());
}

std::string format_real(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string suite_to_csv(const mc::SuiteResult& result, const std::string& header) {
  std::string out;
  if (!header.empty()) out += "#" + header + "\n";
  out += "suite,label,m,n,p,epsilon,param,trials,successes,estimate,stderr,bound,max_value,pass\n";
  for (const auto& r : result.records) {
    const auto blank_nan = [](double v) { return std::isnan(v) ? std::string() : format_real(v); };
    out += result.suite + ',' + r.label + ',' + std::to_string(r.m) + ',' + std::to_string(r.n) + ',' +
           blank_nan(r.p) + ',' + blank_nan(r.epsilon) + ',' + blank_nan(r.param) + ',' +
           std::to_string(r.trials) + ',' + std::to_string(r.successes) + ',' +
           format_real(r.estimate) + ',' + format_real(r.std_error) + ',' + blank_nan(r.bound) +
           ',' + blank_nan(r.max_value) + ',' + (r.pass ? "true" : "false") + '\n';
  }
  return out;
}

nlohmann::ordered_json suite_to_json(const mc::SuiteResult& result, const mc::McConfig& cfg,
                                     const std::string& invocation) {
  nlohmann::ordered_json j;
  j["invocation"] = invocation;
  j["suite"] = result.suite;
  j["config"] = {{"trials", cfg.trials},   {"seed", cfg.seed},       {"p", cfg.p},
                 {"epsilon", cfg.epsilon}, {"m_grid", cfg.m_grid}, {"n_grid", cfg.n_grid}};
  auto& records = j["records"] = nlohmann::ordered_json::array();
  for (const auto& r : result.records) {
    records.push_back({{"label", r.label},
                       {"m", r.m},
                       {"n", r.n},
                       {"p", real_or_null(r.p)},
                       {"epsilon", real_or_null(r.epsilon)},
                       {"param", real_or_null(r.param)},
                       {"trials", r.trials},
                       {"successes", r.successes},
                       {"estimate", real_or_null(r.estimate)},
                       {"stderr", real_or_null(r.std_error)},
                       {"bound", real_or_null(r.bound)},
                       {"max_value", real_or_null(r.max_value)},
                       {"pass", r.pass}});
  }
  j["all_pass"] = result.all_pass();
  return j;
}

}  // namespace bioproj
