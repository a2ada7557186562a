#include "bioproj/transform.hpp"

#include <cstdio>
#include <map>
#include <sstream>
#include <stdexcept>

#include "bioproj/cap.hpp"

namespace bioproj {

void TransformConfig::validate() const {
  if (input_dim == 0 || output_dim == 0) {
    throw std::invalid_argument("transform: input and output dimensions must be positive");
  }
  if (!(bernoulli_p > 0.0 && bernoulli_p < 1.0)) {
    throw std::invalid_argument("transform: p must lie in (0, 1)");
  }
  if (cap_k > output_dim) throw std::invalid_argument("transform: cap k exceeds output dimension");
}

std::string TransformConfig::to_text() const {
  char pbuf[32];
  std::snprintf(pbuf, sizeof pbuf, "%.17g", bernoulli_p);
  std::ostringstream out;
  out << "m=" << input_dim << '\n'
      << "n=" << output_dim << '\n'
      << "p=" << pbuf << '\n'
      << "k=" << cap_k << '\n'
      << "seed=" << seed << '\n';
  return out.str();
}

TransformConfig TransformConfig::from_text(const std::string& text) {
  std::map<std::string, std::string> kv;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) throw std::invalid_argument("config: expected key=value, got `" + line + "`");
    kv[line.substr(0, eq)] = line.substr(eq + 1);
  }
  const auto get = [&](const char* key) -> const std::string& {
    const auto it = kv.find(key);
    if (it == kv.end()) throw std::invalid_argument(std::string("config: missing key ") + key);
    return it->second;
  };
  const auto parse = [&](const char* key, auto convert) {
    const std::string& raw = get(key);
    try {
      std::size_t used = 0;
      auto v = convert(raw, &used);
      if (used != raw.size()) throw std::invalid_argument(raw);
      return v;
    } catch (const std::logic_error&) {
      throw std::invalid_argument(std::string("config: bad value for key ") + key);
    }
  };
  const auto as_u64 = [](const std::string& s, std::size_t* used) { return std::stoull(s, used); };
  const auto as_double = [](const std::string& s, std::size_t* used) { return std::stod(s, used); };
  TransformConfig c;
  c.input_dim = parse("m", as_u64);
  c.output_dim = parse("n", as_u64);
  c.bernoulli_p = parse("p", as_double);
  c.cap_k = parse("k", as_u64);
  c.seed = parse("seed", as_u64);
  c.validate();
  return c;
}

Transform::Transform(const TransformConfig& config, Exec exec)
    : config_(config),
      matrix_((config.validate(), sample_matrix(config.output_dim, config.input_dim,
                                                config.bernoulli_p, config.seed, exec))) {}

Transform::Transform(const TransformConfig& config, SparseSignMatrix matrix)
    : config_(config), matrix_(std::move(matrix)) {
  config_.validate();
  if (matrix_.rows() != config_.output_dim || matrix_.cols() != config_.input_dim) {
    throw std::invalid_argument("transform: matrix shape does not match config");
  }
}

std::vector<double> Transform::forward(std::span<const double> s) const {
  std::vector<double> y = bioproj::apply(matrix_, s);
  cap_in_place(y, config_.cap_k);
  return y;
}

RowMatrix Transform::forward_batch(const RowMatrix& batch, Exec exec) const {
  if (batch.rows == 0) return RowMatrix(0, config_.output_dim);
  if (batch.cols != config_.input_dim) throw std::invalid_argument("forward_batch: dimension mismatch");
  RowMatrix out(batch.rows, config_.output_dim,
                apply_batch(matrix_, batch.data, batch.rows, exec));
  for_each_index(out.rows, exec, [&](std::size_t i) { cap_in_place(out.row(i), config_.cap_k); });
  return out;
}

std::vector<std::vector<double>> Transform::forward_batch(
    const std::vector<std::vector<double>>& batch, Exec exec) const {
  RowMatrix packed(batch.size(), config_.input_dim);
  for (std::size_t i = 0; i < batch.size(); ++i) {
    if (batch[i].size() != config_.input_dim) {
      throw std::invalid_argument("forward_batch: ragged row " + std::to_string(i));
    }
    std::copy(batch[i].begin(), batch[i].end(), packed.row(i).begin());
  }
  const RowMatrix y = forward_batch(packed, exec);
  std::vector<std::vector<double>> out(y.rows);
  for (std::size_t i = 0; i < y.rows; ++i) out[i].assign(y.row(i).begin(), y.row(i).end());
  return out;
}

}  // namespace bioproj
