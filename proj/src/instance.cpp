#include "lagrising/instance.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "json.hpp"
#include "lagrising/errors.hpp"
#include "lagrising/rng.hpp"

namespace lagrising {

Instance Instance::make(std::size_t n, std::string name) {
  if (n < 1) throw ArgumentError("instance needs at least one spin");
  Instance inst;
  inst.name = std::move(name);
  inst.n = n;
  inst.J = Mat(n, n);
  return inst;
}

void Instance::set_coupling(std::size_t i, std::size_t j, double w) {
  if (i >= n || j >= n) throw DimensionError("set_coupling: index out of range");
  if (i == j) throw ArgumentError("set_coupling: diagonal couplings are not allowed");
  J(i, j) = w;
  J(j, i) = w;
}

std::size_t Instance::edge_count() const {
  std::size_t count = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (J(i, j) != 0.0) ++count;
  return count;
}

double Instance::total_edge_weight() const {
  double w = 0.0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) w += J(i, j);
  return w;
}

bool Instance::has_field() const {
  if (!h) return false;
  return std::any_of(h->begin(), h->end(), [](double v) { return v != 0.0; });
}

namespace {

std::vector<std::string> split_ws(const std::string& line) {
  std::vector<std::string> out;
  std::istringstream in(line);
  std::string tok;
  while (in >> tok) out.push_back(tok);
  return out;
}

bool is_comment_or_blank(const std::string& line) {
  for (char c : line) {
    if (c == '#') return true;
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;  // blank
}

long parse_long(const std::string& tok, const char* what) {
  std::size_t pos = 0;
  long v = 0;
  try {
    v = std::stol(tok, &pos);
  } catch (...) {
    throw FormatError(std::string("expected integer ") + what + ", got '" + tok + "'");
  }
  if (pos != tok.size())
    throw FormatError(std::string("trailing characters in ") + what + " '" + tok + "'");
  return v;
}

double parse_weight(const std::string& tok) {
  std::size_t pos = 0;
  double v = 0.0;
  try {
    v = std::stod(tok, &pos);
  } catch (...) {
    throw FormatError("expected numeric weight, got '" + tok + "'");
  }
  if (pos != tok.size()) throw FormatError("trailing characters in weight '" + tok + "'");
  if (!std::isfinite(v)) throw FormatError("non-finite weight '" + tok + "'");
  return v;
}

std::string format_weight(double w) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", w);
  return buf;
}

}  // namespace

Instance parse_gset(const std::string& text, std::string name) {
  std::istringstream in(text);
  std::string line;

  long n = 0, m = 0;
  bool have_header = false;
  Instance inst;
  std::vector<bool> seen;
  long edges = 0;

  while (std::getline(in, line)) {
    if (is_comment_or_blank(line)) continue;
    auto toks = split_ws(line);
    if (!have_header) {
      if (toks.size() != 2) throw FormatError("header must be 'n m'");
      n = parse_long(toks[0], "vertex count");
      m = parse_long(toks[1], "edge count");
      if (n < 1) throw FormatError("vertex count must be at least 1");
      if (m < 0) throw FormatError("edge count must be nonnegative");
      inst = Instance::make(static_cast<std::size_t>(n), std::move(name));
      seen.assign(static_cast<std::size_t>(n) * n, false);
      have_header = true;
      continue;
    }
    if (edges >= m) throw FormatError("more edge lines than declared");
    if (toks.size() != 3) throw FormatError("edge line must be 'u v w'");
    long u = parse_long(toks[0], "vertex");
    long v = parse_long(toks[1], "vertex");
    double w = parse_weight(toks[2]);
    if (u < 1 || u > n || v < 1 || v > n)
      throw FormatError("vertex index out of range: " + line);
    if (u == v) throw FormatError("self-loop at vertex " + std::to_string(u));
    std::size_t a = static_cast<std::size_t>(u - 1), b = static_cast<std::size_t>(v - 1);
    if (seen[a * n + b]) throw FormatError("duplicate edge " + std::to_string(u) + " " + std::to_string(v));
    seen[a * n + b] = seen[b * n + a] = true;
    inst.J(a, b) = w;
    inst.J(b, a) = w;
    ++edges;
  }
  if (!have_header) throw FormatError("empty document");
  if (edges != m)
    throw FormatError("declared " + std::to_string(m) + " edges, found " + std::to_string(edges));
  return inst;
}

std::string to_gset(const Instance& inst) {
  if (inst.has_field()) throw UnsupportedError("gset format has no field column");
  std::ostringstream out;
  out << inst.n << ' ' << inst.edge_count() << '\n';
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = i + 1; j < inst.n; ++j)
      if (inst.J(i, j) != 0.0)
        out << (i + 1) << ' ' << (j + 1) << ' ' << format_weight(inst.J(i, j)) << '\n';
  return out.str();
}

std::string to_json(const Instance& inst) {
  nlohmann::ordered_json doc;
  doc["name"] = inst.name;
  doc["n"] = inst.n;
  auto edges = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = i + 1; j < inst.n; ++j)
      if (inst.J(i, j) != 0.0) edges.push_back({i, j, inst.J(i, j)});
  doc["edges"] = std::move(edges);
  if (inst.h) doc["h"] = *inst.h;
  doc["offset"] = inst.offset;
  return doc.dump(2);
}

Instance instance_from_json(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad instance JSON: ") + e.what());
  }
  try {
    Instance inst = Instance::make(doc.at("n").get<std::size_t>(),
                                   doc.value("name", std::string{}));
    for (const auto& e : doc.at("edges")) {
      std::size_t i = e.at(0).get<std::size_t>();
      std::size_t j = e.at(1).get<std::size_t>();
      if (i >= inst.n || j >= inst.n || i == j)
        throw FormatError("bad edge indices in instance JSON");
      inst.J(i, j) = inst.J(j, i) = e.at(2).get<double>();
    }
    if (doc.contains("h")) {
      auto h = doc["h"].get<std::vector<double>>();
      if (h.size() != inst.n) throw FormatError("field length does not match n");
      inst.h = std::move(h);
    }
    inst.offset = doc.value("offset", 0.0);
    return inst;
  } catch (const nlohmann::json::exception& e) {
    throw FormatError(std::string("bad instance JSON: ") + e.what());
  }
}

EnergyReport energy(const Instance& inst, const SpinConfig& s) {
  if (s.size() != inst.n) throw DimensionError("energy: spin count does not match instance");
  double edge_sum = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = i + 1; j < inst.n; ++j)
      edge_sum += inst.J(i, j) * s[i] * s[j];
  double field = 0.0;
  if (inst.h)
    for (std::size_t i = 0; i < inst.n; ++i) field += (*inst.h)[i] * s[i];

  EnergyReport rep;
  rep.edge_sum = edge_sum;
  rep.energy = 2.0 * edge_sum + field + inst.offset;
  rep.cut = (inst.total_edge_weight() - edge_sum) / 2.0;
  rep.offset_included = true;
  return rep;
}

double cut_value(const Instance& inst, const SpinConfig& s) {
  if (inst.has_field()) throw UnsupportedError("cut_value: instance has a field");
  if (s.size() != inst.n) throw DimensionError("cut_value: spin count does not match instance");
  double cut = 0.0;
  for (std::size_t i = 0; i < inst.n; ++i)
    for (std::size_t j = i + 1; j < inst.n; ++j)
      cut += inst.J(i, j) * (1.0 - s[i] * s[j]) / 2.0;
  return cut;
}

Instance absorb_field(const Instance& inst) {
  if (!inst.has_field())
    throw UnsupportedError("absorb_field: instance has no field to absorb");
  Instance out = Instance::make(inst.n + 1, inst.name);
  for (std::size_t i = 0; i < inst.n; ++i) {
    out.J(0, i + 1) = out.J(i + 1, 0) = (*inst.h)[i] / 2.0;
    for (std::size_t j = i + 1; j < inst.n; ++j)
      out.J(i + 1, j + 1) = out.J(j + 1, i + 1) = inst.J(i, j);
  }
  out.offset = inst.offset;
  return out;
}

std::pair<SpinConfig, double> brute_force_ground(const Instance& inst) {
  if (inst.n > 24)
    throw SizeGuardError("brute_force_ground: n = " + std::to_string(inst.n) +
                         " exceeds the n <= 24 guard");
  const std::size_t n = inst.n;
  SpinConfig s(n, -1);

  // local fields m_k = sum_j J[k][j] s_j, kept incrementally under spin flips
  std::vector<double> local(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double acc = 0.0;
    for (std::size_t j = 0; j < n; ++j) acc += inst.J(k, j) * s[j];
    local[k] = acc;
  }
  double e = energy(inst, s).energy;

  SpinConfig best = s;
  double best_e = e;
  auto lex_less = [](const SpinConfig& lhs, const SpinConfig& rhs) {
    return std::lexicographical_compare(lhs.begin(), lhs.end(), rhs.begin(), rhs.end());
  };

  // Gray-code walk over all 2^n configurations: one spin flip per step.
  const std::uint64_t total = 1ull << n;
  for (std::uint64_t step = 1; step < total; ++step) {
    unsigned bit = static_cast<unsigned>(__builtin_ctzll(step));
    std::size_t k = static_cast<std::size_t>(bit);
    double sk = s[k];
    e += -4.0 * sk * local[k];
    if (inst.h) e += -2.0 * (*inst.h)[k] * sk;
    for (std::size_t i = 0; i < n; ++i) local[i] -= 2.0 * sk * inst.J(i, k);
    s[k] = -s[k];

    if (e < best_e) {
      best_e = e;
      best = s;
    } else if (e == best_e && lex_less(s, best)) {
      best = s;
    }
  }
  // recompute directly so rounding drift from the incremental walk cannot leak out
  return {best, energy(inst, best).energy};
}

SpinConfig round_to_spins(std::span<const double> x) {
  SpinConfig s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] >= 0.0 ? 1 : -1;
  return s;
}

SpinConfig round_to_spins(std::span<const std::complex<double>> x) {
  SpinConfig s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i].real() >= 0.0 ? 1 : -1;
  return s;
}

SpinConfig round_phases_to_spins(std::span<const double> phi) {
  SpinConfig s(phi.size());
  for (std::size_t i = 0; i < phi.size(); ++i) s[i] = std::cos(phi[i]) >= 0.0 ? 1 : -1;
  return s;
}

Instance random_instance(std::size_t n, double density, std::span<const double> weights,
                         std::uint64_t seed) {
  if (weights.empty()) throw ArgumentError("random_instance: empty weight set");
  if (density < 0.0 || density > 1.0)
    throw ArgumentError("random_instance: density must be in [0, 1]");
  Instance inst = Instance::make(n, "random-n" + std::to_string(n) + "-s" + std::to_string(seed));
  Rng rng(seed);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (rng.bernoulli(density)) {
        double w = weights[rng.index(weights.size())];
        inst.J(i, j) = inst.J(j, i) = w;
      }
  return inst;
}

}  // namespace lagrising
