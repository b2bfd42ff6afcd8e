#include "metachain/chain.hpp"

#include <algorithm>
#include <deque>
#include <map>

#include "metachain/errors.hpp"

namespace metachain {

std::optional<int> Chain::find(std::string_view name) const {
  auto it = index_.find(std::string(name));
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

int Chain::index(std::string_view name) const {
  auto i = find(name);
  if (!i) throw Error(ErrorCode::kUnknownState, "unknown state \"" + std::string(name) + "\"");
  return *i;
}

Weight Chain::rate(int x, int y) const {
  auto row = out(x);
  auto it = std::lower_bound(row.begin(), row.end(), y,
                             [](const Transition& t, int v) { return t.to < v; });
  if (it == row.end() || it->to != y) return std::nullopt;
  return it->rate;
}

void Chain::validate() const {
  const int n = static_cast<int>(size());
  if (basis_.empty()) throw Error(ErrorCode::kEmptyScaleBasis, "the scale basis is empty");
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    if (sgn(basis_[j].exponent) <= 0)
      throw Error(ErrorCode::kInvalidModel, "scale \"" + basis_[j].name + "\" must have a positive exponent");
    if (j > 0 && basis_[j].exponent <= basis_[j - 1].exponent)
      throw Error(ErrorCode::kInvalidModel, "scale exponents must be strictly increasing at \"" + basis_[j].name + "\"");
  }
  if (n < 2) throw Error(ErrorCode::kInvalidModel, "a chain needs at least two states");

  bool has_order_zero = false;
  for (int x = 0; x < n; ++x) {
    for (const auto& t : out(x)) {
      if (sgn(t.rate.order()) < 0)
        throw Error(ErrorCode::kInvalidModel, "edge " + name(x) + " -> " + name(t.to) + " has negative order " +
                                                  format_rational(t.rate.order()));
      if (sgn(t.rate.order()) == 0) has_order_zero = true;
      if (!rate(t.to, x))
        throw Error(ErrorCode::kAsymmetricSupport,
                    "edge " + name(x) + " -> " + name(t.to) + " has no reverse edge " + name(t.to) + " -> " + name(x));
    }
  }
  if (!has_order_zero) throw Error(ErrorCode::kInvalidModel, "no rate has order 0");

  std::vector<char> seen(static_cast<std::size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  while (!stack.empty()) {
    const int x = stack.back();
    stack.pop_back();
    for (const auto& t : out(x))
      if (!seen[static_cast<std::size_t>(t.to)]) {
        seen[static_cast<std::size_t>(t.to)] = 1;
        stack.push_back(t.to);
      }
  }
  for (int x = 0; x < n; ++x)
    if (!seen[static_cast<std::size_t>(x)])
      throw Error(ErrorCode::kNotIrreducible, "no path between " + name(0) + " and " + name(x));
}

Chain::Builder::Builder(std::vector<ScaleSpec> basis, std::vector<std::string> names)
    : basis_(std::move(basis)), names_(std::move(names)), out_(names_.size()) {}

void Chain::Builder::set_out(int x, std::vector<Transition> transitions) {
  out_[static_cast<std::size_t>(x)] = std::move(transitions);
}

Chain Chain::Builder::build() && {
  Chain c;
  c.basis_ = std::move(basis_);
  c.names_ = std::move(names_);
  c.index_.reserve(c.names_.size());
  for (std::size_t i = 0; i < c.names_.size(); ++i) {
    if (!c.index_.emplace(c.names_[i], static_cast<int>(i)).second)
      throw Error(ErrorCode::kInvalidModel, "duplicate state \"" + c.names_[i] + "\"");
  }
  c.offsets_.assign(c.names_.size() + 1, 0);
  std::size_t total = 0;
  for (auto& row : out_) total += row.size();
  c.transitions_.reserve(total);
  for (std::size_t x = 0; x < out_.size(); ++x) {
    auto& row = out_[x];
    std::sort(row.begin(), row.end(), [](const Transition& a, const Transition& b) { return a.to < b.to; });
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k].to == static_cast<int>(x))
        throw Error(ErrorCode::kInvalidModel, "self-loop at state \"" + c.names_[x] + "\"");
      if (k > 0 && row[k].to == row[k - 1].to)
        throw Error(ErrorCode::kInvalidModel,
                    "duplicate edge " + c.names_[x] + " -> " + c.names_[static_cast<std::size_t>(row[k].to)]);
      c.transitions_.push_back(std::move(row[k]));
    }
    c.offsets_[x + 1] = c.transitions_.size();
    std::vector<Transition>().swap(row);
  }
  c.validate();
  return c;
}

Chain build_chain(const ModelSpec& spec) {
  if (spec.scales.empty()) throw Error(ErrorCode::kEmptyScaleBasis, "the scale basis is empty");
  std::unordered_map<std::string, int> index;
  for (std::size_t i = 0; i < spec.states.size(); ++i)
    if (!index.emplace(spec.states[i], static_cast<int>(i)).second)
      throw Error(ErrorCode::kInvalidModel, "duplicate state \"" + spec.states[i] + "\"");

  std::vector<std::vector<Transition>> out(spec.states.size());
  for (const auto& e : spec.edges) {
    const std::string label = "edge " + e.from + " -> " + e.to;
    auto f = index.find(e.from);
    auto t = index.find(e.to);
    if (f == index.end()) throw Error(ErrorCode::kUnknownState, label + ": unknown state \"" + e.from + "\"");
    if (t == index.end()) throw Error(ErrorCode::kUnknownState, label + ": unknown state \"" + e.to + "\"");
    if (sgn(e.coeff) <= 0)
      throw Error(ErrorCode::kInvalidModel, label + ": coefficient " + format_rational(e.coeff) + " is not positive");
    Rational order;
    if (e.order && !e.exponents.empty())
      throw Error(ErrorCode::kInvalidModel, label + ": give either order or exponents, not both");
    if (e.order) {
      order = *e.order;
    } else {
      if (e.exponents.size() != spec.scales.size())
        throw Error(ErrorCode::kInvalidModel, label + ": exponent vector length " + std::to_string(e.exponents.size()) +
                                                  " does not match " + std::to_string(spec.scales.size()) + " scales");
      order = 0;
      for (std::size_t j = 0; j < e.exponents.size(); ++j) order += e.exponents[j] * spec.scales[j].exponent;
    }
    out[static_cast<std::size_t>(f->second)].push_back({t->second, ScaledQuantity(e.coeff, order)});
  }

  Chain::Builder b(spec.scales, spec.states);
  for (std::size_t x = 0; x < out.size(); ++x) b.set_out(static_cast<int>(x), std::move(out[x]));
  return std::move(b).build();
}

ModelSpec to_model_spec(const Chain& chain) {
  ModelSpec spec;
  spec.scales = chain.basis();
  spec.states = chain.names();
  for (int x = 0; x < static_cast<int>(chain.size()); ++x)
    for (const auto& t : chain.out(x))
      spec.edges.push_back({chain.name(x), chain.name(t.to), t.rate.coeff(), t.rate.order(), {}});
  return spec;
}

std::uint64_t fingerprint(const Chain& chain) {
  std::uint64_t h = 1469598103934665603ULL;
  auto feed = [&h](std::string_view s) {
    for (unsigned char c : s) {
      h ^= c;
      h *= 1099511628211ULL;
    }
    h ^= 0x0a;
    h *= 1099511628211ULL;
  };
  for (const auto& s : chain.basis()) {
    feed(s.name);
    feed(format_rational(s.exponent));
  }
  for (const auto& n : chain.names()) feed(n);
  for (int x = 0; x < static_cast<int>(chain.size()); ++x)
    for (const auto& t : chain.out(x)) {
      feed(chain.name(x));
      feed(chain.name(t.to));
      feed(format_rational(t.rate.coeff()));
      feed(format_rational(t.rate.order()));
    }
  return h;
}

namespace {

std::vector<int> path_to_root(const std::vector<int>& parent, int x) {
  std::vector<int> p{x};
  while (parent[static_cast<std::size_t>(p.back())] >= 0) p.push_back(parent[static_cast<std::size_t>(p.back())]);
  return p;
}

}  // namespace

StationaryMeasure stationary_measure(const Chain& chain, int reference, TreeOrder order) {
  const std::size_t n = chain.size();
  std::vector<std::optional<ScaledQuantity>> mu(n);
  std::vector<int> parent(n, -1);
  std::deque<int> frontier{reference};
  mu[static_cast<std::size_t>(reference)] = ScaledQuantity::one();
  while (!frontier.empty()) {
    int x;
    if (order == TreeOrder::kBreadthFirst) {
      x = frontier.front();
      frontier.pop_front();
    } else {
      x = frontier.back();
      frontier.pop_back();
    }
    const auto row = chain.out(x);
    const auto visit = [&](const Transition& t) {
      const auto y = static_cast<std::size_t>(t.to);
      if (mu[y]) return;
      auto back = chain.rate(t.to, x);
      if (!back) throw Error(ErrorCode::kAsymmetricSupport, "edge " + chain.name(x) + " -> " + chain.name(t.to));
      mu[y] = div(mul(*mu[static_cast<std::size_t>(x)], t.rate), *back);
      parent[y] = x;
      frontier.push_back(t.to);
    };
    if (order == TreeOrder::kBreadthFirst)
      for (const auto& t : row) visit(t);
    else
      for (auto it = row.rbegin(); it != row.rend(); ++it) visit(*it);
  }

  StationaryMeasure result;
  result.reference = reference;
  result.mu.reserve(n);
  for (std::size_t x = 0; x < n; ++x) {
    if (!mu[x]) throw Error(ErrorCode::kNotIrreducible, "no path between " + chain.name(reference) + " and " + chain.name(static_cast<int>(x)));
    result.mu.push_back(std::move(*mu[x]));
  }

  for (int x = 0; x < static_cast<int>(n); ++x) {
    for (const auto& t : chain.out(x)) {
      if (t.to < x) continue;
      const auto lhs = mul(result.mu[static_cast<std::size_t>(x)], t.rate);
      const auto rhs = mul(result.mu[static_cast<std::size_t>(t.to)], *chain.rate(t.to, x));
      if (lhs == rhs) continue;
      auto px = path_to_root(parent, x);
      auto py = path_to_root(parent, t.to);
      while (px.size() > 1 && py.size() > 1 && px[px.size() - 2] == py[py.size() - 2]) {
        px.pop_back();
        py.pop_back();
      }
      std::string cycle;
      for (int v : px) cycle += chain.name(v) + " -> ";
      for (auto it = py.rbegin() + 1; it != py.rend(); ++it) cycle += chain.name(*it) + " -> ";
      cycle += chain.name(x);
      throw Error(ErrorCode::kNotReversible, "rate-ratio product differs from 1 on cycle " + cycle);
    }
  }
  return result;
}

Weight Conductance::g(int x, int y) const {
  for (const auto& inc : around(x))
    if (inc.other == y) return bonds_[static_cast<std::size_t>(inc.bond)].g;
  return std::nullopt;
}

Conductance conductances(const Chain& chain, const StationaryMeasure& mu) {
  Conductance c;
  const std::size_t n = chain.size();
  std::vector<std::size_t> degree(n, 0);
  for (int x = 0; x < static_cast<int>(n); ++x) {
    for (const auto& t : chain.out(x)) {
      if (t.to < x) continue;
      ScaledQuantity g = mul(mu.mu[static_cast<std::size_t>(x)], t.rate);
      if (!(g == mul(mu.mu[static_cast<std::size_t>(t.to)], *chain.rate(t.to, x))))
        throw Error(ErrorCode::kInternal, "asymmetric conductance on " + chain.name(x) + " -- " + chain.name(t.to));
      c.bonds_.push_back({x, t.to, std::move(g)});
      ++degree[static_cast<std::size_t>(x)];
      ++degree[static_cast<std::size_t>(t.to)];
    }
  }
  c.offsets_.assign(n + 1, 0);
  for (std::size_t x = 0; x < n; ++x) c.offsets_[x + 1] = c.offsets_[x] + degree[x];
  c.incidence_.resize(c.offsets_[n]);
  std::vector<std::size_t> fill(c.offsets_.begin(), c.offsets_.end() - 1);
  for (std::size_t k = 0; k < c.bonds_.size(); ++k) {
    const auto& b = c.bonds_[k];
    c.incidence_[fill[static_cast<std::size_t>(b.a)]++] = {b.b, static_cast<int>(k)};
    c.incidence_[fill[static_cast<std::size_t>(b.b)]++] = {b.a, static_cast<int>(k)};
  }
  return c;
}

}  // namespace metachain
