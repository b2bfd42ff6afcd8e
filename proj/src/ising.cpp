#include "metachain/ising.hpp"

#include <algorithm>
#include <set>

#include "metachain/errors.hpp"
#include "metachain/parallel.hpp"

namespace metachain {

namespace {

struct Geometry {
  int L;
  int site(int r, int c) const { return ((r % L + L) % L) * L + ((c % L + L) % L); }
  std::array<int, 4> nbrs(int s) const {
    const int r = s / L;
    const int c = s % L;
    return {site(r - 1, c), site(r + 1, c), site(r, c - 1), site(r, c + 1)};
  }
};

bool plus(Config s, int site) { return (s >> site) & 1U; }
Config flip(Config s, int site) { return s ^ (Config{1} << site); }

int plus_neighbours(const Geometry& g, Config s, int site) {
  int k = 0;
  for (int y : g.nbrs(site)) k += plus(s, y) ? 1 : 0;
  return k;
}

// Start of a cyclic interval, or -1 if the index set is not one.
int interval_start(const std::vector<char>& in, int L, int count) {
  if (count == L) return 0;
  int start = -1;
  for (int i = 0; i < L; ++i)
    if (in[static_cast<std::size_t>(i)] && !in[static_cast<std::size_t>((i + L - 1) % L)]) {
      if (start >= 0) return -1;
      start = i;
    }
  return start;
}

std::vector<int> rect_cells(const Geometry& g, int r0, int c0, int h, int w) {
  std::vector<int> v;
  for (int i = 0; i < h; ++i)
    for (int j = 0; j < w; ++j) v.push_back(g.site(r0 + i, c0 + j));
  return v;
}

// The sides of a rectangle having length `len`, as lists of cells.
std::vector<std::vector<int>> sides_of_length(const Geometry& g, const Droplet& d, int len) {
  std::vector<std::vector<int>> sides;
  if (d.height == len) {
    std::vector<int> left, right;
    for (int i = 0; i < d.height; ++i) {
      left.push_back(g.site(d.row0 + i, d.col0));
      right.push_back(g.site(d.row0 + i, d.col0 + d.width - 1));
    }
    sides.push_back(left);
    sides.push_back(right);
  }
  if (d.width == len) {
    std::vector<int> top, bottom;
    for (int j = 0; j < d.width; ++j) {
      top.push_back(g.site(d.row0, d.col0 + j));
      bottom.push_back(g.site(d.row0 + d.height - 1, d.col0 + j));
    }
    sides.push_back(top);
    sides.push_back(bottom);
  }
  return sides;
}

std::vector<Config> sorted_unique(std::vector<Config> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

}  // namespace

IsingModel make_ising(int L, const Rational& h) {
  if (L < 2 || L > 8) throw Error(ErrorCode::kInvalidField, "torus side must lie in [2, 8]");
  if (sgn(h) <= 0 || h >= 2) throw Error(ErrorCode::kInvalidField, "field must satisfy 0 < h < 2");
  Rational q = Rational(2) / h;
  if (q.get_den() == 1) throw Error(ErrorCode::kInvalidField, "2/h must not be an integer");
  IsingModel m;
  m.L = L;
  m.h = h;
  mpz_class fl;
  mpz_fdiv_q(fl.get_mpz_t(), q.get_num().get_mpz_t(), q.get_den().get_mpz_t());
  m.n0 = static_cast<int>(fl.get_si());
  m.in_regime = L > (m.n0 + 1) * (m.n0 + 1) + 1;
  return m;
}

std::string config_name(const IsingModel& m, Config s) {
  std::string out(static_cast<std::size_t>(m.sites()), '-');
  for (int i = 0; i < m.sites(); ++i)
    if (plus(s, i)) out[static_cast<std::size_t>(i)] = '+';
  return out;
}

Config parse_config(const IsingModel& m, std::string_view name) {
  if (name.size() != static_cast<std::size_t>(m.sites()))
    throw Error(ErrorCode::kParse, "configuration \"" + std::string(name) + "\" has the wrong length");
  Config s = 0;
  for (int i = 0; i < m.sites(); ++i) {
    const char c = name[static_cast<std::size_t>(i)];
    if (c == '+')
      s |= Config{1} << i;
    else if (c != '-')
      throw Error(ErrorCode::kParse, "configuration characters must be + or -");
  }
  return s;
}

Rational energy(const IsingModel& m, Config s) {
  const Geometry g{m.L};
  long bonds = 0;
  long mag = 0;
  for (int x = 0; x < m.sites(); ++x) {
    const int sx = plus(s, x) ? 1 : -1;
    mag += sx;
    const int r = x / m.L;
    const int c = x % m.L;
    bonds += sx * (plus(s, g.site(r, c + 1)) ? 1 : -1);
    bonds += sx * (plus(s, g.site(r + 1, c)) ? 1 : -1);
  }
  return Rational(-bonds, 2) - m.h * mag / 2;
}

Rational flip_cost(const IsingModel& m, Config s, int site) {
  const Geometry g{m.L};
  const int sx = plus(s, site) ? 1 : -1;
  int sum = 0;
  for (int y : g.nbrs(site)) sum += plus(s, y) ? 1 : -1;
  return Rational(sx * sum) + m.h * sx;
}

Chain build_ising_chain(const IsingModel& m, int max_L, Execution exec) {
  if (m.L > max_L)
    throw Error(ErrorCode::kStateSpaceTooLarge,
                "L = " + std::to_string(m.L) + " exceeds the enumeration cap " + std::to_string(max_L));
  const std::size_t n = std::size_t{1} << m.sites();
  std::vector<std::string> names(n);
  std::vector<std::vector<Transition>> out(n);
  const Geometry g{m.L};
  // The only possible costs are sigma*sum + h*sigma; cache the ScaledQuantity per value.
  std::map<std::pair<int, int>, ScaledQuantity> cache;
  for (int sx : {-1, 1})
    for (int sum = -4; sum <= 4; sum += 2) {
      Rational d = Rational(sx * sum) + m.h * sx;
      cache.emplace(std::make_pair(sx, sum), ScaledQuantity(Rational(1), sgn(d) > 0 ? d : Rational(0)));
    }
  for_each_index(n, exec, [&](std::size_t i) {
    const auto s = static_cast<Config>(i);
    names[i] = config_name(m, s);
    auto& row = out[i];
    row.reserve(static_cast<std::size_t>(m.sites()));
    for (int x = 0; x < m.sites(); ++x) {
      const int sx = plus(s, x) ? 1 : -1;
      int sum = 0;
      for (int y : g.nbrs(x)) sum += plus(s, y) ? 1 : -1;
      row.push_back({static_cast<int>(flip(s, x)), cache.at({sx, sum})});
    }
  });
  Chain::Builder b({ScaleSpec{"beta", Rational(1)}}, std::move(names));
  for (std::size_t i = 0; i < n; ++i) b.set_out(static_cast<int>(i), std::move(out[i]));
  return std::move(b).build();
}

bool in_omega_o(const IsingModel& m, Config s) {
  const Geometry g{m.L};
  for (int x = 0; x < m.sites(); ++x) {
    const int k = plus_neighbours(g, s, x);
    if (plus(s, x) ? (4 - k) > 2 : k > 1) return false;
  }
  return true;
}

IsingConfigInfo classify(const IsingModel& m, Config s) {
  const Geometry g{m.L};
  const int L = m.L;
  IsingConfigInfo info;
  info.config = s;
  info.in_omega_o = in_omega_o(m, s);

  std::vector<char> seen(static_cast<std::size_t>(m.sites()), 0);
  for (int start = 0; start < m.sites(); ++start) {
    if (!plus(s, start) || seen[static_cast<std::size_t>(start)]) continue;
    std::vector<int> cells{start};
    seen[static_cast<std::size_t>(start)] = 1;
    for (std::size_t k = 0; k < cells.size(); ++k)
      for (int y : g.nbrs(cells[k]))
        if (plus(s, y) && !seen[static_cast<std::size_t>(y)]) {
          seen[static_cast<std::size_t>(y)] = 1;
          cells.push_back(y);
        }
    std::vector<char> rows(static_cast<std::size_t>(L), 0), cols(static_cast<std::size_t>(L), 0);
    for (int c : cells) {
      rows[static_cast<std::size_t>(c / L)] = 1;
      cols[static_cast<std::size_t>(c % L)] = 1;
    }
    const int nr = static_cast<int>(std::count(rows.begin(), rows.end(), 1));
    const int nc = static_cast<int>(std::count(cols.begin(), cols.end(), 1));
    Droplet d;
    d.size = static_cast<int>(cells.size());
    d.height = nr;
    d.width = nc;
    d.row0 = interval_start(rows, L, nr);
    d.col0 = interval_start(cols, L, nc);
    if (d.row0 >= 0 && d.col0 >= 0 && d.size == nr * nc) {
      if (nr == L && nc == L)
        d.shape = Shape::kWhole;
      else if (nr == L || nc == L)
        d.shape = Shape::kRing;
      else
        d.shape = Shape::kRectangle;
    }
    info.components.push_back(d);
  }

  int ell = -1;
  for (const auto& d : info.components) {
    if (d.shape == Shape::kRectangle) ell = ell < 0 ? std::min(d.height, d.width) : std::min({ell, d.height, d.width});
    if (d.shape == Shape::kRing) ++info.rings;
  }
  if (s == m.all_minus())
    info.ell = 0;
  else if (ell < 0)
    info.ell = L;
  else
    info.ell = ell;
  for (const auto& d : info.components) {
    if (d.shape != Shape::kRectangle || std::min(d.height, d.width) != info.ell) continue;
    if (d.height == d.width)
      ++info.Ns;
    else
      ++info.Nr;
  }
  return info;
}

Config grow_closure(const IsingModel& m, Config s) {
  const Geometry g{m.L};
  bool changed = true;
  while (changed) {
    changed = false;
    for (int x = 0; x < m.sites(); ++x)
      if (!plus(s, x) && plus_neighbours(g, s, x) >= 2) {
        s = flip(s, x);
        changed = true;
      }
  }
  return s;
}

SaddleSets saddle_sets(const IsingModel& m, const IsingConfigInfo& info) {
  if (!info.in_omega_o || info.config == m.all_minus() || info.config == m.all_plus())
    throw Error(ErrorCode::kNotInOmegaO, "saddle sets need a configuration of Omega_o other than -1 and +1");
  const Geometry g{m.L};
  const int ell = info.ell;
  const Config s = info.config;
  SaddleSets out;

  if (ell <= m.n0) {
    for (const auto& d : info.components) {
      if (d.shape != Shape::kRectangle || std::min(d.height, d.width) != ell) continue;
      const bool square = d.height == d.width;
      for (const auto& side : sides_of_length(g, d, ell)) {
        Config cleared = s;
        for (int c : side) cleared = flip(cleared, c);
        for (int keep : side) out.W.push_back(flip(cleared, keep));
        if (ell == 2 && square) continue;
        out.D.push_back(cleared);
        if (!square) out.S.push_back(cleared);
      }
      if (square) {
        Config gone = s;
        for (int c : rect_cells(g, d.row0, d.col0, d.height, d.width)) gone = flip(gone, c);
        out.Ss.push_back(gone);
        out.S.push_back(gone);
        if (ell == 2) out.D.push_back(gone);
      }
    }
    out.W = sorted_unique(std::move(out.W));
  } else {
    for (int x = 0; x < m.sites(); ++x) {
      if (plus(s, x) || plus_neighbours(g, s, x) != 1) continue;
      const Config xi = flip(s, x);
      out.W.push_back(xi);
      int j = 0;
      for (int y : g.nbrs(x))
        if (!plus(xi, y) && plus_neighbours(g, xi, y) >= 2) ++j;
      out.Wj[static_cast<std::size_t>(std::min(j, 3))].push_back(xi);
      const Config succ = grow_closure(m, xi);
      out.D.push_back(succ);
      out.W_into[succ].push_back(xi);
    }
    out.S = out.D;
  }
  out.D = sorted_unique(std::move(out.D));
  out.S = sorted_unique(std::move(out.S));
  out.Ss = sorted_unique(std::move(out.Ss));
  return out;
}

Rational predicted_theta(const IsingModel& m, const IsingConfigInfo& info, const SaddleSets& sets) {
  const int ell = info.ell;
  if (ell == 2 && ell <= m.n0) return Rational(2, 3) * info.Ns + 2 * info.Nr;
  if (ell >= 3 && ell <= m.n0)
    return Rational(2 * ell - 1, 3 * ell) * static_cast<long>(sets.W.size());
  if (ell > m.n0)
    return Rational(1, 2) * static_cast<long>(sets.Wj[1].size()) + Rational(2, 3) * static_cast<long>(sets.Wj[2].size()) +
           Rational(3, 4) * static_cast<long>(sets.Wj[3].size());
  throw Error(ErrorCode::kNotApplicable, "no closed form for this configuration");
}

Rational predicted_p(const IsingModel& m, const IsingConfigInfo& info, const SaddleSets& sets, Config successor) {
  if (!std::binary_search(sets.S.begin(), sets.S.end(), successor)) return Rational(0);
  const bool square_flip = std::binary_search(sets.Ss.begin(), sets.Ss.end(), successor);
  const int ell = info.ell;
  if (ell == 2 && ell <= m.n0) {
    const Rational denom = 2 * info.Nr + Rational(8, 3) * info.Ns;
    return (square_flip ? Rational(8, 3) : Rational(1)) / denom;
  }
  if (ell >= 3 && ell <= m.n0) {
    const Rational denom(2 * info.Nr + 4 * info.Ns);
    return (square_flip ? Rational(4) : Rational(1)) / denom;
  }
  if (ell > m.n0) {
    const auto& into = sets.W_into.at(successor);
    Rational num(0), den(0);
    for (int j = 1; j <= 3; ++j) {
      const Rational w(j, j + 1);
      den += w * static_cast<long>(sets.Wj[static_cast<std::size_t>(j)].size());
      for (Config xi : into)
        if (std::find(sets.Wj[static_cast<std::size_t>(j)].begin(), sets.Wj[static_cast<std::size_t>(j)].end(), xi) !=
            sets.Wj[static_cast<std::size_t>(j)].end())
          num += w;
    }
    return num / den;
  }
  throw Error(ErrorCode::kNotApplicable, "no closed form for this configuration");
}

Rational nucleation_exponent(const IsingModel& m) {
  return Rational(4 * (m.n0 + 1)) - m.h * ((m.n0 + 1) * m.n0 + 1);
}

MinusOneSaddles minus_one_saddles(const IsingModel& m) {
  const int a = m.n0 + 1;  // long side
  const int b = m.n0;
  if (a + 1 > m.L)
    throw Error(ErrorCode::kNotApplicable, "the critical droplet does not fit in the torus");
  const Geometry g{m.L};
  std::map<Config, int> kind;  // 1 or 2
  for (int r0 = 0; r0 < m.L; ++r0)
    for (int c0 = 0; c0 < m.L; ++c0)
      for (int vertical = 0; vertical < 2; ++vertical) {
        const int h = vertical ? a : b;
        const int w = vertical ? b : a;
        Config base = 0;
        for (int c : rect_cells(g, r0, c0, h, w)) base |= Config{1} << c;
        for (int k = 0; k < a; ++k)
          for (int side = 0; side < 2; ++side) {
            int cell;
            if (vertical)
              cell = side ? g.site(r0 + k, c0 + w) : g.site(r0 + k, c0 - 1);
            else
              cell = side ? g.site(r0 + h, c0 + k) : g.site(r0 - 1, c0 + k);
            const Config s = base | (Config{1} << cell);
            const int t = (k == 0 || k == a - 1) ? 1 : 2;
            auto [it, inserted] = kind.emplace(s, t);
            if (!inserted && it->second != t)
              throw Error(ErrorCode::kInternal, "critical droplet classified two ways");
          }
      }
  MinusOneSaddles out;
  for (const auto& [s, t] : kind) (t == 1 ? out.W1 : out.W2).push_back(s);
  out.theta = Rational(1, 2) * static_cast<long>(out.W1.size()) + Rational(2, 3) * static_cast<long>(out.W2.size());
  return out;
}

Rational barrier_exponent(const IsingModel& m, const IsingConfigInfo& info) {
  if (info.config == m.all_minus()) return Rational(8) - 3 * m.h;
  if (info.config == m.all_plus()) return Rational(8) + 3 * m.h;
  if (info.ell <= m.n0) return Rational(info.ell - 1) * m.h;
  return Rational(2) - m.h;
}

std::vector<Config> enumerate_omega_o(const IsingModel& m, Execution exec) {
  if (m.sites() > 30) throw Error(ErrorCode::kStateSpaceTooLarge, "Omega_o enumeration is capped at 30 sites");
  const std::size_t n = std::size_t{1} << m.sites();
  std::vector<char> in(n, 0);
  for_each_index(n, exec, [&](std::size_t i) { in[i] = in_omega_o(m, static_cast<Config>(i)) ? 1 : 0; });
  std::vector<Config> out;
  for (std::size_t i = 0; i < n; ++i)
    if (in[i]) out.push_back(static_cast<Config>(i));
  return out;
}

BarrierRecord verify_barrier(const IsingModel& m, const Conductance& g, const BondIndex& index,
                               const StationaryMeasure& mu, const std::vector<Config>& omega_o, Config sigma) {
  std::vector<int> others;
  for (Config c : omega_o)
    if (c != sigma) others.push_back(static_cast<int>(c));
  const auto bn = bottleneck(g, index, {static_cast<int>(sigma)}, others);
  BarrierRecord rec;
  rec.sigma = sigma;
  rec.predicted = barrier_exponent(m, classify(m, sigma));
  rec.engine = bn.order_quantity.order() - mu.mu[static_cast<std::size_t>(sigma)].order();
  rec.match = rec.engine == rec.predicted;
  rec.witness = bn.witness_path;
  return rec;
}

IsingVerification verify_ising(int L, const Rational& h, const IsingVerifyOptions& options) {
  IsingVerification v;
  v.model = make_ising(L, h);
  const auto& m = v.model;
  const Execution exec = options.engine.execution;
  const Chain chain = build_ising_chain(m, options.max_L, exec);
  v.states = chain.size();
  const Analysis a(chain, options.engine);

  const auto omega = enumerate_omega_o(m, exec);
  const auto leaves = level1_leaves(a);
  v.leaves = leaves.metastates.size();
  {
    std::vector<Config> leaf_states;
    bool singletons = true;
    for (const auto& lf : leaves.metastates) {
      singletons = singletons && lf.size() == 1;
      for (int x : lf) leaf_states.push_back(static_cast<Config>(x));
    }
    std::sort(leaf_states.begin(), leaf_states.end());
    v.leaves_match = singletons && leaf_states == omega;
  }

  v.omega.resize(omega.size());
  for_each_index(omega.size(), exec, [&](std::size_t k) {
    auto& rec = v.omega[k];
    rec.info = classify(m, omega[k]);
    rec.barrier = verify_barrier(m, a.g, a.index, a.mu, omega, omega[k]);
    if (omega[k] == m.all_minus() || omega[k] == m.all_plus()) return;
    const auto sets = saddle_sets(m, rec.info);
    rec.W = sets.W.size();
    const int ell = rec.info.ell;
    if (ell == 2 && ell <= m.n0)
      rec.W_expected = static_cast<std::size_t>(4 * rec.info.Nr + 4 * rec.info.Ns);
    else if (ell >= 3 && ell <= m.n0)
      rec.W_expected = static_cast<std::size_t>(2 * ell * rec.info.Nr + 4 * ell * rec.info.Ns);
    else {
      std::size_t per = 0;
      for (const auto& d : rec.info.components) {
        if (d.shape == Shape::kRectangle) per += static_cast<std::size_t>(2 * (d.height + d.width));
        if (d.shape == Shape::kRing) per += static_cast<std::size_t>(2 * m.L);
      }
      rec.W_expected = per;
    }
    rec.W_ok = rec.W == *rec.W_expected;
    rec.theta = predicted_theta(m, rec.info, sets);
    Rational sum(0);
    for (Config succ : sets.S) sum += predicted_p(m, rec.info, sets, succ);
    rec.p_sum = sum;
    rec.p_ok = sum == 1;
  });
  for (const auto& rec : v.omega) {
    (rec.barrier.match ? v.barrier_matches : v.barrier_mismatches)++;
    v.cardinalities_ok = v.cardinalities_ok && rec.W_ok;
    v.p_sums_ok = v.p_sums_ok && rec.p_ok;
  }

  v.c_h = nucleation_exponent(m);
  try {
    v.minus_one = minus_one_saddles(m);
  } catch (const Error& e) {
    if (e.code() != ErrorCode::kNotApplicable) throw;
    v.notes.push_back(std::string("theta(-1) not evaluated: ") + e.what());
  }
  if (!m.in_regime)
    v.notes.push_back("L = " + std::to_string(L) + " is outside the regime L > (n0+1)^2 + 1 = " +
                      std::to_string((m.n0 + 1) * (m.n0 + 1) + 1) + "; closed forms are compared, not asserted");

  if (options.run_hierarchy) {
    v.hierarchy = full_hierarchy(a);
    v.terminal_is_plus = v.hierarchy->terminal == std::vector<int>{static_cast<int>(m.all_plus())};
  }
  return v;
}

}  // namespace metachain
