#include "hbc/circuit.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <optional>
#include <unordered_map>
#include <utility>

#include "hbc/error.hpp"

namespace hbc::circuit {

namespace {

constexpr double kPivotRatio = 1e-15;

[[noreturn]] void invalid(const std::string& msg) { throw Error(Errc::InvalidNetlist, msg); }

bool is_source(const Element& e) { return std::holds_alternative<VoltageSource>(e.kind); }

void check_value(const Element& e) {
  std::visit(
      [&](const auto& k) {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Resistor>) {
          if (!(std::isfinite(k.ohms) && k.ohms > 0)) invalid("resistor '" + e.label + "' must be finite and > 0");
        } else if constexpr (std::is_same_v<T, Capacitor>) {
          if (!(std::isfinite(k.farads) && k.farads > 0)) invalid("capacitor '" + e.label + "' must be finite and > 0");
        } else if constexpr (std::is_same_v<T, Inductor>) {
          if (!(std::isfinite(k.henries) && k.henries > 0)) invalid("inductor '" + e.label + "' must be finite and > 0");
        } else {
          if (!(std::isfinite(k.volts) && k.volts >= 0)) invalid("source '" + e.label + "' amplitude must be finite and >= 0");
        }
      },
      e.kind);
}

// Dense complex system A x = b: LU with partial pivoting plus iterative refinement.
class DenseSystem {
 public:
  explicit DenseSystem(std::size_t n) : n_(n), a_(n * n), b_(n) {}

  Complex& at(std::size_t r, std::size_t c) { return a_[r * n_ + c]; }
  Complex& rhs(std::size_t r) { return b_[r]; }

  std::vector<Complex> solve() {
    const std::vector<Complex> a0 = a_;
    factor();
    std::vector<Complex> x = substitute(b_);
    for (int step = 0; step < kRefinementSteps; ++step) {
      std::vector<Complex> r(n_);
      for (std::size_t i = 0; i < n_; ++i) {
        std::complex<long double> acc = b_[i];
        for (std::size_t c = 0; c < n_; ++c) {
          acc -= std::complex<long double>(a0[i * n_ + c]) * std::complex<long double>(x[c]);
        }
        r[i] = Complex(static_cast<double>(acc.real()), static_cast<double>(acc.imag()));
      }
      const auto d = substitute(r);
      for (std::size_t i = 0; i < n_; ++i) x[i] += d[i];
    }
    return x;
  }

 private:
  static constexpr int kRefinementSteps = 2;

  // In-place LU: multipliers below the diagonal, row order in perm_.
  void factor() {
    double scale = 0.0;
    for (const auto& v : a_) scale = std::max(scale, std::abs(v));
    if (scale == 0.0) throw Error(Errc::SingularSystem, "empty system matrix");
    const double tiny = kPivotRatio * scale;

    perm_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) perm_[i] = i;
    for (std::size_t k = 0; k < n_; ++k) {
      std::size_t pivot = k;
      double best = std::abs(at(k, k));
      for (std::size_t r = k + 1; r < n_; ++r) {
        const double m = std::abs(at(r, k));
        if (m > best) {
          best = m;
          pivot = r;
        }
      }
      if (best <= tiny) {
        throw Error(Errc::SingularSystem,
                    "pivot " + std::to_string(best) + " below threshold at column " + std::to_string(k));
      }
      if (pivot != k) {
        for (std::size_t c = 0; c < n_; ++c) std::swap(at(k, c), at(pivot, c));
        std::swap(perm_[k], perm_[pivot]);
      }
      const Complex inv = 1.0 / at(k, k);
      for (std::size_t r = k + 1; r < n_; ++r) {
        const Complex f = at(r, k) * inv;
        at(r, k) = f;
        if (f == Complex{}) continue;
        for (std::size_t c = k + 1; c < n_; ++c) at(r, c) -= f * at(k, c);
      }
    }
  }

  std::vector<Complex> substitute(const std::vector<Complex>& rhs) {
    std::vector<Complex> y(n_);
    for (std::size_t i = 0; i < n_; ++i) {
      Complex s = rhs[perm_[i]];
      for (std::size_t c = 0; c < i; ++c) s -= at(i, c) * y[c];
      y[i] = s;
    }
    std::vector<Complex> x(n_);
    for (std::size_t i = n_; i-- > 0;) {
      Complex s = y[i];
      for (std::size_t c = i + 1; c < n_; ++c) s -= at(i, c) * x[c];
      x[i] = s / at(i, i);
    }
    return x;
  }

  std::size_t n_;
  std::vector<Complex> a_;
  std::vector<Complex> b_;
  std::vector<std::size_t> perm_;
};

Complex admittance(const ElementKind& kind, double omega) {
  return std::visit(
      [&](const auto& k) -> Complex {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, Resistor>) {
          return {1.0 / k.ohms, 0.0};
        } else if constexpr (std::is_same_v<T, Capacitor>) {
          return {0.0, omega * k.farads};
        } else if constexpr (std::is_same_v<T, Inductor>) {
          return Complex{1.0, 0.0} / Complex{0.0, omega * k.henries};
        } else {
          return {};
        }
      },
      kind);
}

}  // namespace

Netlist::Netlist() { nodes_.push_back(kEarth); }

Netlist& Netlist::add_node(const NodeId& id) {
  if (!has_node(id)) nodes_.push_back(id);
  return *this;
}

Netlist& Netlist::add(Element element) {
  add_node(element.a);
  add_node(element.b);
  elements_.push_back(std::move(element));
  return *this;
}

Netlist& Netlist::resistor(const NodeId& a, const NodeId& b, double ohms, std::string label) {
  return add({Resistor{ohms}, a, b, std::move(label)});
}
Netlist& Netlist::capacitor(const NodeId& a, const NodeId& b, double farads, std::string label) {
  return add({Capacitor{farads}, a, b, std::move(label)});
}
Netlist& Netlist::inductor(const NodeId& a, const NodeId& b, double henries, std::string label) {
  return add({Inductor{henries}, a, b, std::move(label)});
}
Netlist& Netlist::source(const NodeId& plus, const NodeId& minus, double volts, std::string label) {
  return add({VoltageSource{volts}, plus, minus, std::move(label)});
}

bool Netlist::has_node(const NodeId& id) const {
  return std::find(nodes_.begin(), nodes_.end(), id) != nodes_.end();
}

const Element* Netlist::find(const std::string& label) const {
  auto it = std::find_if(elements_.begin(), elements_.end(), [&](const Element& e) { return e.label == label; });
  return it == elements_.end() ? nullptr : &*it;
}

Element* Netlist::find(const std::string& label) {
  return const_cast<Element*>(std::as_const(*this).find(label));
}

const Element& Netlist::voltage_source() const {
  const Element* found = nullptr;
  for (const auto& e : elements_) {
    if (!is_source(e)) continue;
    if (found) invalid("more than one voltage source");
    found = &e;
  }
  if (!found) invalid("no voltage source");
  return *found;
}

void Netlist::validate() const {
  if (!has_node(kEarth)) invalid("earth node 'E' missing");
  {
    auto sorted = nodes_;
    std::sort(sorted.begin(), sorted.end());
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) invalid("duplicate node id");
  }
  for (const auto& e : elements_) {
    if (!has_node(e.a) || !has_node(e.b)) invalid("element '" + e.label + "' references an unknown node");
    if (e.a == e.b) invalid("element '" + e.label + "' has both terminals on node '" + e.a + "'");
    check_value(e);
  }
  (void)voltage_source();

  // Every node needs some element path to earth.
  std::unordered_map<NodeId, std::size_t> index;
  for (std::size_t i = 0; i < nodes_.size(); ++i) index.emplace(nodes_[i], i);
  std::vector<std::size_t> parent(nodes_.size());
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto root = [&](std::size_t i) {
    while (parent[i] != i) i = parent[i] = parent[parent[i]];
    return i;
  };
  for (const auto& e : elements_) parent[root(index.at(e.a))] = root(index.at(e.b));
  const auto earth = root(index.at(kEarth));
  for (const auto& n : nodes_) {
    if (root(index.at(n)) != earth) {
      throw Error(Errc::SingularSystem, "node '" + n + "' is floating (no path to earth)");
    }
  }
}

Complex AcSolution::voltage(const NodeId& id) const {
  auto it = node_voltages.find(id);
  if (it == node_voltages.end()) throw Error(Errc::InvalidArgument, "unknown node '" + id + "'");
  return it->second;
}

AcSolution solve_ac(const Netlist& net, double freq_hz) {
  if (!(std::isfinite(freq_hz) && freq_hz >= 0)) {
    throw Error(Errc::InvalidArgument, "frequency must be finite and >= 0");
  }
  net.validate();

  const double omega = 2.0 * std::numbers::pi * freq_hz;

  // Unknown layout: non-reference node voltages, then the source branch current.
  std::unordered_map<NodeId, std::size_t> row;
  std::vector<NodeId> order;
  for (const auto& n : net.nodes()) {
    if (n == kEarth) continue;
    row.emplace(n, order.size());
    order.push_back(n);
  }
  const std::size_t n_nodes = order.size();
  DenseSystem sys(n_nodes + 1);
  const std::size_t src_row = n_nodes;

  auto idx = [&](const NodeId& id) -> std::optional<std::size_t> {
    if (id == kEarth) return std::nullopt;
    return row.at(id);
  };

  for (const auto& e : net.elements()) {
    const auto ia = idx(e.a);
    const auto ib = idx(e.b);
    if (const auto* src = std::get_if<VoltageSource>(&e.kind)) {
      // Branch current j leaves node a into the source and re-enters at b.
      if (ia) {
        sys.at(*ia, src_row) += 1.0;
        sys.at(src_row, *ia) += 1.0;
      }
      if (ib) {
        sys.at(*ib, src_row) -= 1.0;
        sys.at(src_row, *ib) -= 1.0;
      }
      sys.rhs(src_row) = src->volts;
      continue;
    }
    if (std::holds_alternative<Inductor>(e.kind) && omega == 0.0) {
      throw Error(Errc::SingularSystem, "inductor '" + e.label + "' is a short circuit at f = 0");
    }
    const Complex y = admittance(e.kind, omega);
    if (ia) sys.at(*ia, *ia) += y;
    if (ib) sys.at(*ib, *ib) += y;
    if (ia && ib) {
      sys.at(*ia, *ib) -= y;
      sys.at(*ib, *ia) -= y;
    }
  }

  const auto x = sys.solve();

  AcSolution out;
  out.freq_hz = freq_hz;
  out.node_voltages.emplace(kEarth, Complex{});
  for (std::size_t i = 0; i < n_nodes; ++i) out.node_voltages.emplace(order[i], x[i]);
  // x[src_row] flows into the + terminal; the source delivers its negative.
  out.source_current = -x[src_row];
  return out;
}

double transfer_gain_db(const Netlist& net, const NodeId& probe_plus, const NodeId& probe_minus,
                        double freq_hz) {
  if (!net.has_node(probe_plus) || !net.has_node(probe_minus)) {
    throw Error(Errc::InvalidNetlist, "probe node not in netlist");
  }
  const double amplitude = std::get<VoltageSource>(net.voltage_source().kind).volts;
  if (!(amplitude > 0)) throw Error(Errc::InvalidArgument, "source amplitude must be > 0 for a gain");
  const auto sol = solve_ac(net, freq_hz);
  const double mag = std::abs(sol.voltage(probe_plus) - sol.voltage(probe_minus));
  if (mag == 0.0) return -std::numeric_limits<double>::infinity();
  return 20.0 * std::log10(mag / amplitude);
}

}  // namespace hbc::circuit
