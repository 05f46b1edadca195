#pragma once

#include <complex>
#include <map>
#include <string>
#include <variant>
#include <vector>

namespace hbc::circuit {

using Complex = std::complex<double>;
using NodeId = std::string;

/// Reserved earth-ground node; always the solver reference.
inline const NodeId kEarth = "E";

struct Resistor {
  double ohms;

  bool operator==(const Resistor&) const = default;
};
struct Capacitor {
  double farads;

  bool operator==(const Capacitor&) const = default;
};
struct Inductor {
  double henries;

  bool operator==(const Inductor&) const = default;
};
/// Ideal source; `a` is the positive terminal, `b` the negative one.
struct VoltageSource {
  double volts;  // peak amplitude

  bool operator==(const VoltageSource&) const = default;
};

using ElementKind = std::variant<Resistor, Capacitor, Inductor, VoltageSource>;

struct Element {
  ElementKind kind;
  NodeId a;
  NodeId b;
  std::string label;

  bool operator==(const Element&) const = default;
};

class Netlist {
 public:
  /// Starts with only the earth node.
  Netlist();

  /// Adds a node if not already present; returns *this for chaining.
  Netlist& add_node(const NodeId& id);
  /// Adds the element, registering any endpoint nodes that are missing.
  Netlist& add(Element element);

  Netlist& resistor(const NodeId& a, const NodeId& b, double ohms, std::string label = {});
  Netlist& capacitor(const NodeId& a, const NodeId& b, double farads, std::string label = {});
  Netlist& inductor(const NodeId& a, const NodeId& b, double henries, std::string label = {});
  Netlist& source(const NodeId& plus, const NodeId& minus, double volts, std::string label = {});

  const std::vector<NodeId>& nodes() const noexcept { return nodes_; }
  const std::vector<Element>& elements() const noexcept { return elements_; }

  bool has_node(const NodeId& id) const;
  const Element* find(const std::string& label) const;
  Element* find(const std::string& label);

  /// The single voltage source. Throws InvalidNetlist if there is not exactly one.
  const Element& voltage_source() const;

  /// Checks every structural invariant; throws InvalidNetlist on the first violation
  /// and SingularSystem if some node has no element path to earth.
  void validate() const;

  bool operator==(const Netlist&) const = default;

 private:
  std::vector<NodeId> nodes_;
  std::vector<Element> elements_;
};

struct AcSolution {
  double freq_hz = 0.0;
  std::map<NodeId, Complex> node_voltages;
  /// Current through the source from + to - terminal inside the external network
  /// (i.e. delivered by the source).
  Complex source_current;

  Complex voltage(const NodeId& id) const;
};

/// Solves the phasor response of `net` at `freq_hz` by modified nodal analysis.
///
/// Admittances are 1/R, j*w*C and 1/(j*w*L); the ideal source contributes an
/// auxiliary branch-current unknown. The dense system is solved by Gaussian
/// elimination with partial pivoting. A pivot smaller than 1e-15 times the largest
/// entry of the assembled matrix is reported as SingularSystem, which covers
/// floating subnetworks at f = 0 (open capacitors) and inductor loops.
AcSolution solve_ac(const Netlist& net, double freq_hz);

/// 20*log10(|V(plus) - V(minus)| / source amplitude). Returns -infinity when the
/// differential probe is exactly zero.
double transfer_gain_db(const Netlist& net, const NodeId& probe_plus, const NodeId& probe_minus,
                        double freq_hz);

}  // namespace hbc::circuit
