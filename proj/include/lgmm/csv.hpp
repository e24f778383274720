#pragma once

#include <ostream>
#include <span>

#include "lgmm/diagnostics.hpp"
#include "lgmm/fem.hpp"

namespace lgmm::csv {

/// Full round-trip precision for all floating output.
inline void set_precision(std::ostream& os) { os.precision(17); }

/// x,value at every node plus `per_element` equally spaced interior samples of each element.
template <typename Scalar>
void write_function(std::ostream& os, const PiecewiseLinear<Scalar>& fn, int per_element = 0) {
  set_precision(os);
  os << "x,value\n";
  for (Index k = 0; k < fn.mesh.elements(); ++k) {
    os << fn.mesh.point(k) << ',' << fn.values(k) << '\n';
    for (int s = 1; s <= per_element; ++s) {
      const Scalar x = fn.mesh.point(k) + fn.mesh.width(k) * Scalar(s) / Scalar(per_element + 1);
      os << x << ',' << evaluate_on_element(fn, k, x) << '\n';
    }
  }
  const Index last = fn.mesh.size() - 1;
  os << fn.mesh.point(last) << ',' << fn.values(last) << '\n';
}

inline void write_mesh_header(std::ostream& os) { os << "step,time,node_index,position\n"; }

template <typename Scalar>
void write_mesh_level(std::ostream& os, Index step, const MeshLevel<Scalar>& level) {
  set_precision(os);
  for (Index i = 0; i < level.size(); ++i) os << step << ',' << level.time() << ',' << i << ',' << level.point(i) << '\n';
}

inline void write_snapshot_header(std::ostream& os) { os << "time,node_index,position,value\n"; }

template <typename Scalar>
void write_snapshot(std::ostream& os, const PiecewiseLinear<Scalar>& fn) {
  set_precision(os);
  for (Index i = 0; i < fn.mesh.size(); ++i)
    os << fn.time() << ',' << i << ',' << fn.mesh.point(i) << ',' << fn.values(i) << '\n';
}

inline void write_mass_ledger(std::ostream& os, std::span<const LedgerEntry> ledger) {
  set_precision(os);
  os << "step,time,mass,ledger_rhs,residual\n";
  for (const auto& e : ledger) os << e.step << ',' << e.time << ',' << e.mass << ',' << e.rhs << ',' << e.residual << '\n';
}

inline void write_mesh_stats(std::ostream& os, std::span<const MeshStats> stats) {
  set_precision(os);
  os << "step,time,min_h,max_h\n";
  for (const auto& s : stats) os << s.step << ',' << s.time << ',' << s.min_h << ',' << s.max_h << '\n';
}

}  // namespace lgmm::csv
