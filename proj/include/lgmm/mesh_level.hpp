#pragma once

#include <sstream>
#include <utility>

#include "lgmm/error.hpp"
#include "lgmm/tridiagonal.hpp"

namespace lgmm {

/// Ordered nodal points of one time slice of a moving mesh.
/// Invariant: at least two points, strictly increasing.
template <typename Scalar>
class MeshLevel {
 public:
  MeshLevel(Vector<Scalar> points, Scalar time) : points_(std::move(points)), time_(time) {
    if (points_.size() < 2) throw Error(ErrorKind::degenerate_mesh, "a mesh level needs at least two points");
    for (Index i = 0; i + 1 < points_.size(); ++i) {
      if (!(points_(i) < points_(i + 1))) {
        std::ostringstream msg;
        msg << "points " << i << " and " << i + 1 << " are not strictly increasing (" << points_(i) << ", "
            << points_(i + 1) << ")";
        throw Error(ErrorKind::degenerate_mesh, msg.str());
      }
    }
  }

  const Vector<Scalar>& points() const { return points_; }
  Scalar point(Index i) const { return points_(i); }
  Scalar time() const { return time_; }

  Index size() const { return points_.size(); }
  Index elements() const { return points_.size() - 1; }
  Scalar width(Index k) const { return points_(k + 1) - points_(k); }
  Scalar left() const { return points_(0); }
  Scalar right() const { return points_(size() - 1); }

  Vector<Scalar> widths() const { return points_.tail(elements()) - points_.head(elements()); }
  Scalar min_width() const { return widths().minCoeff(); }
  Scalar max_width() const { return widths().maxCoeff(); }

  MeshLevel with_time(Scalar t) const { return MeshLevel(points_, t); }

 private:
  Vector<Scalar> points_;
  Scalar time_;
};

}  // namespace lgmm
