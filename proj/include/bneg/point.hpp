#pragma once

#include <array>
#include <string>
#include <vector>

#include "bneg/ff.hpp"

namespace bneg::geometry {

/// A point of P^2 over a finite field, normalized so that its last nonzero
/// coordinate is 1.  Equality is exact on the normalized coordinates.
class ProjPoint {
 public:
  ProjPoint(ff::Field field, ff::Code x0, ff::Code x1, ff::Code x2);
  ProjPoint(const ff::FieldElement& x0, const ff::FieldElement& x1, const ff::FieldElement& x2);

  const ff::Field& field() const { return field_; }
  ff::Code code(int i) const { return coords_[static_cast<std::size_t>(i)]; }
  const std::array<ff::Code, 3>& codes() const { return coords_; }
  ff::FieldElement operator[](int i) const { return {field_, code(i)}; }

  /// Index of the last nonzero coordinate; that coordinate equals 1.
  int chart() const;

  bool operator==(const ProjPoint& o) const;
  /// Order on normalized codes, for use as a map key within one field.
  bool operator<(const ProjPoint& o) const { return coords_ < o.coords_; }

  /// "[a:b:c]"; prime-field coordinates print as integers, others as
  /// coefficient lists.
  std::string to_string() const;

 private:
  ff::Field field_;
  std::array<ff::Code, 3> coords_;
};

/// Normalized coordinates of every point of P^2(F_q): the chart x2 = 1 in
/// (x0, x1) code order, then [x0:1:0], then [1:0:0].  Throws ResourceError
/// when q exceeds max_q.
std::vector<std::array<ff::Code, 3>> enumerate_plane(const ff::FieldSpec& field, std::uint64_t max_q);

}  // namespace bneg::geometry
