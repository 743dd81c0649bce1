#include "bneg/point.hpp"

#include <sstream>

#include "bneg/error.hpp"

namespace bneg::geometry {

ProjPoint::ProjPoint(ff::Field field, ff::Code x0, ff::Code x1, ff::Code x2)
    : field_(std::move(field)), coords_{x0, x1, x2} {
  int last = -1;
  for (int i = 2; i >= 0; --i) {
    if (coords_[static_cast<std::size_t>(i)] >= field_->q()) {
      throw ParameterError("coordinate out of range for " + field_->name());
    }
    if (last < 0 && coords_[static_cast<std::size_t>(i)] != 0) last = i;
  }
  if (last < 0) throw ParameterError("[0:0:0] is not a projective point");
  const ff::Code scale = field_->inv(coords_[static_cast<std::size_t>(last)]);
  for (auto& c : coords_) c = field_->mul(c, scale);
}

ProjPoint::ProjPoint(const ff::FieldElement& x0, const ff::FieldElement& x1,
                     const ff::FieldElement& x2)
    : ProjPoint(x0.field(), x0.code(), x1.code(), x2.code()) {
  if (!x0.spec().same_as(x1.spec()) || !x0.spec().same_as(x2.spec())) {
    throw FieldMismatch("projective point with coordinates in different fields");
  }
}

int ProjPoint::chart() const {
  for (int i = 2; i >= 0; --i) {
    if (coords_[static_cast<std::size_t>(i)] != 0) return i;
  }
  return -1;
}

bool ProjPoint::operator==(const ProjPoint& o) const {
  if (!field_->same_as(*o.field_)) throw FieldMismatch("comparing points over different fields");
  return coords_ == o.coords_;
}

std::string ProjPoint::to_string() const {
  std::ostringstream os;
  os << '[';
  for (int i = 0; i < 3; ++i) {
    if (i) os << ':';
    if (field_->is_prime_field()) {
      os << code(i);
    } else {
      os << (*this)[i].to_string();
    }
  }
  os << ']';
  return os.str();
}

std::vector<std::array<ff::Code, 3>> enumerate_plane(const ff::FieldSpec& field, std::uint64_t max_q) {
  const auto q = field.q();
  if (q > max_q) {
    throw ResourceError("enumerating P^2 over " + field.name() + " exceeds the bound q <= " +
                        std::to_string(max_q));
  }
  std::vector<std::array<ff::Code, 3>> out;
  out.reserve(q * q + q + 1);
  for (ff::Code a = 0; a < q; ++a) {
    for (ff::Code b = 0; b < q; ++b) out.push_back({a, b, 1});
  }
  for (ff::Code a = 0; a < q; ++a) out.push_back({a, 1, 0});
  out.push_back({1, 0, 0});
  return out;
}

}  // namespace bneg::geometry
