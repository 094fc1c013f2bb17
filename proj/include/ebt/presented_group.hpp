#pragma once

#include <cstddef>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "ebt/integer.hpp"
#include "ebt/matrix.hpp"
#include "ebt/smith.hpp"

namespace ebt {

/// Finitely presented abelian group: Z^generators modulo the column span of
/// a relation matrix. The Smith form is computed once at construction and
/// the object is immutable afterwards.
class PresentedAbelianGroup {
 public:
  PresentedAbelianGroup(std::vector<std::string> labels, SparseMatrix relations)
      : labels_(std::move(labels)), relations_(std::move(relations)) {
    if (relations_.rows != labels_.size()) throw Error("relation matrix rows must match generator count");
    SnfOptions opts;
    opts.compute_v = false;
    snf_ = smith_normal_form(relations_.to_dense(), opts);
    init_structure();
  }

  /// Rebuilds a group from a previously computed Smith form (cache load).
  PresentedAbelianGroup(std::vector<std::string> labels, SparseMatrix relations, SmithForm<Integer> snf)
      : labels_(std::move(labels)), relations_(std::move(relations)), snf_(std::move(snf)) {
    if (relations_.rows != labels_.size() || snf_.U.rows() != labels_.size()) {
      throw Error("inconsistent presentation data");
    }
    init_structure();
  }

  std::size_t num_generators() const { return labels_.size(); }
  const std::vector<std::string>& generator_labels() const { return labels_; }
  const SparseMatrix& relations() const { return relations_; }
  const SmithForm<Integer>& smith() const { return snf_; }
  const CokernelStructure& structure() const { return structure_; }
  std::size_t rank() const { return structure_.rank; }
  const std::vector<Integer>& torsion() const { return structure_.torsion; }

  /// Canonical coordinates: residues for each torsion summand, followed by
  /// the free coordinates.
  IntVector reduce(const IntVector& coords) const {
    if (coords.size() != num_generators()) throw Error("coordinate vector has wrong length");
    const IntVector y = snf_.U * coords;
    IntVector out;
    out.reserve(torsion_rows_.size() + structure_.rank);
    for (std::size_t k = 0; k < torsion_rows_.size(); ++k) {
      out.push_back(mod_floor(y[torsion_rows_[k]], structure_.torsion[k]));
    }
    for (std::size_t i = snf_.rank; i < y.size(); ++i) out.push_back(y[i]);
    return out;
  }

  /// Free-part coordinates only (the image in the group tensored with Q).
  IntVector free_part(const IntVector& coords) const {
    const IntVector r = reduce(coords);
    return IntVector(r.begin() + static_cast<std::ptrdiff_t>(torsion_rows_.size()), r.end());
  }

  std::size_t torsion_count() const { return torsion_rows_.size(); }

 private:
  void init_structure() {
    structure_ = cokernel_from_smith(snf_, labels_.size());
    torsion_rows_.clear();
    for (std::size_t i = 0; i < snf_.rank; ++i) {
      if (snf_.diag[i] != 1) torsion_rows_.push_back(i);
    }
  }

  std::vector<std::string> labels_;
  SparseMatrix relations_;
  SmithForm<Integer> snf_;
  CokernelStructure structure_;
  std::vector<std::size_t> torsion_rows_;
};

using GroupPtr = std::shared_ptr<const PresentedAbelianGroup>;

/// An element of a presented group, kept both as raw generator coordinates
/// and in reduced form.
class GroupElementClass {
 public:
  GroupElementClass(GroupPtr group, IntVector coords)
      : group_(std::move(group)), coords_(std::move(coords)), reduced_(group_->reduce(coords_)) {}

  static GroupElementClass zero(GroupPtr group) {
    const std::size_t n = group->num_generators();
    return GroupElementClass(std::move(group), IntVector(n, Integer(0)));
  }

  const GroupPtr& group() const { return group_; }
  const IntVector& coords() const { return coords_; }
  const IntVector& reduced() const { return reduced_; }

  bool is_zero() const {
    for (const auto& c : reduced_)
      if (sgn(c) != 0) return false;
    return true;
  }

  IntVector free_part() const {
    const auto t = static_cast<std::ptrdiff_t>(group_->torsion_count());
    return IntVector(reduced_.begin() + t, reduced_.end());
  }

  GroupElementClass operator+(const GroupElementClass& other) const {
    require_same(other);
    IntVector c = coords_;
    for (std::size_t i = 0; i < c.size(); ++i) c[i] += other.coords_[i];
    return GroupElementClass(group_, std::move(c));
  }
  GroupElementClass operator-(const GroupElementClass& other) const { return *this + other.scaled(-1); }
  GroupElementClass scaled(const Integer& k) const {
    IntVector c = coords_;
    for (auto& x : c) x *= k;
    return GroupElementClass(group_, std::move(c));
  }

  void require_same(const GroupElementClass& other) const {
    if (group_ != other.group_) throw std::invalid_argument("group element classes belong to different groups");
  }

 private:
  GroupPtr group_;
  IntVector coords_;
  IntVector reduced_;
};

/// Equality in the group; comparing classes of different groups is a caller bug.
inline bool classes_equal(const GroupElementClass& x, const GroupElementClass& y) {
  x.require_same(y);
  return x.reduced() == y.reduced();
}

/// Least m >= 1 with m * x = 0, or nullopt when x has infinite order.
inline std::optional<Integer> class_order(const GroupElementClass& x) {
  const auto& torsion = x.group()->torsion();
  const auto& r = x.reduced();
  for (std::size_t i = torsion.size(); i < r.size(); ++i) {
    if (sgn(r[i]) != 0) return std::nullopt;
  }
  Integer order = 1;
  for (std::size_t i = 0; i < torsion.size(); ++i) {
    const Integer& d = torsion[i];
    order = lcm(order, d / gcd(d, r[i]));
  }
  return order;
}

inline std::string order_to_string(const std::optional<Integer>& order) {
  return order ? order->get_str() : std::string("infinite");
}

}  // namespace ebt
