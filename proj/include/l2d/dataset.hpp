#pragma once

#include "l2d/points.hpp"

#include <cstdint>
#include <istream>
#include <vector>

namespace l2d {

//! Value of the binary group indicator A.
enum class Arm : std::uint8_t
{
  zero = 0,
  one = 1
};

inline Arm other(Arm a) { return a == Arm::zero ? Arm::one : Arm::zero; }

//! n observations (X_i, A_i), X_i in R^d with d in {1, 2}.
class LabeledDataset
{
public:
  LabeledDataset(PointSet points, std::vector<Arm> labels);

  std::size_t size() const { return labels_.size(); }
  std::size_t dims() const { return points_.dims(); }
  std::size_t count(Arm a) const { return a == Arm::one ? n1_ : n0_; }

  //! Empirical p(A = 1).
  double proportion_one() const
  {
    return static_cast<double>(n1_) / static_cast<double>(size());
  }

  const PointSet& points() const { return points_; }
  const std::vector<Arm>& labels() const { return labels_; }
  Arm label(std::size_t i) const { return labels_[i]; }

  PointSet arm_points(Arm a) const;

  //! Same observations with every label flipped.
  LabeledDataset swapped() const;

private:
  PointSet points_;
  std::vector<Arm> labels_;
  std::size_t n0_ = 0;
  std::size_t n1_ = 0;
};

//! Reads rows "x[,y],a" with a in {0, 1}; a first row that is not numeric
//! is taken as a header. Errors name the offending line.
LabeledDataset read_labeled_csv(std::istream& in);

} // namespace l2d
