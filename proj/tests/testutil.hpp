#pragma once

#include <gtest/gtest.h>

#include "mcic/matcore.hpp"

namespace testutil {

inline void expect_matrix_near(const mcic::Matrix& a, const mcic::Matrix& b,
                               double tol, const char* what = "") {
  ASSERT_EQ(a.rows(), b.rows()) << what;
  ASSERT_EQ(a.cols(), b.cols()) << what;
  double err = (a - b).cwiseAbs().maxCoeff();
  EXPECT_LE(err, tol) << what << " max entry deviation " << err;
}

inline double rel_error(const mcic::Matrix& got, const mcic::Matrix& want) {
  double scale = std::max(1.0, want.norm());
  return (got - want).norm() / scale;
}

}  // namespace testutil
