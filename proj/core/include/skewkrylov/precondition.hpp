#pragma once

#include "skewkrylov/operator.hpp"
#include "skewkrylov/types.hpp"

namespace skewkrylov {

/// Two-sided preconditioned system (M_L^{-1} A M_R^{-1}) (M_R x) = M_L^{-1} b.
struct PreconditionedSystem {
    LinearOperator op;             ///< v -> M_L^{-1} A M_R^{-1} v
    Vector rhs;                    ///< M_L^{-1} b
    LinearOperator right_inverse;  ///< M_R^{-1}

    /// x = M_R^{-1} x~.
    Vector recover(const Vector& transformed) const { return right_inverse.apply(transformed); }
};

/// left_inverse and right_inverse are the actions of M_L^{-1} and M_R^{-1} with their
/// transposes. The result is tagged general unless the caller passes OperatorKind::skew,
/// in which case the transpose action becomes the negated forward action.
PreconditionedSystem precondition(const LinearOperator& a, const Vector& b, const LinearOperator& left_inverse,
                                  const LinearOperator& right_inverse, OperatorKind kind = OperatorKind::general);

}  // namespace skewkrylov
