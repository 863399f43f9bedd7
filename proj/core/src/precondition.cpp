#include "skewkrylov/precondition.hpp"

#include "skewkrylov/errors.hpp"

namespace skewkrylov {

PreconditionedSystem precondition(const LinearOperator& a, const Vector& b, const LinearOperator& left_inverse,
                                  const LinearOperator& right_inverse, OperatorKind kind) {
    if (left_inverse.dim() != a.dim() || right_inverse.dim() != a.dim() || b.size() != a.dim()) {
        throw InvalidArgument("precondition: dimension mismatch between operator, preconditioners and rhs");
    }
    LinearOperator op = LinearOperator::general(
        a.dim(),
        [a, left_inverse, right_inverse](const Vector& v) {
            return left_inverse.apply(a.apply(right_inverse.apply(v)));
        },
        [a, left_inverse, right_inverse](const Vector& v) {
            return right_inverse.apply_transpose(a.apply_transpose(left_inverse.apply_transpose(v)));
        });
    if (kind == OperatorKind::skew) op = op.retagged(OperatorKind::skew);
    return PreconditionedSystem{op, left_inverse.apply(b), right_inverse};
}

}  // namespace skewkrylov
