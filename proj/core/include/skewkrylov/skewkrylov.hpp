#pragma once

#include "skewkrylov/equivalence.hpp"
#include "skewkrylov/errors.hpp"
#include "skewkrylov/krylov.hpp"
#include "skewkrylov/matrix_market.hpp"
#include "skewkrylov/operator.hpp"
#include "skewkrylov/operator_core.hpp"
#include "skewkrylov/precondition.hpp"
#include "skewkrylov/random.hpp"
#include "skewkrylov/report_io.hpp"
#include "skewkrylov/solvers.hpp"
#include "skewkrylov/types.hpp"
