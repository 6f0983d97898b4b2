#pragma once

#include "sincmf/bounds.hpp"
#include "sincmf/dense.hpp"
#include "sincmf/error.hpp"
#include "sincmf/expsum.hpp"
#include "sincmf/fem.hpp"
#include "sincmf/integrators.hpp"
#include "sincmf/poles.hpp"
#include "sincmf/polynomial.hpp"
#include "sincmf/problems.hpp"
#include "sincmf/quadrature.hpp"
#include "sincmf/rational.hpp"
#include "sincmf/ratkrylov.hpp"
#include "sincmf/scalar.hpp"
#include "sincmf/sparse.hpp"
