// jacobi_asym.hpp - Umbrella header.

#pragma once

#include "jacobi_asym/asymptotics.hpp"
#include "jacobi_asym/diagonalize.hpp"
#include "jacobi_asym/eigensolve.hpp"
#include "jacobi_asym/matrix.hpp"
#include "jacobi_asym/model.hpp"
#include "jacobi_asym/parallel.hpp"
#include "jacobi_asym/quadrature.hpp"
#include "jacobi_asym/specfun.hpp"
