#pragma once

// Umbrella header for the IBDL/IBSL solver library.

#include "ibdl/bem.hpp"
#include "ibdl/boundary.hpp"
#include "ibdl/config.hpp"
#include "ibdl/coupling.hpp"
#include "ibdl/csv.hpp"
#include "ibdl/curves.hpp"
#include "ibdl/errors.hpp"
#include "ibdl/grid.hpp"
#include "ibdl/krylov.hpp"
#include "ibdl/operators.hpp"
#include "ibdl/postprocess.hpp"
#include "ibdl/problems.hpp"
#include "ibdl/runner.hpp"
#include "ibdl/solvers.hpp"
