#pragma once

// Everything except the CLI and the problem-file reader, which need the
// vendored single-header libraries.

#include "fracdq/bench.hpp"
#include "fracdq/dqweights.hpp"
#include "fracdq/error.hpp"
#include "fracdq/expr.hpp"
#include "fracdq/fracderiv.hpp"
#include "fracdq/geometry.hpp"
#include "fracdq/linalg.hpp"
#include "fracdq/nodes.hpp"
#include "fracdq/parallel.hpp"
#include "fracdq/quadrature.hpp"
#include "fracdq/rbf.hpp"
#include "fracdq/stepper.hpp"
