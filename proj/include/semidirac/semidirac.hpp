#pragma once

// Umbrella header for the semidirac library: bound-state solver and
// analytic bounds for perturbed semi-Dirac Hamiltonians.

#include "semidirac/assembly.hpp"
#include "semidirac/bounds.hpp"
#include "semidirac/cutoff.hpp"
#include "semidirac/eigensolve.hpp"
#include "semidirac/field.hpp"
#include "semidirac/geometry.hpp"
#include "semidirac/model.hpp"
#include "semidirac/pipeline.hpp"
#include "semidirac/quadrature.hpp"
#include "semidirac/rbf.hpp"
#include "semidirac/testfn.hpp"
