#pragma once

// Umbrella header for the spectral calculus library.

#include "schwartz/differential.hpp"
#include "schwartz/errors.hpp"
#include "schwartz/families.hpp"
#include "schwartz/green.hpp"
#include "schwartz/grid.hpp"
#include "schwartz/measures.hpp"
#include "schwartz/oracle.hpp"
#include "schwartz/solver.hpp"
#include "schwartz/spectral.hpp"
