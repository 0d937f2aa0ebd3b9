#pragma once

// Everything: layered forms and their evolution in one to three dimensions,
// the independent oracles, and the document model used by the CLI.

#include "splinewave/core.hpp"
#include "splinewave/document.hpp"
#include "splinewave/evolve1d.hpp"
#include "splinewave/fixtures.hpp"
#include "splinewave/fresnel.hpp"
#include "splinewave/model.hpp"
#include "splinewave/oracle.hpp"
#include "splinewave/polynomial.hpp"
#include "splinewave/spline1d.hpp"
#include "splinewave/spline2d.hpp"
#include "splinewave/spline3d.hpp"
