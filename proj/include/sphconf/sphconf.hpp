#pragma once

#include "sphconf/errors.hpp"
#include "sphconf/surface.hpp"
#include "sphconf/trig.hpp"
#include "sphconf/metric.hpp"
#include "sphconf/delaunay.hpp"
#include "sphconf/conformal.hpp"
#include "sphconf/polygon.hpp"
#include "sphconf/solver.hpp"
#include "sphconf/icosa.hpp"
#include "sphconf/fixtures.hpp"
