#pragma once

#include "ndg/degeneracy.hpp"
#include "ndg/distributions.hpp"
#include "ndg/error.hpp"
#include "ndg/fenwick.hpp"
#include "ndg/geometry.hpp"
#include "ndg/montecarlo.hpp"
#include "ndg/rng.hpp"
#include "ndg/sample.hpp"
