#pragma once

#include "rggclust/analytics.hpp"
#include "rggclust/cltlab.hpp"
#include "rggclust/density.hpp"
#include "rggclust/geometry.hpp"
#include "rggclust/parallel.hpp"
#include "rggclust/quadrature.hpp"
#include "rggclust/rng.hpp"
#include "rggclust/sampler.hpp"
#include "rggclust/stats.hpp"
