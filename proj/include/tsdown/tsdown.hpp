#pragma once

#include "tsdown/bench.hpp"
#include "tsdown/core.hpp"
#include "tsdown/datagen.hpp"
#include "tsdown/downsamplers.hpp"
#include "tsdown/evaluate.hpp"
#include "tsdown/extrema.hpp"
#include "tsdown/io.hpp"
#include "tsdown/metrics.hpp"
#include "tsdown/parallel.hpp"
#include "tsdown/raster.hpp"
