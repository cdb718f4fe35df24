#pragma once

#include "edwsax/bench.hpp"
#include "edwsax/density.hpp"
#include "edwsax/distance.hpp"
#include "edwsax/errors.hpp"
#include "edwsax/kernels.hpp"
#include "edwsax/normal.hpp"
#include "edwsax/stats.hpp"
#include "edwsax/symbolizer.hpp"
#include "edwsax/symbols.hpp"
#include "edwsax/timeseries.hpp"
#include "edwsax/ucr.hpp"
