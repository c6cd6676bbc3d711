#pragma once

// Umbrella header for the planning library.

#include "grid.hpp"
#include "rotatesort.hpp"
#include "tiling.hpp"
#include "partition.hpp"
#include "realization.hpp"
#include "matching.hpp"
#include "search.hpp"
#include "scheduler.hpp"
#include "colored.hpp"
#include "continuous.hpp"
#include "oracle.hpp"
#include "render.hpp"
#include "io.hpp"
