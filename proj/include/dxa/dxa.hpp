#pragma once

// Umbrella header.

#include "dxa/core.hpp"
#include "dxa/errors.hpp"
#include "dxa/experiments.hpp"
#include "dxa/fluctuation.hpp"
#include "dxa/io.hpp"
#include "dxa/longmem.hpp"
#include "dxa/numeric.hpp"
#include "dxa/scaling.hpp"
