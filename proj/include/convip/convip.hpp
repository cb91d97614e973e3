#pragma once

// Umbrella header: bit-accurate models of the four convolution engines,
// the calibrated resource profiles, and the budget allocator.

#include "convip/allocate.hpp"
#include "convip/engine.hpp"
#include "convip/errors.hpp"
#include "convip/fixed_point.hpp"
#include "convip/golden.hpp"
#include "convip/image.hpp"
#include "convip/io.hpp"
#include "convip/packing.hpp"
#include "convip/report.hpp"
#include "convip/resources.hpp"
#include "convip/verify.hpp"
