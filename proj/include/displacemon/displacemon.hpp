#pragma once

// Umbrella header for the whole library.

#include "displacemon/beam.hpp"
#include "displacemon/config.hpp"
#include "displacemon/constants.hpp"
#include "displacemon/decoherence.hpp"
#include "displacemon/device.hpp"
#include "displacemon/error.hpp"
#include "displacemon/grating.hpp"
#include "displacemon/numerics.hpp"
#include "displacemon/oracle.hpp"
#include "displacemon/qubit.hpp"
#include "displacemon/report.hpp"
