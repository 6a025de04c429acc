#pragma once

#include "gcm/degree_model.hpp"
#include "gcm/error.hpp"
#include "gcm/generator.hpp"
#include "gcm/io.hpp"
#include "gcm/linalg.hpp"
#include "gcm/metrics.hpp"
#include "gcm/percolation.hpp"
#include "gcm/presets.hpp"
#include "gcm/rng.hpp"
#include "gcm/simulation.hpp"
