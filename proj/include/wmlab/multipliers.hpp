#pragma once

#include "wmlab/multipliers/modulation.hpp"
#include "wmlab/multipliers/profiles.hpp"
#include "wmlab/multipliers/spatial.hpp"
#include "wmlab/multipliers/spec.hpp"
