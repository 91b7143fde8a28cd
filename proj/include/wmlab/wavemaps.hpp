#pragma once

#include "wmlab/wavemaps/duhamel.hpp"
#include "wmlab/wavemaps/evolve.hpp"
#include "wmlab/wavemaps/null_form.hpp"
#include "wmlab/wavemaps/picard.hpp"
#include "wmlab/wavemaps/scattering.hpp"
#include "wmlab/wavemaps/sphere.hpp"
