#pragma once

#include "wmlab/variation/p_variation.hpp"
#include "wmlab/variation/pairing.hpp"
#include "wmlab/variation/s_norm.hpp"
#include "wmlab/variation/step.hpp"
