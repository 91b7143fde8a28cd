#pragma once

#include "wmlab/fourier/calculus.hpp"
#include "wmlab/fourier/fft.hpp"
#include "wmlab/fourier/fields.hpp"
#include "wmlab/fourier/grid.hpp"
#include "wmlab/fourier/io.hpp"
#include "wmlab/fourier/norms.hpp"
