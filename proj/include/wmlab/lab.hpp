#pragma once

#include "wmlab/lab/besov.hpp"
#include "wmlab/lab/bilinear.hpp"
#include "wmlab/lab/division.hpp"
#include "wmlab/lab/duality.hpp"
#include "wmlab/lab/highlow.hpp"
#include "wmlab/lab/orthogonality.hpp"
#include "wmlab/lab/parallel.hpp"
#include "wmlab/lab/report.hpp"
#include "wmlab/lab/resonance.hpp"
#include "wmlab/lab/sampling.hpp"
