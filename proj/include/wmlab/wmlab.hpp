#pragma once

#include "wmlab/bumps.hpp"
#include "wmlab/config.hpp"
#include "wmlab/error.hpp"
#include "wmlab/fft.hpp"
#include "wmlab/fit.hpp"
#include "wmlab/gauss.hpp"
#include "wmlab/grid.hpp"
#include "wmlab/maximal.hpp"
#include "wmlab/multiplier.hpp"
#include "wmlab/norms.hpp"
#include "wmlab/power_weight.hpp"
#include "wmlab/report.hpp"
#include "wmlab/scenario.hpp"
#include "wmlab/summation.hpp"
#include "wmlab/weights.hpp"
