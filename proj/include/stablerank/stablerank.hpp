#pragma once

#include "stablerank/errors.hpp"
#include "stablerank/rational.hpp"
#include "stablerank/linalg.hpp"
#include "stablerank/stabilization.hpp"
#include "stablerank/frame.hpp"
#include "stablerank/tame.hpp"
#include "stablerank/contour.hpp"
#include "stablerank/noise.hpp"
#include "stablerank/stable_rank.hpp"
#include "stablerank/hardness.hpp"
#include "stablerank/io.hpp"
