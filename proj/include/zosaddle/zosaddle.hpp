#pragma once

#include "zosaddle/algorithms.hpp"
#include "zosaddle/geometry.hpp"
#include "zosaddle/harness.hpp"
#include "zosaddle/metrics.hpp"
#include "zosaddle/oracles.hpp"
#include "zosaddle/plot.hpp"
#include "zosaddle/problems.hpp"
#include "zosaddle/random.hpp"
#include "zosaddle/version.hpp"
