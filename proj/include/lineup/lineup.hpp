#pragma once

#include "lineup/core.hpp"
#include "lineup/metric.hpp"
#include "lineup/ordinal.hpp"
#include "lineup/assignment.hpp"
#include "lineup/mechanisms.hpp"
#include "lineup/exact.hpp"
#include "lineup/simplex.hpp"
#include "lineup/info.hpp"
#include "lineup/adversary.hpp"
#include "lineup/lower_bounds.hpp"
#include "lineup/harness.hpp"
#include "lineup/io.hpp"
