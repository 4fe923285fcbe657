#pragma once

#include "heritage_twin/analytics/config.hpp"
#include "heritage_twin/analytics/correlation.hpp"
#include "heritage_twin/analytics/en15757.hpp"
#include "heritage_twin/analytics/humidity.hpp"
#include "heritage_twin/analytics/mann_whitney.hpp"
#include "heritage_twin/analytics/mr_difference.hpp"
#include "heritage_twin/analytics/series.hpp"
#include "heritage_twin/analytics/smoothing.hpp"
