#pragma once

// Umbrella header.

#include "wrg/csv.hpp"
#include "wrg/error.hpp"
#include "wrg/graph.hpp"
#include "wrg/pipeline.hpp"
#include "wrg/recommend.hpp"
#include "wrg/report.hpp"
#include "wrg/stats.hpp"
#include "wrg/textprep.hpp"
#include "wrg/unicode.hpp"
