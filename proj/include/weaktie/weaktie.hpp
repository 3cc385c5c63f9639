#pragma once

#include "weaktie/error.hpp"
#include "weaktie/graph.hpp"
#include "weaktie/ingest.hpp"
#include "weaktie/indices.hpp"
#include "weaktie/random.hpp"
#include "weaktie/metrics.hpp"
#include "weaktie/experiment.hpp"
#include "weaktie/report.hpp"
