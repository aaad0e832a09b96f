#pragma once

// Everything: products, G, dispatchers, F and its periodic points, growth
// sampling, punctured potentials, the dbar solver, configuration and reports.

#include "ordzero/config.hpp"
#include "ordzero/cs_builder.hpp"
#include "ordzero/dbar.hpp"
#include "ordzero/dispatcher.hpp"
#include "ordzero/dynamics.hpp"
#include "ordzero/errors.hpp"
#include "ordzero/growth.hpp"
#include "ordzero/pipeline.hpp"
#include "ordzero/products.hpp"
#include "ordzero/report.hpp"
#include "ordzero/schedule.hpp"
#include "ordzero/subharmonic.hpp"
#include "ordzero/svg.hpp"
