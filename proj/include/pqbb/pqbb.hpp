#pragma once

#include "pqbb/core.hpp"
#include "pqbb/function_spec.hpp"
#include "pqbb/quadrature.hpp"
#include "pqbb/baskakov_beta.hpp"
#include "pqbb/analysis.hpp"
#include "pqbb/experiment.hpp"
