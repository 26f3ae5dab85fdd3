#pragma once

#include "adversarial.hpp"
#include "analysis.hpp"
#include "constants.hpp"
#include "error.hpp"
#include "greedy.hpp"
#include "grid_function.hpp"
#include "integral_equation.hpp"
#include "io.hpp"
#include "linear_core.hpp"
#include "phi_builder.hpp"
#include "plot.hpp"
#include "quadrature.hpp"
#include "roots.hpp"
#include "version.hpp"
