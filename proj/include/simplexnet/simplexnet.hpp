#pragma once

#include "simplexnet/bezier.hpp"
#include "simplexnet/elastic_net.hpp"
#include "simplexnet/error.hpp"
#include "simplexnet/fit.hpp"
#include "simplexnet/io/bundle.hpp"
#include "simplexnet/io/csv.hpp"
#include "simplexnet/io/dataset.hpp"
#include "simplexnet/io/model_io.hpp"
#include "simplexnet/io/sample_io.hpp"
#include "simplexnet/pareto.hpp"
#include "simplexnet/simplex.hpp"
#include "simplexnet/solver.hpp"
#include "simplexnet/version.hpp"
