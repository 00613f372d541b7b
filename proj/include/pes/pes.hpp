#pragma once

#include "pes/algorithms.hpp"
#include "pes/families.hpp"
#include "pes/flow.hpp"
#include "pes/graph.hpp"
#include "pes/io.hpp"
#include "pes/quantum.hpp"
#include "pes/series_parallel.hpp"
#include "pes/span_program.hpp"
#include "pes/trees.hpp"
#include "pes/verify.hpp"
