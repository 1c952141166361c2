#pragma once

#include "hyplap/bench.hpp"
#include "hyplap/errors.hpp"
#include "hyplap/heap.hpp"
#include "hyplap/hypergraph.hpp"
#include "hyplap/io.hpp"
#include "hyplap/labels.hpp"
#include "hyplap/matrix.hpp"
#include "hyplap/problem.hpp"
#include "hyplap/rng.hpp"
#include "hyplap/sbm.hpp"
#include "hyplap/solver.hpp"
#include "hyplap/state.hpp"
