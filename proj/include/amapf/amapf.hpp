#pragma once

#include "amapf/assignment.hpp"
#include "amapf/baseline_search.hpp"
#include "amapf/bench.hpp"
#include "amapf/bulk_search.hpp"
#include "amapf/errors.hpp"
#include "amapf/flow_solver.hpp"
#include "amapf/generator.hpp"
#include "amapf/graph.hpp"
#include "amapf/grid_io.hpp"
#include "amapf/instance.hpp"
#include "amapf/plan.hpp"
#include "amapf/solution_io.hpp"
#include "amapf/ten_network.hpp"
