#ifndef LCL_LCL_HPP
#define LCL_LCL_HPP

#include "lcl/common.hpp"
#include "lcl/graph.hpp"
#include "lcl/graph_io.hpp"
#include "lcl/irregularity.hpp"
#include "lcl/view.hpp"
#include "lcl/engine.hpp"
#include "lcl/problems.hpp"
#include "lcl/weak_coloring.hpp"
#include "lcl/pstar.hpp"
#include "lcl/execution_set.hpp"
#include "lcl/speedup.hpp"
#include "lcl/bounds.hpp"

#endif  // LCL_LCL_HPP
