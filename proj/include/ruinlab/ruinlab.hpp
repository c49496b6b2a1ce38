#pragma once

#include "beta_solver.hpp"
#include "config.hpp"
#include "errors.hpp"
#include "interarrival.hpp"
#include "invariants.hpp"
#include "jump_law.hpp"
#include "levy_models.hpp"
#include "model.hpp"
#include "path_engine.hpp"
#include "ruin_mc.hpp"
#include "scenarios.hpp"
#include "tail_stats.hpp"
