#pragma once

#include "gsq/almost_a.hpp"
#include "gsq/ball.hpp"
#include "gsq/ball_code.hpp"
#include "gsq/bs_stats.hpp"
#include "gsq/certificates.hpp"
#include "gsq/coarse.hpp"
#include "gsq/cost.hpp"
#include "gsq/error.hpp"
#include "gsq/families.hpp"
#include "gsq/folner.hpp"
#include "gsq/graph.hpp"
#include "gsq/graph_io.hpp"
#include "gsq/group.hpp"
#include "gsq/hyperfinite.hpp"
#include "gsq/invariants.hpp"
#include "gsq/lift.hpp"
#include "gsq/moves.hpp"
#include "gsq/parallel.hpp"
#include "gsq/partition.hpp"
#include "gsq/perm_action.hpp"
#include "gsq/rational.hpp"
#include "gsq/subgroup.hpp"
#include "gsq/witness.hpp"
