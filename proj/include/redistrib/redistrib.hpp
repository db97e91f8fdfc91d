#pragma once

#include "redistrib/agent_set.hpp"
#include "redistrib/assignment.hpp"
#include "redistrib/bid_profile.hpp"
#include "redistrib/clarke.hpp"
#include "redistrib/core.hpp"
#include "redistrib/error.hpp"
#include "redistrib/experiments.hpp"
#include "redistrib/mechanism.hpp"
#include "redistrib/ordering.hpp"
#include "redistrib/rational.hpp"
#include "redistrib/rebates.hpp"
#include "redistrib/scaling.hpp"
#include "redistrib/wco.hpp"
