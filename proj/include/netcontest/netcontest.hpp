#pragma once

#include "netcontest/design.hpp"
#include "netcontest/endogenous.hpp"
#include "netcontest/game.hpp"
#include "netcontest/io.hpp"
#include "netcontest/linalg.hpp"
#include "netcontest/oracle.hpp"
#include "netcontest/repro.hpp"
#include "netcontest/solver.hpp"
#include "netcontest/sweep.hpp"
#include "netcontest/verification.hpp"
