#pragma once

#include "fibgrid/error.hpp"
#include "fibgrid/numeration.hpp"
#include "fibgrid/fibtree.hpp"
#include "fibgrid/oracle.hpp"
#include "fibgrid/grid.hpp"
#include "fibgrid/carpet.hpp"
#include "fibgrid/routing.hpp"
#include "fibgrid/simulator.hpp"
#include "fibgrid/verify.hpp"
#include "fibgrid/svg.hpp"
