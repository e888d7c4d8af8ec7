#pragma once

#include "ammfork/allocation.hpp"
#include "ammfork/core.hpp"
#include "ammfork/csv.hpp"
#include "ammfork/dynamics.hpp"
#include "ammfork/oracle.hpp"
#include "ammfork/runners.hpp"
#include "ammfork/scenario.hpp"
#include "ammfork/stackelberg.hpp"
