#pragma once

#include "skinet/checks.hpp"
#include "skinet/export.hpp"
#include "skinet/guard.hpp"
#include "skinet/net_builder.hpp"
#include "skinet/oracle.hpp"
#include "skinet/parser.hpp"
#include "skinet/petri.hpp"
#include "skinet/random_skillset.hpp"
#include "skinet/report.hpp"
#include "skinet/run.hpp"
#include "skinet/skillset.hpp"
#include "skinet/state_space.hpp"
