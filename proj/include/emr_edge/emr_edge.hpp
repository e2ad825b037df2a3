#pragma once

#include "emr_edge/delay.hpp"
#include "emr_edge/dvs.hpp"
#include "emr_edge/monte_carlo.hpp"
#include "emr_edge/placement.hpp"
#include "emr_edge/records.hpp"
#include "emr_edge/report.hpp"
#include "emr_edge/scenario.hpp"
#include "emr_edge/scenario_io.hpp"
#include "emr_edge/sharing.hpp"
