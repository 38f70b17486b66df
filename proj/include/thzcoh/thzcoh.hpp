#pragma once

#include "thzcoh/cw.hpp"
#include "thzcoh/density_matrix.hpp"
#include "thzcoh/dynamics.hpp"
#include "thzcoh/error.hpp"
#include "thzcoh/integrator.hpp"
#include "thzcoh/kv_file.hpp"
#include "thzcoh/materials.hpp"
#include "thzcoh/propagation.hpp"
#include "thzcoh/pulse.hpp"
#include "thzcoh/report.hpp"
#include "thzcoh/scenario.hpp"
#include "thzcoh/selection_rules.hpp"
#include "thzcoh/table.hpp"
#include "thzcoh/units.hpp"
