#pragma once

#include "mobiles/errors.hpp"
#include "mobiles/rational.hpp"
#include "mobiles/aux_poly.hpp"
#include "mobiles/gseries.hpp"
#include "mobiles/zlaurent.hpp"
#include "mobiles/fixed_point.hpp"
#include "mobiles/planar_map.hpp"
#include "mobiles/mobile.hpp"
#include "mobiles/model_spec.hpp"
#include "mobiles/models.hpp"
#include "mobiles/mobile_enum.hpp"
#include "mobiles/leaf_matching.hpp"
#include "mobiles/singularity.hpp"
#include "mobiles/oracle.hpp"
#include "mobiles/oracle_counts.hpp"
#include "mobiles/json_io.hpp"
#include "mobiles/checks.hpp"
