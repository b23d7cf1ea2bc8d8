#pragma once

#include "radbound/bounds.hpp"
#include "radbound/calibration.hpp"
#include "radbound/campaign.hpp"
#include "radbound/decomp.hpp"
#include "radbound/dense_eig.hpp"
#include "radbound/montecarlo.hpp"
#include "radbound/operator_norm.hpp"
#include "radbound/patterns.hpp"
#include "radbound/rademacher.hpp"
#include "radbound/radsum.hpp"
#include "radbound/report.hpp"
#include "radbound/rng.hpp"
#include "radbound/sparse.hpp"
