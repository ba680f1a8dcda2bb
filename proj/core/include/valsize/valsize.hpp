#pragma once

#include "valsize/anticipation.hpp"
#include "valsize/error.hpp"
#include "valsize/measures.hpp"
#include "valsize/plan.hpp"
#include "valsize/random.hpp"
#include "valsize/riley.hpp"
#include "valsize/riskdist.hpp"
#include "valsize/samplesize.hpp"
#include "valsize/survival.hpp"
#include "valsize/version.hpp"
